#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qtherm/composite.hpp"
#include "qtherm/hamiltonians.hpp"
#include "qtherm/sampling.hpp"

using namespace qtherm;

namespace {

LevelSpectrum random_levels(Rng& rng, std::size_t n, double width) {
  std::uniform_real_distribution<double> u(0.0, width);
  std::vector<double> e(n);
  for (auto& x : e) x = u(rng);
  return LevelSpectrum::complete(e);
}

// total entropy change when q moves from A to B, straight from canonical states
double brute_total_change(const EquilibriumSystem& a, const EquilibriumSystem& b, double q) {
  return entropy_at_energy(a.spectrum, a.state.energy - q).entropy - a.state.entropy +
         entropy_at_energy(b.spectrum, b.state.energy + q).entropy - b.state.entropy;
}

}  // namespace

TEST_SUITE("composite") {

TEST_CASE("composed Hamiltonian spectra are pairwise sums") {
  RealVector a(2), b(2);
  a << 0, 1;
  b << 0, 2;
  auto h = compose_hamiltonians(HermitianOperator::diagonal(a), HermitianOperator::diagonal(b));
  auto dec = eigh(h);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(dec.eigenvalues(i) - i) < 1e-14);

  Rng rng(8);
  CHECK(compose_hamiltonians(random_hermitian(2, rng), random_hermitian(3, rng)).dim() == 6);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t ns = 2 + trial % 7, nc = 8 - trial % 5;
    auto hs = random_hermitian(ns, rng), hc = random_hermitian(nc, rng);
    auto got = eigh(compose_hamiltonians(hs, hc)).eigenvalues;
    auto es = eigh(hs).eigenvalues, ec = eigh(hc).eigenvalues;
    std::vector<double> sums;
    for (Eigen::Index i = 0; i < es.size(); ++i)
      for (Eigen::Index j = 0; j < ec.size(); ++j) sums.push_back(es(i) + ec(j));
    std::sort(sums.begin(), sums.end());
    for (std::size_t k = 0; k < sums.size(); ++k) CHECK(std::abs(got(static_cast<Eigen::Index>(k)) - sums[k]) < 1e-9);
  }
}

TEST_CASE("dense composition above the cap points to level lists") {
  try {
    compose_hamiltonians(HermitianOperator::identity(64), HermitianOperator::identity(64));
    FAIL("4096-dimensional dense composition accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("compose_levels") != std::string::npos);
  }
  auto big = compose_levels(LevelSpectrum::complete(std::vector<double>(64, 1.0)),
                            LevelSpectrum::complete(std::vector<double>(64, 2.0)));
  CHECK(big.pairs.size() == 4096);
  CHECK(big.pairs[77].energy == 3.0);
}

TEST_CASE("product states") {
  auto mixed2 = canonical_state(LevelSpectrum::complete({0, 1}), 0.0);
  auto mixed3 = canonical_state(LevelSpectrum::complete({0, 1, 2}), 0.0);
  auto occ = product_state(mixed2, mixed3);
  for (double p : occ.p) CHECK(std::abs(p - 1.0 / 6.0) < 1e-15);
  CHECK(std::abs(occ.entropy() - std::log(6.0)) < 1e-14);

  auto pure = canonical_state(LevelSpectrum::complete({0, 1}), 2000.0);
  CHECK(std::abs(product_state(pure, mixed3).entropy() - mixed3.entropy) < 1e-14);

  auto s1 = canonical_state(LevelSpectrum::complete({0, 1}), 1.0);
  auto s2 = canonical_state(LevelSpectrum::complete({0, 1}), 2.0);
  auto both = product_state(s1, s2);
  CHECK(std::abs(both.entropy() - s1.entropy - s2.entropy) < 1e-14);
  CHECK(both.at(1, 0) == s1.occupations[1] * s2.occupations[0]);
}

TEST_CASE("occupation relation at a common temperature") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_levels(rng, 2 + trial % 20, 5.0), c = random_levels(rng, 3 + trial % 11, 3.0);
    std::uniform_real_distribution<double> tdist(0.2, 5.0);
    const double t = tdist(rng);
    auto occ = product_state(canonical_state(s, 1.0 / t), canonical_state(c, 1.0 / t));
    auto r = occupation_residual(occ, s, c, t);
    CHECK(r.max_residual < 1e-10);
  }
  // two-level example: ln(p00/p11) = (e1 + eps1)/T
  auto lv = LevelSpectrum::complete({0, 1});
  auto occ = product_state(canonical_state(lv, 1.0), canonical_state(lv, 1.0));
  CHECK(std::abs(std::log(occ.at(0, 0) / occ.at(1, 1)) - 2.0) < 1e-14);
}

TEST_CASE("occupation relation residual at unequal temperatures") {
  auto s = LevelSpectrum::complete({0.0, 0.5, 2.0});
  auto c = LevelSpectrum::complete({0.0, 1.0, 3.0});
  const double bs = 1.0, bc = 0.4;
  auto occ = product_state(canonical_state(s, bs), canonical_state(c, bc));
  // at T = 1/bs the s-terms cancel; the c-terms leave |bs - bc| * |eps_l - eps_j|
  auto r = occupation_residual(occ, s, c, 1.0 / bs);
  CHECK(r.max_residual == doctest::Approx(std::abs(bs - bc) * (c.max() - c.min())).epsilon(1e-12));
}

TEST_CASE("occupation relation samples large pair sets and rejects zeros") {
  Rng rng(5);
  auto s = random_levels(rng, 64, 4.0), c = random_levels(rng, 64, 4.0);
  auto occ = product_state(canonical_state(s, 0.7), canonical_state(c, 0.7));
  auto r = occupation_residual(occ, s, c, 1.0 / 0.7, 1.0, 99);
  CHECK(r.sampled);
  CHECK(r.pairs_checked == 10000);
  CHECK(r.max_residual < 1e-10);

  auto lv = LevelSpectrum::complete({0, 1});
  auto frozen = product_state(canonical_state(lv, 1e4), canonical_state(lv, 1.0));
  try {
    occupation_residual(frozen, lv, lv, 1.0);
    FAIL("zero occupation accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("p_1,0") != std::string::npos);
  }
}

TEST_CASE("flow direction examples") {
  auto spin = LevelSpectrum::complete({0, 1});
  auto a = EquilibriumSystem::at_beta(spin, 0.5), b = EquilibriumSystem::at_beta(spin, 1.0);
  CHECK(flow_direction(a, b).direction == FlowDirection::a_to_b);
  CHECK(flow_direction(b, a).direction == FlowDirection::b_to_a);

  auto neg = EquilibriumSystem::at_beta(spin, -1.0), pos = EquilibriumSystem::at_beta(spin, 1.0);
  auto d = flow_direction(neg, pos);
  CHECK(d.direction == FlowDirection::a_to_b);
  CHECK(brute_total_change(neg, pos, 1e-3) > 0.0);

  auto same = flow_direction(a, EquilibriumSystem::at_beta(LevelSpectrum::complete({0, 2, 3}), 0.5));
  CHECK(same.direction == FlowDirection::none);
  CHECK(to_string(FlowDirection::a_to_b) == "A_to_B");
}

TEST_CASE("flow oracle agrees with the total entropy change") {
  Rng rng(31);
  std::uniform_real_distribution<double> beta(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = EquilibriumSystem::at_beta(random_levels(rng, 4, 3.0), beta(rng));
    auto b = EquilibriumSystem::at_beta(random_levels(rng, 5, 3.0), beta(rng));
    auto f = flow_direction(a, b);
    if (f.direction == FlowDirection::none) continue;
    const double q = 1e-4 * std::min(a.spectrum.spread(), b.spectrum.spread());
    const double forward = brute_total_change(a, b, q);
    CHECK((f.direction == FlowDirection::a_to_b) == (forward > 0.0));
    CHECK(f.direction == f.rule);
  }
}

TEST_CASE("mutual equilibrium classification") {
  auto full = classify_equilibrium({1.0, 2.0, {-3.0}}, {1.0, 2.0, {-3.0}});
  CHECK(full.kind == MutualEquilibrium::full);

  const double absent = -std::numeric_limits<double>::infinity();
  auto partial = classify_equilibrium({1.0, 2.0, {-3.0, -1.0}}, {1.0, 2.0, {-3.0, absent}});
  CHECK(partial.kind == MutualEquilibrium::partial);
  CHECK(partial.constituent_flow[0] == FlowDirection::none);
  CHECK(partial.constituent_flow[1] == FlowDirection::a_to_b);

  auto hot = classify_equilibrium({0.5, 2.0, {-3.0}}, {1.0, 2.0, {-3.0}});
  CHECK(hot.kind == MutualEquilibrium::none);
  CHECK(hot.energy_flow == FlowDirection::a_to_b);
  CHECK_THROWS_AS(classify_equilibrium({1, 1, {0}}, {1, 1, {}}), ValidationError);
}

}  // TEST_SUITE
