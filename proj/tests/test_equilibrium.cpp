#include <doctest.h>

#include <cmath>
#include <numeric>

#include "qtherm/equilibrium.hpp"
#include "qtherm/hamiltonians.hpp"
#include "qtherm/sampling.hpp"

using namespace qtherm;

namespace {

// -sum p ln p written out independently
double shannon(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0) s -= x * std::log(x);
  return s;
}

LevelSpectrum two_level() { return LevelSpectrum::complete({0.0, 1.0}); }

}  // namespace

TEST_SUITE("equilibrium") {

TEST_CASE("two-level canonical states") {
  auto hot = canonical_state(two_level(), 0.0);
  CHECK(hot.occupations[0] == doctest::Approx(0.5));
  CHECK(hot.entropy == doctest::Approx(std::log(2.0)));

  auto cold = canonical_state(two_level(), 800.0);
  CHECK(cold.occupations[0] == 1.0);
  CHECK(cold.entropy < 1e-300);

  auto one = canonical_state(two_level(), 1.0);
  const double p0 = 1.0 / (1.0 + std::exp(-1.0));
  CHECK(std::abs(one.occupations[0] - p0) < 1e-15);
  CHECK(std::abs(one.occupations[0] - 0.731059) < 1e-6);
  CHECK(std::abs(one.entropy - shannon({p0, 1.0 - p0})) < 1e-14);
  CHECK(std::abs(one.entropy - 0.582203) < 1e-6);
}

TEST_CASE("Gibbs identity and normalization") {
  Rng rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> e(2 + trial % 30);
    for (auto& x : e) x = u(rng) * 10.0;
    auto spec = LevelSpectrum::complete(e);
    const double beta = u(rng);
    auto st = canonical_state(spec, beta);
    CHECK(std::abs(std::accumulate(st.occupations.begin(), st.occupations.end(), 0.0) - 1.0) < 1e-12);
    for (double p : st.occupations) CHECK(p > 0.0);
    CHECK(std::abs(st.entropy - (beta * st.energy + st.log_partition)) < 1e-10);
    CHECK(std::abs(st.entropy - shannon(st.occupations)) < 1e-10);
  }
}

TEST_CASE("dE/dbeta equals minus the variance") {
  auto spec = LevelSpectrum::complete({0.0, 0.4, 1.1, 1.7, 3.0, 3.2});
  for (double beta : {-2.0, -0.3, 0.0, 0.5, 2.0}) {
    const double h = 1e-5;
    const double de = (canonical_state(spec, beta + h).energy - canonical_state(spec, beta - h).energy) / (2 * h);
    const double var = canonical_state(spec, beta).energy_variance;
    CHECK(de <= 0.0);
    CHECK(std::abs(-de - var) / var < 1e-6);
  }
}

TEST_CASE("negative beta needs an upper energy limit") {
  auto box = LevelSpectrum::of_box(box_spectrum(BoxShape(1, 1, 1), MaxCount{20}));
  CHECK_FALSE(box.is_complete());
  try {
    canonical_state(box, -0.1);
    FAIL("negative beta accepted on a truncated spectrum");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("negative temperature requires upper energy limit") != std::string::npos);
  }
  CHECK_NOTHROW(canonical_state(two_level(), -1.0));
}

TEST_CASE("entropy of occupation vectors") {
  CHECK(entropy(std::vector<double>{1.0, 0.0, 0.0}) == 0.0);
  CHECK(std::abs(entropy(std::vector<double>(7, 1.0 / 7.0)) - std::log(7.0)) < 1e-14);
  CHECK_THROWS_AS(entropy(std::vector<double>{1.1, -0.1}), ValidationError);
  CHECK_THROWS_AS(entropy(std::vector<double>{0.5, 0.4}), ValidationError);
  CHECK_NOTHROW(entropy(std::vector<double>{1.0 + 1e-11, -1e-11}));
}

TEST_CASE("density operators") {
  Rng rng(4);
  for (std::size_t n = 2; n <= 64; n += 7) {
    CHECK(std::abs(entropy(DensityOperator::maximally_mixed(n)) - std::log(double(n))) < 1e-10);
    CHECK(entropy(DensityOperator::pure(random_state(n, rng))) < 1e-10);
  }
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator(HermitianOperator(bad)), ValidationError);  // trace 2
  bad << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityOperator(HermitianOperator(bad)), ValidationError);  // eigenvalue out of range

  // canonical density of a diagonal H matches the level-list state
  RealVector d(3);
  d << 0.0, 0.7, 2.0;
  auto rho = canonical_density(HermitianOperator::diagonal(d), 1.3);
  auto st = canonical_state(LevelSpectrum::complete({0.0, 0.7, 2.0}), 1.3);
  CHECK(std::abs(entropy(rho) - st.entropy) < 1e-12);
}

TEST_CASE("unitary invariance of the entropy") {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 9;
    auto rho = random_density(n, rng);
    const ComplexMatrix u = random_unitary(n, rng);
    DensityOperator turned(HermitianOperator(u * rho.matrix() * u.adjoint()));
    CHECK(std::abs(entropy(turned) - entropy(rho)) < 1e-9);
  }
}

TEST_CASE("tensor products add entropies") {
  Rng rng(12);
  auto a = random_density(3, rng), b = random_density(4, rng);
  auto ab = tensor_product(a, b);
  CHECK(ab.dim() == 12);
  CHECK(std::abs(entropy(ab) - entropy(a) - entropy(b)) < 1e-10);
}

TEST_CASE("beta_for_energy inverts the two-level curve") {
  CHECK(std::abs(beta_for_energy(two_level(), 0.5)) < 1e-12);
  const double e1 = canonical_state(two_level(), 1.0).energy;
  CHECK(std::abs(e1 - 0.268941) < 1e-6);
  CHECK(beta_for_energy(two_level(), e1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(beta_for_energy(two_level(), 1.0 - e1) == doctest::Approx(-1.0).epsilon(1e-10));
  try {
    beta_for_energy(two_level(), 1.0);
    FAIL("endpoint accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("(0, 1)") != std::string::npos);
  }
}

TEST_CASE("beta_for_energy on a truncated box near its ground level") {
  auto box = LevelSpectrum::of_box(box_spectrum(BoxShape(1, 1, 1), MaxCount{2000}));
  const double target = 3.0 + 1e-6;
  const double beta = beta_for_energy(box, target);
  CHECK(beta > 700.0 / box.spread());
  CHECK(std::abs(canonical_state(box, beta).energy - target) < 1e-12);
  CHECK_THROWS_AS(beta_for_energy(box, 1e6), ValidationError);
}

TEST_CASE("entropy versus energy is concave") {
  auto spec = LevelSpectrum::complete({0.0, 0.3, 1.0, 1.2, 2.5, 4.0});
  std::vector<double> s;
  const int n = 50;
  const double lo = spec.min() + 0.05, hi = spec.max() - 0.05, h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) s.push_back(entropy_at_energy(spec, lo + i * h).entropy);
  for (int i = 1; i + 1 < n; ++i) CHECK(s[i + 1] - 2 * s[i] + s[i - 1] <= 1e-8);
}

TEST_CASE("entropy_change agrees with the difference of entropies") {
  auto spec = LevelSpectrum::complete({0.0, 1.0, 1.5, 3.0});
  auto st = canonical_state(spec, 0.8);
  const double target = st.energy + 0.01;
  CHECK(entropy_change(spec, st, target) ==
        doctest::Approx(entropy_at_energy(spec, target).entropy - st.entropy).epsilon(1e-9));
}

TEST_CASE("fundamental derivatives") {
  // 50-point family over a complete spectrum: dS/dE against beta
  IsotropicFamily family{LevelSpectrum::complete({0.0, 0.5, 1.3, 2.0, 2.2, 3.7}), 1.0};
  const double e_hot = canonical_state(family.reference, 0.0).energy;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double e = 0.2 + 3.0 * i / 49.0;
    if (std::abs(e - e_hot) < 0.05) continue;  // beta ~ 0 makes a relative comparison meaningless
    auto d = fundamental_derivatives(family, e, 1.0);
    worst = std::max(worst, std::abs(d.inverse_temperature - d.beta) / std::abs(d.beta));
  }
  CHECK(worst < 1e-5);

  // infinite temperature point: dS/dE = 0
  auto mid = fundamental_derivatives(family, e_hot, 1.0);
  CHECK(std::abs(mid.inverse_temperature) < 1e-8);

  // isotropic box: p = (2/3) E / V
  IsotropicFamily box{LevelSpectrum::of_box(box_spectrum(BoxShape(1, 1, 1), MaxCount{3000})), 1.0};
  for (double e : {8.0, 15.0, 30.0}) {
    auto d = fundamental_derivatives(box, e, 1.0);
    CHECK(std::abs(d.pressure / (2.0 / 3.0 * e) - 1.0) < 1e-4);
  }
  CHECK_THROWS_AS(fundamental_derivatives(family, 5.0, 1.0), ValidationError);
}

TEST_CASE("mean momentum vanishes for canonical well states") {
  Rng rng(21);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<double> v(40);
  for (auto& x : v) x = u(rng);
  auto well = well_from_potential(v, 0.1);
  auto h = fd_well(well);
  auto p = momentum_operator(well);
  for (double beta : {0.01, 0.1, 1.0}) CHECK(std::abs(mean_momentum(canonical_density(h, beta), p)) < 1e-10);

  auto dec = eigh(h);
  CHECK(std::abs(mean_momentum(DensityOperator::pure(dec.eigenvectors.col(0)), p)) < 1e-10);

  // e^{ikx}-weighted ground state: compare against direct summation
  Eigen::VectorXcd psi(40);
  for (int j = 0; j < 40; ++j) psi(j) = dec.eigenvectors(j, 0) * std::exp(Complex(0, 2.0 * 0.1 * (j + 1)));
  psi.normalize();
  double brute = 0.0;
  for (int j = 0; j + 1 < 40; ++j) brute += 2.0 * (std::conj(psi(j)) * Complex(0, -1.0 / 0.2) * psi(j + 1)).real();
  const double got = mean_momentum(DensityOperator::pure(psi), p);
  CHECK(std::abs(got) > 1e-3);
  CHECK(got == doctest::Approx(brute).epsilon(1e-12));

  CHECK_THROWS_AS(mean_momentum(DensityOperator::maximally_mixed(3), p), ValidationError);
}

TEST_CASE("max entropy witness") {
  auto spec = LevelSpectrum::complete({0.0, 1.0, 2.0, 3.0});
  auto w = max_entropy_witness(spec, 1.5, 1000, 42);
  CHECK(w.feasible);
  CHECK(w.trials.size() == 1000);
  CHECK(w.min_margin > 0.0);
  CHECK(w.max_energy_drift < 1e-12);

  auto st = canonical_state(spec, w.beta);
  auto zero = perturbation_margin(spec, st, {0, 1, 2, 0.0});
  CHECK(zero.margin == 0.0);

  CHECK_FALSE(max_entropy_witness(two_level(), 0.3, 10, 1).feasible);
}

}  // TEST_SUITE
