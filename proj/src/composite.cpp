#include "qtherm/composite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace qtherm {

HermitianOperator compose_hamiltonians(const HermitianOperator& h_s, const HermitianOperator& h_c) {
  const std::size_t ns = h_s.dim(), nc = h_c.dim();
  if (ns * nc > kDenseDimensionCap) {
    std::ostringstream msg;
    msg << "composite dimension " << ns * nc << " exceeds the dense cap " << kDenseDimensionCap
        << "; compose the level lists with compose_levels instead";
    throw ValidationError(msg.str());
  }
  const auto s = static_cast<Eigen::Index>(ns), c = static_cast<Eigen::Index>(nc);
  ComplexMatrix h = ComplexMatrix::Zero(s * c, s * c);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      const Complex hij = h_s.matrix()(i, j);
      if (hij == Complex(0.0)) continue;
      for (Eigen::Index a = 0; a < c; ++a) h(i * c + a, j * c + a) += hij;
    }
    h.block(i * c, i * c, c, c) += h_c.matrix();
  }
  return HermitianOperator(0.5 * (h + h.adjoint()));
}

LevelSpectrum CompositeSpectrum::as_levels(bool complete) const {
  std::vector<double> e;
  e.reserve(pairs.size());
  for (const auto& p : pairs) e.push_back(p.energy);
  return complete ? LevelSpectrum::complete(std::move(e)) : LevelSpectrum::truncated(std::move(e));
}

CompositeSpectrum compose_levels(const LevelSpectrum& s, const LevelSpectrum& c) {
  CompositeSpectrum out{s.size(), c.size(), {}};
  out.pairs.reserve(s.size() * c.size());
  const auto es = s.energies(), ec = c.energies();
  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = 0; j < ec.size(); ++j) out.pairs.push_back({i, j, es[i] + ec[j]});
  }
  return out;
}

double CompositeOccupations::entropy() const { return qtherm::entropy(p); }

CompositeOccupations product_state(const CanonicalState& s, const CanonicalState& c) {
  CompositeOccupations out{s.occupations.size(), c.occupations.size(), {}};
  out.p.reserve(out.size_s * out.size_c);
  for (double ps : s.occupations) {
    for (double pc : c.occupations) out.p.push_back(ps * pc);
  }
  return out;
}

OccupationResidual occupation_residual(const CompositeOccupations& occ, const LevelSpectrum& s,
                           const LevelSpectrum& c, double temperature, double k,
                           std::uint64_t seed) {
  if (occ.size_s != s.size() || occ.size_c != c.size()) {
    throw ValidationError("occupations do not match the subsystem spectra");
  }
  if (!std::isfinite(temperature) || temperature == 0.0 || !(k > 0.0)) {
    throw ValidationError("temperature must be finite and nonzero, k positive");
  }
  for (std::size_t i = 0; i < occ.size_s; ++i) {
    for (std::size_t j = 0; j < occ.size_c; ++j) {
      if (!(occ.at(i, j) > 0.0)) {
        std::ostringstream msg;
        msg << "occupation p_" << i << "," << j << " is zero; ln(p_ij/p_kl) is undefined";
        throw ValidationError(msg.str());
      }
    }
  }
  const auto es = s.energies(), ec = c.energies();
  const double kt = k * temperature;
  const std::size_t m = occ.p.size();

  OccupationResidual out{0.0, {0, 0}, {0, 0}, 0, false};
  auto check = [&](std::size_t a, std::size_t b) {
    const std::size_t i = a / occ.size_c, j = a % occ.size_c;
    const std::size_t kk = b / occ.size_c, l = b % occ.size_c;
    const double lhs = std::log(occ.p[a]) - std::log(occ.p[b]);
    const double rhs = ((es[kk] - es[i]) + (ec[l] - ec[j])) / kt;
    const double r = std::abs(lhs - rhs);
    if (r > out.max_residual || out.pairs_checked == 0) {
      out.max_residual = std::max(out.max_residual, r);
      out.worst_ij = {i, j};
      out.worst_kl = {kk, l};
    }
    ++out.pairs_checked;
  };

  constexpr std::size_t kBudget = 10000;
  if (m <= kBudget / m) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) check(a, b);
    }
  } else {
    out.sampled = true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    for (std::size_t t = 0; t < kBudget; ++t) {
      const std::size_t a = pick(rng);
      check(a, pick(rng));
    }
  }
  return out;
}

std::string_view to_string(FlowDirection d) {
  switch (d) {
    case FlowDirection::a_to_b: return "A_to_B";
    case FlowDirection::b_to_a: return "B_to_A";
    case FlowDirection::none: return "none";
  }
  return "none";
}

std::string_view to_string(MutualEquilibrium m) {
  switch (m) {
    case MutualEquilibrium::none: return "none";
    case MutualEquilibrium::partial: return "partial";
    case MutualEquilibrium::full: return "full";
  }
  return "none";
}

EquilibriumSystem EquilibriumSystem::at_beta(LevelSpectrum spectrum, double beta) {
  auto state = canonical_state(spectrum, beta);
  return {std::move(spectrum), std::move(state)};
}

FlowDirection flow_rule(double inverse_temperature_a, double inverse_temperature_b,
                        double tolerance) {
  const double diff = inverse_temperature_b - inverse_temperature_a;
  if (std::abs(diff) < tolerance) return FlowDirection::none;
  return diff > 0.0 ? FlowDirection::a_to_b : FlowDirection::b_to_a;
}

FlowDecision flow_direction(const EquilibriumSystem& a, const EquilibriumSystem& b,
                            std::optional<double> exchange) {
  // Central-difference error is ~h^2 S'''/6 and S''' ~ mu3 / Var^3, so the default quantum
  // follows the energy variance of the colder system as well as the spread.
  auto scale = [](const EquilibriumSystem& s) {
    const double spread = s.spectrum.spread();
    const double var = s.state.energy_variance;
    return var > 0.0 ? std::min(spread, var / spread) : spread;
  };
  const double h = exchange.value_or(1e-6 * std::min(scale(a), scale(b)));
  if (!(h > 0.0)) throw ValidationError("energy exchange quantum must be positive");
  // d(S_A + S_B)/dq = S_B'(E_B) - S_A'(E_A); each slope is a central difference over the
  // energy steps that are actually representable, so rounding of E +/- h does not leak in.
  auto slope = [h](const EquilibriumSystem& s) {
    const double e = s.state.energy;
    const double up = (e + h) - e, down = (e - h) - e;
    return (entropy_change(s.spectrum, s.state, e + h) - entropy_change(s.spectrum, s.state, e - h)) /
           (up - down);
  };
  const double rate = slope(b) - slope(a);
  FlowDecision out{};
  out.exchange = h;
  out.entropy_rate = rate;
  if (std::abs(out.entropy_rate) < 1e-9) {
    out.direction = FlowDirection::none;
  } else {
    out.direction = out.entropy_rate > 0.0 ? FlowDirection::a_to_b : FlowDirection::b_to_a;
  }
  out.rule = flow_rule(a.state.beta, b.state.beta);
  return out;
}

EquilibriumClassification classify_equilibrium(const PhaseProperties& a, const PhaseProperties& b,
                                               double tolerance) {
  EquilibriumClassification out{};
  out.energy_flow = flow_rule(a.inverse_temperature, b.inverse_temperature, tolerance);
  const bool thermal = out.energy_flow == FlowDirection::none;
  const bool mechanical = std::abs(a.pressure - b.pressure) <= tolerance * (1.0 + std::abs(a.pressure));
  if (a.total_potentials.size() != b.total_potentials.size()) {
    throw ValidationError("phases must list the same constituents");
  }
  bool chemical = true;
  for (std::size_t i = 0; i < a.total_potentials.size(); ++i) {
    const double ma = a.total_potentials[i], mb = b.total_potentials[i];
    FlowDirection f = FlowDirection::none;
    if (ma != mb && !(std::isfinite(ma) && std::isfinite(mb) &&
                      std::abs(ma - mb) <= tolerance * (1.0 + std::abs(ma)))) {
      f = ma > mb ? FlowDirection::a_to_b : FlowDirection::b_to_a;
      chemical = false;
    }
    out.constituent_flow.push_back(thermal ? f : FlowDirection::none);
  }
  if (!thermal || !mechanical) {
    out.kind = MutualEquilibrium::none;
  } else {
    out.kind = chemical ? MutualEquilibrium::full : MutualEquilibrium::partial;
  }
  return out;
}

}  // namespace qtherm
