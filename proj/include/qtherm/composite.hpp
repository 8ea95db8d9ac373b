#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qtherm/equilibrium.hpp"
#include "qtherm/spectral.hpp"

namespace qtherm {

/// Largest composite dimension built as a dense matrix.
inline constexpr std::size_t kDenseDimensionCap = 2048;

/// H_s (x) I_c + I_s (x) H_c.
HermitianOperator compose_hamiltonians(const HermitianOperator& h_s, const HermitianOperator& h_c);

struct CompositeLevel {
  std::size_t i, j;
  double energy;  // e_i + eps_j
};

/// Pair levels of two subsystems, index-major in (i, j).
struct CompositeSpectrum {
  std::size_t size_s = 0, size_c = 0;
  std::vector<CompositeLevel> pairs;

  LevelSpectrum as_levels(bool complete) const;
};

CompositeSpectrum compose_levels(const LevelSpectrum& s, const LevelSpectrum& c);

/// Joint occupations p_ij over the pair levels, stored row-major in i.
struct CompositeOccupations {
  std::size_t size_s = 0, size_c = 0;
  std::vector<double> p;

  double at(std::size_t i, std::size_t j) const { return p[i * size_c + j]; }
  double entropy() const;
};

/// rho_s (x) rho_c in the joint eigenbasis: p_ij = p_i p_j.
CompositeOccupations product_state(const CanonicalState& s, const CanonicalState& c);

struct IndexPair {
  std::size_t i, j;
};

struct OccupationResidual {
  double max_residual;
  IndexPair worst_ij, worst_kl;
  std::size_t pairs_checked;
  bool sampled;
};

/// Largest | ln(p_ij / p_kl) - [(e_k - e_i) + (eps_l - eps_j)] / kT | over pairs of
/// composite levels. All pairs are checked when there are at most 1e4 of them,
/// otherwise 1e4 pairs drawn with `seed`. Rejects any zero occupation.
OccupationResidual occupation_residual(const CompositeOccupations& occ, const LevelSpectrum& s,
                           const LevelSpectrum& c, double temperature, double k = 1.0,
                           std::uint64_t seed = 0);

enum class FlowDirection { a_to_b, b_to_a, none };
std::string_view to_string(FlowDirection d);

/// Subsystem in a canonical state together with the spectrum it lives on.
struct EquilibriumSystem {
  LevelSpectrum spectrum;
  CanonicalState state;

  static EquilibriumSystem at_beta(LevelSpectrum spectrum, double beta);
};

struct FlowDecision {
  FlowDirection direction;
  double entropy_rate;  // d(S_A + S_B)/dq for energy q moved from A to B
  double exchange;
  FlowDirection rule;   // from comparing 1/T_A with 1/T_B
};

/// Direction in which moving a small energy quantum between A and B raises S_A + S_B.
/// The rate is a central difference over +/- `exchange` (default 1e-6 of the smallest of
/// spread and Var(E)/spread over both systems); "none" when |rate| < 1e-9.
FlowDecision flow_direction(const EquilibriumSystem& a, const EquilibriumSystem& b,
                            std::optional<double> exchange = std::nullopt);

/// Escaping-tendency rule for energy: A to B iff 1/T_A < 1/T_B.
FlowDirection flow_rule(double inverse_temperature_a, double inverse_temperature_b,
                        double tolerance = 1e-9);

/// Intensive properties of a phase. Potentials may be -inf for an absent constituent.
struct PhaseProperties {
  double inverse_temperature;
  double pressure;
  std::vector<double> total_potentials;
};

enum class MutualEquilibrium { none, partial, full };
std::string_view to_string(MutualEquilibrium m);

struct EquilibriumClassification {
  MutualEquilibrium kind;
  FlowDirection energy_flow;
  /// Per constituent at equal temperature: A to B iff mu_A > mu_B.
  std::vector<FlowDirection> constituent_flow;
};

/// Equal T and p with unequal total potentials is partial mutual equilibrium.
EquilibriumClassification classify_equilibrium(const PhaseProperties& a, const PhaseProperties& b,
                                               double tolerance = 1e-9);

}  // namespace qtherm
