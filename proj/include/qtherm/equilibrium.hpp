#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qtherm/hamiltonians.hpp"
#include "qtherm/spectral.hpp"

namespace qtherm {

/// A list of energy levels. `complete` marks a spectrum with a true upper
/// energy limit (finite matrix, spin system); truncated box spectra are not
/// complete and admit only beta >= 0.
class LevelSpectrum {
 public:
  static LevelSpectrum complete(std::vector<double> energies);
  static LevelSpectrum truncated(std::vector<double> energies);
  static LevelSpectrum of_operator(const HermitianOperator& h);
  static LevelSpectrum of_box(const BoxSpectrum& box);

  std::span<const double> energies() const { return energies_; }
  std::size_t size() const { return energies_.size(); }
  bool is_complete() const { return complete_; }
  double min() const { return min_; }
  double max() const { return max_; }
  double spread() const { return max_ - min_; }
  /// Same levels with every energy multiplied by `factor` (> 0).
  LevelSpectrum scaled(double factor) const;

 private:
  LevelSpectrum(std::vector<double> energies, bool complete);
  std::vector<double> energies_;
  bool complete_;
  double min_, max_;
};

/// Canonical (stable-equilibrium) occupations p_i = exp(-beta e_i) / Z.
/// Entropies are in units of k throughout.
struct CanonicalState {
  double beta = 0.0;
  std::vector<double> occupations;
  double log_partition = 0.0;
  double energy = 0.0;
  double entropy = 0.0;
  double energy_variance = 0.0;

  double inverse_temperature() const { return beta; }
};

/// Occupations are evaluated relative to the extremal level in the direction
/// of beta, so no exponent ever overflows. Rejects beta < 0 on a truncated spectrum.
CanonicalState canonical_state(const LevelSpectrum& spectrum, double beta);

/// -sum p ln p with 0 ln 0 = 0; values below 1e-300 are treated as zero.
/// Rejects entries below -1e-10 or a total off by more than 1e-8.
double entropy(std::span<const double> occupations);

/// Trace-one Hermitian operator with eigenvalues in [0, 1] (rho >= rho^2).
class DensityOperator {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit DensityOperator(const HermitianOperator& rho);
  static DensityOperator pure(const Eigen::VectorXcd& state);
  static DensityOperator maximally_mixed(std::size_t dim);
  /// rho = sum_i p_i |v_i><v_i| for orthonormal columns v_i.
  static DensityOperator from_spectrum(const RealVector& probabilities, const ComplexMatrix& basis);

  std::size_t dim() const { return op_.dim(); }
  const ComplexMatrix& matrix() const { return op_.matrix(); }
  const HermitianOperator& op() const { return op_; }
  /// Eigenvalues of rho, ascending, clamped into [0, 1].
  const RealVector& probabilities() const { return probabilities_; }

 private:
  friend DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);
  DensityOperator(HermitianOperator op, RealVector probabilities);
  HermitianOperator op_;
  RealVector probabilities_;
};

/// -Tr[rho ln rho] in units of k.
double entropy(const DensityOperator& rho);

/// exp(-beta H) / Z as a full density operator.
DensityOperator canonical_density(const HermitianOperator& h, double beta);

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);

struct EnergyRange {
  double lower;  // exclusive
  double upper;  // exclusive
};

/// Open interval of canonical energies reachable by some finite beta.
EnergyRange achievable_energies(const LevelSpectrum& spectrum);

/// Inverse of the monotone map beta -> E(beta).
double beta_for_energy(const LevelSpectrum& spectrum, double target_energy);

struct EnergyEntropy {
  double beta;
  double entropy;
};

/// Canonical entropy as a function of energy, evaluated as
/// beta E + ln Z(beta), which is stationary in beta at the root.
EnergyEntropy entropy_at_energy(const LevelSpectrum& spectrum, double energy);

/// S(target) - S(from) along the canonical family of `spectrum`, computed as
/// beta' (E' - E) + ln < exp(-(beta' - beta)(e - E)) >_beta so that small energy
/// moves keep their full relative precision.
double entropy_change(const LevelSpectrum& spectrum, const CanonicalState& from, double target_energy);

/// A spectrum whose levels scale isotropically with volume, e_i(V) = e_i(V0) (V0/V)^{2/3}.
struct IsotropicFamily {
  LevelSpectrum reference;
  double reference_volume;

  LevelSpectrum at(double volume) const;
};

struct FundamentalDerivatives {
  double inverse_temperature;  // (dS/dE)_V, central differences plus one Richardson step
  double beta;                 // root of E(beta) = E, for comparison
  double pressure;             // T (dS/dV)_E, same scheme
  double entropy;
};

FundamentalDerivatives fundamental_derivatives(const IsotropicFamily& family, double energy,
                                               double volume, double relative_step = 1e-4);

/// Tr[rho P]; rejects a dimension mismatch or a non-negligible imaginary part.
double mean_momentum(const DensityOperator& rho, const HermitianOperator& momentum);

/// Occupation change along a direction that keeps total probability and energy fixed.
struct Perturbation {
  std::size_t i, j, k;
  double amplitude;
};

struct WitnessTrial {
  Perturbation move;
  double margin;        // S_canonical - S_perturbed
  double energy_drift;  // |E_perturbed - E|
};

struct MaxEntropyWitness {
  double energy;
  double beta;
  double canonical_entropy;
  std::uint64_t seed;
  std::vector<WitnessTrial> trials;
  double min_margin;
  double max_energy_drift;
  bool feasible;  // false when fewer than three levels leave no freedom at fixed E
};

/// Entropy drop S(p) - S(p + t d) for the conserving direction d on levels (i, j, k).
/// Only the three touched terms are evaluated, so small margins are not lost to rounding.
WitnessTrial perturbation_margin(const LevelSpectrum& spectrum, const CanonicalState& state,
                                 const Perturbation& move);

MaxEntropyWitness max_entropy_witness(const LevelSpectrum& spectrum, double energy,
                                      std::size_t trials, std::uint64_t seed);

}  // namespace qtherm
