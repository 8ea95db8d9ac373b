#include "qtherm/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace qtherm {

LevelSpectrum::LevelSpectrum(std::vector<double> energies, bool complete)
    : energies_(std::move(energies)), complete_(complete) {
  if (energies_.empty()) throw ValidationError("level spectrum needs at least one level");
  for (double e : energies_) {
    if (!std::isfinite(e)) throw ValidationError("level spectrum contains a non-finite energy");
  }
  const auto [lo, hi] = std::minmax_element(energies_.begin(), energies_.end());
  min_ = *lo;
  max_ = *hi;
}

LevelSpectrum LevelSpectrum::complete(std::vector<double> energies) {
  return LevelSpectrum(std::move(energies), true);
}

LevelSpectrum LevelSpectrum::truncated(std::vector<double> energies) {
  return LevelSpectrum(std::move(energies), false);
}

LevelSpectrum LevelSpectrum::of_operator(const HermitianOperator& h) {
  const auto dec = eigh(h);
  return complete(std::vector<double>(dec.eigenvalues.begin(), dec.eigenvalues.end()));
}

LevelSpectrum LevelSpectrum::of_box(const BoxSpectrum& box) {
  return truncated(box.energies());
}

LevelSpectrum LevelSpectrum::scaled(double factor) const {
  if (!(factor > 0.0)) throw ValidationError("spectrum scale factor must be positive");
  std::vector<double> e(energies_);
  for (double& x : e) x *= factor;
  return LevelSpectrum(std::move(e), complete_);
}

namespace {

// Weights relative to the dominant level; returns (ln sum w, shift).
struct ShiftedWeights {
  std::vector<double> weights;
  double shift;
  double log_sum;
};

ShiftedWeights shifted_weights(std::span<const double> e, double beta, double lo, double hi) {
  ShiftedWeights out{std::vector<double>(e.size()), beta >= 0.0 ? lo : hi, 0.0};
  long double sum = 0.0L;
  for (std::size_t i = 0; i < e.size(); ++i) {
    out.weights[i] = std::exp(-beta * (e[i] - out.shift));
    sum += out.weights[i];
  }
  out.log_sum = std::log(static_cast<double>(sum));
  return out;
}

void check_beta(const LevelSpectrum& s, double beta) {
  if (!std::isfinite(beta)) throw ValidationError("beta must be finite");
  if (beta < 0.0 && !s.is_complete()) {
    throw ValidationError(
        "negative temperature requires upper energy limit: beta < 0 on a truncated spectrum");
  }
}

double canonical_energy(const LevelSpectrum& s, double beta) {
  const auto e = s.energies();
  const auto w = shifted_weights(e, beta, s.min(), s.max());
  long double num = 0.0L, den = 0.0L;
  for (std::size_t i = 0; i < e.size(); ++i) {
    num += static_cast<long double>(w.weights[i]) * (e[i] - w.shift);
    den += w.weights[i];
  }
  return static_cast<double>(num / den) + w.shift;
}

}  // namespace

CanonicalState canonical_state(const LevelSpectrum& spectrum, double beta) {
  check_beta(spectrum, beta);
  const auto e = spectrum.energies();
  const auto w = shifted_weights(e, beta, spectrum.min(), spectrum.max());
  CanonicalState st;
  st.beta = beta;
  st.log_partition = w.log_sum - beta * w.shift;
  st.occupations.resize(e.size());
  long double z = 0.0L;
  for (double x : w.weights) z += x;
  long double energy = 0.0L, entropy = 0.0L;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double p = static_cast<double>(w.weights[i] / z);
    st.occupations[i] = p;
    energy += static_cast<long double>(p) * (e[i] - w.shift);
    if (p > 0.0) {
      const double log_p = -beta * (e[i] - w.shift) - w.log_sum;
      entropy -= static_cast<long double>(p) * log_p;
    }
  }
  const double mean_shifted = static_cast<double>(energy);
  st.energy = mean_shifted + w.shift;
  st.entropy = static_cast<double>(entropy);
  long double var = 0.0L;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double dev = (e[i] - w.shift) - mean_shifted;
    var += static_cast<long double>(st.occupations[i]) * dev * dev;
  }
  st.energy_variance = static_cast<double>(var);
  return st;
}

double entropy(std::span<const double> occupations) {
  long double total = 0.0L, s = 0.0L;
  for (std::size_t i = 0; i < occupations.size(); ++i) {
    const double p = occupations[i];
    if (!(p >= -1e-10)) {
      std::ostringstream msg;
      msg << "occupation " << i << " is negative (" << p << ")";
      throw ValidationError(msg.str());
    }
    total += p;
    if (p > 1e-300) s -= static_cast<long double>(p) * std::log(p);
  }
  if (std::abs(static_cast<double>(total) - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "occupations sum to " << static_cast<double>(total) << ", not 1";
    throw ValidationError(msg.str());
  }
  return std::max(0.0, static_cast<double>(s));
}

DensityOperator::DensityOperator(HermitianOperator op, RealVector probabilities)
    : op_(std::move(op)), probabilities_(std::move(probabilities)) {}

DensityOperator::DensityOperator(const HermitianOperator& rho) : op_(rho) {
  const auto dec = eigh(rho);
  const RealVector& lam = dec.eigenvalues;
  if (lam.minCoeff() < -kTolerance || lam.maxCoeff() > 1.0 + kTolerance) {
    std::ostringstream msg;
    msg << "density operator eigenvalues must lie in [0, 1]; found range [" << lam.minCoeff()
        << ", " << lam.maxCoeff() << "]";
    throw ValidationError(msg.str());
  }
  if (std::abs(rho.trace() - 1.0) > kTolerance) {
    std::ostringstream msg;
    msg << "density operator trace is " << rho.trace() << ", not 1";
    throw ValidationError(msg.str());
  }
  probabilities_ = lam.cwiseMax(0.0).cwiseMin(1.0);
}

DensityOperator DensityOperator::pure(const Eigen::VectorXcd& state) {
  const double norm = state.norm();
  if (!(norm > 0.0)) throw ValidationError("pure state vector must be nonzero");
  const Eigen::VectorXcd v = state / norm;
  RealVector p = RealVector::Zero(v.size());
  p(v.size() - 1) = 1.0;
  ComplexMatrix m = v * v.adjoint();
  return DensityOperator(HermitianOperator(0.5 * (m + m.adjoint())), std::move(p));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  if (dim < 1) throw ValidationError("maximally mixed state needs dim >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  const double p = 1.0 / static_cast<double>(dim);
  return DensityOperator(HermitianOperator(ComplexMatrix::Identity(n, n) * p),
                         RealVector::Constant(n, p));
}

DensityOperator DensityOperator::from_spectrum(const RealVector& probabilities,
                                               const ComplexMatrix& basis) {
  const auto n = probabilities.size();
  if (basis.rows() != n || basis.cols() != n) {
    throw ValidationError("basis shape does not match the number of probabilities");
  }
  if (probabilities.minCoeff() < -kTolerance || std::abs(probabilities.sum() - 1.0) > kTolerance) {
    throw ValidationError("probabilities must be nonnegative and sum to 1");
  }
  const double ortho = (basis.adjoint() * basis - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (ortho > kTolerance) {
    std::ostringstream msg;
    msg << "basis is not orthonormal (max deviation " << ortho << ")";
    throw ValidationError(msg.str());
  }
  RealVector p = probabilities.cwiseMax(0.0);
  ComplexMatrix m = basis * p.cast<Complex>().asDiagonal() * basis.adjoint();
  std::sort(p.begin(), p.end());
  return DensityOperator(HermitianOperator(0.5 * (m + m.adjoint())), std::move(p));
}

double entropy(const DensityOperator& rho) {
  const RealVector& p = rho.probabilities();
  long double s = 0.0L;
  for (double x : p) {
    if (x > 1e-300) s -= static_cast<long double>(x) * std::log(x);
  }
  return std::max(0.0, static_cast<double>(s));
}

DensityOperator canonical_density(const HermitianOperator& h, double beta) {
  const auto dec = eigh(h);
  const auto spectrum =
      LevelSpectrum::complete(std::vector<double>(dec.eigenvalues.begin(), dec.eigenvalues.end()));
  const auto st = canonical_state(spectrum, beta);
  const RealVector p = Eigen::Map<const RealVector>(st.occupations.data(),
                                                    static_cast<Eigen::Index>(st.occupations.size()));
  return DensityOperator::from_spectrum(p, dec.eigenvectors);
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  const auto na = static_cast<Eigen::Index>(a.dim()), nb = static_cast<Eigen::Index>(b.dim());
  ComplexMatrix m(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      m.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
    }
  }
  RealVector p(na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < nb; ++j) p(i * nb + j) = a.probabilities()(i) * b.probabilities()(j);
  }
  std::sort(p.begin(), p.end());
  return DensityOperator(HermitianOperator(0.5 * (m + m.adjoint())), std::move(p));
}

EnergyRange achievable_energies(const LevelSpectrum& spectrum) {
  if (spectrum.is_complete()) return {spectrum.min(), spectrum.max()};
  return {spectrum.min(), canonical_energy(spectrum, 0.0)};
}

double beta_for_energy(const LevelSpectrum& spectrum, double target) {
  const auto range = achievable_energies(spectrum);
  if (!(target > range.lower && target < range.upper)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "target energy " << target << " is outside the achievable range (" << range.lower
        << ", " << range.upper << ")";
    throw ValidationError(msg.str());
  }
  const double spread = spectrum.spread();
  const double mid = canonical_energy(spectrum, 0.0);
  if (target == mid) return 0.0;

  // E(beta) is strictly decreasing; bracket [lo, hi] with E(lo) > target > E(hi).
  double lo = 0.0, hi = 0.0;
  const double start = 700.0 / spread;
  if (target < mid) {
    hi = start;
    while (canonical_energy(spectrum, hi) >= target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) throw ValidationError("target energy is too close to the ground level");
    }
  } else {
    lo = -start;
    while (canonical_energy(spectrum, lo) <= target) {
      hi = lo;
      lo *= 2.0;
      if (lo < -1e300) throw ValidationError("target energy is too close to the top level");
    }
  }

  const double tol = 1e-15 * std::max({std::abs(target), spread, 1e-300});
  double beta = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const auto st = canonical_state(spectrum, beta);
    const double f = st.energy - target;
    if (std::abs(f) <= tol) return beta;
    if (f > 0.0) {
      lo = beta;
    } else {
      hi = beta;
    }
    double next = st.energy_variance > 0.0 ? beta + f / st.energy_variance : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == beta || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(beta)) {
      return beta;
    }
    beta = next;
  }
  return beta;
}

EnergyEntropy entropy_at_energy(const LevelSpectrum& spectrum, double energy) {
  const double beta = beta_for_energy(spectrum, energy);
  const auto st = canonical_state(spectrum, beta);
  return {beta, beta * energy + st.log_partition};
}

double entropy_change(const LevelSpectrum& spectrum, const CanonicalState& from,
                      double target_energy) {
  if (from.occupations.size() != spectrum.size()) {
    throw ValidationError("state does not belong to this spectrum");
  }
  const double beta_to = beta_for_energy(spectrum, target_energy);
  const double dbeta = beta_to - from.beta;
  const auto e = spectrum.energies();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < e.size(); ++i) {
    acc += static_cast<long double>(from.occupations[i]) * std::expm1(-dbeta * (e[i] - from.energy));
  }
  return beta_to * (target_energy - from.energy) + std::log1p(static_cast<double>(acc));
}

LevelSpectrum IsotropicFamily::at(double volume) const {
  if (!(volume > 0.0)) throw ValidationError("volume must be positive");
  return reference.scaled(std::pow(reference_volume / volume, 2.0 / 3.0));
}

FundamentalDerivatives fundamental_derivatives(const IsotropicFamily& family, double energy,
                                               double volume, double relative_step) {
  if (!(relative_step > 0.0)) throw ValidationError("probe step must be positive");
  const LevelSpectrum here = family.at(volume);
  const double de = relative_step * (energy != 0.0 ? std::abs(energy) : here.spread());
  const double dv = relative_step * volume;
  if (!(volume - dv > 0.0)) throw ValidationError("volume probe leaves the positive range");

  auto entropy_checked = [&](const LevelSpectrum& s, double e) {
    const auto range = achievable_energies(s);
    if (!(e > range.lower && e < range.upper)) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "probe energy " << e << " leaves the achievable range (" << range.lower << ", "
          << range.upper << ")";
      throw ValidationError(msg.str());
    }
    return entropy_at_energy(s, e);
  };

  const auto centre = entropy_checked(here, energy);
  // central differences at h and h/2, then one Richardson step
  auto d_energy = [&](double h) {
    const double up = energy + h, dn = energy - h;
    return (entropy_checked(here, up).entropy - entropy_checked(here, dn).entropy) / (up - dn);
  };
  auto d_volume = [&](double h) {
    const double up = volume + h, dn = volume - h;
    return (entropy_checked(family.at(up), energy).entropy - entropy_checked(family.at(dn), energy).entropy) /
           (up - dn);
  };
  auto refine = [](double coarse, double fine) { return fine + (fine - coarse) / 3.0; };

  FundamentalDerivatives out{};
  out.inverse_temperature = refine(d_energy(de), d_energy(0.5 * de));
  out.beta = centre.beta;
  out.entropy = centre.entropy;
  const double ds_dv = refine(d_volume(dv), d_volume(0.5 * dv));
  out.pressure = centre.beta != 0.0 ? ds_dv / centre.beta : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double mean_momentum(const DensityOperator& rho, const HermitianOperator& momentum) {
  if (rho.dim() != momentum.dim()) {
    std::ostringstream msg;
    msg << "dimension mismatch: rho is " << rho.dim() << ", momentum is " << momentum.dim();
    throw ValidationError(msg.str());
  }
  const Complex value = (rho.matrix().transpose().cwiseProduct(momentum.matrix())).sum();
  const double scale = 1.0 + momentum.matrix().cwiseAbs().maxCoeff();
  if (std::abs(value.imag()) > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "Tr[rho P] has imaginary part " << value.imag();
    throw std::runtime_error(msg.str());
  }
  return value.real();
}

namespace {

// Direction on levels (i, j, k) that conserves both sum p and sum p e, scaled to max |d| = 1.
std::array<double, 3> conserving_direction(std::span<const double> e, std::size_t i, std::size_t j,
                                           std::size_t k, double spread) {
  std::array<double, 3> d = {e[j] - e[k], e[k] - e[i], e[i] - e[j]};
  const double dmax = std::max({std::abs(d[0]), std::abs(d[1]), std::abs(d[2])});
  if (dmax <= 1e-14 * std::max(1.0, spread)) return {1.0, -1.0, 0.0};
  for (double& x : d) x /= dmax;
  return d;
}

}  // namespace

WitnessTrial perturbation_margin(const LevelSpectrum& spectrum, const CanonicalState& state,
                                 const Perturbation& move) {
  const auto e = spectrum.energies();
  const std::size_t idx[3] = {move.i, move.j, move.k};
  for (std::size_t m : idx) {
    if (m >= e.size()) throw ValidationError("perturbation index out of range");
  }
  const auto d = conserving_direction(e, move.i, move.j, move.k, spectrum.spread());
  double margin = 0.0, drift = 0.0;
  for (int m = 0; m < 3; ++m) {
    const double p = state.occupations[idx[m]];
    const double dp = move.amplitude * d[m];
    const double q = p + dp;
    if (q < 0.0) throw ValidationError("perturbation drives an occupation negative");
    // q ln q - p ln p, written to keep the small second-order part.
    double term = 0.0;
    if (p > 0.0 && q > 0.0) {
      term = dp * std::log(p) + q * std::log1p(dp / p);
    } else if (q > 0.0) {
      term = q * std::log(q);
    } else if (p > 0.0) {
      term = -p * std::log(p);
    }
    margin += term;
    drift += dp * e[idx[m]];
  }
  return {move, margin, std::abs(drift)};
}

MaxEntropyWitness max_entropy_witness(const LevelSpectrum& spectrum, double energy,
                                      std::size_t trials, std::uint64_t seed) {
  MaxEntropyWitness out{};
  out.energy = energy;
  out.seed = seed;
  out.beta = beta_for_energy(spectrum, energy);
  const auto state = canonical_state(spectrum, out.beta);
  out.canonical_entropy = state.entropy;
  out.feasible = spectrum.size() >= 3;
  out.min_margin = std::numeric_limits<double>::infinity();
  out.max_energy_drift = 0.0;
  if (!out.feasible) return out;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, spectrum.size() - 1);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  std::bernoulli_distribution sign(0.5);
  const auto e = spectrum.energies();

  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
    while (j == i) j = pick(rng);
    while (k == i || k == j) k = pick(rng);

    // Feasible amplitudes keep every touched occupation nonnegative.
    const auto d = conserving_direction(e, i, j, k, spectrum.spread());
    const double p[3] = {state.occupations[i], state.occupations[j], state.occupations[k]};
    double up = std::numeric_limits<double>::infinity(), down = std::numeric_limits<double>::infinity();
    for (int m = 0; m < 3; ++m) {
      if (d[m] < 0.0) up = std::min(up, p[m] / -d[m]);
      if (d[m] > 0.0) down = std::min(down, p[m] / d[m]);
    }
    const double amplitude = sign(rng) ? frac(rng) * up : -frac(rng) * down;
    const auto trial = perturbation_margin(spectrum, state, {i, j, k, amplitude});
    out.min_margin = std::min(out.min_margin, trial.margin);
    out.max_energy_drift = std::max(out.max_energy_drift, trial.energy_drift);
    out.trials.push_back(trial);
  }
  return out;
}

}  // namespace qtherm
