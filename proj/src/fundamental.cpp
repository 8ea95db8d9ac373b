#include "qtherm/fundamental.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qtherm/equilibrium.hpp"

namespace qtherm {

TotalPotential TotalPotential::finite(double value) {
  if (!std::isfinite(value)) throw ValidationError("finite total potential expected");
  return TotalPotential(value);
}

TotalPotential TotalPotential::absent() {
  return TotalPotential(-std::numeric_limits<double>::infinity());
}

bool TotalPotential::is_absent() const { return std::isinf(value_) && value_ < 0.0; }

std::string TotalPotential::to_string() const {
  if (is_absent()) return "-inf";
  std::ostringstream out;
  out.precision(12);
  out << value_;
  return out.str();
}

IdealGas::IdealGas(double c0) : c0_(c0) {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw ValidationError("ideal gas constant must be positive");
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << name << " must be positive, got " << v;
    throw ValidationError(msg.str());
  }
}

}  // namespace

double IdealGas::entropy(double energy, double amount, double volume) const {
  require_positive(energy, "energy");
  require_positive(amount, "amount");
  require_positive(volume, "volume");
  return amount * (std::log(volume / amount) + 1.5 * std::log(c0_ * energy / amount) + 2.5);
}

double IdealGas::energy(double entropy, double amount, double volume) const {
  require_positive(amount, "amount");
  require_positive(volume, "volume");
  return amount / c0_ * std::exp((entropy / amount - 2.5 - std::log(volume / amount)) / 1.5);
}

double IdealGas::inverse_temperature(double energy, double amount) const {
  require_positive(energy, "energy");
  require_positive(amount, "amount");
  return 1.5 * amount / energy;
}

double IdealGas::temperature(double energy, double amount) const {
  return 1.0 / inverse_temperature(energy, amount);
}

double IdealGas::pressure(double energy, double amount, double volume) const {
  require_positive(volume, "volume");
  return amount * temperature(energy, amount) / volume;
}

TotalPotential IdealGas::total_potential(double energy, double amount, double volume) const {
  if (amount == 0.0) return TotalPotential::absent();
  require_positive(energy, "energy");
  require_positive(amount, "amount");
  require_positive(volume, "volume");
  // (dS/dn)_{E,V} = ln((V/n)(c0 E/n)^{3/2}); the +5/2 cancels against n d/dn.
  const double ds_dn = std::log(volume / amount) + 1.5 * std::log(c0_ * energy / amount);
  return TotalPotential::finite(-temperature(energy, amount) * ds_dn);
}

TotalPotential IdealGas::total_potential_at_temperature(double temperature, double amount,
                                                        double volume) const {
  if (amount == 0.0) return TotalPotential::absent();
  require_positive(temperature, "temperature");
  require_positive(amount, "amount");
  require_positive(volume, "volume");
  const double ds_dn = std::log(volume / amount) + 1.5 * std::log(1.5 * c0_ * temperature);
  return TotalPotential::finite(-temperature * ds_dn);
}

double IdealGas::potential_from_energy(double energy, double amount, double volume,
                                       double relative_step) const {
  const double s = entropy(energy, amount, volume);
  const double dn = relative_step * amount;
  return (this->energy(s, amount + dn, volume) - this->energy(s, amount - dn, volume)) / (2.0 * dn);
}

SpinPoint spin_fundamental(double spins, double gap, double filling) {
  require_positive(spins, "spin count");
  require_positive(gap, "gap");
  if (!(filling > 0.0 && filling < 1.0)) {
    std::ostringstream msg;
    msg << "filling must lie strictly inside (0, 1), got " << filling;
    throw ValidationError(msg.str());
  }
  const double log_f = std::log(filling);
  const double log_1mf = std::log1p(-filling);
  return {-spins * (filling * log_f + (1.0 - filling) * log_1mf), (log_1mf - log_f) / gap};
}

BoxGasComparison semiclassical_box_vs_ideal_gas(double energy, double volume, double tail_target) {
  require_positive(energy, "energy");
  require_positive(volume, "volume");
  const double side = std::cbrt(volume);
  const BoxShape cube(side, side, side);
  const double classical =
      std::log(volume) + 1.5 * std::log(kBoxUnitsC0 * energy) + 1.5;

  // The quantum beta is at least the classical 3 / 2E, so the cutoff chosen there is safe;
  // the tail is re-checked at the actual beta.
  double beta_guess = 1.5 / energy;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const auto box = box_spectrum_for_tail(cube, beta_guess, tail_target);
    const auto levels = LevelSpectrum::of_box(box);
    const auto range = achievable_energies(levels);
    if (!(energy > range.lower)) {
      std::ostringstream msg;
      msg << "energy " << energy << " is not above the ground level " << range.lower;
      throw ValidationError(msg.str());
    }
    if (!(energy < range.upper)) {
      beta_guess *= 0.5;
      continue;
    }
    const auto point = entropy_at_energy(levels, energy);
    const double tail = box.relative_tail(point.beta);
    if (tail > tail_target) {
      beta_guess = std::min(beta_guess, point.beta) * 0.5;
      continue;
    }
    return {energy, volume, point.entropy, classical,
            std::abs(point.entropy - classical) / std::abs(classical), levels.size(), tail};
  }
  throw ValidationError("tail bound could not be met; raise the cutoff");
}

}  // namespace qtherm
