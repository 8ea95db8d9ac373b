#pragma once

#include <cstddef>
#include <numbers>
#include <string>

#include "qtherm/hamiltonians.hpp"

namespace qtherm {

/// Sackur-Tetrode constant c0 = 4 pi m / (3 h^2) with m = h = k = 1.
inline constexpr double kReducedUnitsC0 = 4.0 * std::numbers::pi / 3.0;
/// The same constant in box units (hbar^2 pi^2 / 2m = 1, i.e. h^2 / m = 8).
inline constexpr double kBoxUnitsC0 = std::numbers::pi / 6.0;

/// Total potential of a constituent. An absent constituent carries the
/// -infinity marker, which prints as "-inf".
class TotalPotential {
 public:
  static TotalPotential finite(double value);
  static TotalPotential absent();

  bool is_absent() const;
  double value() const { return value_; }
  std::string to_string() const;

 private:
  explicit TotalPotential(double v) : value_(v) {}
  double value_;
};

/// Classical monatomic ideal gas, S/k = n [ ln((V/n)(c0 E/n)^{3/2}) + 5/2 ].
class IdealGas {
 public:
  explicit IdealGas(double c0 = kReducedUnitsC0);

  double c0() const { return c0_; }
  double entropy(double energy, double amount, double volume) const;
  /// E(S, n, V), the closed-form inverse of entropy().
  double energy(double entropy, double amount, double volume) const;

  double inverse_temperature(double energy, double amount) const;  // 3n / 2E
  double temperature(double energy, double amount) const;          // 2E / 3n
  double pressure(double energy, double amount, double volume) const;  // n T / V
  /// -T (dS/dn)_{E,V}; -inf marker at n = 0.
  TotalPotential total_potential(double energy, double amount, double volume) const;
  /// Same potential at fixed temperature, mu = -T ln((V/n)(3 c0 T / 2)^{3/2}).
  TotalPotential total_potential_at_temperature(double temperature, double amount,
                                                double volume) const;
  /// (dE/dn)_{S,V} by central difference of energy(); the first form of the potential.
  double potential_from_energy(double energy, double amount, double volume,
                               double relative_step = 1e-5) const;

 private:
  double c0_;
};

struct SpinPoint {
  double entropy;              // units of k
  double inverse_temperature;  // units of k / gap
};

/// N independent two-level spins with gap `gap` at filling f = E / (N gap).
SpinPoint spin_fundamental(double spins, double gap, double filling);

struct BoxGasComparison {
  double energy;
  double volume;
  double quantum_entropy;
  double classical_entropy;
  double relative_deviation;
  std::size_t levels;
  double tail_bound;
};

/// Single particle in a cubic box of volume V at energy E: canonical entropy of the
/// exact level list against ln(V / lambda^3) + 3/2 = ln(V (pi E / 6)^{3/2}) + 3/2.
BoxGasComparison semiclassical_box_vs_ideal_gas(double energy, double volume,
                                                double tail_target = 1e-10);

}  // namespace qtherm
