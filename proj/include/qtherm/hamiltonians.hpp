#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qtherm/spectral.hpp"

namespace qtherm {

/// Rectangular box with sides (b, c, d). Energies use hbar^2 pi^2 / 2m = 1,
/// so level (nx, ny, nz) sits at nx^2/b^2 + ny^2/c^2 + nz^2/d^2.
class BoxShape {
 public:
  BoxShape(double b, double c, double d);

  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double volume() const { return b_ * c_ * d_; }
  double level_energy(std::uint32_t nx, std::uint32_t ny, std::uint32_t nz) const;

  bool operator==(const BoxShape&) const = default;

 private:
  double b_, c_, d_;
};

struct BoxLevel {
  std::uint32_t nx, ny, nz;
  double energy;

  /// Packed (nx, ny, nz) used to match levels across shapes.
  std::uint64_t key() const {
    return (std::uint64_t{nx} << 42) | (std::uint64_t{ny} << 21) | std::uint64_t{nz};
  }
};

struct MaxEnergy {
  double value;
};
struct MaxCount {
  std::size_t value;
};
using BoxCutoff = std::variant<MaxEnergy, MaxCount>;

/// Upper bound on the canonical weight of every box level above `cutoff_energy`,
/// from the Weyl volume term, which bounds the Dirichlet level count from above:
/// sum_{E_i > E_c} exp(-beta E_i) <= (pi/6) V beta^{-3/2} Gamma(5/2, beta E_c).
/// Returned as an absolute weight with energies measured from zero.
double box_tail_weight(double volume, double cutoff_energy, double beta);

struct BoxSpectrum {
  BoxShape shape;
  std::vector<BoxLevel> levels;  // ascending energy, degenerate levels kept separately
  std::size_t cutoff_count = 0;
  double cutoff_energy = 0.0;
  /// Neglected probability mass sum_tail w / sum_retained w at `tail_beta`; 0 if no beta given.
  double tail_weight_bound = 0.0;
  std::optional<double> tail_beta;

  std::vector<double> energies() const;
  /// Relative tail mass at inverse temperature beta (> 0).
  double relative_tail(double beta) const;
};

/// Analytic box levels up to the cutoff. A count cutoff is widened so the
/// whole degenerate group of the last level is kept.
BoxSpectrum box_spectrum(const BoxShape& shape, const BoxCutoff& cutoff,
                         std::optional<double> beta = std::nullopt);

/// Energy cutoff whose relative tail bound at `beta` is estimated to be below `target`.
double box_cutoff_for_tail(const BoxShape& shape, double beta, double target);

/// Levels up to an automatically chosen cutoff, grown until the relative tail
/// bound at `beta` is at most `target`.
BoxSpectrum box_spectrum_for_tail(const BoxShape& shape, double beta, double target);

/// 1-D Dirichlet well on a uniform grid, -d^2/dx^2 + v(x).
struct GridWell {
  std::size_t grid_points = 0;
  double step = 0.0;
  std::vector<double> potential;

  double length() const { return static_cast<double>(grid_points + 1) * step; }
  void validate() const;
};

/// Reads one potential value per line; blank lines and lines starting with '#' are skipped.
std::vector<double> read_potential_csv(std::istream& in);
GridWell well_from_potential(std::vector<double> potential, double step);

HermitianOperator fd_well(const GridWell& well);

/// Central-difference -i d/dx on the well grid, Dirichlet ends.
HermitianOperator momentum_operator(const GridWell& well);

/// Diagonal spectrum with cumulative gaps starting at 0 (bounded above).
HermitianOperator spin_system(std::size_t num_levels, const std::vector<double>& gaps);

}  // namespace qtherm
