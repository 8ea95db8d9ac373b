#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qtherm/hamiltonians.hpp"

namespace qtherm {

/// Box with b / c = ratio_b, c / d = ratio_c and b c d = volume.
BoxShape isochoric_family(double volume, double ratio_b, double ratio_c);

/// How a box spectrum is truncated: a fixed energy cutoff, or a cutoff chosen
/// so the relative tail mass stays below `tail_target` at the working beta.
struct CutoffPolicy {
  double tail_target = 1e-10;
  double max_tail = 1e-8;  // hard limit enforced on every evaluation
};

struct ShapeEntropy {
  double entropy;
  double beta;
  double tail_bound;
  std::size_t levels;
};

/// Canonical entropy of one particle in `shape` at mean energy E.
ShapeEntropy box_entropy_at_energy(const BoxShape& shape, double energy,
                                   const CutoffPolicy& policy = {});

/// |S_A(E) - S_B(E)| for two shapes of equal volume.
double entropy_gap(const BoxShape& a, const BoxShape& b, double energy,
                   const CutoffPolicy& policy = {});

struct GapRow {
  double energy;
  double entropy_a;
  double entropy_b;
  double gap;
  double relative_gap;  // gap / mean entropy
};

std::vector<GapRow> semiclassical_scan(const BoxShape& a, const BoxShape& b,
                                       std::vector<double> energies,
                                       const CutoffPolicy& policy = {});

struct ConstantTemperature {
  double temperature;
};
struct ConstantEnergy {
  double energy;
};
using TrajectoryMode = std::variant<ConstantTemperature, ConstantEnergy>;

struct ShapeSample {
  double t;
  BoxShape shape;
};

/// Timed sequence of equal-volume shapes traversed quasistatically.
class ShapeTrajectory {
 public:
  ShapeTrajectory(std::vector<ShapeSample> samples, TrajectoryMode mode);
  /// Samples built from (t, ratio_b, ratio_c) triples at fixed volume.
  static ShapeTrajectory from_ratios(double volume, const std::vector<double>& t,
                                     const std::vector<double>& ratio_b,
                                     const std::vector<double>& ratio_c, TrajectoryMode mode);

  const std::vector<ShapeSample>& samples() const { return samples_; }
  const TrajectoryMode& mode() const { return mode_; }
  double volume() const { return samples_.front().shape.volume(); }

 private:
  std::vector<ShapeSample> samples_;
  TrajectoryMode mode_;
};

struct TraceRow {
  double t;
  BoxShape shape;
  double beta;
  double energy;
  double entropy;
  double realloc_step;  // total variation distance to the previous sample
  std::vector<double> level_energies;  // lowest `retained` levels
  std::vector<double> occupations;     // matching occupations
  std::vector<std::uint64_t> level_keys;
  double tail_bound;
};

struct ReallocationTrace {
  std::vector<TraceRow> rows;
  std::size_t retained = 64;
};

/// Occupations of one shape under the trajectory constraint, keyed by (nx, ny, nz).
struct ShapeOccupations {
  std::vector<BoxLevel> levels;
  std::vector<double> occupations;
  double beta;
  double energy;
  double entropy;
  double tail_bound;
};

ShapeOccupations shape_occupations(const BoxShape& shape, const TrajectoryMode& mode,
                                   const CutoffPolicy& policy = {});

/// 1/2 sum |p - q| over the union of level labels (missing labels count as 0).
double total_variation(const ShapeOccupations& a, const ShapeOccupations& b);

ReallocationTrace trajectory_run(const ShapeTrajectory& trajectory, const CutoffPolicy& policy = {},
                                 std::size_t retained = 64);

/// Solvent and colloid following their own shape paths at one common temperature.
/// Returns the largest product-state occupation relation residual at every sample.
std::vector<double> two_phase_residuals(const ShapeTrajectory& solvent,
                                        const ShapeTrajectory& colloid,
                                        const CutoffPolicy& policy = {}, std::size_t max_levels = 256);

}  // namespace qtherm
