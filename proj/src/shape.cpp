#include "qtherm/shape.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "qtherm/composite.hpp"
#include "qtherm/equilibrium.hpp"

namespace qtherm {

BoxShape isochoric_family(double volume, double ratio_b, double ratio_c) {
  if (!(volume > 0.0) || !(ratio_b > 0.0) || !(ratio_c > 0.0)) {
    throw ValidationError("volume and aspect ratios must be positive");
  }
  const double d = std::cbrt(volume / (ratio_b * ratio_c * ratio_c));
  const double c = ratio_c * d;
  const double b = ratio_b * c;
  return BoxShape(b, c, d);
}

namespace {

struct Solved {
  BoxSpectrum box;
  CanonicalState state;
  double tail;
};

void check_tail(double tail, const CutoffPolicy& policy) {
  if (tail > policy.max_tail) {
    std::ostringstream msg;
    msg << "tail bound " << tail << " exceeds " << policy.max_tail << "; use a larger cutoff";
    throw ValidationError(msg.str());
  }
}

Solved solve_at_beta(const BoxShape& shape, double beta, const CutoffPolicy& policy) {
  if (!(beta > 0.0)) throw ValidationError("box states need a positive temperature");
  auto box = box_spectrum_for_tail(shape, beta, policy.tail_target);
  auto state = canonical_state(LevelSpectrum::of_box(box), beta);
  const double tail = box.tail_weight_bound;
  check_tail(tail, policy);
  return {std::move(box), std::move(state), tail};
}

Solved solve_at_energy(const BoxShape& shape, double energy, const CutoffPolicy& policy) {
  const double ground = shape.level_energy(1, 1, 1);
  if (!(energy > ground)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "energy " << energy << " is not above the ground level " << ground;
    throw ValidationError(msg.str());
  }
  // The classical 3 / 2E is a lower estimate of the quantum beta; halve it until
  // the cutoff it implies still holds at the beta actually reached.
  double beta_guess = 1.5 / energy;
  for (int attempt = 0; attempt < 16; ++attempt) {
    auto box = box_spectrum_for_tail(shape, beta_guess, policy.tail_target);
    const auto levels = LevelSpectrum::of_box(box);
    if (!(energy < achievable_energies(levels).upper)) {
      beta_guess *= 0.5;
      continue;
    }
    const double beta = beta_for_energy(levels, energy);
    const double tail = box.relative_tail(beta);
    if (tail > policy.tail_target) {
      beta_guess = std::min(beta_guess, beta) * 0.5;
      continue;
    }
    auto state = canonical_state(levels, beta);
    return {std::move(box), std::move(state), tail};
  }
  throw ValidationError("could not meet the tail bound; use a larger cutoff");
}

}  // namespace

ShapeEntropy box_entropy_at_energy(const BoxShape& shape, double energy, const CutoffPolicy& policy) {
  const auto solved = solve_at_energy(shape, energy, policy);
  check_tail(solved.tail, policy);
  // Legendre form at the requested energy, stationary in beta.
  const double s = solved.state.beta * energy + solved.state.log_partition;
  return {s, solved.state.beta, solved.tail, solved.box.levels.size()};
}

double entropy_gap(const BoxShape& a, const BoxShape& b, double energy, const CutoffPolicy& policy) {
  const double va = a.volume(), vb = b.volume();
  if (std::abs(va - vb) > 1e-12 * std::max(va, vb)) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "shapes must have equal volumes, got " << va << " and " << vb;
    throw ValidationError(msg.str());
  }
  if (a == b) {
    box_entropy_at_energy(a, energy, policy);
    return 0.0;
  }
  return std::abs(box_entropy_at_energy(a, energy, policy).entropy -
                  box_entropy_at_energy(b, energy, policy).entropy);
}

std::vector<GapRow> semiclassical_scan(const BoxShape& a, const BoxShape& b,
                                       std::vector<double> energies, const CutoffPolicy& policy) {
  std::sort(energies.begin(), energies.end());
  std::vector<GapRow> rows;
  rows.reserve(energies.size());
  for (double e : energies) {
    const double gap = entropy_gap(a, b, e, policy);
    const double sa = box_entropy_at_energy(a, e, policy).entropy;
    const double sb = a == b ? sa : box_entropy_at_energy(b, e, policy).entropy;
    const double mean = 0.5 * (std::abs(sa) + std::abs(sb));
    rows.push_back({e, sa, sb, gap, mean > 0.0 ? gap / mean : 0.0});
  }
  return rows;
}

ShapeTrajectory::ShapeTrajectory(std::vector<ShapeSample> samples, TrajectoryMode mode)
    : samples_(std::move(samples)), mode_(mode) {
  if (samples_.empty()) throw ValidationError("trajectory needs at least one sample");
  const double v0 = samples_.front().shape.volume();
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    const double v = samples_[k].shape.volume();
    if (std::abs(v - v0) > 1e-12 * v0) {
      std::ostringstream msg;
      msg.precision(15);
      msg << "sample " << k << " has volume " << v << ", first sample has " << v0;
      throw ValidationError(msg.str());
    }
    if (k > 0 && !(samples_[k].t > samples_[k - 1].t)) {
      throw ValidationError("trajectory times must be strictly increasing (sample " +
                            std::to_string(k) + ")");
    }
  }
  if (const auto* ct = std::get_if<ConstantTemperature>(&mode_)) {
    if (!(ct->temperature > 0.0) || !std::isfinite(ct->temperature)) {
      throw ValidationError("trajectory temperature must be positive");
    }
  } else if (!std::isfinite(std::get<ConstantEnergy>(mode_).energy)) {
    throw ValidationError("trajectory energy must be finite");
  }
}

ShapeTrajectory ShapeTrajectory::from_ratios(double volume, const std::vector<double>& t,
                                             const std::vector<double>& ratio_b,
                                             const std::vector<double>& ratio_c,
                                             TrajectoryMode mode) {
  if (t.size() != ratio_b.size() || t.size() != ratio_c.size()) {
    throw ValidationError("trajectory columns have different lengths");
  }
  std::vector<ShapeSample> samples;
  samples.reserve(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    samples.push_back({t[k], isochoric_family(volume, ratio_b[k], ratio_c[k])});
  }
  return ShapeTrajectory(std::move(samples), mode);
}

ShapeOccupations shape_occupations(const BoxShape& shape, const TrajectoryMode& mode,
                                   const CutoffPolicy& policy) {
  Solved solved = std::holds_alternative<ConstantTemperature>(mode)
                      ? solve_at_beta(shape, 1.0 / std::get<ConstantTemperature>(mode).temperature,
                                      policy)
                      : solve_at_energy(shape, std::get<ConstantEnergy>(mode).energy, policy);
  return {std::move(solved.box.levels), std::move(solved.state.occupations), solved.state.beta,
          solved.state.energy, solved.state.entropy, solved.tail};
}

double total_variation(const ShapeOccupations& a, const ShapeOccupations& b) {
  std::unordered_map<std::uint64_t, double> diff;
  diff.reserve(a.levels.size() + b.levels.size());
  for (std::size_t i = 0; i < a.levels.size(); ++i) diff[a.levels[i].key()] += a.occupations[i];
  for (std::size_t i = 0; i < b.levels.size(); ++i) diff[b.levels[i].key()] -= b.occupations[i];
  long double sum = 0.0L;
  for (const auto& [key, d] : diff) sum += std::abs(d);
  return 0.5 * static_cast<double>(sum);
}

ReallocationTrace trajectory_run(const ShapeTrajectory& trajectory, const CutoffPolicy& policy,
                                 std::size_t retained) {
  ReallocationTrace trace;
  trace.retained = retained;
  std::optional<ShapeOccupations> previous;
  for (std::size_t k = 0; k < trajectory.samples().size(); ++k) {
    const auto& sample = trajectory.samples()[k];
    ShapeOccupations occ;
    try {
      occ = shape_occupations(sample.shape, trajectory.mode(), policy);
    } catch (const ValidationError& e) {
      throw ValidationError("sample " + std::to_string(k) + " (t = " + std::to_string(sample.t) +
                            "): " + e.what());
    }
    TraceRow row{sample.t, sample.shape, occ.beta, occ.energy, occ.entropy, 0.0, {}, {}, {},
                 occ.tail_bound};
    if (previous) row.realloc_step = total_variation(*previous, occ);
    const std::size_t m = std::min(retained, occ.levels.size());
    for (std::size_t i = 0; i < m; ++i) {
      row.level_energies.push_back(occ.levels[i].energy);
      row.occupations.push_back(occ.occupations[i]);
      row.level_keys.push_back(occ.levels[i].key());
    }
    trace.rows.push_back(std::move(row));
    previous = std::move(occ);
  }
  return trace;
}

std::vector<double> two_phase_residuals(const ShapeTrajectory& solvent,
                                        const ShapeTrajectory& colloid,
                                        const CutoffPolicy& policy, std::size_t max_levels) {
  const auto* ts = std::get_if<ConstantTemperature>(&solvent.mode());
  const auto* tc = std::get_if<ConstantTemperature>(&colloid.mode());
  if (ts == nullptr || tc == nullptr || ts->temperature != tc->temperature) {
    throw ValidationError("two-phase runs need both phases at one common constant temperature");
  }
  if (solvent.samples().size() != colloid.samples().size()) {
    throw ValidationError("phase trajectories must have the same number of samples");
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < solvent.samples().size(); ++k) {
    auto restrict = [&](const ShapeOccupations& occ) {
      const std::size_t m = std::min(max_levels, occ.levels.size());
      std::vector<double> e(m);
      CanonicalState st;
      st.beta = occ.beta;
      long double total = 0.0L;
      for (std::size_t i = 0; i < m; ++i) total += occ.occupations[i];
      for (std::size_t i = 0; i < m; ++i) {
        e[i] = occ.levels[i].energy;
        st.occupations.push_back(static_cast<double>(occ.occupations[i] / total));
      }
      return std::pair{LevelSpectrum::truncated(std::move(e)), std::move(st)};
    };
    const auto [ls, ss] = restrict(shape_occupations(solvent.samples()[k].shape, solvent.mode(), policy));
    const auto [lc, sc] = restrict(shape_occupations(colloid.samples()[k].shape, colloid.mode(), policy));
    const auto occ = product_state(ss, sc);
    out.push_back(occupation_residual(occ, ls, lc, ts->temperature, 1.0, k).max_residual);
  }
  return out;
}

}  // namespace qtherm
