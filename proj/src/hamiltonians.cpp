#include "qtherm/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace qtherm {

BoxShape::BoxShape(double b, double c, double d) : b_(b), c_(c), d_(d) {
  if (!(b > 0.0 && c > 0.0 && d > 0.0) || !std::isfinite(b) || !std::isfinite(c) ||
      !std::isfinite(d)) {
    std::ostringstream msg;
    msg << "box sides must be positive and finite, got (" << b << ", " << c << ", " << d << ")";
    throw ValidationError(msg.str());
  }
}

double BoxShape::level_energy(std::uint32_t nx, std::uint32_t ny, std::uint32_t nz) const {
  const double x = nx, y = ny, z = nz;
  return x * x / (b_ * b_) + y * y / (c_ * c_) + z * z / (d_ * d_);
}

std::vector<double> BoxSpectrum::energies() const {
  std::vector<double> out;
  out.reserve(levels.size());
  for (const auto& l : levels) out.push_back(l.energy);
  return out;
}

namespace {

// Gamma(5/2, x) from the recurrence Gamma(a+1, x) = a Gamma(a, x) + x^a e^{-x}.
double upper_gamma_five_halves(double x) {
  const double g_half = std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(x));
  const double g_three_halves = 0.5 * g_half + std::sqrt(x) * std::exp(-x);
  return 1.5 * g_three_halves + x * std::sqrt(x) * std::exp(-x);
}

// ln Gamma(5/2, x); the asymptotic series takes over before exp(-x) underflows.
double log_upper_gamma_five_halves(double x) {
  if (x < 500.0) return std::log(upper_gamma_five_halves(x));
  const double series = 1.0 + 1.5 / x + 0.75 / (x * x) - 0.375 / (x * x * x);
  return 1.5 * std::log(x) - x + std::log(series);
}

// ln of the tail bound with energies measured from `shift`.
double log_tail_weight(double volume, double cutoff_energy, double beta, double shift) {
  const double x = beta * std::max(cutoff_energy, 0.0);
  return std::log(std::numbers::pi / 6.0 * volume) - 1.5 * std::log(beta) +
         log_upper_gamma_five_halves(x) + beta * shift;
}

}  // namespace

double box_tail_weight(double volume, double cutoff_energy, double beta) {
  if (!(beta > 0.0)) throw ValidationError("box tail bound needs beta > 0 (spectrum is unbounded)");
  return std::exp(log_tail_weight(volume, cutoff_energy, beta, 0.0));
}

double BoxSpectrum::relative_tail(double beta) const {
  if (!(beta > 0.0)) throw ValidationError("box tail bound needs beta > 0 (spectrum is unbounded)");
  if (levels.empty()) return INFINITY;
  const double shift = levels.front().energy;
  double z = 0.0;
  for (const auto& l : levels) z += std::exp(-beta * (l.energy - shift));
  return std::exp(log_tail_weight(shape.volume(), cutoff_energy, beta, shift) - std::log(z));
}

namespace {

std::vector<BoxLevel> enumerate_levels(const BoxShape& s, double emax) {
  std::vector<BoxLevel> out;
  const double b2 = 1.0 / (s.b() * s.b()), c2 = 1.0 / (s.c() * s.c()), d2 = 1.0 / (s.d() * s.d());
  out.reserve(static_cast<std::size_t>(
      std::min(5e7, std::numbers::pi / 6.0 * s.volume() * std::pow(std::max(emax, 0.0), 1.5) + 16)));
  for (std::uint32_t nx = 1;; ++nx) {
    const double ex = nx * double(nx) * b2;
    if (ex + c2 + d2 > emax) break;
    for (std::uint32_t ny = 1;; ++ny) {
      const double exy = ex + ny * double(ny) * c2;
      if (exy + d2 > emax) break;
      for (std::uint32_t nz = 1;; ++nz) {
        const double e = s.level_energy(nx, ny, nz);
        if (e > emax) break;
        out.push_back({nx, ny, nz, e});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const BoxLevel& a, const BoxLevel& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    if (a.nx != b.nx) return a.nx < b.nx;
    if (a.ny != b.ny) return a.ny < b.ny;
    return a.nz < b.nz;
  });
  return out;
}

}  // namespace

BoxSpectrum box_spectrum(const BoxShape& shape, const BoxCutoff& cutoff,
                         std::optional<double> beta) {
  BoxSpectrum out{shape, {}, 0, 0.0, 0.0, std::nullopt};
  const double ground = shape.level_energy(1, 1, 1);

  if (const auto* me = std::get_if<MaxEnergy>(&cutoff)) {
    if (!(me->value >= ground)) {
      std::ostringstream msg;
      msg << "energy cutoff " << me->value << " is below the ground level " << ground;
      throw ValidationError(msg.str());
    }
    out.levels = enumerate_levels(shape, me->value);
    out.cutoff_energy = me->value;
  } else {
    const std::size_t want = std::get<MaxCount>(cutoff).value;
    if (want < 1) throw ValidationError("level count cutoff must be >= 1");
    // Weyl estimate for the energy holding `want` levels, then grow until enough.
    double emax = std::max(ground,
                           std::pow(6.0 * static_cast<double>(want) / (std::numbers::pi * shape.volume()),
                                    2.0 / 3.0));
    std::vector<BoxLevel> all = enumerate_levels(shape, emax);
    while (all.size() < want) {
      emax *= 1.25;
      all = enumerate_levels(shape, emax);
    }
    const double last = all[want - 1].energy;
    std::size_t keep = want;
    while (keep < all.size() && all[keep].energy == last) ++keep;
    all.resize(keep);
    out.levels = std::move(all);
    out.cutoff_energy = last;
  }
  out.cutoff_count = out.levels.size();
  if (beta) {
    out.tail_beta = *beta;
    out.tail_weight_bound = out.relative_tail(*beta);
  }
  return out;
}

double box_cutoff_for_tail(const BoxShape& shape, double beta, double target) {
  if (!(beta > 0.0)) throw ValidationError("automatic box cutoff needs beta > 0");
  if (!(target > 0.0)) throw ValidationError("tail target must be positive");
  const double ground = shape.level_energy(1, 1, 1);
  // Estimate of the retained weight (relative to the ground term): 1, or half the
  // classical partition function once many levels are populated. Callers verify.
  const double log_z_classical = 1.5 * std::log(std::numbers::pi) - std::log(8.0) +
                                 std::log(shape.volume()) - 1.5 * std::log(beta) + beta * ground;
  const double log_z = std::max(0.0, log_z_classical + std::log(0.5));
  const double log_target = std::log(target);
  auto excess = [&](double ec) {
    return log_tail_weight(shape.volume(), ec, beta, ground) - log_z > log_target;
  };
  double lo = ground, hi = ground + 1.0 / beta;
  while (excess(hi)) {
    lo = hi;
    hi *= 1.5;
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) ? lo : hi) = mid;
  }
  return hi;
}

BoxSpectrum box_spectrum_for_tail(const BoxShape& shape, double beta, double target) {
  double ec = box_cutoff_for_tail(shape, beta, target);
  for (;;) {
    BoxSpectrum s = box_spectrum(shape, MaxEnergy{ec}, beta);
    if (s.tail_weight_bound <= target) return s;
    ec *= 1.2;
  }
}

void GridWell::validate() const {
  if (grid_points < 3) throw ValidationError("grid well needs at least 3 grid points");
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("grid step must be positive");
  if (potential.size() != grid_points) {
    std::ostringstream msg;
    msg << "potential has " << potential.size() << " values for " << grid_points << " grid points";
    throw ValidationError(msg.str());
  }
  for (double v : potential) {
    if (!std::isfinite(v)) throw ValidationError("potential contains a non-finite value");
  }
}

std::vector<double> read_potential_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r,");
    const std::string cell = line.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cell.size()) {
      throw ValidationError("potential CSV line " + std::to_string(lineno) + " is not a number: '" +
                            cell + "'");
    }
    values.push_back(v);
  }
  return values;
}

GridWell well_from_potential(std::vector<double> potential, double step) {
  GridWell w{potential.size(), step, std::move(potential)};
  w.validate();
  return w;
}

HermitianOperator fd_well(const GridWell& well) {
  well.validate();
  const auto n = static_cast<Eigen::Index>(well.grid_points);
  const double inv_h2 = 1.0 / (well.step * well.step);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = 2.0 * inv_h2 + well.potential[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      m(i, i + 1) = -inv_h2;
      m(i + 1, i) = -inv_h2;
    }
  }
  return HermitianOperator::from_real(m);
}

HermitianOperator momentum_operator(const GridWell& well) {
  well.validate();
  const auto n = static_cast<Eigen::Index>(well.grid_points);
  const double a = 1.0 / (2.0 * well.step);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    m(j, j + 1) = Complex(0.0, -a);
    m(j + 1, j) = Complex(0.0, a);
  }
  return HermitianOperator(m);
}

HermitianOperator spin_system(std::size_t num_levels, const std::vector<double>& gaps) {
  if (num_levels < 2) throw ValidationError("spin system needs at least 2 levels");
  if (gaps.size() + 1 != num_levels) {
    throw ValidationError("spin system with " + std::to_string(num_levels) + " levels needs " +
                          std::to_string(num_levels - 1) + " gaps, got " +
                          std::to_string(gaps.size()));
  }
  RealVector diag(static_cast<Eigen::Index>(num_levels));
  diag(0) = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (!(gaps[i] > 0.0) || !std::isfinite(gaps[i])) {
      std::ostringstream msg;
      msg << "spin gap " << i << " must be positive, got " << gaps[i];
      throw ValidationError(msg.str());
    }
    diag(static_cast<Eigen::Index>(i + 1)) = diag(static_cast<Eigen::Index>(i)) + gaps[i];
  }
  return HermitianOperator::diagonal(diag);
}

}  // namespace qtherm
