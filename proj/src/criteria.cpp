#include "qtherm/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qtherm/composite.hpp"
#include "qtherm/fundamental.hpp"
#include "qtherm/io.hpp"
#include "qtherm/sampling.hpp"

namespace qtherm {

std::string_view to_string(CriterionStatus s) {
  switch (s) {
    case CriterionStatus::pass: return "pass";
    case CriterionStatus::fail: return "fail";
    case CriterionStatus::not_applicable: return "not_applicable";
  }
  return "fail";
}

DensityOperator dephase(const DensityOperator& rho, const ComplexMatrix& basis) {
  const auto n = static_cast<Eigen::Index>(rho.dim());
  if (basis.rows() != n || basis.cols() != n) {
    throw ValidationError("dephasing basis must be a square matrix matching rho");
  }
  const double ortho = (basis.adjoint() * basis - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (ortho > 1e-10) {
    std::ostringstream msg;
    msg << "dephasing basis is not orthonormal (max deviation " << ortho << ")";
    throw ValidationError(msg.str());
  }
  const ComplexMatrix in_basis = basis.adjoint() * rho.matrix() * basis;
  RealVector diag = in_basis.diagonal().real().cwiseMax(0.0);
  diag /= diag.sum();
  return DensityOperator::from_spectrum(diag, basis);
}

namespace {

DensityOperator conjugate(const DensityOperator& rho, const ComplexMatrix& u) {
  const ComplexMatrix m = u * rho.matrix() * u.adjoint();
  return DensityOperator(HermitianOperator(0.5 * (m + m.adjoint())));
}

LevelSpectrum random_levels(std::size_t dim, Rng& rng, double width = 5.0) {
  std::uniform_real_distribution<double> u(0.0, width);
  std::vector<double> e(dim);
  for (auto& x : e) x = u(rng);
  std::sort(e.begin(), e.end());
  return LevelSpectrum::complete(std::move(e));
}

CriterionResult unitary_invariance(const CriteriaConfig& cfg, Rng& rng) {
  double worst = 0.0;
  std::size_t draws = 0;
  for (std::size_t d : cfg.dims) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const auto rho = random_density(d, rng);
      const auto u = random_unitary(d, rng);
      worst = std::max(worst, std::abs(entropy(conjugate(rho, u)) - entropy(rho)));
      ++draws;
    }
  }
  return {1, "invariant for all unitary evolutions",
          worst < 1e-9 ? CriterionStatus::pass : CriterionStatus::fail,
          {{"max_deviation", worst}, {"draws", double(draws)}, {"tolerance", 1e-9}}, ""};
}

CriterionResult totality(const CriteriaConfig& cfg, Rng& rng) {
  double min_s = std::numeric_limits<double>::infinity();
  double max_excess = -std::numeric_limits<double>::infinity();  // S - ln d
  std::size_t evaluated = 0;
  bool all_finite = true;
  auto record = [&](const DensityOperator& rho) {
    const double s = entropy(rho);
    all_finite = all_finite && std::isfinite(s);
    min_s = std::min(min_s, s);
    max_excess = std::max(max_excess, s - std::log(static_cast<double>(rho.dim())));
    ++evaluated;
  };
  record(DensityOperator::maximally_mixed(1));
  for (std::size_t d : cfg.dims) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      record(random_density(d, rng));
      record(DensityOperator::pure(random_state(d, rng)));
    }
    // Degenerate spectrum: half the weight on each of two levels.
    RealVector p = RealVector::Zero(static_cast<Eigen::Index>(d));
    p(0) = 0.5;
    p(static_cast<Eigen::Index>(d - 1)) += 0.5;
    record(DensityOperator::from_spectrum(p, random_unitary(d, rng)));
    // Near-singular spectrum.
    RealVector q = RealVector::Constant(static_cast<Eigen::Index>(d), 1e-15);
    q(0) = 1.0 - 1e-15 * static_cast<double>(d - 1);
    record(DensityOperator::from_spectrum(q, random_unitary(d, rng)));
    record(DensityOperator::maximally_mixed(d));
  }
  const bool ok = all_finite && min_s >= 0.0 && max_excess <= 1e-12;
  return {2, "well defined for every system and state",
          ok ? CriterionStatus::pass : CriterionStatus::fail,
          {{"states_evaluated", double(evaluated)}, {"min_entropy", min_s},
           {"max_excess_over_log_dim", max_excess}},
          "pass (evidence): finite on every generated state, including dim 1, rank 1, "
          "degenerate and near-singular spectra"};
}

CriterionResult adiabatic_and_irreversible(const CriteriaConfig& cfg, Rng& rng) {
  double unitary_worst = 0.0;
  double min_increase = std::numeric_limits<double>::infinity();
  std::uniform_real_distribution<double> time(0.1, 10.0);
  for (std::size_t d : cfg.dims) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const auto h = random_hermitian(d, rng);
      const auto rho = random_density(d, rng);
      const double s0 = entropy(rho);
      const auto u = unitary_evolution(h, time(rng));
      unitary_worst = std::max(unitary_worst, std::abs(entropy(conjugate(rho, u)) - s0));
      const auto energy_basis = eigh(h).eigenvectors;
      min_increase = std::min(min_increase, entropy(dephase(rho, energy_basis)) - s0);
    }
  }
  const bool ok = unitary_worst < 1e-9 && min_increase >= -1e-12;
  return {3, "invariant in reversible adiabatic processes, increasing in irreversible ones",
          ok ? CriterionStatus::pass : CriterionStatus::fail,
          {{"max_unitary_deviation", unitary_worst}, {"min_dephasing_increase", min_increase}},
          "irreversible processes represented by energy-basis dephasing"};
}

CriterionResult additivity(const CriteriaConfig& cfg, Rng& rng) {
  double worst = 0.0;
  for (std::size_t d : cfg.dims) {
    const std::size_t d2 = std::min<std::size_t>(d, 4);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const auto a = random_density(d, rng);
      const auto b = random_density(d2, rng);
      worst = std::max(worst, std::abs(entropy(tensor_product(a, b)) - entropy(a) - entropy(b)));
    }
    // Product canonical occupations.
    std::uniform_real_distribution<double> beta(-2.0, 2.0);
    const auto ls = random_levels(d, rng), lc = random_levels(d2, rng);
    const auto ss = canonical_state(ls, beta(rng)), sc = canonical_state(lc, beta(rng));
    worst = std::max(worst, std::abs(product_state(ss, sc).entropy() - ss.entropy - sc.entropy));
  }
  return {4, "additive for all systems and states",
          worst < 1e-10 ? CriterionStatus::pass : CriterionStatus::fail,
          {{"max_deviation", worst}, {"tolerance", 1e-10}}, ""};
}

CriterionResult nonnegativity(const CriteriaConfig& cfg, Rng& rng) {
  double min_s = std::numeric_limits<double>::infinity();
  double max_pure = 0.0;
  double min_mixed = std::numeric_limits<double>::infinity();
  bool iff_holds = true;
  auto check_iff = [&](const DensityOperator& rho) {
    const double s = entropy(rho);
    min_s = std::min(min_s, s);
    const bool projector = rho.probabilities().maxCoeff() > 1.0 - 1e-10;
    iff_holds = iff_holds && ((s < 1e-10) == projector);
    return s;
  };
  for (std::size_t d : cfg.dims) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      // Rebuild through the general constructor so the projector goes through an eigensolve.
      const DensityOperator pure(DensityOperator::pure(random_state(d, rng)).op());
      max_pure = std::max(max_pure, check_iff(pure));
      min_mixed = std::min(min_mixed, check_iff(random_density(d, rng)));
    }
    RealVector p = RealVector::Constant(static_cast<Eigen::Index>(d), 1e-6 / double(d - 1));
    p(0) = 1.0 - 1e-6;
    min_mixed = std::min(min_mixed, check_iff(DensityOperator::from_spectrum(p, random_unitary(d, rng))));
  }
  const bool ok = min_s >= -1e-12 && max_pure < 1e-10 && iff_holds;
  return {5, "nonnegative, and zero exactly on projectors",
          ok ? CriterionStatus::pass : CriterionStatus::fail,
          {{"min_entropy", min_s}, {"max_pure_entropy", max_pure}, {"min_mixed_entropy", min_mixed},
           {"iff_violations", iff_holds ? 0.0 : 1.0}},
          ""};
}

CriterionResult uniqueness(const CriteriaConfig& cfg, Rng& rng) {
  double min_margin = std::numeric_limits<double>::infinity();
  double max_drift = 0.0;
  std::uniform_real_distribution<double> beta(-1.5, 1.5);
  for (std::size_t d : cfg.dims) {
    if (d < 3) continue;
    const auto levels = random_levels(d, rng);
    const double e = canonical_state(levels, beta(rng)).energy;
    const auto w = max_entropy_witness(levels, e, 10 * cfg.trials, rng());
    min_margin = std::min(min_margin, w.min_margin);
    max_drift = std::max(max_drift, w.max_energy_drift);
  }
  if (!std::isfinite(min_margin)) {
    return {6, "unique value at given energy in a stable equilibrium state",
            CriterionStatus::not_applicable, {{"min_margin", 0.0}},
            "needs a dimension >= 3: with two levels the energy fixes the occupations"};
  }
  const bool ok = min_margin > 0.0 && max_drift < 1e-9;
  return {6, "unique value at given energy in a stable equilibrium state",
          ok ? CriterionStatus::pass : CriterionStatus::fail,
          {{"min_margin", min_margin}, {"max_energy_drift", max_drift}}, ""};
}

CriterionResult concavity(const CriteriaConfig& cfg, Rng& rng) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t d : cfg.dims) {
    const auto levels = random_levels(d, rng);
    const auto range = achievable_energies(levels);
    const double width = range.upper - range.lower;
    const double lo = range.lower + 0.02 * width, hi = range.upper - 0.02 * width;
    constexpr int kPoints = 50;
    std::vector<double> s(kPoints);
    const double h = (hi - lo) / (kPoints - 1);
    for (int i = 0; i < kPoints; ++i) s[i] = entropy_at_energy(levels, lo + i * h).entropy;
    for (int i = 1; i + 1 < kPoints; ++i) worst = std::max(worst, s[i + 1] - 2.0 * s[i] + s[i - 1]);
  }
  return {7, "concave and smooth entropy versus energy",
          worst <= 1e-8 ? CriterionStatus::pass : CriterionStatus::fail,
          {{"max_second_difference", worst}, {"tolerance", 1e-8}}, ""};
}

CriterionResult mutual_equilibrium(const CriteriaConfig& cfg, Rng& rng) {
  double worst_temperature = 0.0;
  std::uniform_real_distribution<double> beta_dist(0.2, 1.5);
  for (std::size_t d : cfg.dims) {
    const std::size_t d2 = std::min<std::size_t>(d, 8);
    const auto a = random_levels(d, rng), b = random_levels(d2, rng);
    const double beta = beta_dist(rng);
    const auto joint = compose_levels(a, b).as_levels(true);
    const double e = canonical_state(joint, beta).energy;
    const auto deriv = fundamental_derivatives({joint, 1.0}, e, 1.0);
    worst_temperature = std::max(worst_temperature, std::abs(deriv.inverse_temperature - beta) / beta);
  }
  // Two identical boxes at one temperature share the same pressure.
  const BoxShape cube(1.0, 1.0, 1.0);
  const auto box = box_spectrum_for_tail(cube, 0.5, 1e-12);
  const IsotropicFamily family{LevelSpectrum::of_box(box), 1.0};
  const double e_box = canonical_state(family.reference, 0.5).energy;
  const auto pa = fundamental_derivatives(family, e_box, 1.0);
  const auto pb = fundamental_derivatives(family, e_box, 1.0);
  const double pressure_gap = std::abs(pa.pressure - pb.pressure);
  const double pressure_law = std::abs(pa.pressure - 2.0 / 3.0 * e_box) / (2.0 / 3.0 * e_box);
  // Classical halves of one ideal gas: equal T, p and mu.
  const IdealGas gas;
  const double t1 = gas.temperature(3.0, 2.0), t2 = gas.temperature(6.0, 4.0);
  const double p1 = gas.pressure(3.0, 2.0, 1.5), p2 = gas.pressure(6.0, 4.0, 3.0);
  const double m1 = gas.total_potential(3.0, 2.0, 1.5).value();
  const double m2 = gas.total_potential(6.0, 4.0, 3.0).value();
  const double classical = std::max({std::abs(t1 - t2), std::abs(p1 - p2), std::abs(m1 - m2)});
  const bool ok = worst_temperature < 1e-5 && pressure_gap < 1e-12 && pressure_law < 1e-4 &&
                  classical < 1e-12;
  return {8, "equal temperature, total potentials and pressure in mutual equilibrium",
          ok ? CriterionStatus::pass : CriterionStatus::fail,
          {{"max_relative_temperature_mismatch", worst_temperature},
           {"pressure_mismatch", pressure_gap},
           {"pressure_vs_two_thirds_e_over_v", pressure_law},
           {"classical_mismatch", classical}},
          ""};
}

CriterionResult experimental_relations(const CriteriaConfig& cfg) {
  const auto high = semiclassical_box_vs_ideal_gas(cfg.box_energy, 1.0);
  const auto half = semiclassical_box_vs_ideal_gas(0.5 * cfg.box_energy, 1.0);
  const bool ok = high.relative_deviation < cfg.box_tolerance &&
                  high.relative_deviation < half.relative_deviation;
  return {9, "reduces to established relations (ideal gas)",
          ok ? CriterionStatus::pass : CriterionStatus::fail,
          {{"energy", cfg.box_energy},
           {"relative_deviation", high.relative_deviation},
           {"relative_deviation_half_energy", half.relative_deviation},
           {"tolerance", cfg.box_tolerance},
           {"quantum_entropy", high.quantum_entropy},
           {"classical_entropy", high.classical_entropy}},
          ""};
}

}  // namespace

bool CriteriaReport::all_pass() const {
  return criteria.size() == 9 &&
         std::all_of(criteria.begin(), criteria.end(),
                     [](const CriterionResult& c) { return c.status == CriterionStatus::pass; });
}

std::string CriteriaReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["seed"] = seed;
  doc["all_pass"] = all_pass();
  auto list = nlohmann::ordered_json::array();
  for (const auto& c : criteria) {
    nlohmann::ordered_json entry;
    entry["id"] = c.id;
    entry["name"] = c.name;
    entry["status"] = std::string(to_string(c.status));
    nlohmann::ordered_json w = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.witness) w[k] = json_number(v);
    entry["witness"] = w;
    entry["note"] = c.note;
    list.push_back(entry);
  }
  doc["criteria"] = list;
  return doc.dump(2) + "\n";
}

std::string CriteriaReport::to_text() const {
  std::ostringstream out;
  out << "entropy criteria (seed " << seed << ")\n";
  for (const auto& c : criteria) {
    out << "  (" << c.id << ") " << to_string(c.status) << "  " << c.name;
    for (const auto& [k, v] : c.witness) out << "  " << k << "=" << format_number(v);
    out << "\n";
  }
  return out.str();
}

CriteriaReport run_criteria_suite(const CriteriaConfig& config) {
  if (config.trials < 1) throw ValidationError("criteria suite needs at least one trial");
  if (config.dims.empty()) throw ValidationError("criteria suite needs at least one dimension");
  for (std::size_t d : config.dims) {
    if (d < 2 || d > 64) throw ValidationError("criteria dims must lie in [2, 64]");
  }
  Rng rng(config.seed);
  CriteriaReport report{config.seed, {}};
  report.criteria.push_back(unitary_invariance(config, rng));
  report.criteria.push_back(totality(config, rng));
  report.criteria.push_back(adiabatic_and_irreversible(config, rng));
  report.criteria.push_back(additivity(config, rng));
  report.criteria.push_back(nonnegativity(config, rng));
  report.criteria.push_back(uniqueness(config, rng));
  report.criteria.push_back(concavity(config, rng));
  report.criteria.push_back(mutual_equilibrium(config, rng));
  report.criteria.push_back(experimental_relations(config));
  return report;
}

}  // namespace qtherm
