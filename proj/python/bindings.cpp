#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qtherm/cli.hpp"
#include "qtherm/composite.hpp"
#include "qtherm/criteria.hpp"
#include "qtherm/equilibrium.hpp"
#include "qtherm/fundamental.hpp"
#include "qtherm/hamiltonians.hpp"
#include "qtherm/shape.hpp"

namespace py = pybind11;
using namespace qtherm;

namespace {

LevelSpectrum levels_of(std::vector<double> energies) { return LevelSpectrum::complete(std::move(energies)); }

py::dict state_dict(const CanonicalState& s) {
  py::dict d;
  d["beta"] = s.beta;
  d["occupations"] = s.occupations;
  d["log_partition"] = s.log_partition;
  d["energy"] = s.energy;
  d["entropy"] = s.entropy;
  d["energy_variance"] = s.energy_variance;
  return d;
}

BoxShape shape_of(const std::array<double, 3>& s) { return BoxShape(s[0], s[1], s[2]); }

TrajectoryMode mode_of(const std::string& mode, double value) {
  if (mode == "constant_temperature") return ConstantTemperature{value};
  if (mode == "constant_energy") return ConstantEnergy{value};
  throw ValidationError("mode must be constant_temperature or constant_energy");
}

}  // namespace

PYBIND11_MODULE(_qtherm, m) {
  m.doc() = "canonical-state thermodynamics of small quantum systems";
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def("eigh", [](const ComplexMatrix& h) {
    auto dec = eigh(HermitianOperator(h));
    return py::make_tuple(dec.eigenvalues, dec.eigenvectors);
  }, py::arg("matrix"));

  m.def("unitary_evolution", [](const ComplexMatrix& h, double t) {
    return unitary_evolution(HermitianOperator(h), t);
  }, py::arg("matrix"), py::arg("t"));

  m.def("canonical_state", [](std::vector<double> levels, double beta) {
    return state_dict(canonical_state(levels_of(std::move(levels)), beta));
  }, py::arg("levels"), py::arg("beta"));

  m.def("beta_for_energy", [](std::vector<double> levels, double energy) {
    return beta_for_energy(levels_of(std::move(levels)), energy);
  }, py::arg("levels"), py::arg("energy"));

  m.def("entropy_at_energy", [](std::vector<double> levels, double energy) {
    auto r = entropy_at_energy(levels_of(std::move(levels)), energy);
    return py::make_tuple(r.beta, r.entropy);
  }, py::arg("levels"), py::arg("energy"));

  m.def("von_neumann_entropy", [](const ComplexMatrix& rho) {
    return entropy(DensityOperator(HermitianOperator(rho)));
  }, py::arg("rho"));

  m.def("box_levels", [](std::array<double, 3> shape, std::optional<std::size_t> max_count,
                         std::optional<double> max_energy) {
    if (max_count.has_value() == max_energy.has_value())
      throw ValidationError("give exactly one of max_count or max_energy");
    BoxCutoff cut = max_count ? BoxCutoff{MaxCount{*max_count}} : BoxCutoff{MaxEnergy{*max_energy}};
    return box_spectrum(shape_of(shape), cut).energies();
  }, py::arg("shape"), py::arg("max_count") = std::nullopt, py::arg("max_energy") = std::nullopt);

  m.def("box_tail_weight", &box_tail_weight, py::arg("volume"), py::arg("cutoff_energy"), py::arg("beta"));

  m.def("fd_well", [](std::vector<double> potential, double step) {
    return fd_well(well_from_potential(std::move(potential), step)).matrix();
  }, py::arg("potential"), py::arg("step"));

  m.def("momentum_operator", [](std::vector<double> potential, double step) {
    return momentum_operator(well_from_potential(std::move(potential), step)).matrix();
  }, py::arg("potential"), py::arg("step"));

  m.def("spin_system", [](std::size_t n, const std::vector<double>& gaps) {
    return spin_system(n, gaps).matrix();
  }, py::arg("num_levels"), py::arg("gaps"));

  m.def("occupation_residual", [](std::vector<double> s, std::vector<double> c, double beta_s, double beta_c,
                            double temperature) {
    auto ls = levels_of(std::move(s)), lc = levels_of(std::move(c));
    auto occ = product_state(canonical_state(ls, beta_s), canonical_state(lc, beta_c));
    return occupation_residual(occ, ls, lc, temperature).max_residual;
  }, py::arg("levels_s"), py::arg("levels_c"), py::arg("beta_s"), py::arg("beta_c"), py::arg("temperature"));

  m.def("flow_direction", [](std::vector<double> a, double beta_a, std::vector<double> b, double beta_b) {
    auto f = flow_direction(EquilibriumSystem::at_beta(levels_of(std::move(a)), beta_a),
                            EquilibriumSystem::at_beta(levels_of(std::move(b)), beta_b));
    py::dict d;
    d["direction"] = std::string(to_string(f.direction));
    d["rule"] = std::string(to_string(f.rule));
    d["entropy_rate"] = f.entropy_rate;
    d["exchange"] = f.exchange;
    return d;
  }, py::arg("levels_a"), py::arg("beta_a"), py::arg("levels_b"), py::arg("beta_b"));

  m.def("box_entropy_at_energy", [](std::array<double, 3> shape, double energy) {
    auto r = box_entropy_at_energy(shape_of(shape), energy);
    return py::make_tuple(r.entropy, r.beta);
  }, py::arg("shape"), py::arg("energy"));

  m.def("entropy_gap", [](std::array<double, 3> a, std::array<double, 3> b, double energy) {
    return entropy_gap(shape_of(a), shape_of(b), energy);
  }, py::arg("shape_a"), py::arg("shape_b"), py::arg("energy"));

  m.def("trajectory_entropies", [](double volume, const std::vector<double>& t, const std::vector<double>& rb,
                                   const std::vector<double>& rc, const std::string& mode, double value) {
    auto trace = trajectory_run(ShapeTrajectory::from_ratios(volume, t, rb, rc, mode_of(mode, value)));
    std::vector<double> s, step;
    for (const auto& row : trace.rows) {
      s.push_back(row.entropy);
      step.push_back(row.realloc_step);
    }
    return py::make_tuple(s, step);
  }, py::arg("volume"), py::arg("t"), py::arg("ratio_b"), py::arg("ratio_c"), py::arg("mode"), py::arg("value"));

  m.def("ideal_gas_entropy", [](double energy, double amount, double volume, double c0) {
    return IdealGas(c0).entropy(energy, amount, volume);
  }, py::arg("energy"), py::arg("amount"), py::arg("volume"), py::arg("c0") = kReducedUnitsC0);

  m.def("spin_fundamental", [](double spins, double gap, double filling) {
    auto p = spin_fundamental(spins, gap, filling);
    return py::make_tuple(p.entropy, p.inverse_temperature);
  }, py::arg("spins"), py::arg("gap"), py::arg("filling"));

  m.def("criteria_report", [](std::uint64_t seed, std::size_t trials, std::vector<std::size_t> dims) {
    CriteriaConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    if (!dims.empty()) cfg.dims = std::move(dims);
    return run_criteria_suite(cfg).to_json();
  }, py::arg("seed") = 42, py::arg("trials") = 20, py::arg("dims") = std::vector<std::size_t>{});

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release nogil;
      code = cli::run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
