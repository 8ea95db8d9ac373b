#include "qtherm/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qtherm/composite.hpp"
#include "qtherm/criteria.hpp"
#include "qtherm/equilibrium.hpp"
#include "qtherm/fundamental.hpp"
#include "qtherm/hamiltonians.hpp"
#include "qtherm/io.hpp"

namespace qtherm::cli {

using ordered_json = nlohmann::ordered_json;

namespace {

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  f << content;
  if (!f) throw ValidationError("failed writing " + path.string());
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

ordered_json json_array(const std::vector<double>& values) {
  auto a = ordered_json::array();
  for (double v : values) a.push_back(json_number(v));
  return a;
}

std::vector<double> parse_potentials(const std::vector<std::string>& cells) {
  std::vector<double> out;
  for (const auto& c : cells) {
    if (c == "-inf") {
      out.push_back(-std::numeric_limits<double>::infinity());
      continue;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(c, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != c.size()) throw ValidationError("not a total potential: '" + c + "'");
    out.push_back(v);
  }
  return out;
}

BoxShape parse_box(const std::vector<double>& sides) {
  if (sides.size() != 3) throw ValidationError("box needs three sides b,c,d");
  return BoxShape(sides[0], sides[1], sides[2]);
}

BoxCutoff parse_cutoff(std::optional<double> max_energy, std::optional<std::size_t> max_count) {
  if (max_energy && max_count) throw ValidationError("give either --max-energy or --max-count");
  if (max_count) return MaxCount{*max_count};
  if (max_energy) return MaxEnergy{*max_energy};
  return MaxCount{64};
}

double json_double(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
  std::vector<double> box;
  std::string well;
  double step = 0.0;
  std::optional<double> max_energy;
  std::optional<std::size_t> max_count;
  std::optional<double> beta;
};

int cmd_spectrum(const RunConfig& cfg, const SpectrumArgs& a, std::ostream& out) {
  ordered_json summary;
  std::ostringstream csv;
  if (!a.box.empty() == !a.well.empty()) throw ValidationError("give exactly one of --box or --well");
  if (!a.box.empty()) {
    const auto shape = parse_box(a.box);
    const auto spec = box_spectrum(shape, parse_cutoff(a.max_energy, a.max_count), a.beta);
    csv << "index,nx,ny,nz,energy\n";
    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
      const auto& l = spec.levels[i];
      csv << i << ',' << l.nx << ',' << l.ny << ',' << l.nz << ',' << format_number(l.energy) << '\n';
    }
    summary["kind"] = "box";
    summary["sides"] = json_array({shape.b(), shape.c(), shape.d()});
    summary["volume"] = json_number(shape.volume());
    summary["count"] = spec.levels.size();
    summary["ground_energy"] = json_number(spec.levels.front().energy);
    summary["cutoff_energy"] = json_number(spec.cutoff_energy);
    if (spec.tail_beta) {
      summary["tail_beta"] = json_number(*spec.tail_beta);
      summary["tail_weight_bound"] = json_number(spec.tail_weight_bound);
    }
  } else {
    std::ifstream f(a.well);
    if (!f) throw ValidationError("cannot read " + a.well);
    const auto well = well_from_potential(read_potential_csv(f), a.step);
    const auto dec = eigh(fd_well(well));
    csv << "index,energy\n";
    for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i) {
      csv << i << ',' << format_number(dec.eigenvalues(i)) << '\n';
    }
    summary["kind"] = "well";
    summary["grid_points"] = well.grid_points;
    summary["step"] = json_number(well.step);
    summary["count"] = well.grid_points;
    summary["ground_energy"] = json_number(dec.eigenvalues(0));
  }
  write_file(cfg.output_dir, "spectrum.csv", csv.str());
  const std::string text = summary.dump(2) + "\n";
  write_file(cfg.output_dir, "spectrum.json", text);
  out << text;
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct LevelSource {
  std::vector<double> levels;
  std::vector<double> spin_gaps;
  std::vector<double> box;
  std::optional<std::size_t> max_count;
};

LevelSpectrum level_source(const LevelSource& s) {
  const int given = int(!s.levels.empty()) + int(!s.spin_gaps.empty()) + int(!s.box.empty());
  if (given != 1) throw ValidationError("give exactly one of --levels, --spin-gaps or --box");
  if (!s.levels.empty()) return LevelSpectrum::complete(s.levels);
  if (!s.spin_gaps.empty()) {
    return LevelSpectrum::of_operator(spin_system(s.spin_gaps.size() + 1, s.spin_gaps));
  }
  return LevelSpectrum::of_box(box_spectrum(parse_box(s.box), MaxCount{s.max_count.value_or(4096)}));
}

struct GibbsArgs {
  LevelSource source;
  std::optional<double> beta;
  std::optional<double> energy;
};

int cmd_gibbs(const RunConfig& cfg, const GibbsArgs& a, std::ostream& out) {
  const auto levels = level_source(a.source);
  if (a.beta.has_value() == a.energy.has_value()) throw ValidationError("give exactly one of --beta or --energy");
  const double beta = a.beta ? *a.beta : beta_for_energy(levels, *a.energy);
  const auto st = canonical_state(levels, beta);
  ordered_json doc;
  doc["k"] = json_number(cfg.k);
  doc["beta"] = json_number(st.beta);
  doc["temperature"] = json_number(st.beta == 0.0 ? std::numeric_limits<double>::infinity()
                                                  : 1.0 / (cfg.k * st.beta));
  doc["energy"] = json_number(st.energy);
  doc["entropy"] = json_number(cfg.k * st.entropy);
  doc["log_partition"] = json_number(st.log_partition);
  doc["energy_variance"] = json_number(st.energy_variance);
  doc["levels"] = json_array(std::vector<double>(levels.energies().begin(), levels.energies().end()));
  doc["occupations"] = json_array(st.occupations);
  const std::string text = doc.dump(2) + "\n";
  if (!cfg.output_dir.empty()) write_file(cfg.output_dir, "gibbs.json", text);
  out << text;
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CompositeArgs {
  std::vector<double> levels_a, levels_b;
  std::optional<double> beta, beta_a, beta_b;
  std::optional<double> temperature;
  std::vector<std::string> mu_a, mu_b;
};

int cmd_composite(const RunConfig& cfg, const CompositeArgs& a, std::ostream& out) {
  if (a.levels_a.empty() || a.levels_b.empty()) throw ValidationError("--levels-a and --levels-b are required");
  const auto la = LevelSpectrum::complete(a.levels_a), lb = LevelSpectrum::complete(a.levels_b);
  const double ba = a.beta_a ? *a.beta_a : a.beta.value_or(1.0);
  const double bb = a.beta_b ? *a.beta_b : a.beta.value_or(1.0);
  const auto sa = EquilibriumSystem::at_beta(la, ba), sb = EquilibriumSystem::at_beta(lb, bb);
  const auto occ = product_state(sa.state, sb.state);

  ordered_json doc;
  doc["k"] = json_number(cfg.k);
  doc["beta_a"] = json_number(ba);
  doc["beta_b"] = json_number(bb);

  std::vector<double> joint;
  for (const auto& p : compose_levels(la, lb).pairs) joint.push_back(p.energy);
  std::sort(joint.begin(), joint.end());
  doc["composite_spectrum"] = json_array(joint);
  if (la.size() * lb.size() <= kDenseDimensionCap) {
    std::vector<double> ea(la.energies().begin(), la.energies().end());
    std::vector<double> eb(lb.energies().begin(), lb.energies().end());
    const auto h = compose_hamiltonians(HermitianOperator::diagonal(Eigen::Map<RealVector>(ea.data(), ea.size())),
                                        HermitianOperator::diagonal(Eigen::Map<RealVector>(eb.data(), eb.size())));
    const auto dec = eigh(h);
    double worst = 0.0;
    for (std::size_t i = 0; i < joint.size(); ++i) {
      worst = std::max(worst, std::abs(dec.eigenvalues(static_cast<Eigen::Index>(i)) - joint[i]));
    }
    doc["dense_spectrum_deviation"] = json_number(worst);
  }
  const double s_joint = occ.entropy();
  doc["entropy_a"] = json_number(cfg.k * sa.state.entropy);
  doc["entropy_b"] = json_number(cfg.k * sb.state.entropy);
  doc["entropy_composite"] = json_number(cfg.k * s_joint);
  doc["additivity_error"] = json_number(cfg.k * std::abs(s_joint - sa.state.entropy - sb.state.entropy));

  const double temperature = a.temperature ? *a.temperature : 1.0 / (cfg.k * ba);
  const auto res = occupation_residual(occ, la, lb, temperature, cfg.k, cfg.seed);
  ordered_json eq;
  eq["temperature"] = json_number(temperature);
  eq["max_residual"] = json_number(res.max_residual);
  eq["pairs_checked"] = res.pairs_checked;
  eq["sampled"] = res.sampled;
  doc["occupation_relation"] = eq;

  const auto flow = flow_direction(sa, sb);
  ordered_json fl;
  fl["direction"] = std::string(to_string(flow.direction));
  fl["rule"] = std::string(to_string(flow.rule));
  fl["entropy_rate"] = json_number(flow.entropy_rate);
  fl["exchange"] = json_number(flow.exchange);
  doc["flow"] = fl;

  if (!a.mu_a.empty() || !a.mu_b.empty()) {
    const PhaseProperties pa{ba, 0.0, parse_potentials(a.mu_a)};
    const PhaseProperties pb{bb, 0.0, parse_potentials(a.mu_b)};
    const auto cls = classify_equilibrium(pa, pb);
    ordered_json eqm;
    eqm["kind"] = std::string(to_string(cls.kind));
    eqm["energy_flow"] = std::string(to_string(cls.energy_flow));
    auto flows = ordered_json::array();
    for (auto f : cls.constituent_flow) flows.push_back(std::string(to_string(f)));
    eqm["constituent_flow"] = flows;
    doc["mutual_equilibrium"] = eqm;
  }

  const std::string text = doc.dump(2) + "\n";
  if (!cfg.output_dir.empty()) write_file(cfg.output_dir, "composite.json", text);
  out << text;
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TraceArgs {
  std::string config;
  std::size_t retained = 64;
  bool svg = false;
  double tail_target = 1e-10;
};

std::string trace_csv(const ReallocationTrace& trace) {
  std::ostringstream csv;
  csv << "t,b,c,d,beta,energy,entropy,realloc_step";
  for (std::size_t i = 0; i < trace.retained; ++i) csv << ",p_" << i;
  csv << '\n';
  for (const auto& r : trace.rows) {
    std::vector<double> row = {r.t, r.shape.b(), r.shape.c(), r.shape.d(), r.beta, r.energy,
                               r.entropy, r.realloc_step};
    for (std::size_t i = 0; i < trace.retained; ++i) {
      row.push_back(i < r.occupations.size() ? r.occupations[i] : 0.0);
    }
    csv << csv_row(row) << '\n';
  }
  return csv.str();
}

int cmd_shape_trace(const RunConfig& cfg, const TraceArgs& a, std::ostream& out) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(a.config));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("trajectory config is not valid JSON: ") + e.what());
  }
  const auto traj = parse_trajectory(doc);
  std::size_t retained = a.retained;
  if (doc.contains("retained") && doc["retained"].is_number_unsigned()) retained = doc["retained"].get<std::size_t>();
  CutoffPolicy policy;
  policy.tail_target = a.tail_target;
  const auto trace = trajectory_run(traj, policy, retained);
  write_file(cfg.output_dir, "trace.csv", trace_csv(trace));
  if (a.svg) {
    SvgSeries s{"entropy S(t)", {}, {}}, r{"reallocation step (total variation)", {}, {}};
    for (const auto& row : trace.rows) {
      s.x.push_back(row.t);
      s.y.push_back(cfg.k * row.entropy);
      r.x.push_back(row.t);
      r.y.push_back(row.realloc_step);
    }
    write_file(cfg.output_dir, "trace.svg", svg_line_chart("constant-volume shape trajectory", {s, r}));
  }
  double total = 0.0, worst = 0.0;
  for (const auto& row : trace.rows) {
    total += row.realloc_step;
    worst = std::max(worst, row.tail_bound);
  }
  ordered_json summary;
  summary["samples"] = trace.rows.size();
  summary["retained"] = retained;
  summary["volume"] = json_number(traj.volume());
  summary["total_reallocation"] = json_number(total);
  summary["max_tail_bound"] = json_number(worst);
  out << summary.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GapArgs {
  std::vector<double> shape_a{1.0, 1.0, 1.0};
  std::vector<double> shape_b{2.0, 1.0, 0.5};
  std::vector<double> energies;
  double e_min = 10.0, e_max = 1000.0;
  std::size_t points = 9;
  bool svg = false;
};

int cmd_shape_gap(const RunConfig& cfg, const GapArgs& a, std::ostream& out) {
  const auto sa = parse_box(a.shape_a), sb = parse_box(a.shape_b);
  std::vector<double> grid = a.energies;
  if (grid.empty()) {
    if (!(a.e_min > 0.0 && a.e_max >= a.e_min) || a.points < 1) throw ValidationError("bad energy grid");
    for (std::size_t i = 0; i < a.points; ++i) {
      const double f = a.points == 1 ? 0.0 : double(i) / double(a.points - 1);
      grid.push_back(a.e_min * std::pow(a.e_max / a.e_min, f));
    }
  }
  const auto rows = semiclassical_scan(sa, sb, grid);
  std::ostringstream csv;
  csv << "energy,entropy_a,entropy_b,gap,relative_gap\n";
  SvgSeries rel{"relative entropy gap", {}, {}};
  for (const auto& r : rows) {
    csv << csv_row({r.energy, cfg.k * r.entropy_a, cfg.k * r.entropy_b, cfg.k * r.gap, r.relative_gap}) << '\n';
    rel.x.push_back(std::log10(r.energy));
    rel.y.push_back(r.relative_gap);
  }
  write_file(cfg.output_dir, "gap.csv", csv.str());
  if (a.svg) write_file(cfg.output_dir, "gap.svg", svg_line_chart("relative gap vs log10 E", {rel}));
  out << csv.str();
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CriteriaArgs {
  std::size_t trials = 20;
  std::vector<std::size_t> dims;
};

int cmd_criteria(const RunConfig& cfg, const CriteriaArgs& a, std::ostream& out) {
  CriteriaConfig c;
  c.seed = cfg.seed;
  c.trials = a.trials;
  if (!a.dims.empty()) c.dims = a.dims;
  const auto report = run_criteria_suite(c);
  write_file(cfg.output_dir, "criteria.json", report.to_json());
  const std::string text = report.to_text();
  write_file(cfg.output_dir, "criteria.txt", text);
  out << text;
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct FundamentalArgs {
  double amount = 1.0, volume = 1.0;
  double e_min = 0.5, e_max = 50.0;
  std::size_t points = 25;
  std::size_t halvings = 100;
  double temperature = 1.0;
  std::optional<double> c0;
};

int cmd_fundamental(const RunConfig& cfg, const FundamentalArgs& a, std::ostream& out) {
  const IdealGas gas(a.c0.value_or(kReducedUnitsC0));
  if (a.points < 2) throw ValidationError("--points must be at least 2");
  std::ostringstream csv;
  csv << "energy,entropy,inverse_temperature,temperature,pressure,total_potential\n";
  for (std::size_t i = 0; i < a.points; ++i) {
    const double e = a.e_min + (a.e_max - a.e_min) * double(i) / double(a.points - 1);
    csv << csv_row({e, cfg.k * gas.entropy(e, a.amount, a.volume), gas.inverse_temperature(e, a.amount) / cfg.k,
                    cfg.k * gas.temperature(e, a.amount), gas.pressure(e, a.amount, a.volume)})
        << ',' << gas.total_potential(e, a.amount, a.volume).to_string() << '\n';
  }
  write_file(cfg.output_dir, "fundamental.csv", csv.str());

  std::ostringstream mu;
  mu << "halvings,amount,total_potential\n";
  double n = a.amount;
  for (std::size_t h = 0; h <= a.halvings; ++h, n *= 0.5) {
    mu << h << ',' << format_number(n) << ','
       << gas.total_potential_at_temperature(a.temperature, n, a.volume).to_string() << '\n';
  }
  mu << "absent,0," << gas.total_potential_at_temperature(a.temperature, 0.0, a.volume).to_string() << '\n';
  write_file(cfg.output_dir, "potential.csv", mu.str());

  ordered_json summary;
  summary["relation"] = "ideal_gas";
  summary["units"] = "m = h = k = 1";
  summary["c0"] = json_number(gas.c0());
  summary["amount"] = json_number(a.amount);
  summary["volume"] = json_number(a.volume);
  summary["sweep_temperature"] = json_number(a.temperature);
  summary["halvings"] = a.halvings;
  const std::string text = summary.dump(2) + "\n";
  write_file(cfg.output_dir, "fundamental.json", text);
  out << text;
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SpinArgs {
  double spins = 1.0, gap = 1.0;
  std::size_t points = 99;
};

int cmd_spin(const RunConfig& cfg, const SpinArgs& a, std::ostream& out) {
  if (a.points < 1) throw ValidationError("--points must be at least 1");
  std::ostringstream csv;
  csv << "filling,energy,entropy,inverse_temperature\n";
  csv << csv_row({0.0, 0.0, 0.0, std::numeric_limits<double>::infinity()}) << '\n';
  for (std::size_t i = 1; i <= a.points; ++i) {
    const double f = double(i) / double(a.points + 1);
    const auto p = spin_fundamental(a.spins, a.gap, f);
    csv << csv_row({f, f * a.spins * a.gap, cfg.k * p.entropy, p.inverse_temperature / cfg.k}) << '\n';
  }
  csv << csv_row({1.0, a.spins * a.gap, 0.0, -std::numeric_limits<double>::infinity()}) << '\n';
  write_file(cfg.output_dir, "spin.csv", csv.str());
  out << csv.str();
  return kExitOk;
}

std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("QTHERM_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(s, &used);
      if (used == std::string(s).size()) return v;
    } catch (const std::exception&) {
    }
    throw ValidationError(std::string("QTHERM_SEED is not an unsigned integer: '") + s + "'");
  }
  return 42;
}

}  // namespace

ShapeTrajectory parse_trajectory(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("trajectory config must be a JSON object");
  const double volume = json_double(doc, "volume");
  if (!doc.contains("mode") || !doc["mode"].is_string()) throw ValidationError("missing string field 'mode'");
  const std::string mode_name = doc["mode"].get<std::string>();
  TrajectoryMode mode;
  if (mode_name == "constant_temperature") {
    mode = ConstantTemperature{json_double(doc, "T")};
  } else if (mode_name == "constant_energy") {
    mode = ConstantEnergy{json_double(doc, "E")};
  } else {
    throw ValidationError("mode must be constant_temperature or constant_energy, got '" + mode_name + "'");
  }
  if (!doc.contains("samples") || !doc["samples"].is_array() || doc["samples"].empty()) {
    throw ValidationError("'samples' must be a nonempty array of {t, r_b, r_c}");
  }
  std::vector<double> t, rb, rc;
  for (const auto& s : doc["samples"]) {
    if (!s.is_object()) throw ValidationError("each sample must be an object {t, r_b, r_c}");
    t.push_back(json_double(s, "t"));
    rb.push_back(json_double(s, "r_b"));
    rc.push_back(json_double(s, "r_c"));
  }
  return ShapeTrajectory::from_ratios(volume, t, rb, rc, mode);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qtherm: desk-scale quantum thermodynamics laboratory"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::optional<std::uint64_t> seed;

  auto common = [&](CLI::App* sub, const std::string& default_out) {
    cfg.output_dir = default_out;
    sub->add_option("--out", cfg.output_dir, "output directory");
    sub->add_option("--seed", seed, "random seed (falls back to QTHERM_SEED, then 42)");
    sub->add_option("--k", cfg.k, "Boltzmann constant used to scale entropies and temperatures")
        ->check(CLI::PositiveNumber);
  };

  SpectrumArgs spectrum;
  auto* sp = app.add_subcommand("spectrum", "box or finite-difference well spectrum");
  sp->add_option("--box", spectrum.box, "box sides b,c,d")->delimiter(',');
  sp->add_option("--well", spectrum.well, "potential CSV, one value per line");
  sp->add_option("--step", spectrum.step, "grid step for --well");
  sp->add_option("--max-energy", spectrum.max_energy);
  sp->add_option("--max-count", spectrum.max_count);
  sp->add_option("--beta", spectrum.beta, "inverse temperature for the tail bound");

  GibbsArgs gibbs;
  auto* gb = app.add_subcommand("gibbs", "canonical state and entropy");
  gb->add_option("--levels", gibbs.source.levels, "level energies")->delimiter(',');
  gb->add_option("--spin-gaps", gibbs.source.spin_gaps, "spin ladder gaps")->delimiter(',');
  gb->add_option("--box", gibbs.source.box, "box sides b,c,d")->delimiter(',');
  gb->add_option("--max-count", gibbs.source.max_count, "box levels kept");
  gb->add_option("--beta", gibbs.beta);
  gb->add_option("--energy", gibbs.energy);

  CompositeArgs comp;
  auto* cp = app.add_subcommand("composite", "two-system composition checks");
  cp->add_option("--levels-a", comp.levels_a)->delimiter(',');
  cp->add_option("--levels-b", comp.levels_b)->delimiter(',');
  cp->add_option("--beta", comp.beta, "common inverse temperature");
  cp->add_option("--beta-a", comp.beta_a);
  cp->add_option("--beta-b", comp.beta_b);
  cp->add_option("--temperature", comp.temperature, "temperature used in the occupation relation");
  cp->add_option("--mu-a", comp.mu_a, "total potentials of A (\"-inf\" for absent)")->delimiter(',');
  cp->add_option("--mu-b", comp.mu_b, "total potentials of B")->delimiter(',');

  TraceArgs trace;
  auto* tr = app.add_subcommand("shape-trace", "quasistatic constant-volume shape trajectory");
  tr->add_option("--config", trace.config, "trajectory JSON")->required();
  tr->add_option("--retained", trace.retained, "levels written per row");
  tr->add_option("--tail-target", trace.tail_target);
  tr->add_flag("--svg", trace.svg, "also write trace.svg");

  GapArgs gap;
  auto* sg = app.add_subcommand("shape-gap", "entropy gap between equal-volume shapes");
  sg->add_option("--shape-a", gap.shape_a)->delimiter(',');
  sg->add_option("--shape-b", gap.shape_b)->delimiter(',');
  sg->add_option("--energies", gap.energies)->delimiter(',');
  sg->add_option("--e-min", gap.e_min);
  sg->add_option("--e-max", gap.e_max);
  sg->add_option("--points", gap.points);
  sg->add_flag("--svg", gap.svg);

  CriteriaArgs crit;
  auto* cr = app.add_subcommand("criteria", "nine-criteria entropy property suite");
  cr->add_option("--trials", crit.trials);
  cr->add_option("--dims", crit.dims)->delimiter(',');

  FundamentalArgs fund;
  auto* fd = app.add_subcommand("fundamental", "classical ideal-gas fundamental relation curves");
  fd->add_option("--amount", fund.amount);
  fd->add_option("--volume", fund.volume);
  fd->add_option("--e-min", fund.e_min);
  fd->add_option("--e-max", fund.e_max);
  fd->add_option("--points", fund.points);
  fd->add_option("--halvings", fund.halvings);
  fd->add_option("--temperature", fund.temperature, "temperature of the amount sweep");
  fd->add_option("--c0", fund.c0);

  SpinArgs spin;
  auto* sn = app.add_subcommand("spin", "two-level spin fundamental relation");
  sn->add_option("--spins", spin.spins);
  sn->add_option("--gap", spin.gap);
  sn->add_option("--points", spin.points);

  for (auto* sub : {sp, tr, sg, cr, fd, sn}) common(sub, ".");
  for (auto* sub : {gb, cp}) common(sub, "");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    cfg.seed = seed ? *seed : seed_from_env();
    auto* sub = app.get_subcommands().front();
    cfg.subcommand = sub->get_name();
    // The common options were bound once per subcommand; re-read the active one.
    if (sub->count("--out") == 0) cfg.output_dir = (sub == gb || sub == cp) ? "" : ".";
    if (sub == sp) return cmd_spectrum(cfg, spectrum, out);
    if (sub == gb) return cmd_gibbs(cfg, gibbs, out);
    if (sub == cp) return cmd_composite(cfg, comp, out);
    if (sub == tr) return cmd_shape_trace(cfg, trace, out);
    if (sub == sg) return cmd_shape_gap(cfg, gap, out);
    if (sub == cr) return cmd_criteria(cfg, crit, out);
    if (sub == fd) return cmd_fundamental(cfg, fund, out);
    if (sub == sn) return cmd_spin(cfg, spin, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInvalid;
}

}  // namespace qtherm::cli
