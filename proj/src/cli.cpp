#include "padic/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "padic/errors.hpp"
#include "padic/measures.hpp"
#include "padic/parallel.hpp"
#include "padic/radial_oracle.hpp"
#include "padic/spinglass.hpp"

namespace padic::cli {

using io::json;

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "p") c.p = value.get<long>();
    else if (key == "d") c.d = value.get<int>();
    else if (key == "alpha") c.alpha = value.is_string() ? std::stod(value.get<std::string>()) : value.get<double>();
    else if (key == "mode") c.mode = parse_mode(value.get<std::string>());
    else if (key == "L") c.L = value.get<int>();
    else if (key == "l") c.l = value.get<int>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else if (key == "schedule") {
      AnnealSchedule& s = c.schedule;
      s.initial_temperature = value.value("initial_temperature", s.initial_temperature);
      s.decay = value.value("decay", s.decay);
      s.steps_per_temperature = value.value("steps_per_temperature", s.steps_per_temperature);
      s.temperatures = value.value("temperatures", s.temperatures);
      s.recompute_every = value.value("recompute_every", s.recompute_every);
    } else c.extra[key] = value;
  }
  if (c.p < 2) throw ParameterError("p must be a prime >= 2");
  return c;
}

json RunConfig::echo() const {
  json j{{"p", p},
         {"d", d},
         {"alpha", alpha},
         {"mode", to_string(mode)},
         {"L", L},
         {"l", l},
         {"seed", seed},
         {"schedule",
          {{"initial_temperature", schedule.initial_temperature},
           {"decay", schedule.decay},
           {"steps_per_temperature", schedule.steps_per_temperature},
           {"temperatures", schedule.temperatures},
           {"recompute_every", schedule.recompute_every}}}};
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

namespace {

struct Context {
  const RunConfig& cfg;
  KernelParams params;
  json outputs = json::object();
  json checks = json::object();
  std::vector<io::CsvTable> tables;

  void check(const std::string& name, bool ok) { checks[name] = ok; }
  Potential potential() const {
    const json def{{"kind", "confined"}, {"L", cfg.L}, {"V0", "1"}};
    return io::potential_from_json(cfg.extra.value("V", def), cfg.p, cfg.d, cfg.mode);
  }
  // Uniform probability on B_L at the given depth unless the config names one.
  CellDensity density(const std::string& key, int depth) const {
    if (cfg.extra.contains(key)) return io::density_from_json(cfg.extra.at(key), cfg.mode);
    const CellGrid g(cfg.p, cfg.d, cfg.L, depth);
    return CellDensity::constant(g, pow_p(cfg.p, -long(cfg.L) * cfg.d, cfg.mode));
  }
};

std::string s(const Scalar& x) { return x.str(); }

void cmd_constants(Context& c) {
  const int r = c.cfg.extra.value("r", 0);
  c.outputs["gamma_p"] = io::to_json(gamma_p(c.params));
  c.outputs["c_dalpha"] = io::to_json(c_dalpha(c.params));
  c.outputs["capacity_ball"] = json{{"r", r}, {"value", io::to_json(capacity_ball(c.params, r))}};
}

void cmd_lemma1(Context& c) {
  const int T = c.cfg.extra.value("T", 20);
  const auto exps = c.cfg.extra.value("s", std::vector<int>{-1, 0, 1});
  const double m = std::min(c.params.alpha(), c.params.d() - c.params.alpha());
  const double bound = 2.0 * std::pow(static_cast<double>(c.params.p()), -T * m);
  io::CsvTable t{"lemma1", {"s_exponent", "closed", "truncated", "relative_difference"}, {}};
  bool ok = true;
  for (int e : exps) {
    const Norm n{c.params.p(), e};
    const Scalar closed = lemma1_closed(c.params, n);
    const Scalar trunc = lemma1_truncated(c.params, n, T);
    const double rel = relative_difference(closed, trunc);
    ok = ok && rel <= bound && trunc <= closed;
    t.rows.push_back({std::to_string(e), s(closed), s(trunc), io::to_json(Scalar(rel))["value"]});
  }
  c.outputs["T"] = T;
  c.outputs["relative_bound"] = io::to_json(Scalar(bound));
  c.check("truncation_within_bound", ok);
  c.tables.push_back(std::move(t));
}

void cmd_energy(Context& c) {
  const CellDensity mu = c.density("rho", c.cfg.l);
  const Potential V = c.potential();
  const Scalar E = mutual_energy(mu, mu, c.params);
  const Scalar ext = potential_integral(mu, V);
  c.outputs["mass"] = io::to_json(mu.mass());
  c.outputs["energy"] = io::to_json(E);
  c.outputs["potential_integral"] = io::to_json(ext);
  c.outputs["I"] = io::to_json(ext.is_infinite() ? ext : E + ext);
}

void cmd_frostman(Context& c) {
  const CellDensity mu = c.density("rho", c.cfg.l);
  const Potential V = c.potential();
  const CellGrid& g = mu.grid();
  std::vector<PadicPoint> on;
  std::vector<PadicPoint> off;
  for (std::uint64_t i = 0; i < g.size(); ++i) (mu.value(i).sign() > 0 ? on : off).push_back(g.center(i));
  const CellGrid outer(g.p(), g.dimension(), g.outer_scale() + 1, g.depth());
  for (std::uint64_t i = 0; i < outer.size(); ++i) {
    const Norm n = outer.center_norm(i);
    if (n.exponent && *n.exponent > g.outer_scale()) off.push_back(outer.center(i));
  }
  const double tol = c.cfg.extra.value("tolerance", kFrostmanFloatTolerance);
  const FrostmanReport r = frostman_check(mu, V, c.params, on, off, tol);
  c.outputs["report"] = io::to_json(r);
  c.check("frostman", r.passed);
}

CellDensity default_step(const RunConfig& cfg, int l0, int salt) {
  const CellGrid g(cfg.p, cfg.d, cfg.L, l0);
  std::vector<Scalar> v;
  for (std::uint64_t i = 0; i < g.size(); ++i)
    v.push_back(Scalar::fraction(static_cast<long>((i * 7 + static_cast<std::uint64_t>(salt)) % 5) + 1, 2, cfg.mode));
  return CellDensity(g, std::move(v));
}

void cmd_spinglass(Context& c) {
  const int l0 = c.cfg.extra.value("l0", 2);
  const CellDensity rho = c.cfg.extra.contains("rho") ? c.density("rho", l0) : default_step(c.cfg, l0, 0);
  const CellDensity v0 = c.cfg.extra.contains("v0") ? c.density("v0", l0) : default_step(c.cfg, l0, 3);
  const int lr = std::max(rho.grid().depth(), v0.grid().depth());
  std::vector<int> depths = c.cfg.extra.value("depths", std::vector<int>{});
  if (depths.empty())
    for (int l = 0; l <= lr + 2; ++l) depths.push_back(l);
  const auto rows = continuum_limit_study(rho, v0, c.params, depths);
  io::CsvTable t{"limit", {"l", "energy", "gap"}, {}};
  bool exact_beyond = true;
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.l), s(r.energy), s(r.gap)});
    if (r.l >= lr && c.params.mode() == Mode::exact) exact_beyond = exact_beyond && r.gap.is_zero();
  }
  c.outputs["reference"] = io::to_json(continuum_energy(rho, v0, c.params));
  c.outputs["instance"] = io::to_json(
      SpinGlassInstance::from_densities(approximate(rho, lr), approximate(v0, lr)));
  c.check("gap_zero_at_and_beyond_step_depth", exact_beyond);
  c.tables.push_back(std::move(t));
}

void cmd_place(Context& c) {
  const int K = c.cfg.extra.value("K", 1);
  const int M = c.cfg.extra.value("M", c.cfg.l);
  const CellDensity mu = c.density("rho", M);
  const PlacementPlan plan = recovery_place(mu, K);
  const long p = c.cfg.p;
  long expected = 1;
  for (long i = 0; i < 2L * plan.M * c.cfg.d; ++i) expected *= p;

  bool floor_ceil = true;
  io::CsvTable t{"balls", {"ball", "target", "floor", "eps", "count"}, {}};
  for (std::size_t k = 0; k < plan.floors.size(); ++k) {
    const Scalar cnt = Scalar::integer(plan.count(k), mu.mode());
    const Scalar diff = (cnt - plan.targets[k]).abs();
    floor_ceil = floor_ceil && diff < Scalar::one(mu.mode());
    t.rows.push_back({std::to_string(k), s(plan.targets[k]), std::to_string(plan.floors[k]),
                      std::to_string(plan.eps[k]), std::to_string(plan.count(k))});
  }
  std::optional<int> min_exp;
  for (std::size_t i = 0; i < plan.points.size(); ++i)
    for (std::size_t j = i + 1; j < plan.points.size(); ++j) {
      const Norm n = distance(plan.points[i], plan.points[j]);
      const int e = n.exponent ? *n.exponent : std::numeric_limits<int>::min();
      if (!min_exp || e < *min_exp) min_exp = e;
    }
  const int sep = -2 * plan.M - K + 1;

  const CellDensity phi = c.cfg.extra.contains("phi") ? io::density_from_json(c.cfg.extra.at("phi"), c.cfg.mode)
                                                      : CellDensity::constant(mu.grid(), Scalar::one(c.cfg.mode));
  const WeakGap wg = weak_gap(DiscreteMeasure::empirical(plan.points, c.cfg.mode), mu, phi);

  c.outputs["total"] = plan.total();
  c.outputs["min_distance_exponent"] = min_exp ? json(*min_exp) : json(nullptr);
  c.outputs["separation_exponent"] = sep;
  c.outputs["weak_gap"] = io::to_json(wg.gap);
  c.outputs["weak_bound"] = io::to_json(wg.bound);
  if (c.cfg.extra.value("emit_points", false)) c.outputs["points"] = io::to_json(plan.points);
  c.check("total_count", plan.total() == expected);
  c.check("floor_ceil", floor_ceil);
  c.check("min_separation", !min_exp || *min_exp >= sep);
  c.check("weak_gap_within_bound", wg.within);
  c.tables.push_back(std::move(t));
}

void cmd_minimize(Context& c) {
  const Potential V = c.potential();
  long dflt = 1;
  for (int i = 0; i < c.cfg.l * c.cfg.d; ++i) dflt *= c.cfg.p;
  const int n = c.cfg.extra.value("n", static_cast<int>(dflt));
  const int depth = c.cfg.extra.value("lattice_depth", c.cfg.l + 1);
  AnnealSchedule sched = c.cfg.schedule;
  sched.seed = c.cfg.seed;
  const AnnealResult r = anneal_minimize(n, V, c.params, c.cfg.L, depth, sched);
  const Scalar nS = c.params.integer(n);
  c.outputs["n"] = n;
  c.outputs["lattice_depth"] = depth;
  c.outputs["H"] = io::to_json(r.energy);
  c.outputs["H_over_n2"] = io::to_json(r.energy / (nS * nS));
  c.outputs["initial_H"] = io::to_json(r.initial_energy);
  c.outputs["proposals"] = r.proposals;
  c.outputs["accepted"] = r.accepted;
  c.outputs["points"] = io::to_json(r.points);
  c.check("not_worse_than_initial", r.energy <= r.initial_energy);
  if (c.cfg.extra.value("certify", false)) {
    const Scalar opt = lattice_optimum(n, V, c.params, c.cfg.L, depth);
    c.outputs["lattice_optimum"] = io::to_json(opt);
    const bool hit = c.params.mode() == Mode::exact ? r.energy == opt
                                                    : relative_difference(r.energy, opt) <= 1e-12;
    c.check("reached_lattice_optimum", hit);
  }
  io::CsvTable t{"trace", {"step", "temperature", "H", "best_H"}, {}};
  for (const auto& row : r.trace)
    t.rows.push_back({std::to_string(row.step), Scalar(row.temperature).str(), Scalar(row.H).str(),
                      Scalar(row.best_H).str()});
  c.tables.push_back(std::move(t));
}

void cmd_gamma(Context& c, bool stable) {
  const Potential V = c.potential();
  const CellDensity mu0 = c.density("mu0", 0);
  const auto levels = c.cfg.extra.value("levels", std::vector<int>{1, 2, 3, 4});
  AnnealSchedule sched = c.cfg.schedule;
  sched.seed = c.cfg.seed;
  const auto rows = gamma_experiment(V, c.params, mu0, levels, sched);
  io::CsvTable t{"gamma", {"l", "n", "achieved", "reference", "gap", "max_count_deviation"}, {}};
  if (!stable) t.header.push_back("wall_seconds");
  bool decreasing = true;
  bool counts = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    Scalar worst = Scalar::zero(c.cfg.mode);
    for (const auto& dev : r.count_deviation) worst = std::max(worst, dev);
    counts = counts && worst <= Scalar::one(c.cfg.mode);
    if (i > 0) decreasing = decreasing && r.gap.abs() < rows[i - 1].gap.abs();
    std::vector<std::string> row{std::to_string(r.l), std::to_string(r.n), s(r.achieved),
                                 s(r.reference), s(r.gap), s(worst)};
    if (!stable) row.push_back(Scalar(r.wall_seconds).str());
    t.rows.push_back(std::move(row));
  }
  c.check("gaps_strictly_decreasing", decreasing);
  c.check("count_deviation_at_most_one", counts);
  c.tables.push_back(std::move(t));
}

void cmd_suite(Context& c) {
  const int trials = c.cfg.extra.value("trials", 100);
  const int depth = c.cfg.extra.value("max_depth", 3);
  SeededRng rng(c.cfg.seed, 1);
  const PositivityReport rep = positivity_suite(c.params, depth, trials, rng);
  c.outputs["positivity"] = json{{"trials", rep.trials},
                                 {"zero_measures", rep.zero_measures},
                                 {"proportional_pairs", rep.proportional_pairs},
                                 {"violations", rep.violations}};
  c.check("positivity", rep.passed());

  // Spin-glass sum against the continuum cell energy, and refinement invariance.
  const CellDensity rho = default_step(c.cfg, 2, 1);
  const CellDensity v0 = default_step(c.cfg, 2, 4);
  const Scalar ref = continuum_energy(rho, v0, c.params);
  const auto i2 = SpinGlassInstance::from_densities(rho, v0);
  const auto i3 = SpinGlassInstance::from_densities(rho.refined(3), v0.refined(3));
  c.check("spinglass_matches_continuum", discrete_energy(i2, c.params) == ref);
  c.check("refinement_invariance", discrete_energy(i3, c.params) == discrete_energy(i2, c.params));
  c.check("tree_matches_pairwise", mutual_energy(rho, rho, c.params) == mutual_energy_pairwise(rho, rho, c.params));
}

}  // namespace

RunResult run(const std::string& command, const RunConfig& config, bool stable) {
  RunResult result;
  json& rec = result.record;
  rec["command"] = command;
  rec["csv_version"] = kCsvVersion;
  rec["config"] = config.echo();
  const auto start = std::chrono::steady_clock::now();
  try {
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
      throw ParameterError("unknown command '" + command + "'");
    Context c{config, KernelParams(config.p, config.d, config.alpha, config.mode), json::object(), json::object(), {}};
    if (command == "constants") cmd_constants(c);
    else if (command == "lemma1") cmd_lemma1(c);
    else if (command == "energy") cmd_energy(c);
    else if (command == "frostman") cmd_frostman(c);
    else if (command == "spinglass") cmd_spinglass(c);
    else if (command == "place") cmd_place(c);
    else if (command == "minimize") cmd_minimize(c);
    else if (command == "gamma") cmd_gamma(c, stable);
    else cmd_suite(c);
    bool passed = true;
    for (const auto& [k, v] : c.checks.items()) passed = passed && v.get<bool>();
    rec["outputs"] = std::move(c.outputs);
    rec["checks"] = std::move(c.checks);
    rec["passed"] = passed;
    result.tables = std::move(c.tables);
    result.exit_code = passed ? kExitOk : kExitAssertion;
  } catch (const CapacityError& e) {
    rec["error"] = {{"kind", "capacity"}, {"message", e.what()}};
    result.exit_code = kExitCapacity;
  } catch (const Error& e) {
    rec["error"] = {{"kind", "validation"}, {"message", e.what()}};
    result.exit_code = kExitValidation;
  } catch (const json::exception& e) {
    rec["error"] = {{"kind", "validation"}, {"message", e.what()}};
    result.exit_code = kExitValidation;
  } catch (const std::invalid_argument& e) {
    rec["error"] = {{"kind", "validation"}, {"message", e.what()}};
    result.exit_code = kExitValidation;
  }
  if (!stable) {
    rec["timings"] = {
        {"total_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  }
  rec["exit_code"] = result.exit_code;
  return result;
}

int main(int argc, char** argv) {
  CLI::App app{"p-adic Coulomb gas experiments"};
  std::string command;
  std::string config_path;
  std::string mode;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string out_dir;
  bool stable = false;
  app.add_option("command", command, "constants|lemma1|energy|frostman|spinglass|place|minimize|gamma|suite")
      ->required();
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--mode", mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--threads", threads, "worker cap (results do not depend on it)");
  app.add_option("--out", out_dir, "directory for the JSON record and CSV tables");
  app.add_flag("--stable", stable, "omit timings so reruns are byte-identical");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  RunConfig cfg;
  try {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ParameterError("cannot read config " + config_path);
      j = json::parse(in);
    }
    if (!mode.empty()) j["mode"] = mode;
    if (seed) j["seed"] = *seed;
    cfg = RunConfig::from_json(j);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  if (threads > 0) set_max_threads(threads);

  const RunResult r = run(command, cfg, stable);
  if (r.record.contains("error")) std::cerr << "error: " << r.record["error"]["message"].get<std::string>() << '\n';
  const std::string text = r.record.dump(2) + "\n";
  if (out_dir.empty()) {
    std::cout << text;
    return r.exit_code;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream(std::filesystem::path(out_dir) / (command + ".json")) << text;
  for (const auto& t : r.tables) {
    std::ofstream f(std::filesystem::path(out_dir) / (command + "_" + t.name + ".csv"));
    io::write_csv(f, t);
  }
  return r.exit_code;
}

}  // namespace padic::cli
