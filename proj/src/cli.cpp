#include "ring/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

namespace ring::cli {
namespace {

const std::set<std::string> kParamKeys = {"system", "omega", "Z", "Q"};
const std::vector<std::string> kStateKeys = {"x", "y", "z", "px", "py", "pz"};
const std::vector<std::string> kOscillatorConstants = {"E1", "E2", "m", "t0", "t0p", "phi0"};
const std::vector<std::string> kCoulombConstants = {"E", "K", "m", "t0", "beta0", "phi0"};

std::set<std::string> with(std::set<std::string> base, const std::vector<std::string>& extra) {
  base.insert(extra.begin(), extra.end());
  return base;
}

bool any_of_keys(const KeyValueConfig& cfg, const std::vector<std::string>& keys) {
  return std::any_of(keys.begin(), keys.end(), [&](const auto& k) { return cfg.has(k); });
}

std::string extension(Format f) { return f == Format::json ? ".json" : ".csv"; }

nlohmann::ordered_json params_json(const SystemParams& params) {
  nlohmann::ordered_json j;
  std::visit(
      [&](const auto& p) {
        j["system"] = to_string(kind_of(p));
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, OscillatorParams>)
          j["omega"] = p.omega;
        else
          j["Z"] = p.charge;
        j["Q"] = p.ring;
      },
      params);
  return j;
}

nlohmann::ordered_json orbit_json(const AnyOrbit& orbit) {
  nlohmann::ordered_json j;
  if (const auto* o = std::get_if<OscillatorOrbit>(&orbit)) {
    j = {{"E1", o->E1}, {"E2", o->E2}, {"m", o->m}, {"M_abs", o->M_abs}, {"rho1", o->rho1},
         {"rho2", o->rho2}, {"z0", o->z0}, {"t0", o->t0}, {"t0p", o->t0p}, {"phi0", o->phi0}};
  } else {
    const auto& c = std::get<CoulombOrbit>(orbit);
    j = {{"E", c.E}, {"K", c.K}, {"m", c.m}, {"M_abs", c.M_abs}, {"r1", c.r1}, {"r2", c.r2},
         {"theta0", c.theta0}, {"t0", c.t0}, {"beta0", c.beta0}, {"phi0", c.phi0}};
  }
  return j;
}

nlohmann::ordered_json verdict_json(const PeriodicityVerdict& v) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(v.kind);
  j["k1"] = v.k1;
  j["k2"] = v.k2;
  j["period"] = v.period;
  j["ratio"] = std::isfinite(v.ratio) ? nlohmann::ordered_json(v.ratio) : nlohmann::ordered_json("inf");
  j["error"] = v.error;
  j["planar"] = v.planar;
  j["m_sign"] = v.m_sign;
  return j;
}

nlohmann::ordered_json drift_json(const DriftReport& d) {
  nlohmann::ordered_json j;
  for (int i = 0; i < 4; ++i) j[d.names[i]] = d.max_relative[i];
  return j;
}

template <typename Fn>
decltype(auto) with_orbit(const AnyOrbit& orbit, Fn&& fn) {
  return std::visit(std::forward<Fn>(fn), orbit);
}

AnyOrbit orbit_for(const SystemParams& params, const PhasePointd& pt, double t) {
  return std::visit([&](const auto& p) -> AnyOrbit { return orbit_from_state(p, pt, t); }, params);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void write_trajectory(const std::filesystem::path& base, const Trajectory& traj, Format format,
                      std::size_t stride) {
  std::ofstream out(base.string() + extension(format));
  if (!out) throw ConfigError("cannot write " + base.string() + extension(format));
  if (format == Format::json)
    out << trajectory_to_json(traj, stride).dump() << '\n';
  else
    write_trajectory_csv(out, traj, stride);
}

void flatten(const nlohmann::ordered_json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  out += prefix + ",";
  if (j.is_number_float())
    out += format_double(j.get<double>());
  else if (j.is_string())
    out += j.get<std::string>();
  else
    out += j.dump();
  out += '\n';
}

}  // namespace

unsigned thread_count() {
  if (const char* env = std::getenv("RING_DYNAMICS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

SystemParams load_params(const KeyValueConfig& cfg) {
  const std::string system = cfg.text("system");
  const double ring = cfg.number("Q", 0.0);
  try {
    if (system == "oscillator") {
      if (cfg.has("Z")) throw ConfigError("not valid for the oscillator system", 0, "Z");
      return OscillatorParams(cfg.number("omega"), ring);
    }
    if (system == "coulomb") {
      if (cfg.has("omega")) throw ConfigError("not valid for the coulomb system", 0, "omega");
      return CoulombParams(cfg.number("Z"), ring);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("expected 'oscillator' or 'coulomb', got '" + system + "'", 0, "system");
}

ScenarioConfig load_scenario(const KeyValueConfig& cfg) {
  ScenarioConfig sc;
  sc.params = load_params(cfg);
  const bool oscillator = kind_of(sc.params) == SystemKind::oscillator;
  const auto& constants = oscillator ? kOscillatorConstants : kCoulombConstants;
  const auto& foreign = oscillator ? kCoulombConstants : kOscillatorConstants;

  auto allowed = with(with(kParamKeys, kStateKeys), constants);
  allowed.insert({"periods", "method", "steps_per_period", "step", "axis_epsilon", "max_steps",
                  "output_stride", "tol", "max_denominator", "bounds_slack"});
  for (const auto& k : foreign)
    if (cfg.has(k) && !allowed.count(k))
      throw ConfigError("not valid for the " + to_string(kind_of(sc.params)) + " system", 0, k);
  cfg.reject_unknown(allowed);

  const bool has_state = any_of_keys(cfg, kStateKeys);
  const bool has_constants = any_of_keys(cfg, constants);
  if (has_state == has_constants)
    throw ConfigError(has_state ? "give either a phase point (x..pz) or orbit constants, not both"
                                : "missing initial condition: phase point (x..pz) or orbit constants");

  try {
    if (has_state) {
      for (const auto& k : kStateKeys)
        if (!cfg.has(k)) throw ConfigError("initial phase point is incomplete", 0, k);
      const PhasePointd pt(Vec3d(cfg.number("x"), cfg.number("y"), cfg.number("z")),
                           Vec3d(cfg.number("px"), cfg.number("py"), cfg.number("pz")));
      sc.orbit = orbit_for(sc.params, pt, 0.0);
      sc.start = pt;
    } else if (oscillator) {
      sc.orbit = make_orbit(std::get<OscillatorParams>(sc.params), cfg.number("E1"),
                            cfg.number("E2"), cfg.number("m"), cfg.number("t0", 0.0),
                            cfg.number("t0p", 0.0), cfg.number("phi0", 0.0));
      sc.start = state_of_t(std::get<OscillatorOrbit>(sc.orbit), 0.0);
    } else {
      sc.orbit = make_orbit(std::get<CoulombParams>(sc.params), cfg.number("E"), cfg.number("K"),
                            cfg.number("m"), cfg.number("t0", 0.0), cfg.number("beta0", 0.0),
                            cfg.number("phi0", 0.0));
      sc.start = state_of_t(std::get<CoulombOrbit>(sc.orbit), 0.0);
    }
  } catch (const UnboundedOrbitError& e) {
    throw ConfigError(std::string("refusing unbounded motion: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid initial condition: ") + e.what());
  }

  sc.periods = cfg.number("periods", 1.0);
  if (!(sc.periods > 0)) throw ConfigError("must be positive", 0, "periods");
  try {
    sc.integrator.method = parse_method(cfg.text("method", "rk4"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0, "method");
  }
  if (cfg.has("step") && cfg.has("steps_per_period"))
    throw ConfigError("give either 'step' or 'steps_per_period'", 0, "step");
  const double base = with_orbit(sc.orbit, [](const auto& o) { return base_period(o); });
  sc.integrator.step = cfg.has("step") ? cfg.number("step")
                                       : base / cfg.number("steps_per_period", 10000.0);
  sc.integrator.axis_epsilon = cfg.number("axis_epsilon", 1e-8);
  sc.integrator.max_steps = cfg.integer("max_steps", 50'000'000);
  try {
    sc.integrator.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const long stride = cfg.integer("output_stride", 1);
  if (stride < 1) throw ConfigError("must be >= 1", 0, "output_stride");
  sc.output_stride = static_cast<std::size_t>(stride);
  sc.tol = cfg.number("tol", kDefaultRatioTolerance);
  sc.max_denominator = cfg.integer("max_denominator", kDefaultMaxDenominator);
  if (sc.max_denominator < 1) throw ConfigError("must be >= 1", 0, "max_denominator");
  sc.bounds_slack = cfg.number("bounds_slack", 1e-6);
  return sc;
}

SimulationResult simulate(const ScenarioConfig& sc) {
  const double base = with_orbit(sc.orbit, [](const auto& o) { return base_period(o); });
  const double duration = sc.periods * base;
  Trajectory numeric = integrate(sc.params, sc.start, 0.0, duration, sc.integrator);

  Trajectory analytic(sc.params);
  analytic.samples.reserve(numeric.size());
  double max_dev = 0;
  const OrbitScale scale = with_orbit(sc.orbit, [](const auto& o) { return orbit_scale(o); });
  with_orbit(sc.orbit, [&](const auto& o) {
    for (const auto& s : numeric.samples) {
      analytic.append(s.t, state_of_t(o, s.t));
      max_dev = std::max(max_dev, phase_distance(analytic.back().state, s.state, scale));
    }
  });

  const PeriodicityVerdict verdict =
      classify_state(sc.params, sc.start, sc.tol, sc.max_denominator);
  const double closure_T = verdict.kind == OrbitKind::periodic ? verdict.period : base;

  nlohmann::ordered_json summary;
  summary["params"] = params_json(sc.params);
  summary["orbit"] = orbit_json(sc.orbit);
  summary["base_period"] = base;
  summary["verdict"] = verdict_json(verdict);
  summary["integration"] = {{"method", to_string(sc.integrator.method)},
                            {"step", sc.integrator.step},
                            {"duration", duration},
                            {"samples", numeric.size()}};
  summary["drift"] = {{"numeric", drift_json(drift_report(numeric))},
                      {"analytic", drift_json(drift_report(analytic))}};
  const auto bounds = [&](const Trajectory& t) {
    return with_orbit(sc.orbit, [&](const auto& o) { return bounds_audit(t, o, sc.bounds_slack).size(); });
  };
  summary["bounds"] = {{"slack", sc.bounds_slack},
                       {"numeric_violations", bounds(numeric)},
                       {"analytic_violations", bounds(analytic)}};
  summary["max_deviation"] = max_dev;
  nlohmann::ordered_json closure;
  closure["period"] = closure_T;
  closure["analytic"] = with_orbit(sc.orbit, [&](const auto& o) { return closure_distance(o, closure_T, 0.0); });
  if (closure_T <= duration * (1 + 1e-12))
    closure["numeric"] = closure_distance(numeric, std::min(closure_T, duration), 0.0, scale);
  else
    closure["numeric"] = nullptr;
  summary["closure"] = closure;
  return {std::move(analytic), std::move(numeric), std::move(summary)};
}

VerifyConfig load_verify(const KeyValueConfig& cfg) {
  cfg.reject_unknown(with(kParamKeys, {"count", "a", "tau", "tolerance", "gradient_tolerance"}));
  VerifyConfig vc;
  vc.params = load_params(cfg);
  const long count = cfg.integer("count", 100);
  if (count < 1) throw ConfigError("must be >= 1", 0, "count");
  vc.count = static_cast<std::size_t>(count);
  vc.options.a = cfg.number("a", 1.0);
  vc.options.tau = cfg.number("tau", 0.5);
  if (!(vc.options.tau > 0 && vc.options.tau < 1)) throw ConfigError("must lie in (0, 1)", 0, "tau");
  vc.involution_tol = cfg.number("tolerance", 1e-8);
  vc.gradient_tol = cfg.number("gradient_tolerance", 1e-6);
  return vc;
}

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

std::vector<PhasePointd> random_points(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-1.5, 1.5), mom(-1.0, 1.0);
  std::vector<PhasePointd> pts;
  pts.reserve(count);
  while (pts.size() < count) {
    const Vec3d q(pos(rng), pos(rng), pos(rng));
    const Vec3d p(mom(rng), mom(rng), mom(rng));
    if (std::hypot(q.x(), q.y()) < 0.3) continue;
    pts.emplace_back(q, p);
  }
  return pts;
}

VerifyReport verify(const VerifyConfig& vc) {
  VerifyReport report;
  report.points = random_points(vc.seed, vc.count);
  std::vector<std::vector<VerifyCheck>> per_point(vc.count);

  parallel_for(vc.count, [&](std::size_t i) {
    const PhasePointd& pt = report.points[i];
    auto& out = per_point[i];
    std::visit(
        [&](const auto& p) {
          for (const InvolutionSet set : involution_sets(p)) {
            const auto res = involution_residuals(set, p, pt, vc.options);
            const double worst = std::max({std::abs(res[0]), std::abs(res[1]), std::abs(res[2])});
            out.push_back({i, "involution " + to_string(set), worst, vc.involution_tol,
                           worst < vc.involution_tol});
          }
          const auto rank = independence_rank(p, pt);
          out.push_back({i, "rank", double(rank.rank), 4.0, rank.rank == 4});

          const auto graded = graded_integrals(p, pt);
          const auto names = kind_of(p) == SystemKind::oscillator
                                 ? std::array<const char*, 4>{"H", "A1", "A2", "A3"}
                                 : std::array<const char*, 4>{"H", "B1", "B2", "B3"};
          for (int k = 0; k < 4; ++k) {
            const PhaseFunction<double> f = [&, k](const PhasePointd& x) {
              return integral_values(p, x)[k];
            };
            const Phase6d fd = numerical_gradient(f, pt);
            const double scale = std::max(1.0, graded[k].grad.cwiseAbs().maxCoeff());
            const double err = (fd - graded[k].grad).cwiseAbs().maxCoeff() / scale;
            out.push_back({i, std::string("gradient ") + names[k], err, vc.gradient_tol,
                           err <= vc.gradient_tol});
          }
        },
        vc.params);
  });
  for (auto& v : per_point) report.checks.insert(report.checks.end(), v.begin(), v.end());
  return report;
}

SweepConfig load_sweep(const KeyValueConfig& cfg) {
  cfg.reject_unknown(with(kParamKeys, {"E", "m_values", "Q_values", "tol", "max_denominator"}));
  if (cfg.has("Q")) throw ConfigError("use Q_values for sweeps", 0, "Q");
  SweepConfig sc;
  const std::string system = cfg.text("system");
  if (system == "oscillator") {
    sc.system = SystemKind::oscillator;
    sc.strength = cfg.number("omega");
    if (cfg.has("E")) throw ConfigError("not valid for the oscillator system", 0, "E");
  } else if (system == "coulomb") {
    sc.system = SystemKind::coulomb;
    sc.strength = cfg.number("Z");
    sc.energy = cfg.number("E", -0.5);
    if (!(sc.energy < 0)) throw ConfigError("refusing unbounded motion: E must be negative", 0, "E");
  } else {
    throw ConfigError("expected 'oscillator' or 'coulomb'", 0, "system");
  }
  if (!(sc.strength > 0)) throw ConfigError("must be positive", 0, system == "oscillator" ? "omega" : "Z");
  sc.m_values = cfg.numbers("m_values");
  sc.ring_values = cfg.numbers("Q_values");
  for (double q : sc.ring_values)
    if (!(q >= 0)) throw ConfigError("Q must be >= 0", 0, "Q_values");
  sc.tol = cfg.number("tol", kDefaultRatioTolerance);
  sc.max_denominator = cfg.integer("max_denominator", kDefaultMaxDenominator);
  if (sc.max_denominator < 1) throw ConfigError("must be >= 1", 0, "max_denominator");
  return sc;
}

std::vector<SweepRow> sweep(const SweepConfig& sc) {
  const double base = sc.system == SystemKind::oscillator
                          ? 2 * std::numbers::pi / sc.strength
                          : kepler_period(sc.strength, sc.energy);
  std::vector<SweepRow> rows;
  for (double q : sc.ring_values)
    for (double m : sc.m_values) rows.push_back({q, m, {}});
  parallel_for(rows.size(), [&](std::size_t i) {
    rows[i].verdict =
        classify_periodicity(sc.system, rows[i].m, rows[i].ring, base, sc.tol, sc.max_denominator);
  });
  return rows;
}

AnalyzeConfig load_analyze(const KeyValueConfig& cfg) {
  cfg.reject_unknown(
      with(kParamKeys, {"trajectory", "closure_period", "t_ref", "planarity_tol", "bounds_slack"}));
  AnalyzeConfig ac;
  ac.params = load_params(cfg);
  ac.trajectory_path = cfg.text("trajectory", "");
  if (cfg.has("closure_period")) {
    ac.closure_period = cfg.number("closure_period");
    if (!(*ac.closure_period >= 0)) throw ConfigError("must be >= 0", 0, "closure_period");
  }
  ac.t_ref = cfg.number("t_ref", 0.0);
  ac.planarity_tol = cfg.number("planarity_tol", 1e-8);
  ac.bounds_slack = cfg.number("bounds_slack", 1e-6);
  return ac;
}

nlohmann::ordered_json analyze(const Trajectory& traj, const AnalyzeConfig& ac) {
  if (traj.size() < 4) throw ConfigError("trajectory needs at least 4 samples");
  const AnyOrbit orbit = orbit_for(traj.params, traj.front().state, traj.front().t);
  const OrbitScale scale = with_orbit(orbit, [](const auto& o) { return orbit_scale(o); });
  const PeriodicityVerdict verdict = classify_state(traj.params, traj.front().state);
  const double base = with_orbit(orbit, [](const auto& o) { return base_period(o); });
  const double span = traj.back().t - ac.t_ref;
  double T = ac.closure_period.value_or(verdict.kind == OrbitKind::periodic ? verdict.period : base);
  if (!ac.closure_period && T > span) T = base;

  nlohmann::ordered_json report;
  report["params"] = params_json(traj.params);
  report["samples"] = traj.size();
  report["verdict"] = verdict_json(verdict);
  report["drift"] = drift_json(drift_report(traj));
  const auto violations =
      with_orbit(orbit, [&](const auto& o) { return bounds_audit(traj, o, ac.bounds_slack); });
  report["bounds"] = {{"slack", ac.bounds_slack}, {"violations", violations.size()}};
  if (T <= span * (1 + 1e-12))
    report["closure"] = {{"period", T}, {"t_ref", ac.t_ref},
                         {"distance", closure_distance(traj, std::min(T, span), ac.t_ref, scale)}};
  else
    report["closure"] = {{"period", T}, {"t_ref", ac.t_ref}, {"distance", nullptr}};
  const PlanarityReport plane = planarity(traj, ac.planarity_tol);
  nlohmann::ordered_json pj;
  pj["planar"] = plane.planar;
  pj["normal"] = plane.normal ? nlohmann::ordered_json{(*plane.normal).x(), (*plane.normal).y(),
                                                       (*plane.normal).z()}
                              : nlohmann::ordered_json(nullptr);
  pj["max_distance"] = plane.max_distance;
  pj["max_torsion"] = plane.max_torsion;
  report["planarity"] = pj;
  return report;
}

std::string json_to_csv(const nlohmann::ordered_json& doc) {
  std::string out = "key,value\n";
  flatten(doc, "", out);
  return out;
}

namespace {

struct Common {
  std::string config;
  std::string output;
  std::string format = "csv";
  std::uint64_t seed = 1;
  bool seed_given = false;
};

Format parse_format(const std::string& f) {
  if (f == "csv") return Format::csv;
  if (f == "json") return Format::json;
  throw ConfigError("expected csv or json", 0, "--format");
}

KeyValueConfig load_config(const std::string& path) {
  return path.empty() ? KeyValueConfig{} : KeyValueConfig::parse_file(path);
}

std::filesystem::path ensure_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

std::string render(const nlohmann::ordered_json& doc, Format f) {
  return f == Format::json ? doc.dump(2) + "\n" : json_to_csv(doc);
}

int cmd_simulate(const Common& c) {
  const Format format = parse_format(c.format);
  if (c.config.empty()) throw ConfigError("simulate needs --config");
  const ScenarioConfig sc = load_scenario(load_config(c.config));
  const SimulationResult result = simulate(sc);
  const auto dir = ensure_dir(c.output.empty() ? "out" : c.output);
  write_trajectory(dir / "analytic", result.analytic, format, sc.output_stride);
  write_trajectory(dir / "numeric", result.numeric, format, sc.output_stride);
  write_text(dir / ("summary" + extension(format)), render(result.summary, format));
  std::cout << result.summary.dump(2) << "\n";
  return kSuccess;
}

int cmd_verify(const Common& c, const std::string& system) {
  const Format format = parse_format(c.format);
  KeyValueConfig cfg = load_config(c.config);
  if (!system.empty()) cfg.set("system", system);
  if (!cfg.has("system")) cfg.set("system", "oscillator");
  const bool osc = cfg.text("system") == "oscillator";
  if (osc && !cfg.has("omega") && !cfg.has("Z")) cfg.set("omega", "1");
  if (!osc && !cfg.has("Z") && !cfg.has("omega")) cfg.set("Z", "1");
  if (!cfg.has("Q")) cfg.set("Q", "1");
  VerifyConfig vc = load_verify(cfg);
  if (c.seed_given) vc.seed = c.seed;
  const VerifyReport report = verify(vc);

  // Per-check summary: worst value and failure count.
  nlohmann::ordered_json summary;
  summary["params"] = params_json(vc.params);
  summary["seed"] = vc.seed;
  summary["points"] = vc.count;
  nlohmann::ordered_json checks;
  for (const auto& ch : report.checks) {
    auto& entry = checks[ch.check];
    if (entry.is_null()) entry = {{"worst", ch.value}, {"threshold", ch.threshold}, {"failures", 0}};
    const bool rank = ch.check == "rank";
    const double worst = entry["worst"].get<double>();
    entry["worst"] = rank ? std::min(worst, ch.value) : std::max(worst, ch.value);
    if (!ch.pass) entry["failures"] = entry["failures"].get<int>() + 1;
  }
  summary["checks"] = checks;
  summary["passed"] = report.all_passed();

  if (!c.output.empty()) {
    const auto dir = ensure_dir(c.output);
    if (format == Format::json) {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (const auto& ch : report.checks)
        rows.push_back({{"point", ch.point}, {"check", ch.check}, {"value", ch.value},
                        {"threshold", ch.threshold}, {"pass", ch.pass}});
      write_text(dir / "verify.json", nlohmann::ordered_json{{"summary", summary}, {"checks", rows}}.dump(2) + "\n");
    } else {
      std::string csv = "point,check,value,threshold,pass\n";
      for (const auto& ch : report.checks)
        csv += std::to_string(ch.point) + "," + ch.check + "," + format_double(ch.value) + "," +
               format_double(ch.threshold) + "," + (ch.pass ? "1" : "0") + "\n";
      write_text(dir / "verify.csv", csv);
    }
  }
  std::cout << summary.dump(2) << "\n";
  return report.all_passed() ? kSuccess : kCheckFailure;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, SystemKind system) {
  std::string out = "system,Q,m,kind,k1,k2,period,ratio,error,planar\n";
  for (const auto& r : rows) {
    const auto& v = r.verdict;
    out += to_string(system) + "," + format_double(r.ring) + "," + format_double(r.m) + "," +
           to_string(v.kind) + "," + std::to_string(v.k1) + "," + std::to_string(v.k2) + "," +
           (v.kind == OrbitKind::periodic ? format_double(v.period) : std::string()) + "," +
           (std::isfinite(v.ratio) ? format_double(v.ratio) : std::string("inf")) + "," +
           format_double(v.error) + "," + (v.planar ? "1" : "0") + "\n";
  }
  return out;
}

int cmd_sweep(const Common& c) {
  const Format format = parse_format(c.format);
  if (c.config.empty()) throw ConfigError("sweep needs --config");
  const SweepConfig sc = load_sweep(load_config(c.config));
  const auto rows = sweep(sc);
  std::string text;
  if (format == Format::json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json j = verdict_json(r.verdict);
      arr.push_back({{"system", to_string(sc.system)}, {"Q", r.ring}, {"m", r.m}, {"verdict", j}});
    }
    text = arr.dump(2) + "\n";
  } else {
    text = sweep_csv(rows, sc.system);
  }
  if (!c.output.empty()) write_text(ensure_dir(c.output) / ("sweep" + extension(format)), text);
  std::cout << text;
  return kSuccess;
}

int cmd_analyze(const Common& c, const std::string& trajectory) {
  const Format format = parse_format(c.format);
  if (c.config.empty()) throw ConfigError("analyze needs --config");
  AnalyzeConfig ac = load_analyze(load_config(c.config));
  if (!trajectory.empty()) ac.trajectory_path = trajectory;
  if (ac.trajectory_path.empty()) throw ConfigError("no trajectory file given", 0, "trajectory");
  const Trajectory traj = read_trajectory_file(ac.trajectory_path, ac.params);
  const auto report = analyze(traj, ac);
  const std::string text = render(report, format);
  if (!c.output.empty()) write_text(ensure_dir(c.output) / ("analysis" + extension(format)), text);
  std::cout << text;
  return kSuccess;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Classical dynamics of the ring-shaped oscillator and Coulomb potentials"};
  app.require_subcommand(1);
  Common common;
  std::string system, trajectory;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "key = value configuration file");
    sub->add_option("--output", common.output, "output directory");
    sub->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { common.seed = s; common.seed_given = true; },
        "random seed");
  };
  auto* simulate_cmd = app.add_subcommand("simulate", "analytic and numerical trajectories");
  auto* verify_cmd = app.add_subcommand("verify", "involution, rank and gradient checks");
  auto* sweep_cmd = app.add_subcommand("sweep", "periodicity classification over (m, Q)");
  auto* analyze_cmd = app.add_subcommand("analyze", "closure and planarity of a trajectory file");
  for (auto* sub : {simulate_cmd, verify_cmd, sweep_cmd, analyze_cmd}) add_common(sub);
  verify_cmd->add_option("--system", system, "oscillator or coulomb")
      ->check(CLI::IsMember({"oscillator", "coulomb"}));
  analyze_cmd->add_option("--trajectory", trajectory, "trajectory CSV or JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kValidationError;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(common);
    if (*verify_cmd) return cmd_verify(common, system);
    if (*sweep_cmd) return cmd_sweep(common);
    return cmd_analyze(common, trajectory);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kValidationError;
  } catch (const SingularityError& e) {
    std::cerr << "singularity: " << e.what() << "\n";
    return kSingularityAbort;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidationError;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidationError;
  }
}

}  // namespace ring::cli
