#include "decay_povm/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "decay_povm/errors.hpp"
#include "decay_povm/survival.hpp"

namespace decay_povm {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> m{"quadrature", "series",        "diagonal", "envelope", "longtime",
                                          "beats",      "semiclassical", "survival", "oracle"};
  return m;
}

namespace {

double positive(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw ConfigError(std::string(where) + " lacks '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(std::string(where) + "." + key + " must be a number");
  const double v = j.at(key).get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(where) + "." + key + " must be positive");
  return v;
}

std::optional<double> opt_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

std::string series_csv(const std::vector<const ProbabilitySeries*>& all) {
  std::string out = "t,p,method\n";
  for (const ProbabilitySeries* s : all)
    for (std::size_t i = 0; i < s->t.size(); ++i)
      out += format_double(s->t[i]) + "," + format_double(s->p[i]) + "," + s->method + "\n";
  return out;
}

std::string survival_csv(const SurvivalSeries& s) {
  std::string out = "t,w,minus_wdot\n";
  for (std::size_t i = 0; i < s.t.size(); ++i)
    out += format_double(s.t[i]) + "," + format_double(s.w[i]) + "," + format_double(s.minus_wdot[i]) + "\n";
  return out;
}

json peak_table(const ProbabilitySeries& s, std::size_t limit = 200) {
  json arr = json::array();
  for (std::size_t i : find_peaks(s.p)) {
    if (arr.size() >= limit) break;
    arr.push_back({{"t", s.t[i]}, {"p", s.p[i]}});
  }
  return arr;
}

json series_json(const ProbabilitySeries& s) {
  return {{"method", s.method},
          {"mass_detected", s.mass_detected},
          {"max_negative_violation", s.max_negative_violation},
          {"positivity_violated", s.positivity_violated},
          {"samples", s.t.size()},
          {"peaks", peak_table(s)}};
}

json report_json(const QuadratureReport& r) {
  return {{"nodes", r.nodes},         {"doublings", r.doublings}, {"converged", r.converged},
          {"max_change", r.max_change}, {"l1_norm", r.l1_norm},   {"near_resonance_nodes", r.near_resonance_nodes}};
}

double max_relative_deviation(const ProbabilitySeries& a, const ProbabilitySeries& ref) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.p.size() && i < ref.p.size(); ++i) {
    diff = std::max(diff, std::abs(a.p[i] - ref.p[i]));
    scale = std::max(scale, std::abs(ref.p[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string regime_text(const std::vector<RegimeReport>& reports) {
  std::ostringstream os;
  for (const RegimeReport& r : reports) {
    os << "k0 = " << short_number(r.k0) << ", sigma = " << short_number(r.sigma) << ": "
       << to_string(r.verdict) << "\n";
    os << "  |T|^2 = " << short_number(r.cond1.value) << (r.cond1.pass ? " (pass)" : " (fail)")
       << ", sigma beta = " << short_number(r.cond2.value) << (r.cond2.pass ? " (pass)" : " (fail)")
       << ", sigma |w| = " << short_number(r.cond3.value) << (r.cond3.pass ? " (pass)" : " (fail)") << "\n";
    if (r.Gamma) os << "  Gamma = " << short_number(*r.Gamma) << ", t0 = " << short_number(r.t0) << "\n";
  }
  if (reports.empty()) os << "no barrier: free propagation\n";
  return os.str();
}

// Throws PreconditionError for the first requested method that cannot run.
void check_preconditions(const ExperimentConfig& cfg, const PotentialSpec& spec, const InitialState& state,
                         const std::vector<RegimeReport>& reports) {
  const bool single = state.components().size() == 1;
  const bool barrier = spec.has_barrier();
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw PreconditionError(msg);
  };
  for (const std::string& m : cfg.methods) {
    if (m == "series" || m == "diagonal" || m == "envelope" || m == "longtime" || m == "semiclassical") {
      need(single, m + ": requires a single-component state");
      need(barrier, m + ": requires a barrier");
    }
    if (m == "series" || m == "diagonal") need(reports[0].extra_pass(), m + ": second-derivative validity conditions fail");
    if (m == "diagonal") {
      const auto& c = reports[0].coeffs;
      const double v = state.sigma() * state.sigma() * (c.beta * c.beta - c.s * c.s);
      need(v > 9.0, "diagonal: sigma^2 (beta^2 - s^2) = " + format_double(v) + " is not above 9");
    }
    if (m == "envelope")
      need(reports[0].verdict == Verdict::kExponential,
           std::string("envelope: regime is ") + to_string(reports[0].verdict) + ", not exponential");
    if (m == "beats") {
      need(state.components().size() == 2, "beats: requires a two-component state");
      need(barrier, "beats: requires a barrier");
      const double q = std::abs(state.components()[0].k - state.components()[1].k);
      need(q > 3.0 * state.sigma(), "beats: |k1 - k2| must exceed 3 sigma");
      need(reports[0].extra_pass() && reports[1].extra_pass(),
           "beats: second-derivative validity conditions fail at one of the components");
    }
  }
}

}  // namespace

ExperimentConfig parse_experiment(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  if (!doc.contains("potential")) throw ConfigError("config lacks 'potential'");
  try {
    c.potential = parse_potential(doc.at("potential"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }

  if (!doc.contains("state") || !doc.at("state").is_object()) throw ConfigError("config lacks 'state'");
  const json& st = doc.at("state");
  c.sigma = positive(st, "sigma", "state");
  if (!st.contains("components") || !st.at("components").is_array()) throw ConfigError("state lacks 'components'");
  for (const json& comp : st.at("components")) {
    StateComponent sc;
    sc.k = positive(comp, "k", "state.components[]");
    sc.weight = {opt_number(comp, "weight_re").value_or(1.0), opt_number(comp, "weight_im").value_or(0.0)};
    c.components.push_back(sc);
  }
  if (c.components.empty() || c.components.size() > 2) throw ConfigError("state needs one or two components");
  if (st.contains("overlap")) {
    try {
      c.overlap = overlap_from_string(st.at("overlap").get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(std::string("state.overlap: ") + e.what());
    }
  }

  if (!doc.contains("detector") || !doc.at("detector").is_object()) throw ConfigError("config lacks 'detector'");
  c.L = positive(doc.at("detector"), "L", "detector");
  if (!(c.L >= 10.0 * c.potential.b())) throw ConfigError("detector.L must be at least 10 b");

  if (doc.contains("time")) {
    const json& t = doc.at("time");
    if (!t.is_object()) throw ConfigError("'time' must be an object");
    c.time.t_min = opt_number(t, "t_min");
    c.time.t_max = opt_number(t, "t_max");
    if (auto s = opt_number(t, "samples")) {
      if (!(*s >= 2.0) || *s != std::floor(*s)) throw ConfigError("time.samples must be an integer >= 2");
      c.time.samples = static_cast<long>(*s);
    }
    c.time.per_peak = opt_number(t, "per_peak");
    if (c.time.per_peak && !(*c.time.per_peak > 0.0)) throw ConfigError("time.per_peak must be positive");
    if (c.time.samples && c.time.per_peak) throw ConfigError("give either time.samples or time.per_peak");
    if (c.time.t_min && *c.time.t_min < 0.0) throw ConfigError("time.t_min must be non-negative");
    if (c.time.t_min && c.time.t_max && !(*c.time.t_max > *c.time.t_min))
      throw ConfigError("time.t_max must exceed time.t_min");
  }

  if (!doc.contains("methods") || !doc.at("methods").is_array() || doc.at("methods").empty())
    throw ConfigError("'methods' must be a non-empty array");
  for (const json& m : doc.at("methods")) {
    if (!m.is_string()) throw ConfigError("methods must be strings");
    const auto name = m.get<std::string>();
    if (std::find(known_methods().begin(), known_methods().end(), name) == known_methods().end())
      throw ConfigError("unknown method '" + name + "'");
    if (std::find(c.methods.begin(), c.methods.end(), name) == c.methods.end()) c.methods.push_back(name);
  }

  if (doc.contains("thresholds")) {
    const json& t = doc.at("thresholds");
    if (!t.is_object()) throw ConfigError("'thresholds' must be an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      if (!it->is_number()) throw ConfigError("threshold '" + it.key() + "' must be a number");
      const double v = it->get<double>();
      if (it.key() == "cond1") c.thresholds.cond1 = v;
      else if (it.key() == "cond2") c.thresholds.cond2 = v;
      else if (it.key() == "cond3") c.thresholds.cond3 = v;
      else if (it.key() == "extra") c.thresholds.extra = v;
      else if (it.key() == "potential_only") c.thresholds.potential_only = v;
      else throw ConfigError("unknown threshold '" + it.key() + "'");
    }
  }

  if (doc.contains("quadrature")) {
    const json& q = doc.at("quadrature");
    if (auto v = opt_number(q, "window_sigmas")) c.quadrature.window_sigmas = *v;
    if (auto v = opt_number(q, "nodes")) c.quadrature.nodes = static_cast<int>(*v);
    if (auto v = opt_number(q, "rel_tol")) c.quadrature.rel_tol = *v;
    if (auto v = opt_number(q, "max_nodes")) c.quadrature.max_nodes = static_cast<long>(*v);
    if (auto v = opt_number(q, "order")) c.quadrature.order = static_cast<int>(*v);
    if (!(c.quadrature.window_sigmas > 0.0) || c.quadrature.nodes < 2 || !(c.quadrature.rel_tol > 0.0) ||
        c.quadrature.order < 2)
      throw ConfigError("invalid quadrature settings");
  }
  if (doc.contains("series")) {
    const json& s = doc.at("series");
    if (auto v = opt_number(s, "tail_eps")) c.series_tail_eps = *v;
    if (auto v = opt_number(s, "n_cap")) c.n_cap = static_cast<long>(*v);
    if (!(c.series_tail_eps > 0.0 && c.series_tail_eps < 1.0) || c.n_cap < 1)
      throw ConfigError("invalid series settings");
  }
  if (doc.contains("longtime")) {
    const json& l = doc.at("longtime");
    if (auto v = opt_number(l, "fit_lo")) c.longtime.fit_lo = *v;
    if (auto v = opt_number(l, "fit_hi")) c.longtime.fit_hi = *v;
    if (auto v = opt_number(l, "fit_points")) c.longtime.fit_points = static_cast<int>(*v);
    if (l.contains("fit")) c.longtime.fit = l.at("fit").get<bool>();
    if (!(c.longtime.fit_lo > 0.0 && c.longtime.fit_hi > c.longtime.fit_lo) || c.longtime.fit_points < 2)
      throw ConfigError("invalid longtime settings");
  }
  if (doc.contains("oracle")) {
    const json& o = doc.at("oracle");
    if (auto v = opt_number(o, "dx")) c.oracle.dx = *v;
    if (auto v = opt_number(o, "dt")) c.oracle.dt = *v;
    if (auto v = opt_number(o, "x_max")) c.oracle.x_max = *v;
    if (auto v = opt_number(o, "absorber_width")) c.oracle.absorber_width = *v;
    if (auto v = opt_number(o, "absorber_strength")) c.oracle.absorber_strength = *v;
    if (auto v = opt_number(o, "delta_cells")) c.oracle.delta_cells = static_cast<int>(*v);
    if (auto v = opt_number(o, "max_cells")) c.oracle.max_cells = static_cast<std::size_t>(*v);
    if (o.contains("convergence_check")) c.oracle.convergence_check = o.at("convergence_check").get<bool>();
  }
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) throw ConfigError("'output' must be a string");
    c.output = doc.at("output").get<std::string>();
  }
  return c;
}

ExperimentConfig parse_experiment_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return parse_experiment(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

InitialState make_state(const ExperimentConfig& cfg) {
  try {
    return InitialState(cfg.components, cfg.sigma, 0.5 * cfg.potential.a(), cfg.overlap);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<double> experiment_time_grid(const ExperimentConfig& cfg, const InitialState& state) {
  const TimeSpec& ts = cfg.time;
  if (!ts.t_min && !ts.t_max && !ts.samples && !ts.per_peak)
    return default_time_grid(cfg.potential, state, cfg.L);
  std::vector<double> def;
  if (!ts.t_min || !ts.t_max) def = default_time_grid(cfg.potential, state, cfg.L);
  const double lo = ts.t_min.value_or(def.empty() ? 0.0 : def.front());
  const double hi = ts.t_max.value_or(def.empty() ? 0.0 : def.back());
  if (!(hi > lo)) throw ConfigError("time window is empty");
  std::size_t n = 0;
  if (ts.samples) {
    n = static_cast<std::size_t>(*ts.samples);
  } else {
    double kmax = 0.0;
    for (const auto& c : state.components()) kmax = std::max(kmax, c.k);
    const double width = cfg.potential.mass() / (2.0 * kmax * state.sigma());
    const double per = ts.per_peak.value_or(10.0);
    n = static_cast<std::size_t>(std::ceil((hi - lo) * per / width)) + 1;
  }
  if (n > 2000000) throw ConfigError("time grid exceeds 2e6 samples");
  return uniform_grid(lo, hi, n);
}

RunOutcome run_experiment(const std::string& config_path, const std::optional<std::string>& output_override) {
  RunOutcome out;
  ExperimentConfig cfg;
  std::optional<InitialState> state;
  std::vector<double> grid;
  try {
    cfg = parse_experiment_file(config_path);
    if (output_override) cfg.output = *output_override;
    state.emplace(make_state(cfg));
    grid = experiment_time_grid(cfg, *state);
    DetectionConfig probe;
    probe.L = cfg.L;
    probe.t_grid = grid;
    validate(cfg.potential, probe);
  } catch (const Error& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
    return out;
  }

  const fs::path dir(cfg.output);
  out.output_dir = dir.string();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    out.exit_code = kExitConfig;
    out.message = "cannot create output directory " + dir.string() + ": " + ec.message();
    return out;
  }
  const PotentialSpec& spec = cfg.potential;
  const double M = spec.mass();

  std::vector<std::pair<std::string, std::string>> pending;  // file name, content
  json summary;
  try {
    std::vector<RegimeReport> reports;
    json regime;
    regime["potential"] = to_json(spec);
    regime["warnings"] = state->warnings();
    if (spec.has_barrier()) {
      reports = classify(spec, *state, cfg.L, cfg.thresholds);
      regime["components"] = json::array();
      for (const auto& r : reports) regime["components"].push_back(to_json(r));
      regime["verdict"] = to_string(combined_verdict(reports));
    } else {
      regime["components"] = json::array();
      regime["verdict"] = nullptr;
    }
    write_text(dir / "regime.json", regime.dump(2) + "\n");
    out.files.push_back("regime.json");
    out.regime_text = regime_text(reports);

    check_preconditions(cfg, spec, *state, reports);

    DetectionConfig dcfg;
    dcfg.L = cfg.L;
    dcfg.t_grid = grid;
    dcfg.series_tail_eps = cfg.series_tail_eps;
    dcfg.n_cap = cfg.n_cap;
    dcfg.quadrature = cfg.quadrature;
    dcfg.thresholds = cfg.thresholds;

    summary["verdict"] = regime["verdict"];
    summary["warnings"] = state->warnings();
    summary["time_grid"] = {{"t_min", grid.front()}, {"t_max", grid.back()}, {"samples", grid.size()}};
    if (!reports.empty()) {
      const auto& r = reports[0];
      summary["Gamma"] = r.Gamma ? json(*r.Gamma) : json(nullptr);
      summary["t0"] = r.t0;
      summary["beta"] = r.coeffs.beta;
      summary["lambda"] = r.coeffs.lambda;
      summary["alpha"] = r.coeffs.alpha;
      summary["components"] = json::array();
      for (const auto& rr : reports)
        summary["components"].push_back({{"k0", rr.k0},
                                         {"Gamma", rr.Gamma ? json(*rr.Gamma) : json(nullptr)},
                                         {"t0", rr.t0},
                                         {"beta", rr.coeffs.beta},
                                         {"lambda", rr.coeffs.lambda},
                                         {"alpha", rr.coeffs.alpha}});
    }
    summary["methods"] = json::object();

    std::optional<ProbabilitySeries> quad;
    std::vector<std::pair<std::string, ProbabilitySeries>> on_grid;
    for (const std::string& m : cfg.methods) {
      json info;
      if (m == "quadrature") {
        QuadratureReport rep;
        quad = p_quadrature(spec, *state, dcfg, &rep);
        info = series_json(*quad);
        info["quadrature"] = report_json(rep);
        pending.emplace_back("quadrature.csv", series_csv({&*quad}));
      } else if (m == "series") {
        SeriesResult s = p_series(spec, *state, dcfg);
        info = series_json(s.series);
        info["terms"] = s.terms;
        info["cap_hit"] = s.cap_hit;
        info["tail_estimate"] = s.tail_estimate;
        double off = 0.0, diag = 0.0;
        for (std::size_t i = 0; i < s.diagonal.size(); ++i) {
          off = std::max(off, std::abs(s.off_diagonal[i]));
          diag = std::max(diag, s.diagonal[i]);
        }
        info["max_off_diagonal"] = off;
        info["max_diagonal"] = diag;
        pending.emplace_back("series.csv", series_csv({&s.series}));
        on_grid.emplace_back(m, s.series);
      } else if (m == "diagonal") {
        ProbabilitySeries s = p_diagonal(spec, *state, dcfg);
        info = series_json(s);
        pending.emplace_back("diagonal.csv", series_csv({&s}));
        on_grid.emplace_back(m, s);
      } else if (m == "envelope") {
        EnvelopeResult e = p_exponential_envelope(spec, *state, dcfg);
        info = series_json(e.series);
        info["Gamma"] = e.Gamma;
        info["t0"] = e.t0;
        pending.emplace_back("envelope.csv", series_csv({&e.series}));
        on_grid.emplace_back(m, e.series);
      } else if (m == "longtime") {
        DetectionConfig lcfg = dcfg;
        const double unit = M / (state->sigma() * state->sigma());
        lcfg.t_grid = log_grid(cfg.longtime.fit_lo * unit, cfg.longtime.fit_hi * unit,
                               static_cast<std::size_t>(cfg.longtime.fit_points));
        LongtimeResult l = p_longtime(spec, *state, lcfg, cfg.longtime);
        info["exponent"] = l.exponent;
        info["fitted_exponent"] = cfg.longtime.fit ? json(l.fitted_exponent) : json(nullptr);
        if (cfg.longtime.fit) info["quadrature"] = report_json(l.fit_report);
        std::vector<const ProbabilitySeries*> all{&l.printed, &l.phase, &l.rederived};
        if (cfg.longtime.fit) all.push_back(&l.fit_samples);
        pending.emplace_back("longtime.csv", series_csv(all));
      } else if (m == "beats") {
        BeatsResult b = p_beats(spec, *state, dcfg);
        info = series_json(b.series);
        info["Gamma1"] = b.summary.Gamma1;
        info["Gamma2"] = b.summary.Gamma2;
        info["q"] = b.summary.q;
        info["decoherence_time"] = b.summary.decoherence_time;
        info["k0"] = b.summary.k0;
        pending.emplace_back("beats.csv", series_csv({&b.series}));
        on_grid.emplace_back(m, b.series);
        const double t_end = grid.back();
        const auto sgrid = uniform_grid(0.0, t_end, std::min<std::size_t>(grid.size(), 200000));
        SurvivalBeatsResult sb = survival_beats(spec, *state, sgrid);
        info["survival_min_minus_wdot"] = sb.min_minus_wdot;
        info["survival_negative_intervals"] = sb.negative_intervals.size();
        pending.emplace_back("survival_beats.csv", survival_csv(sb.series));
      } else if (m == "semiclassical") {
        ProbabilitySeries s = p_semiclassical(spec, *state, dcfg);
        info = series_json(s);
        pending.emplace_back("semiclassical.csv", series_csv({&s}));
        on_grid.emplace_back(m, s);
      } else if (m == "survival" || m == "oracle") {
        const double step = grid.size() > 1 ? grid[1] - grid[0] : grid.back();
        const auto n = static_cast<std::size_t>(std::min(2e6, std::ceil(grid.back() / step))) + 1;
        const auto sgrid = uniform_grid(0.0, grid.back(), n);
        if (m == "survival") {
          QuadratureReport rep;
          SurvivalSeries s = survival_quadrature(spec, *state, sgrid, cfg.quadrature, &rep);
          info["w0"] = s.w.front();
          info["quadrature"] = report_json(rep);
          if (spec.has_barrier() && !reports.empty() && reports[0].Gamma) {
            try {
              const double period = spec.mass() * reports[0].coeffs.beta / reports[0].k0;
              const DecayFit fit =
                  fit_decay_rate(s.t, s.w, 0.0, std::min(s.t.back(), 3.0 / *reports[0].Gamma), period);
              info["fitted_rate"] = fit.rate;
              info["fit_periods"] = fit.points;
            } catch (const NumericalError&) {
              info["fitted_rate"] = nullptr;
            }
          }
          pending.emplace_back("survival.csv", survival_csv(s));
        } else {
          OracleResult o = evolve_and_observe(spec, *state, cfg.L, sgrid, cfg.oracle);
          info = series_json(o.current);
          info["dx"] = o.grid.dx;
          info["dt"] = o.grid.dt;
          info["cells"] = o.grid.cells;
          info["steps"] = o.grid.steps;
          info["norm_drift"] = o.grid.norm_drift;
          info["absorbed"] = o.grid.absorbed;
          if (o.survival_change) info["survival_change_under_refinement"] = *o.survival_change;
          if (o.current_change) info["current_change_under_refinement"] = *o.current_change;
          pending.emplace_back("oracle_survival.csv", survival_csv(o.survival));
          pending.emplace_back("oracle_current.csv", series_csv({&o.current}));
        }
      }
      summary["methods"][m] = info;
    }
    if (quad) {
      json dev = json::object();
      for (const auto& [name, s] : on_grid) dev[name] = max_relative_deviation(s, *quad);
      summary["max_relative_deviation_vs_quadrature"] = dev;
    }
  } catch (const PreconditionError& e) {
    out.exit_code = kExitPrecondition;
    out.message = e.what();
    return out;
  } catch (const ConfigError& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
    return out;
  } catch (const InvalidArgument& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
    return out;
  } catch (const std::exception& e) {
    out.exit_code = kExitNumerical;
    out.message = e.what();
    return out;
  }
  try {
    for (const auto& [name, text] : pending) {
      write_text(dir / name, text);
      out.files.push_back(name);
    }
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    out.files.push_back("summary.json");
  } catch (const std::exception& e) {
    out.exit_code = kExitNumerical;
    out.message = e.what();
  }
  return out;
}

}  // namespace decay_povm
