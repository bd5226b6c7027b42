#include "decay_povm/c_api.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "decay_povm/coefficients.hpp"
#include "decay_povm/errors.hpp"
#include "decay_povm/experiment.hpp"
#include "decay_povm/potential.hpp"
#include "decay_povm/regimes.hpp"
#include "decay_povm/scattering.hpp"
#include "decay_povm/series_tools.hpp"

struct dp_potential {
  decay_povm::PotentialSpec spec;
};

namespace {

using namespace decay_povm;
using nlohmann::json;

thread_local std::string g_last_error;

char* to_c_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
dp_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return DP_OK;
  } catch (const InvalidArgument& e) {
    g_last_error = e.what();
    return DP_INVALID_ARGUMENT;
  } catch (const ConfigError& e) {
    g_last_error = e.what();
    return DP_CONFIG_ERROR;
  } catch (const PreconditionError& e) {
    g_last_error = e.what();
    return DP_PRECONDITION_FAILED;
  } catch (const NumericalError& e) {
    g_last_error = e.what();
    return DP_NUMERICAL_FAILURE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DP_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return DP_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* msg) {
  if (!ok) throw InvalidArgument(msg);
}

std::vector<double> k_grid(double lo, double hi, int n, bool log_spaced) {
  require(n >= 1, "point count must be positive");
  require(lo > 0.0 && hi >= lo, "need 0 < k_min <= k_max");
  if (n == 1) return {lo};
  return log_spaced ? log_grid(lo, hi, static_cast<std::size_t>(n)) : uniform_grid(lo, hi, static_cast<std::size_t>(n));
}

RegimeThresholds parse_thresholds(const char* text) {
  RegimeThresholds th;
  if (!text || !*text) return th;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("thresholds are not valid JSON: ") + e.what());
  }
  require(j.is_object(), "thresholds must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    require(it->is_number(), "threshold values must be numbers");
    const double v = it->get<double>();
    if (it.key() == "cond1") th.cond1 = v;
    else if (it.key() == "cond2") th.cond2 = v;
    else if (it.key() == "cond3") th.cond3 = v;
    else if (it.key() == "extra") th.extra = v;
    else if (it.key() == "potential_only") th.potential_only = v;
    else throw InvalidArgument("unknown threshold '" + it.key() + "'");
  }
  return th;
}

json coefficients_json(const PotentialSpec& spec, double k0) {
  const BarrierCoefficients c = coefficients_at(spec, k0);
  const double M = spec.mass();
  json j{{"k0", c.k0},
         {"lambda", c.lambda},
         {"xi", c.xi},
         {"beta", c.beta},
         {"s", c.s},
         {"w", c.w},
         {"argR", c.argR},
         {"alpha", c.alpha},
         {"T", {c.T.real(), c.T.imag()}},
         {"R", {c.R.real(), c.R.imag()}},
         {"T2", c.T2},
         {"R2", c.R2},
         {"d2logT", {c.d2logT.real(), c.d2logT.imag()}},
         {"d2logR", {c.d2logR.real(), c.d2logR.imag()}},
         {"ident1_residual", c.ident1_residual},
         {"symmetric", c.symmetric},
         {"symmetric_residual", c.symmetric ? json(c.symmetric_residual) : json(nullptr)},
         {"Gamma", c.beta > 0.0 ? json(k0 * c.T2 / (M * c.beta)) : json(nullptr)},
         {"t_d", M * c.beta / k0}};
  try {
    j["t_cross"] = crossing_time(c, spec);
  } catch (const Error&) {
    j["t_cross"] = nullptr;
  }
  return j;
}

}  // namespace

extern "C" {

const char* dp_last_error(void) { return g_last_error.c_str(); }

const char* dp_version(void) { return "0.1.0"; }

void dp_string_free(char* s) { std::free(s); }

dp_status dp_potential_from_json(const char* json_text, dp_potential** out) {
  return guarded([&] {
    require(json_text && out, "null argument");
    *out = new dp_potential{parse_potential(std::string(json_text))};
  });
}

dp_status dp_potential_from_file(const char* path, dp_potential** out) {
  return guarded([&] {
    require(path && out, "null argument");
    std::ifstream f(path);
    if (!f) throw InvalidArgument(std::string("cannot read ") + path);
    std::stringstream ss;
    ss << f.rdbuf();
    *out = new dp_potential{parse_potential(ss.str())};
  });
}

void dp_potential_free(dp_potential* p) { delete p; }

dp_status dp_potential_to_json(const dp_potential* p, char** out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = to_c_string(serialize(p->spec));
  });
}

dp_status dp_amplitudes(const dp_potential* p, double k, double* out) {
  return guarded([&] {
    require(p && out, "null argument");
    const ScatteringData d = amplitudes(p->spec, k);
    const double vals[7] = {d.T.real(), d.T.imag(), d.R.real(), d.R.imag(), d.Rp.real(), d.Rp.imag(), d.Theta};
    std::memcpy(out, vals, sizeof vals);
  });
}

dp_status dp_amplitudes_csv(const dp_potential* p, double k_min, double k_max, int n, int log_spaced, char** out) {
  return guarded([&] {
    require(p && out, "null argument");
    std::string csv = "k,re_T,im_T,re_R,im_R,theta\n";
    for (double k : k_grid(k_min, k_max, n, log_spaced != 0)) {
      const ScatteringData d = amplitudes(p->spec, k);
      csv += format_double(k) + "," + format_double(d.T.real()) + "," + format_double(d.T.imag()) + "," +
             format_double(d.R.real()) + "," + format_double(d.R.imag()) + "," + format_double(d.Theta) + "\n";
    }
    *out = to_c_string(csv);
  });
}

dp_status dp_coefficients_json(const dp_potential* p, double k0, char** out) {
  return guarded([&] {
    require(p && out, "null argument");
    require(k0 > 0.0, "k0 must be positive");
    *out = to_c_string(coefficients_json(p->spec, k0).dump(2));
  });
}

dp_status dp_classify_json(const dp_potential* p, double k0, double sigma, double L, const char* thresholds_json,
                           char** out) {
  return guarded([&] {
    require(p && out, "null argument");
    require(k0 > 0.0 && sigma > 0.0, "k0 and sigma must be positive");
    require(L >= 10.0 * p->spec.b(), "L must be at least 10 b");
    const RegimeThresholds th = parse_thresholds(thresholds_json);
    const RegimeReport r = classify_at(p->spec, k0, sigma, L - 0.5 * p->spec.a(), th);
    *out = to_c_string(to_json(r).dump(2));
  });
}

dp_status dp_classify_sweep_csv(const dp_potential* p, double k_min, double k_max, int nk, double sigma_min,
                                double sigma_max, int nsigma, double L, const char* thresholds_json, char** out) {
  return guarded([&] {
    require(p && out, "null argument");
    require(L >= 10.0 * p->spec.b(), "L must be at least 10 b");
    const RegimeThresholds th = parse_thresholds(thresholds_json);
    const auto ks = k_grid(k_min, k_max, nk, false);
    const auto ss = k_grid(sigma_min, sigma_max, nsigma, false);
    std::string csv = "k0,sigma,T2,sigma_beta,sigma_w,extra_max,Gamma,verdict\n";
    for (double k : ks)
      for (double s : ss) {
        csv += format_double(k) + "," + format_double(s) + ",";
        try {
          const RegimeReport r = classify_at(p->spec, k, s, L - 0.5 * p->spec.a(), th);
          double emax = 0.0;
          for (const Check& c : r.extra) emax = std::max(emax, c.value);
          csv += format_double(r.cond1.value) + "," + format_double(r.cond2.value) + "," +
                 format_double(r.cond3.value) + "," + format_double(emax) + "," +
                 (r.Gamma ? format_double(*r.Gamma) : std::string("nan")) + "," + to_string(r.verdict) + "\n";
        } catch (const PreconditionError&) {
          csv += "nan,nan,nan,nan,nan,threshold\n";
        }
      }
    *out = to_c_string(csv);
  });
}

dp_status dp_sweep_csv(const dp_potential* p, double k_min, double k_max, int n, int log_spaced, char** out) {
  return guarded([&] {
    require(p && out, "null argument");
    const double M = p->spec.mass();
    std::string csv = "k,T2,lambda,xi,beta,s,w,argR,Gamma\n";
    for (double k : k_grid(k_min, k_max, n, log_spaced != 0)) {
      csv += format_double(k) + ",";
      try {
        const BarrierCoefficients c = coefficients_at(p->spec, k);
        csv += format_double(c.T2) + "," + format_double(c.lambda) + "," + format_double(c.xi) + "," +
               format_double(c.beta) + "," + format_double(c.s) + "," + format_double(c.w) + "," +
               format_double(c.argR) + "," + format_double(k * c.T2 / (M * c.beta)) + "\n";
      } catch (const PreconditionError&) {
        csv += "nan,nan,nan,nan,nan,nan,nan,nan\n";
      }
    }
    *out = to_c_string(csv);
  });
}

dp_status dp_run(const char* config_path, const char* output_override, char** report) {
  dp_status status = DP_OK;
  const dp_status guard = guarded([&] {
    require(config_path != nullptr, "null config path");
    std::optional<std::string> override_dir;
    if (output_override) override_dir = std::string(output_override);
    const RunOutcome r = run_experiment(config_path, override_dir);
    status = static_cast<dp_status>(r.exit_code);
    if (r.exit_code != kExitOk) g_last_error = r.message;
    if (report) {
      json j{{"exit_code", r.exit_code},
             {"message", r.message},
             {"output_dir", r.output_dir},
             {"files", r.files},
             {"regime_text", r.regime_text}};
      *report = to_c_string(j.dump(2));
    }
  });
  return guard != DP_OK ? guard : status;
}

}  // extern "C"
