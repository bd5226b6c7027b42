#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "decay_povm/c_api.h"

namespace {

// Owns a malloc'd string returned by the library.
struct CString {
  char* p = nullptr;
  ~CString() { dp_string_free(p); }
};

struct Potential {
  dp_potential* p = nullptr;
  ~Potential() { dp_potential_free(p); }
};

int fail(dp_status st) {
  std::cerr << "error: " << dp_last_error() << "\n";
  return static_cast<int>(st);
}

dp_status load_potential(const std::string& arg, Potential& out) {
  if (!arg.empty() && arg.front() == '{') return dp_potential_from_json(arg.c_str(), &out.p);
  // an experiment config is accepted too; its "potential" member is used
  std::ifstream f(arg);
  if (f) {
    try {
      const auto doc = nlohmann::json::parse(f);
      if (doc.is_object() && doc.contains("potential"))
        return dp_potential_from_json(doc.at("potential").dump().c_str(), &out.p);
    } catch (const nlohmann::json::exception&) {
    }
  }
  return dp_potential_from_file(arg.c_str(), &out.p);
}

int emit(const CString& s, const std::string& path) {
  if (path.empty()) {
    std::fputs(s.p, stdout);
    if (std::string(s.p).back() != '\n') std::fputc('\n', stdout);
    return 0;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write " << path << "\n";
    return DP_INTERNAL_ERROR;
  }
  f << s.p;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-of-arrival detection probability and decay-regime analysis for 1D barriers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dp_version()));

  std::string config, output;
  auto* run = app.add_subcommand("run", "Run an experiment config and write CSV/JSON artifacts");
  run->add_option("config", config, "Experiment config (JSON)")->required();
  run->add_option("-o,--output", output, "Output directory (overrides the config)");

  std::string potential, out_path;
  double k_min = 0.01, k_max = 10.0, k0 = 1.0, sigma = 0.05, L = 0.0, s_min = 0.01, s_max = 0.5;
  int n = 50, nsigma = 20;
  bool log_spaced = false;
  std::string thresholds;

  auto* amp = app.add_subcommand("amplitudes", "Tabulate T, R and the phase Theta over k (CSV)");
  amp->add_option("potential", potential, "Potential JSON file, inline JSON, or experiment config")->required();
  amp->add_option("--k-min", k_min, "Smallest k")->capture_default_str();
  amp->add_option("--k-max", k_max, "Largest k")->capture_default_str();
  amp->add_option("-n,--points", n, "Number of k values")->capture_default_str();
  amp->add_flag("--log", log_spaced, "Log-spaced k values");
  amp->add_option("-o,--output", out_path, "Write to a file instead of stdout");

  auto* coef = app.add_subcommand("coefficients", "Expansion coefficients at k0 (JSON)");
  coef->add_option("potential", potential, "Potential JSON file, inline JSON, or experiment config")->required();
  coef->add_option("--k0", k0, "Central wavenumber")->required();
  coef->add_option("-o,--output", out_path, "Write to a file instead of stdout");

  bool sweep_mode = false;
  auto* cls = app.add_subcommand("classify", "Decay-regime report (JSON), or a regime map with --sweep (CSV)");
  cls->add_option("potential", potential, "Potential JSON file, inline JSON, or experiment config")->required();
  cls->add_option("--k0", k0, "Central wavenumber")->capture_default_str();
  cls->add_option("--sigma", sigma, "Momentum spread")->capture_default_str();
  cls->add_option("-L,--detector", L, "Detector position (default 10 b)");
  cls->add_option("--thresholds", thresholds, "JSON object overriding regime thresholds");
  cls->add_flag("--sweep", sweep_mode, "Emit a CSV regime map over (k0, sigma)");
  cls->add_option("--k-min", k_min, "Sweep: smallest k0")->capture_default_str();
  cls->add_option("--k-max", k_max, "Sweep: largest k0")->capture_default_str();
  cls->add_option("--nk", n, "Sweep: number of k0 values")->capture_default_str();
  cls->add_option("--sigma-min", s_min, "Sweep: smallest sigma")->capture_default_str();
  cls->add_option("--sigma-max", s_max, "Sweep: largest sigma")->capture_default_str();
  cls->add_option("--nsigma", nsigma, "Sweep: number of sigma values")->capture_default_str();
  cls->add_option("-o,--output", out_path, "Write to a file instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "Coefficient table over k (CSV)");
  sweep->add_option("potential", potential, "Potential JSON file, inline JSON, or experiment config")->required();
  sweep->add_option("--k-min", k_min, "Smallest k")->capture_default_str();
  sweep->add_option("--k-max", k_max, "Largest k")->capture_default_str();
  sweep->add_option("-n,--points", n, "Number of k values")->capture_default_str();
  sweep->add_flag("--log", log_spaced, "Log-spaced k values");
  sweep->add_option("-o,--output", out_path, "Write to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    CString report;
    const dp_status st = dp_run(config.c_str(), output.empty() ? nullptr : output.c_str(), &report.p);
    if (report.p) {
      const auto j = nlohmann::json::parse(report.p);
      const std::string text = j.value("regime_text", "");
      if (!text.empty()) std::cout << text;
      if (st == DP_OK) {
        std::cout << "wrote " << j.at("files").size() << " files to " << j.value("output_dir", "") << "\n";
      } else {
        std::cerr << "error: " << j.value("message", "") << "\n";
      }
    } else if (st != DP_OK) {
      std::cerr << "error: " << dp_last_error() << "\n";
    }
    return static_cast<int>(st);
  }

  Potential pot;
  if (dp_status st = load_potential(potential, pot); st != DP_OK) return fail(st);
  CString result;
  dp_status st = DP_OK;
  if (amp->parsed()) {
    st = dp_amplitudes_csv(pot.p, k_min, k_max, n, log_spaced ? 1 : 0, &result.p);
  } else if (coef->parsed()) {
    st = dp_coefficients_json(pot.p, k0, &result.p);
  } else if (cls->parsed()) {
    if (L <= 0.0) {
      CString pj;
      if (dp_status s2 = dp_potential_to_json(pot.p, &pj.p); s2 != DP_OK) return fail(s2);
      L = 10.0 * nlohmann::json::parse(pj.p).at("b").get<double>();
    }
    const char* th = thresholds.empty() ? nullptr : thresholds.c_str();
    st = sweep_mode ? dp_classify_sweep_csv(pot.p, k_min, k_max, n, s_min, s_max, nsigma, L, th, &result.p)
                    : dp_classify_json(pot.p, k0, sigma, L, th, &result.p);
  } else if (sweep->parsed()) {
    st = dp_sweep_csv(pot.p, k_min, k_max, n, log_spaced ? 1 : 0, &result.p);
  }
  if (st != DP_OK) return fail(st);
  return emit(result, out_path);
}
