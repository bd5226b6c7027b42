#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "decay_povm/c_api.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kSource = DP_SOURCE_DIR;
const std::string kCli = DP_CLI_PATH;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dp_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = "'" + kCli + "' " + args + " > '" + log.string() + "' 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_config(const fs::path& p, const json& doc) {
  std::ofstream(p) << doc.dump(2);
  return p;
}

json bundled(const std::string& name) { return json::parse(slurp(kSource / "configs" / (name + ".json"))); }

struct CStr {
  char* p = nullptr;
  ~CStr() { dp_string_free(p); }
};

}  // namespace

TEST_CASE("a config without a potential exits with status 2 and writes nothing") {
  const fs::path dir = scratch("missing_potential");
  json doc = bundled("delta_exponential");
  doc.erase("potential");
  doc["output"] = (dir / "out").string();
  const fs::path cfg = write_config(dir.string() + ".json", doc);
  CHECK(run_cli("run '" + cfg.string() + "'", dir.string() + ".log") == 2);
  CHECK_FALSE(fs::exists(dir / "out"));
  CHECK(slurp(dir.string() + ".log").find("potential") != std::string::npos);
}

TEST_CASE("other config errors also exit with status 2") {
  const fs::path dir = scratch("bad_configs");
  fs::create_directories(dir);
  auto status = [&](json doc, const std::string& tag) {
    doc["output"] = (dir / tag).string();
    const fs::path cfg = write_config(dir / (tag + ".json"), doc);
    return run_cli("run '" + cfg.string() + "'", dir / (tag + ".log"));
  };
  json empty = bundled("delta_exponential");
  empty["methods"] = json::array();
  CHECK(status(empty, "empty_methods") == 2);
  json unknown = bundled("delta_exponential");
  unknown["methods"] = {"quadrature", "telepathy"};
  CHECK(status(unknown, "unknown_method") == 2);
  json near = bundled("delta_exponential");
  near["detector"]["L"] = 500;
  CHECK(status(near, "near_detector") == 2);
  CHECK(run_cli("run '" + (dir / "absent.json").string() + "'", dir / "absent.log") == 2);
}

TEST_CASE("near-threshold square barrier fails the envelope precondition with status 3") {
  const fs::path dir = scratch("square_threshold");
  CHECK(run_cli("run '" + (kSource / "configs/square_threshold.json").string() + "' -o '" + dir.string() + "'",
                dir.string() + ".log") == 3);
  REQUIRE(fs::exists(dir / "regime.json"));
  const json regime = json::parse(slurp(dir / "regime.json"));
  CHECK(regime.at("components").at(0).at("verdict") == "expansion-invalid");
  CHECK_FALSE(fs::exists(dir / "envelope.csv"));
}

TEST_CASE("exponential example: verdict and decay rate in the summary") {
  const fs::path dir = scratch("delta_exponential");
  REQUIRE(run_cli("run '" + (kSource / "configs/delta_exponential.json").string() + "' -o '" + dir.string() + "'",
                  dir.string() + ".log") == 0);
  const json regime = json::parse(slurp(dir / "regime.json"));
  CHECK(regime.at("components").at(0).at("verdict") == "exponential");

  // Gamma = k0 |T|^2 / (M beta) with beta = 2a + kappa/(kappa^2 + k0^2), |T|^2 = k0^2/(k0^2 + kappa^2)
  const double k0 = 2, kappa = 7, a = 100;
  const double gamma = k0 * (k0 * k0 / (k0 * k0 + kappa * kappa)) / (2 * a + kappa / (kappa * kappa + k0 * k0));
  const json summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary.at("Gamma").get<double>() == doctest::Approx(gamma).epsilon(1e-9));

  for (const char* f : {"quadrature.csv", "series.csv", "diagonal.csv", "envelope.csv", "semiclassical.csv"})
    CHECK(fs::exists(dir / f));

  // full round-trip precision
  std::ifstream csv(dir / "quadrature.csv");
  std::string header, line;
  std::getline(csv, header);
  CHECK(header.rfind("t,", 0) == 0);
  int long_fields = 0;
  for (int i = 0; i < 50 && std::getline(csv, line); ++i) {
    const std::string field = line.substr(line.find(',') + 1);
    const double v = std::stod(field);
    std::ostringstream os;
    os.precision(17);
    os << v;
    CHECK(std::stod(os.str()) == v);
    if (field.size() >= 17) ++long_fields;
  }
  CHECK(long_fields > 25);
}

TEST_CASE("repeated runs write identical files") {
  for (const char* name : {"delta_exponential", "double_step_beats", "free"}) {
    const fs::path d1 = scratch(std::string(name) + "_a"), d2 = scratch(std::string(name) + "_b");
    const std::string cfg = (kSource / "configs" / (std::string(name) + ".json")).string();
    REQUIRE(run_cli("run '" + cfg + "' -o '" + d1.string() + "'", d1.string() + ".log") == 0);
    REQUIRE(run_cli("run '" + cfg + "' -o '" + d2.string() + "'", d2.string() + ".log") == 0);
    int compared = 0;
    for (const auto& e : fs::directory_iterator(d1)) {
      if (e.path().extension() != ".csv") continue;
      CAPTURE(e.path().string());
      CHECK(slurp(e.path()) == slurp(d2 / e.path().filename()));
      ++compared;
    }
    CHECK(compared >= 1);
  }
}

TEST_CASE("inspection subcommands") {
  const fs::path dir = scratch("inspect");
  fs::create_directories(dir);
  const std::string pot = R"('{"a":1,"b":2,"mass":1,"segments":[{"x0":1,"x1":2,"V":10}],"deltas":[]}')";
  REQUIRE(run_cli("amplitudes " + pot + " --k-min 0.5 --k-max 2 -n 4", dir / "amp.log") == 0);
  const std::string amp = slurp(dir / "amp.log");
  CHECK(amp.rfind("k,re_T,im_T,re_R,im_R,theta", 0) == 0);
  CHECK(std::count(amp.begin(), amp.end(), '\n') == 5);

  REQUIRE(run_cli("coefficients " + pot + " --k0 1", dir / "coef.log") == 0);
  CHECK(json::parse(slurp(dir / "coef.log")).contains("beta"));

  REQUIRE(run_cli("classify '" + (kSource / "configs/delta_exponential.json").string() + "' --k0 2 --sigma 0.11",
                  dir / "cls.log") == 0);
  CHECK(json::parse(slurp(dir / "cls.log")).at("verdict") == "exponential");

  REQUIRE(run_cli("sweep " + pot + " --k-min 0.5 --k-max 2 -n 3 -o '" + (dir / "sweep.csv").string() + "'",
                  dir / "sweep.log") == 0);
  CHECK(slurp(dir / "sweep.csv").rfind("k,T2,lambda,xi,beta,s,w,argR,Gamma", 0) == 0);

  CHECK(run_cli("coefficients '{\"a\":1}' --k0 1", dir / "bad.log") == DP_INVALID_ARGUMENT);
  CHECK(run_cli("", dir / "none.log") != 0);
}

TEST_CASE("C interface") {
  dp_potential* p = nullptr;
  REQUIRE(dp_potential_from_json(R"({"a":1,"b":1,"mass":1,"segments":[],"deltas":[{"x":1,"kappa":5}]})", &p) == DP_OK);
  double out[7];
  REQUIRE(dp_amplitudes(p, 0.5, out) == DP_OK);
  const std::complex<double> T(out[0], out[1]), R(out[2], out[3]);
  CHECK(std::norm(T) + std::norm(R) == doctest::Approx(1.0).epsilon(1e-12));

  CStr coef;
  REQUIRE(dp_coefficients_json(p, 0.5, &coef.p) == DP_OK);
  const json c = json::parse(coef.p);
  CHECK(c.at("beta").get<double>() == doctest::Approx(2 + 5 / 25.25).epsilon(1e-7));

  CStr cls;
  REQUIRE(dp_classify_json(p, 0.5, 0.05, 100, R"({"cond1": 0.5})", &cls.p) == DP_OK);
  CHECK(json::parse(cls.p).contains("verdict"));
  CStr bad;
  CHECK(dp_classify_json(p, 0.5, 0.05, 100, R"({"bogus": 1})", &bad.p) == DP_INVALID_ARGUMENT);
  CHECK(std::string(dp_last_error()).find("bogus") != std::string::npos);

  CStr sweep;
  REQUIRE(dp_classify_sweep_csv(p, 0.3, 1.0, 3, 0.01, 0.05, 2, 100, nullptr, &sweep.p) == DP_OK);
  const std::string s = sweep.p;
  CHECK(std::count(s.begin(), s.end(), '\n') == 7);

  CStr round;
  REQUIRE(dp_potential_to_json(p, &round.p) == DP_OK);
  dp_potential* q = nullptr;
  REQUIRE(dp_potential_from_json(round.p, &q) == DP_OK);
  double out2[7];
  REQUIRE(dp_amplitudes(q, 0.5, out2) == DP_OK);
  for (int i = 0; i < 7; ++i) CHECK(out2[i] == out[i]);
  dp_potential_free(q);

  CHECK(dp_amplitudes(p, -1.0, out) == DP_INVALID_ARGUMENT);
  CHECK(dp_potential_from_json("{", &q) == DP_INVALID_ARGUMENT);
  CHECK(std::string(dp_last_error()).size() > 0);
  CHECK(dp_potential_from_file("/nonexistent/potential.json", &q) != DP_OK);
  dp_potential_free(p);

  CStr report;
  const fs::path dir = scratch("c_run");
  CHECK(dp_run((kSource / "configs/square_threshold.json").c_str(), dir.c_str(), &report.p) ==
        DP_PRECONDITION_FAILED);
  REQUIRE(report.p);
  const json r = json::parse(report.p);
  CHECK(r.at("files").size() == 1);
  CHECK(r.at("regime_text").get<std::string>().size() > 0);
  CHECK(std::string(dp_version()).size() > 0);
}
