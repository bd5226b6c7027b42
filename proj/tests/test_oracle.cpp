#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "decay_povm/coefficients.hpp"
#include "decay_povm/detection.hpp"
#include "decay_povm/errors.hpp"
#include "decay_povm/oracle.hpp"

using namespace decay_povm;

namespace {

struct DecayRun {
  PotentialSpec spec = make_delta_barrier(66, 6.5, 1);
  double k0 = 2.0, sigma = 0.16, L = 132.0;
  InitialState state = make_gaussian_state(spec, k0, sigma);
  BarrierCoefficients c = coefficients_at(spec, k0);
  double Gamma = k0 * c.T2 / c.beta;
  std::vector<double> t = uniform_grid(0, 1.5 / Gamma, 1500);
  OracleResult oracle = evolve_and_observe(spec, state, L, t);

  static const DecayRun& get() {
    static const DecayRun instance;
    return instance;
  }
};

// Flux integrated over consecutive revival periods starting half a period before t_first.
std::pair<std::vector<double>, std::vector<double>> period_areas(const std::vector<double>& t,
                                                                 const std::vector<double>& j, double t_first,
                                                                 double period) {
  std::vector<double> mid, area;
  for (double lo = t_first - 0.5 * period; lo + period <= t.back(); lo += period) {
    double acc = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i)
      if (t[i] > lo && t[i] <= lo + period) acc += 0.5 * (j[i] + j[i - 1]) * (t[i] - t[i - 1]);
    mid.push_back(lo + 0.5 * period);
    area.push_back(acc);
  }
  return {mid, area};
}

}  // namespace

TEST_CASE("free packet current peaks at the ballistic arrival time") {
  const PotentialSpec spec = make_free(220, 221, 1);
  const InitialState st = make_gaussian_state(spec, 2.0, 0.05);
  const std::vector<double> t = uniform_grid(55, 155, 1001);
  const OracleResult o = evolve_and_observe(spec, st, 320, t);
  std::size_t im = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (o.current.p[i] > o.current.p[im]) im = i;
  CHECK(std::abs(t[im] - (320 - 110) / 2.0) <= 2 * (t[1] - t[0]));
  CHECK(trapezoid(t, o.current.p) == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(o.grid.norm_drift < 1e-6);
}

TEST_CASE("norm bookkeeping with the absorber") {
  const DecayRun& r = DecayRun::get();
  CHECK(r.oracle.grid.norm_drift < 1e-6);
  CHECK(r.oracle.grid.absorbed > 0.5);
  CHECK(r.oracle.grid.absorbed < 1.0);
  CHECK(r.oracle.grid.detector_position == doctest::Approx(r.L).epsilon(1e-3));
}

TEST_CASE("grid survival matches the spectral quadrature") {
  const DecayRun& r = DecayRun::get();
  const SurvivalSeries q = survival_quadrature(r.spec, r.state, r.t);
  double worst = 0.0;
  for (std::size_t i = 0; i < r.t.size(); ++i) worst = std::max(worst, std::abs(q.w[i] - r.oracle.survival.w[i]));
  CHECK(r.oracle.survival.w[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(worst < 0.02);
}

TEST_CASE("flux envelope decays at the detection decay rate") {
  const DecayRun& r = DecayRun::get();
  const double t0 = first_detection_time(r.c, travel_distance(r.state, r.L), 1);
  const auto [mid, area] = period_areas(r.t, r.oracle.current.p, t0, r.c.beta / r.k0);
  REQUIRE(mid.size() > 12);
  CHECK(-log_linear_fit(mid, area).slope == doctest::Approx(r.Gamma).epsilon(0.10));
}

TEST_CASE("flux peaks line up with detection-probability peaks") {
  const DecayRun& r = DecayRun::get();
  const double period = r.c.beta / r.k0, width = 1.0 / (2 * r.k0 * r.sigma);
  DetectionConfig cfg;
  cfg.L = 10 * r.spec.b();
  const double t_first = first_detection_time(r.c, travel_distance(r.state, cfg.L), 1);
  cfg.t_grid = uniform_grid(t_first - 0.5 * period, t_first + 4.5 * period, 1001);
  const ProbabilitySeries p = p_quadrature(r.spec, r.state, cfg);
  const double kmax = r.k0 + 8 * r.sigma;
  GridConfig coarse;
  coarse.dx = 0.1 / kmax;
  coarse.dt = 0.2 / (kmax * kmax);
  const OracleResult o = evolve_and_observe(r.spec, r.state, cfg.L, cfg.t_grid, coarse);
  // spread arrivals carry several interference maxima per period; each maximum of p above a tenth of
  // the largest must have a flux maximum within one peak width
  const auto pp = find_peaks(p.p), jp = find_peaks(o.current.p);
  double top = 0.0;
  for (double v : p.p) top = std::max(top, v);
  int matched = 0;
  for (auto i : pp) {
    if (p.p[i] < 0.1 * top) continue;
    double nearest = 1e300;
    for (auto j : jp) nearest = std::min(nearest, std::abs(cfg.t_grid[j] - cfg.t_grid[i]));
    CAPTURE(cfg.t_grid[i]);
    CHECK(nearest <= width);
    ++matched;
  }
  CHECK(matched >= 5);
}

TEST_CASE("halving dx and dt changes the observables by under one percent") {
  const DecayRun& r = DecayRun::get();
  GridConfig g;
  g.convergence_check = true;
  const OracleResult o = evolve_and_observe(r.spec, r.state, r.L, uniform_grid(0, 130, 261), g);
  REQUIRE(o.survival_change);
  REQUIRE(o.current_change);
  CHECK(*o.survival_change < 0.01);
  CHECK(*o.current_change < 0.01);
}

TEST_CASE("oracle input validation") {
  const PotentialSpec spec = make_delta_barrier(66, 6.5, 1);
  const InitialState st = make_gaussian_state(spec, 2.0, 0.16);
  GridConfig tiny;
  tiny.max_cells = 100;
  CHECK_THROWS_AS(evolve_and_observe(spec, st, 132, {0.0, 1.0}, tiny), ConfigError);
  CHECK_THROWS_AS(evolve_and_observe(spec, st, 60, {0.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(evolve_and_observe(spec, st, 132, {}), InvalidArgument);
  CHECK_THROWS_AS(evolve_and_observe(spec, st, 132, {1.0, 0.5}), InvalidArgument);
  GridConfig overlap;
  overlap.x_max = 140;
  overlap.absorber_width = 20;
  CHECK_THROWS_AS(evolve_and_observe(spec, st, 132, {0.0, 1.0}, overlap), ConfigError);
}
