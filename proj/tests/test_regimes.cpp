#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "decay_povm/errors.hpp"
#include "decay_povm/regimes.hpp"
#include "decay_povm/series_tools.hpp"

using namespace decay_povm;

namespace {

bool near_threshold(double value, double threshold) {
  return value > 0.5 * threshold && value < 2.0 * threshold;
}

}  // namespace

TEST_CASE("delta barrier with a wide region I is exponential") {
  // kappa = 10 k0, sigma a = 5, sigma / k0 = 0.05
  const RegimeReport r = classify_at(make_delta_barrier(100, 10, 1), 1.0, 0.05, 1000);
  CHECK(r.verdict == Verdict::kExponential);
  CHECK(r.cond1.value == doctest::Approx(1.0 / 101.0).epsilon(1e-10));
  CHECK(r.cond2.value == doctest::Approx(0.05 * (200 + 10.0 / 101.0)).epsilon(1e-8));
  REQUIRE(r.Gamma);
  CHECK(*r.Gamma == doctest::Approx(r.coeffs.T2 / r.coeffs.beta).epsilon(1e-12));
  REQUIRE(r.breakdown_time);
  CHECK(*r.breakdown_time > r.t0);
  CHECK(r.potential_only.pass);
}

TEST_CASE("square barrier near its top is expansion-invalid") {
  // gamma^2 = sigma k0
  const double k0 = 1.0, sigma = 0.05;
  const double V0 = 0.5 * (k0 * k0 + sigma * k0);
  const RegimeReport r = classify_at(make_square_barrier(200, 10, V0, 1), k0, sigma, 2000);
  CHECK(r.verdict == Verdict::kExpansionInvalid);
  CHECK_FALSE(r.cond3.pass);
  CHECK_FALSE(r.extra_pass());
  CHECK_FALSE(r.breakdown_time);
}

TEST_CASE("free particle fails the first condition") {
  const RegimeReport r = classify_at(make_free(1, 2, 1), 1.0, 0.05, 100);
  CHECK(r.verdict == Verdict::kFineStructure);
  CHECK(r.cond1.value == doctest::Approx(1.0));
  CHECK_FALSE(r.Gamma);
}

TEST_CASE("verdict precedence and invariants over a parameter sweep") {
  int exponential = 0, total = 0;
  for (double a : {1.0, 10.0, 100.0})
    for (double kappa : {0.5, 5.0, 50.0})
      for (double k0 : log_grid(0.2, 5.0, 7))
        for (double sigma : {0.01, 0.05, 0.2}) {
          if (sigma / k0 >= 0.2) continue;
          const RegimeReport r = classify_at(make_delta_barrier(a, kappa, 1), k0, sigma, 20 * a);
          ++total;
          const bool all = r.cond1.pass && r.cond2.pass && r.cond3.pass && r.extra_pass();
          CHECK((r.verdict == Verdict::kExponential) == all);
          CHECK(r.breakdown_time.has_value() == (r.verdict == Verdict::kExponential));
          if (!r.cond1.pass) CHECK(r.verdict == Verdict::kFineStructure);
          else if (!r.extra_pass()) CHECK(r.verdict == Verdict::kExpansionInvalid);
          else if (!r.cond2.pass) CHECK(r.verdict == Verdict::kInterference);
          else if (!r.cond3.pass) CHECK(r.verdict == Verdict::kMultiChannel);
          CHECK(r.correction_factor == doctest::Approx(1 + 2 * std::exp(-std::pow(sigma * r.coeffs.beta, 2))));
          exponential += r.verdict == Verdict::kExponential;
        }
  CHECK(exponential > 0);
  CHECK(exponential < total);
}

TEST_CASE("thresholds are configurable") {
  const PotentialSpec p = make_delta_barrier(100, 10, 1);
  RegimeThresholds th;
  th.cond2 = 20.0;
  CHECK(classify_at(p, 1.0, 0.05, 1000, th).verdict == Verdict::kInterference);
  th = {};
  th.cond3 = 0.01;
  CHECK(classify_at(p, 1.0, 0.05, 1000, th).verdict == Verdict::kMultiChannel);
  th = {};
  th.cond1 = 0.005;
  CHECK(classify_at(p, 1.0, 0.05, 1000, th).verdict == Verdict::kFineStructure);
}

TEST_CASE("raising |T|^2 only moves the verdict away from exponential") {
  // weaker delta strength raises |T|^2 and, with it, the first ratio
  bool left = false;
  double prev_t2 = 0.0;
  for (double kappa : {100.0, 50.0, 20.0, 10.0, 5.0, 3.0, 2.0, 1.0}) {
    const RegimeReport r = classify_at(make_delta_barrier(100, kappa, 1), 1.0, 0.05, 1000);
    CHECK(r.cond1.value > prev_t2);
    prev_t2 = r.cond1.value;
    if (!r.cond1.pass) left = true;
    if (left) CHECK(r.verdict != Verdict::kExponential);
  }
  CHECK(left);
}

TEST_CASE("combined verdict of two components") {
  const PotentialSpec p = make_delta_barrier(100, 10, 1);
  const InitialState st = make_two_gaussian_state(p, 1.0, 12.0, 0.05);
  const auto reports = classify(p, st, 1000);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].verdict == Verdict::kExponential);
  CHECK(reports[1].verdict == Verdict::kFineStructure);
  CHECK(combined_verdict(reports) == Verdict::kFineStructure);
  CHECK(reports[0].t0 == doctest::Approx(first_detection_time(reports[0].coeffs, 950, 1)));
}

TEST_CASE("report serialization") {
  const nlohmann::json j = to_json(classify_at(make_delta_barrier(100, 10, 1), 1.0, 0.05, 1000));
  CHECK(j.at("verdict") == "exponential");
  CHECK(j.at("extra").size() == 4);
  CHECK(j.at("coefficients").contains("beta"));
  CHECK(j.at("Gamma").is_number());
}

TEST_CASE("long barrier rules") {
  SUBCASE("opaque long barrier, sigma a = 5, k0 / gamma = 0.1") {
    const double k0 = 1, g = 10, V0 = 0.5 * (g * g + k0 * k0);
    const LongBarrierReport r = longbarrier_conditions(100, 8 / g, V0, 1, k0, 0.05);
    CHECK(r.sigma_a == doctest::Approx(5.0));
    CHECK(r.k0_over_gamma == doctest::Approx(0.1));
    CHECK(r.sigma_a_pass);
    CHECK(r.multi_channel_pass);
    CHECK(r.predicted_exponential);
    CHECK(r.classify_verdict == Verdict::kExponential);
    CHECK(r.consistent);
  }
  SUBCASE("k0 / gamma = 0.8 fails together with the third condition") {
    const double k0 = 1, g = 1.25, V0 = 0.5 * (g * g + k0 * k0);
    const LongBarrierReport r = longbarrier_conditions(100, 8 / g, V0, 1, k0, 0.05);
    CHECK_FALSE(r.multi_channel_pass);
    const RegimeReport c = classify_at(make_square_barrier(100, 8 / g, V0, 1), k0, 0.05, 10 * (100 + 8 / g));
    CHECK_FALSE(c.cond3.pass);
    CHECK(r.consistent);
  }
  SUBCASE("zero width uses the delta rules") {
    const LongBarrierReport r = longbarrier_conditions(100, 0, 10, 1, 1.0, 0.05);
    CHECK(r.delta_rules);
    CHECK(r.T2_long == doctest::Approx(1.0 / 101.0));
    CHECK(r.classify_verdict == Verdict::kExponential);
    CHECK(r.consistent);
  }
  CHECK_THROWS_AS(longbarrier_conditions(1, 1, 0, 1, 1, 0.05), InvalidArgument);
}

TEST_CASE("closed-form reflection curvature tracks the full fourth-order check on opaque barriers") {
  for (double V0 : {8.0, 32.0})
    for (double d : {3.0, 8.0})
      for (double k0 : {0.5, 1.0, 1.5}) {
        const LongBarrierReport r = longbarrier_conditions(100, d, V0, 1, k0, 0.03);
        const RegimeReport c = classify_at(make_square_barrier(100, d, V0, 1), k0, 0.03, 1030);
        CAPTURE(V0);
        CAPTURE(d);
        CAPTURE(k0);
        CHECK(r.reflection_curvature == doctest::Approx(c.extra[2].value).epsilon(0.05));
      }
}

TEST_CASE("long barrier rules agree with the full classification") {
  int points = 0, agree = 0, far_disagreements = 0;
  for (double V0 : {2.0, 8.0, 32.0, 128.0})
    for (double d : {1.0, 3.0, 8.0})
      for (double k0 : {0.5, 1.0, 1.5})
        for (double sigma : {0.01, 0.03, 0.08}) {
          const double a = 100;
          if (k0 * k0 >= 2 * V0) continue;
          const LongBarrierReport r = longbarrier_conditions(a, d, V0, 1, k0, sigma);
          ++points;
          if (r.consistent) {
            ++agree;
            continue;
          }
          const RegimeReport c = classify_at(make_square_barrier(a, d, V0, 1), k0, sigma, 10 * (a + d));
          const RegimeThresholds th;
          const bool soft = near_threshold(c.cond1.value, th.cond1) || near_threshold(c.cond2.value, th.cond2) ||
                            near_threshold(c.cond3.value, th.cond3) ||
                            near_threshold(r.T2_long, th.cond1);
          bool extra_soft = false;
          for (const Check& e : c.extra) extra_soft = extra_soft || near_threshold(e.value, th.extra);
          if (!soft && !extra_soft) ++far_disagreements;
        }
  CHECK(points >= 100);
  CHECK(agree >= 0.95 * points);
  CHECK(far_disagreements == 0);
}
