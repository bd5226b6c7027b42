#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "decay_povm/coefficients.hpp"
#include "decay_povm/potential.hpp"
#include "decay_povm/state.hpp"

namespace decay_povm {

struct RegimeThresholds {
  double cond1 = 0.1;           // |T|^2 below
  double cond2 = 3.0;           // sigma beta above
  double cond3 = 0.1;           // sigma |w| below
  double extra = 0.1;           // second-derivative ratios below
  double potential_only = 10.0; // beta / |Re dlogT| above
};

struct Check {
  double value = 0.0;
  bool pass = false;
};

enum class Verdict { kExponential, kFineStructure, kInterference, kMultiChannel, kExpansionInvalid };

const char* to_string(Verdict v);

struct RegimeReport {
  double k0 = 0.0;
  double sigma = 0.0;
  Check cond1;
  Check cond2;
  Check cond3;
  std::array<Check, 4> extra;
  Check potential_only;
  std::optional<double> Gamma;
  double t0 = 0.0;
  std::optional<double> breakdown_time;
  double correction_factor = 1.0;  // 1 + 2 exp(-sigma^2 beta^2)
  Verdict verdict = Verdict::kFineStructure;
  BarrierCoefficients coeffs;

  bool extra_pass() const;
};

// travel is the distance from the packet center to the detector.
RegimeReport classify_at(const PotentialSpec& spec, double k0, double sigma, double travel,
                         const RegimeThresholds& th = {});
// One report per state component; L is the detector position.
std::vector<RegimeReport> classify(const PotentialSpec& spec, const InitialState& state, double L,
                                   const RegimeThresholds& th = {});
// The most severe verdict over components, using the verdict precedence.
Verdict combined_verdict(const std::vector<RegimeReport>& reports);

nlohmann::json to_json(const RegimeReport& r);

struct LongBarrierReport {
  bool delta_rules = false;  // d == 0: V0 read as the delta area, kappa = M V0
  double gamma = 0.0;
  double sigma_a = 0.0;
  bool sigma_a_pass = false;          // sigma * beta_long > cond2, beta_long = 2(a + 1/gamma)
  double sigma_d_k0_over_gamma = 0.0;
  bool multi_channel_pass = false;    // sigma * w_long < cond3, w_long = 1/k0 + d k0 / gamma - k0 / gamma^2
  double k0_over_gamma = 0.0;
  bool k0_over_gamma_small = false;   // k0/gamma < 1
  double reflection_curvature = 0.0;  // sigma |d log|s_long| / dk|, with s_long = -|T_long|^2 w_long
  bool reflection_curvature_pass = false;
  double T2_long = 0.0;
  bool cond1_pass = false;
  bool predicted_exponential = false;
  Verdict classify_verdict = Verdict::kFineStructure;
  bool consistent = false;
};

LongBarrierReport longbarrier_conditions(double a, double d, double V0, double M, double k0, double sigma,
                                         const RegimeThresholds& th = {});

nlohmann::json to_json(const LongBarrierReport& r);

}  // namespace decay_povm
