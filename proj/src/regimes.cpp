#include "decay_povm/regimes.hpp"

#include <cmath>

#include "decay_povm/errors.hpp"

namespace decay_povm {

namespace {

double ratio(double num, double den) {
  num = std::abs(num);
  den = std::abs(den);
  if (num == 0.0) return 0.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

int severity(Verdict v) {
  switch (v) {
    case Verdict::kFineStructure: return 4;
    case Verdict::kExpansionInvalid: return 3;
    case Verdict::kInterference: return 2;
    case Verdict::kMultiChannel: return 1;
    case Verdict::kExponential: return 0;
  }
  return 0;
}

nlohmann::json check_json(const Check& c) {
  nlohmann::json j;
  j["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json("inf");
  j["pass"] = c.pass;
  return j;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kExponential: return "exponential";
    case Verdict::kFineStructure: return "fine-structure";
    case Verdict::kInterference: return "interference";
    case Verdict::kMultiChannel: return "multi-channel";
    case Verdict::kExpansionInvalid: return "expansion-invalid";
  }
  return "unknown";
}

bool RegimeReport::extra_pass() const {
  for (const Check& c : extra)
    if (!c.pass) return false;
  return true;
}

RegimeReport classify_at(const PotentialSpec& spec, double k0, double sigma, double travel,
                         const RegimeThresholds& th) {
  if (!(sigma > 0.0)) throw InvalidArgument("classify: sigma must be positive");
  RegimeReport r;
  r.k0 = k0;
  r.sigma = sigma;
  r.coeffs = coefficients_at(spec, k0);
  const BarrierCoefficients& c = r.coeffs;

  r.cond1 = {c.T2, c.T2 < th.cond1};
  r.cond2 = {sigma * c.beta, sigma * c.beta > th.cond2};
  r.cond3 = {sigma * std::abs(c.w), sigma * std::abs(c.w) < th.cond3};
  const double e1 = ratio(sigma * c.d2logT.real(), c.w);
  const double e2 = ratio(sigma * c.d2logT.imag(), c.lambda);
  const double e3 = ratio(sigma * c.d2logR.real(), c.s);
  const double e4 = ratio(sigma * c.d2logR.imag(), c.beta);
  r.extra = {Check{e1, e1 < th.extra}, Check{e2, e2 < th.extra}, Check{e3, e3 < th.extra},
             Check{e4, e4 < th.extra}};
  const double po = (c.w == 0.0) ? std::numeric_limits<double>::infinity() : c.beta / std::abs(c.w);
  r.potential_only = {po, po > th.potential_only};

  const double M = spec.mass();
  if (c.T2 > 0.0 && c.beta > 0.0) r.Gamma = k0 * c.T2 / (M * c.beta);
  r.t0 = first_detection_time(c, travel, M);
  r.correction_factor = 1.0 + 2.0 * std::exp(-sigma * sigma * c.beta * c.beta);

  if (!r.cond1.pass) {
    r.verdict = Verdict::kFineStructure;
  } else if (!r.extra_pass()) {
    r.verdict = Verdict::kExpansionInvalid;
  } else if (!r.cond2.pass) {
    r.verdict = Verdict::kInterference;
  } else if (!r.cond3.pass) {
    r.verdict = Verdict::kMultiChannel;
  } else {
    r.verdict = Verdict::kExponential;
  }
  if (r.verdict == Verdict::kExponential && r.Gamma) {
    const double sw = sigma * c.w;
    r.breakdown_time = r.t0 + 1.0 / (*r.Gamma * sw * sw);
  }
  return r;
}

std::vector<RegimeReport> classify(const PotentialSpec& spec, const InitialState& state, double L,
                                   const RegimeThresholds& th) {
  std::vector<RegimeReport> out;
  for (const StateComponent& comp : state.components())
    out.push_back(classify_at(spec, comp.k, state.sigma(), L - state.center(), th));
  return out;
}

Verdict combined_verdict(const std::vector<RegimeReport>& reports) {
  Verdict v = Verdict::kExponential;
  for (const RegimeReport& r : reports)
    if (severity(r.verdict) > severity(v)) v = r.verdict;
  return v;
}

nlohmann::json to_json(const RegimeReport& r) {
  nlohmann::json j;
  j["k0"] = r.k0;
  j["sigma"] = r.sigma;
  j["cond1_T2"] = check_json(r.cond1);
  j["cond2_sigma_beta"] = check_json(r.cond2);
  j["cond3_sigma_w"] = check_json(r.cond3);
  j["extra"] = nlohmann::json::array();
  for (const Check& c : r.extra) j["extra"].push_back(check_json(c));
  j["potential_only"] = check_json(r.potential_only);
  j["Gamma"] = r.Gamma ? nlohmann::json(*r.Gamma) : nlohmann::json(nullptr);
  j["t0"] = r.t0;
  j["breakdown_time"] = r.breakdown_time ? nlohmann::json(*r.breakdown_time) : nlohmann::json(nullptr);
  j["correction_factor"] = r.correction_factor;
  j["verdict"] = to_string(r.verdict);
  const BarrierCoefficients& c = r.coeffs;
  j["coefficients"] = {{"lambda", c.lambda}, {"xi", c.xi}, {"beta", c.beta}, {"s", c.s},
                       {"w", c.w},           {"argR", c.argR}, {"alpha", c.alpha}, {"T2", c.T2}};
  return j;
}

LongBarrierReport longbarrier_conditions(double a, double d, double V0, double M, double k0, double sigma,
                                         const RegimeThresholds& th) {
  if (!(a > 0.0) || d < 0.0 || !(V0 > 0.0) || !(M > 0.0) || !(k0 > 0.0) || !(sigma > 0.0))
    throw InvalidArgument("longbarrier_conditions: bad parameters");
  LongBarrierReport r;
  r.sigma_a = sigma * a;
  if (d == 0.0) {
    r.delta_rules = true;
    const double kappa = M * V0;
    const double beta = 2.0 * a + 1.0 / kappa;
    r.sigma_a_pass = sigma * beta > th.cond2;
    r.multi_channel_pass = sigma / k0 < th.cond3;
    r.T2_long = k0 * k0 / (k0 * k0 + kappa * kappa);
    r.cond1_pass = r.T2_long < th.cond1;
    r.reflection_curvature = sigma * std::abs(1.0 / k0 - 2.0 * k0 / (k0 * k0 + kappa * kappa));
    r.reflection_curvature_pass = r.reflection_curvature < th.extra;
    r.predicted_exponential =
        r.sigma_a_pass && r.multi_channel_pass && r.cond1_pass && r.reflection_curvature_pass;
    r.classify_verdict = classify_at(make_delta_barrier(a, kappa, M), k0, sigma, 10.0 * a, th).verdict;
  } else {
    const double g2 = 2.0 * M * V0 - k0 * k0;
    if (g2 > 0.0) {
      const double g = std::sqrt(g2);
      r.gamma = g;
      r.k0_over_gamma = k0 / g;
      r.k0_over_gamma_small = r.k0_over_gamma < 1.0;
      r.sigma_d_k0_over_gamma = sigma * d * k0 / g;
      const double beta_long = 2.0 * (a + 1.0 / g);
      const double w_long = 1.0 / k0 + d * k0 / g - k0 / g2;
      const double t_long = std::exp(-g * d) * 4.0 * k0 * g / (g2 + k0 * k0);
      r.sigma_a_pass = sigma * beta_long > th.cond2;
      r.multi_channel_pass = sigma * std::abs(w_long) < th.cond3;
      r.T2_long = t_long * t_long;
      r.cond1_pass = r.T2_long < th.cond1;
      const double dw = -1.0 / (k0 * k0) + d / g + d * k0 * k0 / (g2 * g) - 1.0 / g2 - 2.0 * k0 * k0 / (g2 * g2);
      r.reflection_curvature = sigma * std::abs(2.0 * w_long + dw / w_long);
      r.reflection_curvature_pass = r.reflection_curvature < th.extra;
      r.predicted_exponential =
          r.sigma_a_pass && r.multi_channel_pass && r.cond1_pass && r.reflection_curvature_pass;
    } else {
      r.k0_over_gamma = std::numeric_limits<double>::infinity();
      r.predicted_exponential = false;
    }
    r.classify_verdict = classify_at(make_square_barrier(a, d, V0, M), k0, sigma, 10.0 * (a + d), th).verdict;
  }
  r.consistent = r.predicted_exponential == (r.classify_verdict == Verdict::kExponential);
  return r;
}

nlohmann::json to_json(const LongBarrierReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf"); };
  return {{"delta_rules", r.delta_rules},
          {"gamma", num(r.gamma)},
          {"sigma_a", num(r.sigma_a)},
          {"sigma_a_pass", r.sigma_a_pass},
          {"sigma_d_k0_over_gamma", num(r.sigma_d_k0_over_gamma)},
          {"multi_channel_pass", r.multi_channel_pass},
          {"k0_over_gamma", num(r.k0_over_gamma)},
          {"k0_over_gamma_small", r.k0_over_gamma_small},
          {"reflection_curvature", num(r.reflection_curvature)},
          {"reflection_curvature_pass", r.reflection_curvature_pass},
          {"T2_long", num(r.T2_long)},
          {"cond1_pass", r.cond1_pass},
          {"predicted_exponential", r.predicted_exponential},
          {"classify_verdict", to_string(r.classify_verdict)},
          {"consistent", r.consistent}};
}

}  // namespace decay_povm
