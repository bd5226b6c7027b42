#include "decay_povm/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "decay_povm/errors.hpp"
#include "decay_povm/parallel.hpp"

namespace decay_povm {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
const double kSqrtPi = std::sqrt(kPi);

double single_k(const InitialState& state, const char* who) {
  if (state.components().size() != 1)
    throw PreconditionError(std::string(who) + ": requires a single-component state");
  return state.components()[0].k;
}

// Coefficients at k0 with the expansion-validity conditions enforced.
RegimeReport require_expansion(const PotentialSpec& spec, const InitialState& state, double k0,
                               const DetectionConfig& cfg, const char* who) {
  RegimeReport r = classify_at(spec, k0, state.sigma(), travel_distance(state, cfg.L), cfg.thresholds);
  if (!r.extra_pass())
    throw PreconditionError(std::string(who) + ": second-derivative validity conditions fail at k0 = " +
                            format_double(k0));
  return r;
}

std::vector<double> checked_grid(const DetectionConfig& cfg) {
  if (cfg.t_grid.empty()) throw InvalidArgument("detection: empty time grid");
  return cfg.t_grid;
}

}  // namespace

double travel_distance(const InitialState& state, double L) { return L - state.center(); }

void validate(const PotentialSpec& spec, const DetectionConfig& cfg) {
  if (!(cfg.L >= 10.0 * spec.b())) throw InvalidArgument("detection: L must be at least 10 b");
  for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) {
    if (!(cfg.t_grid[i] >= 0.0)) throw InvalidArgument("detection: times must be non-negative");
    if (i > 0 && !(cfg.t_grid[i] > cfg.t_grid[i - 1])) throw InvalidArgument("detection: times must increase");
  }
  if (cfg.n_cap < 1) throw InvalidArgument("detection: n_cap must be positive");
}

std::vector<double> default_time_grid(const PotentialSpec& spec, const InitialState& state, double L,
                                      std::size_t max_samples) {
  const double M = spec.mass();
  double k0 = state.components()[0].k;
  for (const auto& c : state.components()) k0 = std::min(k0, c.k);
  const double sigma = state.sigma();
  const double width = M / (2.0 * k0 * sigma);
  const double travel = travel_distance(state, L);
  double t0 = M * travel / k0;
  double extent = 0.0;
  if (spec.has_barrier()) {
    const BarrierCoefficients c = coefficients_at(spec, k0);
    t0 = first_detection_time(c, travel, M);
    const double Gamma = k0 * c.T2 / (M * c.beta);
    extent = std::max(30.0 / Gamma, 50.0 * M * c.beta / k0);
  }
  double lo = std::max(0.8 * t0, 0.0);
  double hi = t0 + extent;
  if (!spec.has_barrier()) {
    const double fast = k0 + 8.0 * sigma, slow = std::max(k0 - 8.0 * sigma, 0.25 * k0);
    lo = std::max(M * travel / fast - 10.0 * width, 0.0);
    hi = M * travel / slow + 10.0 * width;
  }
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / (width / 10.0))) + 1;
  if (n > max_samples) throw ConfigError("default time grid needs " + std::to_string(n) + " samples");
  return uniform_grid(lo, hi, n);
}

std::vector<KInterval> state_windows(const InitialState& state, const QuadratureConfig& q) {
  const double s = state.sigma();
  std::vector<KInterval> iv;
  double kmin = state.components()[0].k;
  for (const auto& c : state.components()) {
    iv.push_back({std::max(c.k - q.window_sigmas * s, 1e-12 * c.k), c.k + q.window_sigmas * s, false});
    kmin = std::min(kmin, c.k);
  }
  std::sort(iv.begin(), iv.end(), [](const KInterval& l, const KInterval& r) { return l.lo < r.lo; });
  std::vector<KInterval> merged;
  for (const KInterval& x : iv) {
    if (!merged.empty() && x.lo <= merged.back().hi)
      merged.back().hi = std::max(merged.back().hi, x.hi);
    else
      merged.push_back(x);
  }
  if (q.infrared) {
    const double split = std::max(merged.front().lo, 0.2 * kmin);
    const double top = merged.back().hi;
    return {KInterval{0.0, std::min(split, top), true}, KInterval{std::min(split, top), top, false}};
  }
  return merged;
}

std::vector<cplx> z_quadrature(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg,
                               QuadratureReport* report) {
  validate(spec, cfg);
  const double M = spec.mass();
  const double sigma = state.sigma();
  const cplx C = -kI / (std::pow(kPi, 0.75) * std::sqrt(2.0 * M * sigma));
  const double L = cfg.L;
  auto integrand = [&](double k) {
    const HalfLineMode hm = half_line_mode(spec, k);
    return C * std::sqrt(k) * hm.tau * std::exp(kI * k * L) * state.profile(k);
  };
  const auto windows = state_windows(state, cfg.quadrature);
  QuadratureReport rep;
  auto z = phase_integral(integrand, windows, cfg.t_grid, M, cfg.quadrature, &rep);
  if (report) *report = rep;
  return z;
}

cplx z_quadrature(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg, double t) {
  DetectionConfig one = cfg;
  one.t_grid = {t};
  return z_quadrature(spec, state, one, nullptr).front();
}

ProbabilitySeries p_quadrature(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg,
                               QuadratureReport* report) {
  const auto z = z_quadrature(spec, state, cfg, report);
  std::vector<double> p(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) p[i] = std::norm(z[i]);
  return make_series(cfg.t_grid, std::move(p), "quadrature");
}

SeriesResult p_series(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg) {
  validate(spec, cfg);
  const double k0 = single_k(state, "p_series");
  const RegimeReport reg = require_expansion(spec, state, k0, cfg, "p_series");
  const BarrierCoefficients& c = reg.coeffs;
  const double M = spec.mass();
  const double sigma = state.sigma();
  const double travel = travel_distance(state, cfg.L);
  const auto ts = checked_grid(cfg);

  SeriesResult out;
  const double absR = std::sqrt(c.R2);
  long N = 1;
  if (absR > 0.0) {
    const double need = std::log(cfg.series_tail_eps) / std::log(c.R2);
    N = static_cast<long>(std::ceil(need)) + 1;
  }
  // every peak that arrives inside the grid is kept, whatever its weight
  const double n_last = (k0 * ts.back() / M - travel - c.lambda) / c.beta;
  N = std::max(N, static_cast<long>(std::ceil(std::max(n_last, 0.0))) + 2);
  if (N > cfg.n_cap) {
    out.cap_hit = true;
    N = cfg.n_cap;
    const double x = c.xi + N * c.s;
    out.tail_estimate = std::exp(N * std::log(c.R2) + sigma * sigma * x * x) / (1.0 - c.R2);
    if (out.tail_estimate > 1e-6)
      throw NumericalError("p_series: truncation cap reached with tail estimate " +
                           format_double(out.tail_estimate));
  }
  out.terms = N;

  const double logR = absR > 0.0 ? std::log(absR) : -1e300;
  const double argR = std::arg(-c.R);
  std::vector<double> total(ts.size()), diag(ts.size());
  parallel_for(ts.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t it = b; it < e; ++it) {
      const double t = ts[it];
      const cplx D = 1.0 / (sigma * sigma) + kI * t / M;
      const cplx inv2D = 1.0 / (2.0 * D);
      const double pref = c.T2 * k0 / (kSqrtPi * M * sigma * std::abs(D));
      // terms further than this from the arrival index are below exp(-745)
      const double nc = (k0 * t / M - travel - c.lambda) / c.beta;
      const double dn = 1.5 * std::sqrt(1490.0) * sigma * std::abs(D) / c.beta + 2.0;
      const long n0 = std::max<long>(0, static_cast<long>(std::floor(nc - dn)));
      const long n1 = std::min<long>(N - 1, static_cast<long>(std::ceil(nc + dn)));
      cplx acc{0.0, 0.0};
      double dsum = 0.0;
      for (long n = n0; n <= n1; ++n) {
        const cplx B{c.xi + n * c.s, travel + c.lambda + n * c.beta - k0 * t / M};
        const cplx ex = B * B * inv2D;
        const double mag = ex.real() + n * logR;
        if (mag > -740.0) {
          const cplx term = std::exp(cplx{mag, ex.imag() + n * argR});
          acc += term;
          dsum += std::norm(term);
        }
      }
      total[it] = pref * std::norm(acc);
      diag[it] = pref * dsum;
    }
  });
  out.diagonal = diag;
  out.off_diagonal.resize(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) out.off_diagonal[i] = total[i] - diag[i];
  out.series = make_series(ts, std::move(total), "series");
  return out;
}

ProbabilitySeries p_diagonal(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg) {
  validate(spec, cfg);
  const double k0 = single_k(state, "p_diagonal");
  const RegimeReport reg = require_expansion(spec, state, k0, cfg, "p_diagonal");
  const BarrierCoefficients& c = reg.coeffs;
  const double sigma = state.sigma();
  const double sup = sigma * sigma * (c.beta * c.beta - c.s * c.s);
  if (!(sup > 9.0))
    throw PreconditionError("p_diagonal: sigma^2 (beta^2 - s^2) = " + format_double(sup) + " is not above 9");
  const double M = spec.mass();
  const double travel = travel_distance(state, cfg.L);
  const auto ts = checked_grid(cfg);
  const double pref = k0 * sigma * c.T2 / (kSqrtPi * M);
  long N = 1;
  if (c.R2 > 0.0) N = std::min<long>(cfg.n_cap, static_cast<long>(std::ceil(std::log(cfg.series_tail_eps) /
                                                                                std::log(c.R2))) + 1);
  const double n_last = (k0 * ts.back() / M - travel - c.lambda) / c.beta;
  N = std::min<long>(cfg.n_cap, std::max(N, static_cast<long>(std::ceil(std::max(n_last, 0.0))) + 2));
  const double logR2 = c.R2 > 0.0 ? std::log(c.R2) : -1e300;
  std::vector<double> p(ts.size());
  parallel_for(ts.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t it = b; it < e; ++it) {
      const double t = ts[it];
      // only n near the arrival index contribute
      const double nc = (k0 * t / M - travel - c.lambda) / c.beta;
      const double dn = 40.0 / (sigma * c.beta) + 2.0;
      const long n0 = std::max<long>(0, static_cast<long>(std::floor(nc - dn)));
      const long n1 = std::min<long>(N - 1, static_cast<long>(std::ceil(nc + dn)));
      double acc = 0.0;
      for (long n = n0; n <= n1; ++n) {
        const double y = travel + c.lambda + n * c.beta - k0 * t / M;
        const double x = c.xi + n * c.s;
        acc += std::exp(n * logR2 - sigma * sigma * y * y + sigma * sigma * x * x);
      }
      p[it] = pref * acc;
    }
  });
  return make_series(ts, std::move(p), "diagonal");
}

EnvelopeResult p_exponential_envelope(const PotentialSpec& spec, const InitialState& state,
                                      const DetectionConfig& cfg) {
  validate(spec, cfg);
  const double k0 = single_k(state, "p_exponential_envelope");
  const RegimeReport reg =
      classify_at(spec, k0, state.sigma(), travel_distance(state, cfg.L), cfg.thresholds);
  if (reg.verdict != Verdict::kExponential)
    throw PreconditionError(std::string("p_exponential_envelope: regime is ") + to_string(reg.verdict) +
                            ", not exponential");
  EnvelopeResult out;
  out.Gamma = *reg.Gamma;
  out.t0 = reg.t0;
  const auto ts = checked_grid(cfg);
  std::vector<double> p(ts.size(), 0.0);
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i] >= out.t0) p[i] = out.Gamma * std::exp(-out.Gamma * (ts[i] - out.t0));
  out.series = make_series(ts, std::move(p), "envelope");
  return out;
}

LongtimeResult p_longtime(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg,
                          const LongtimeOptions& opts) {
  validate(spec, cfg);
  const double k0 = single_k(state, "p_longtime");
  const BarrierCoefficients c = coefficients_at(spec, k0);
  const double sigma = state.sigma();
  const double M = spec.mass();
  const auto ts = checked_grid(cfg);

  auto safe_denominator = [&](cplx X) {
    // |1 + R exp(X)|^2 without overflow
    if (X.real() > 300.0) return std::exp(2.0 * X.real() + std::log(std::max(c.R2, 1e-300)));
    return std::norm(1.0 + c.R * std::exp(X));
  };
  const double den_printed = safe_denominator(2.0 * k0 * cplx{c.beta, -c.s});
  const double den_phase = safe_denominator(cplx{2.0 * k0 * c.s, 2.0 * k0 * c.beta});
  const double den_rederived = safe_denominator(-k0 * cplx{c.s, c.beta});
  std::vector<double> p1(ts.size()), p2(ts.size()), p3(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    p1[i] = 2.0 * k0 * c.T2 / (sigma * den_printed * t);
    p2[i] = 2.0 * k0 * c.T2 / (sigma * den_phase * t);
    p3[i] = k0 * c.T2 * std::exp(-2.0 * k0 * c.xi) / (kSqrtPi * sigma * den_rederived * t);
  }
  LongtimeResult out;
  out.printed = make_series(ts, std::move(p1), "longtime_printed");
  out.phase = make_series(ts, std::move(p2), "longtime_phase");
  out.rederived = make_series(ts, std::move(p3), "longtime_rederived");
  out.exponent = 1.5 + c.alpha;

  if (opts.fit) {
    DetectionConfig fc = cfg;
    fc.quadrature.infrared = true;
    const double unit = M / (sigma * sigma);
    fc.t_grid = log_grid(opts.fit_lo * unit, opts.fit_hi * unit, static_cast<std::size_t>(opts.fit_points));
    const auto z = z_quadrature(spec, state, fc, &out.fit_report);
    std::vector<double> p(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) p[i] = std::norm(z[i]);
    out.fitted_exponent = -log_log_fit(fc.t_grid, p).slope;
    out.fit_samples = make_series(fc.t_grid, std::move(p), "longtime_quadrature");
  }
  return out;
}

BeatsResult p_beats(const PotentialSpec& spec, const InitialState& state, const DetectionConfig& cfg) {
  validate(spec, cfg);
  if (state.components().size() != 2) throw PreconditionError("p_beats: requires a two-component state");
  const double sigma = state.sigma();
  const auto& comp = state.components();
  const double k1 = comp[0].k, k2 = comp[1].k;
  const double q = k1 - k2;
  if (!(std::abs(q) > 3.0 * sigma)) throw PreconditionError("p_beats: |k1 - k2| must exceed 3 sigma");
  const RegimeReport r1 = require_expansion(spec, state, k1, cfg, "p_beats");
  const RegimeReport r2 = require_expansion(spec, state, k2, cfg, "p_beats");
  const BarrierCoefficients& c1 = r1.coeffs;
  const BarrierCoefficients& c2 = r2.coeffs;
  const double M = spec.mass();
  const double travel = travel_distance(state, cfg.L);
  const double k0 = 0.5 * (k1 + k2);
  const auto ts = checked_grid(cfg);
  const cplx w1 = comp[0].weight, w2 = comp[1].weight;

  auto terms_for = [&](double R2) {
    if (R2 <= 0.0) return 1L;
    return std::min<long>(cfg.n_cap, static_cast<long>(std::ceil(std::log(cfg.series_tail_eps) / std::log(R2))) + 1);
  };
  const long N1 = terms_for(c1.R2), N2 = terms_for(c2.R2);
  const double s2 = sigma * sigma;

  BeatsResult out;
  out.diagonal1.assign(ts.size(), 0.0);
  out.diagonal2.assign(ts.size(), 0.0);
  out.cross.assign(ts.size(), 0.0);
  parallel_for(ts.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t it = b; it < e; ++it) {
      const double t = ts[it];
      // only indices whose arrival lies within the Gaussian reach of t contribute
      const double reach = std::sqrt(745.0) / sigma;
      auto index_range = [&](double centre, double spacing, long cap) {
        const double half = reach / spacing + 2.0;
        const long lo = std::max<long>(0, static_cast<long>(std::floor(centre - half)));
        const long hi = std::min<long>(cap - 1, static_cast<long>(std::ceil(centre + half)));
        return std::pair<long, long>{lo, hi};
      };
      auto diagonal_sum = [&](const BarrierCoefficients& c, double k, long N) {
        const auto [lo, hi] = index_range((k * t / M - travel) / c.beta, c.beta, N);
        const double logR2 = std::log(std::max(c.R2, 1e-300));
        double acc = 0.0;
        for (long n = lo; n <= hi; ++n) {
          const double y = travel + n * c.beta - k * t / M;
          const double ex = n * logR2 - s2 * y * y;
          if (ex > -740.0) acc += std::exp(ex);
        }
        return acc;
      };
      const double d1 = diagonal_sum(c1, k1, N1), d2 = diagonal_sum(c2, k2, N2);
      out.diagonal1[it] = std::norm(w1) * k1 * sigma * c1.T2 / (kSqrtPi * M) * d1;
      out.diagonal2[it] = std::norm(w2) * k2 * sigma * c2.T2 / (kSqrtPi * M) * d2;

      cplx acc{0.0, 0.0};
      const double mspread = std::sqrt(1480.0) / (sigma * c2.beta) + 2.0;
      const double logR1 = std::log(std::max(std::abs(c1.R), 1e-300)), logR2 = std::log(std::max(std::abs(c2.R), 1e-300));
      const double arg1 = std::arg(-c1.R), arg2 = std::arg(-std::conj(c2.R));
      const auto [n0, n1] = index_range((k0 * t / M - travel) / c1.beta, 0.5 * c1.beta, N1);
      for (long n = n0; n <= n1; ++n) {
        const double mc = n * c1.beta / c2.beta;
        const long m0 = std::max<long>(0, static_cast<long>(std::floor(mc - mspread)));
        const long m1 = std::min<long>(N2 - 1, static_cast<long>(std::ceil(mc + mspread)));
        for (long m = m0; m <= m1; ++m) {
          const double nb = n * c1.beta, mb = m * c2.beta;
          const double g1 = travel + 0.5 * (nb + mb) - k0 * t / M;
          const double g2 = q * t / M - 0.5 * (nb - mb);
          const double ex = n * logR1 + m * logR2 - s2 * g1 * g1 - s2 * g2 * g2 - 0.5 * s2 * (nb - mb) * (nb - mb);
          if (ex < -740.0) continue;
          acc += std::polar(std::exp(ex), n * arg1 + m * arg2);
        }
      }
      const cplx phase = std::exp(kI * q * (travel - k0 * t / M)) * c1.T * std::conj(c2.T);
      out.cross[it] = 2.0 * (w1 * std::conj(w2) * phase * acc).real() * sigma * std::sqrt(k1 * k2) / (kSqrtPi * M);
    }
  });
  std::vector<double> p(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) p[i] = out.diagonal1[i] + out.diagonal2[i] + out.cross[i];
  out.series = make_series(ts, std::move(p), "beats");
  out.summary.Gamma1 = k1 * c1.T2 / (M * c1.beta);
  out.summary.Gamma2 = k2 * c2.T2 / (M * c2.beta);
  out.summary.q = q;
  out.summary.decoherence_time = M / (std::abs(q) * sigma);
  out.summary.k0 = k0;
  return out;
}

ProbabilitySeries p_semiclassical(const PotentialSpec& spec, const InitialState& state,
                                  const DetectionConfig& cfg) {
  validate(spec, cfg);
  const double k0 = single_k(state, "p_semiclassical");
  const BarrierCoefficients c = coefficients_at(spec, k0);
  const double M = spec.mass();
  const double sigma = state.sigma();
  const double a = spec.a();
  const double travel = travel_distance(state, cfg.L);
  const auto ts = checked_grid(cfg);
  const double pref = c.T2 * std::sqrt(2.0) * k0 * sigma / (kSqrtPi * M);
  long N = 1;
  if (c.R2 > 0.0) N = std::min<long>(cfg.n_cap, static_cast<long>(std::ceil(std::log(cfg.series_tail_eps) /
                                                                                std::log(c.R2))) + 1);
  std::vector<double> p(ts.size());
  for (std::size_t it = 0; it < ts.size(); ++it) {
    const double t = ts[it];
    const double spread = 1.0 + 4.0 * t * t * std::pow(sigma, 4) / (M * M);
    const double coef = 2.0 * k0 * k0 * sigma * sigma / (M * M) / spread;
    double acc = 0.0;
    for (long n = 0; n < N; ++n) {
      const double dt = t - M * (travel + c.lambda + 2.0 * n * a) / k0;
      const double ex = n * std::log(std::max(c.R2, 1e-300)) - coef * dt * dt;
      if (ex > -740.0) acc += std::exp(ex);
    }
    p[it] = pref * acc / std::sqrt(spread);
  }
  return make_series(ts, std::move(p), "semiclassical");
}

}  // namespace decay_povm
