#include "decay_povm/coefficients.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "decay_povm/errors.hpp"

namespace decay_povm {

namespace {

struct LogPair {
  cplx logT;
  cplx logR;
};

// log T and log R at k0 + j h for j = -2..2, phases continued from the center point.
std::array<LogPair, 5> stencil(const PotentialSpec& spec, double k0, double h) {
  std::array<LogPair, 5> out;
  const ScatteringData c = amplitudes(spec, k0);
  const double argT0 = std::arg(c.T);
  const double argR0 = std::arg(c.R);
  for (int j = -2; j <= 2; ++j) {
    const ScatteringData sd = (j == 0) ? c : amplitudes(spec, k0 + j * h);
    const double aT = nearest_branch(std::arg(sd.T), argT0);
    const double aR = (std::abs(sd.R) > 0.0) ? nearest_branch(std::arg(sd.R), argR0) : 0.0;
    out[j + 2].logT = {std::log(std::abs(sd.T)), aT};
    // log|R| of a nearly opaque barrier is -|T|^2/2 to leading order; taking it from |T| keeps
    // its relative precision where 1 - |R| is below roundoff
    const double t2 = std::norm(sd.T);
    const double logAbsR = t2 < 0.5 ? 0.5 * std::log1p(-t2) : std::log(std::abs(sd.R));
    out[j + 2].logR = {std::abs(sd.R) > 0.0 ? logAbsR : 0.0, aR};
  }
  return out;
}

template <class Get>
cplx first_derivative(const std::array<LogPair, 5>& f, double h, Get get) {
  const cplx d1 = (get(f[3]) - get(f[1])) / (2.0 * h);
  const cplx d2 = (get(f[4]) - get(f[0])) / (4.0 * h);
  return (4.0 * d1 - d2) / 3.0;
}

template <class Get>
cplx second_derivative(const std::array<LogPair, 5>& f, double h, Get get) {
  return (-get(f[4]) + 16.0 * get(f[3]) - 30.0 * get(f[2]) + 16.0 * get(f[1]) - get(f[0])) / (12.0 * h * h);
}

double relative_gap(double x, double y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale > 0.0 ? std::abs(x - y) / scale : 0.0;
}

}  // namespace

double threshold_exponent(const PotentialSpec& spec, double k_char, double lo, double hi, int points) {
  if (!spec.has_barrier()) return 0.0;
  if (points < 2 || !(hi > lo) || !(lo > 0.0)) throw InvalidArgument("threshold_exponent: bad window");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < points; ++i) {
    const double u = std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1);
    const double k = k_char * std::exp(u);
    const double y = std::log(std::abs(amplitudes(spec, k).T));
    sx += u;
    sy += y;
    sxx += u * u;
    sxy += u * y;
  }
  const double n = points;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

BarrierCoefficients coefficients_at(const PotentialSpec& spec, double k0, const CoefficientOptions& opts) {
  if (!(k0 > 0.0) || !std::isfinite(k0)) throw InvalidArgument("coefficients_at: k0 must be positive");
  const double M = spec.mass();
  for (const Segment& sg : spec.segments()) {
    const double kth2 = 2.0 * M * sg.V;
    if (kth2 > 0.0 && std::abs(k0 * k0 - kth2) < 1e-6 * kth2)
      throw PreconditionError("coefficients_at: k0 is at a segment threshold");
  }
  const ScatteringData sd = amplitudes(spec, k0);
  if (std::abs(1.0 + sd.R) < 1e-6) throw PreconditionError("coefficients_at: k0 is at a resonance (1+R ~ 0)");

  BarrierCoefficients c;
  c.k0 = k0;
  c.T = sd.T;
  c.R = sd.R;
  c.T2 = std::norm(sd.T);
  c.R2 = std::norm(sd.R);
  c.argR = std::arg(sd.R);

  double threshold_gap = k0;
  for (const Segment& sg : spec.segments()) {
    const double kth = std::sqrt(2.0 * M * sg.V);
    if (kth > 0.0) threshold_gap = std::min(threshold_gap, std::abs(k0 - kth));
  }

  // a probe at a tiny step gives the variation length of the amplitudes; the final first
  // derivatives use a step that is small against it but large enough to keep roundoff at 1e-12
  const auto derive = [&](double h) {
    const auto f = stencil(spec, k0, h);
    const cplx dlogT = first_derivative(f, h, [](const LogPair& p) { return p.logT; });
    const cplx dlogR = first_derivative(f, h, [](const LogPair& p) { return p.logR; });
    c.lambda = dlogT.imag();
    c.w = dlogT.real();
    c.xi = 0.5 / k0 + c.w;
    c.beta = dlogR.imag();
    c.s = dlogR.real();
  };
  derive(std::max(1e-6 * k0, 1e-9));
  const double scale = 1.0 / (std::abs(c.lambda) + std::abs(c.beta) + std::abs(c.xi) + std::abs(c.s) + 1.0 / k0);
  derive(std::max(std::min(2e-4 * std::min(k0, scale), 0.05 * threshold_gap), 1e-9));

  // second derivatives need a coarser step still
  const double h2 = std::min(2e-3 * std::min(k0, scale), 0.2 * threshold_gap);
  const auto f2 = stencil(spec, k0, h2);
  c.d2logT = second_derivative(f2, h2, [](const LogPair& p) { return p.logT; });
  c.d2logR = second_derivative(f2, h2, [](const LogPair& p) { return p.logR; });

  for (double v : {c.lambda, c.w, c.beta, c.s, c.d2logT.real(), c.d2logT.imag(), c.d2logR.real(),
                   c.d2logR.imag()})
    if (!std::isfinite(v)) throw NumericalError("coefficients_at: non-finite derivative");

  if (c.R2 > 1e-12 && c.T2 > 0.0) {
    const double s_pred = -(c.xi - 0.5 / k0) * c.T2 / c.R2;
    c.ident1_residual = relative_gap(c.s, s_pred);
  }
  c.symmetric = spec.is_symmetric();
  if (c.symmetric && spec.has_barrier()) {
    c.symmetric_residual = relative_gap(c.beta, c.lambda + 2.0 * spec.a() + spec.width());
  }

  const double kc = spec.characteristic_k();
  c.alpha = threshold_exponent(spec, kc > 0.0 ? std::min(k0, kc) : k0, opts.alpha_window_lo,
                               opts.alpha_window_hi, opts.alpha_points);
  return c;
}

double first_detection_time(const BarrierCoefficients& c, double L, double M) {
  if (!(L > 0.0)) throw InvalidArgument("first_detection_time: L must be positive");
  return M * (L + c.lambda) / c.k0;
}

double crossing_time(const BarrierCoefficients& c, const PotentialSpec& spec) {
  if (!spec.is_symmetric()) throw PreconditionError("crossing_time: barrier is not mirror symmetric");
  const double M = spec.mass();
  if (!spec.has_barrier()) return M * spec.width() / c.k0;
  return M * c.beta / c.k0 - 2.0 * M * spec.a() / c.k0;
}

}  // namespace decay_povm
