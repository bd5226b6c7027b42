#include "decay_povm/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "decay_povm/errors.hpp"

namespace decay_povm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

TransferMatrix multiply(const TransferMatrix& l, const TransferMatrix& r) {
  TransferMatrix out;
  out.m = {l.m[0] * r.m[0] + l.m[1] * r.m[2], l.m[0] * r.m[1] + l.m[1] * r.m[3],
           l.m[2] * r.m[0] + l.m[3] * r.m[2], l.m[2] * r.m[1] + l.m[3] * r.m[3]};
  out.log_scale = l.log_scale + r.log_scale;
  const double big = std::max({std::abs(out.m[0]), std::abs(out.m[1]), std::abs(out.m[2]), std::abs(out.m[3])});
  if (big > 1e8 || (big < 1e-8 && big > 0.0)) {
    for (double& v : out.m) v /= big;
    out.log_scale += std::log(big);
  }
  return out;
}

void check_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidArgument("scattering: k must be positive and finite");
}

}  // namespace

TransferMatrix segment_matrix(double k, double V, double M, double w) {
  TransferMatrix tm;
  if (w <= 0.0) return tm;
  const double q2 = k * k - 2.0 * M * V;
  const double z = q2 * w * w;
  double c = 0.0;
  double s = 0.0;  // sin(qw)/(qw) or sinh(gw)/(gw)
  if (std::abs(z) < 1e-4) {
    c = 1.0 - z / 2.0 + z * z / 24.0 - z * z * z / 720.0;
    s = 1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0;
  } else if (z > 0.0) {
    const double x = std::sqrt(z);
    c = std::cos(x);
    s = std::sin(x) / x;
  } else {
    const double x = std::sqrt(-z);
    const double e2 = std::exp(-2.0 * x);
    c = 0.5 * (1.0 + e2);
    s = -0.5 * std::expm1(-2.0 * x) / x;
    tm.log_scale = x;
  }
  tm.m = {c, w * s, -q2 * w * s, c};
  return tm;
}

TransferMatrix delta_matrix(double kappa) {
  TransferMatrix tm;
  tm.m = {1.0, 0.0, 2.0 * kappa, 1.0};
  return tm;
}

TransferMatrix barrier_matrix(const PotentialSpec& spec, double k) {
  std::vector<double> stops{spec.a(), spec.b()};
  for (const Segment& s : spec.segments()) {
    stops.push_back(s.x0);
    stops.push_back(s.x1);
  }
  for (const DeltaSpike& d : spec.deltas()) stops.push_back(d.x);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  const double M = spec.mass();
  TransferMatrix total;
  std::size_t next_delta = 0;
  const auto& deltas = spec.deltas();
  for (std::size_t i = 0; i < stops.size(); ++i) {
    const double x = stops[i];
    while (next_delta < deltas.size() && deltas[next_delta].x <= x) {
      total = multiply(delta_matrix(deltas[next_delta].kappa), total);
      ++next_delta;
    }
    if (i + 1 < stops.size()) {
      const double x1 = stops[i + 1];
      const double V = spec.value(0.5 * (x + x1));
      total = multiply(segment_matrix(k, V, M, x1 - x), total);
    }
  }
  return total;
}

ScatteringData amplitudes(const PotentialSpec& spec, double k) {
  check_k(k);
  const TransferMatrix tm = barrier_matrix(spec, k);
  const double m11 = tm.m[0], m12 = tm.m[1], m21 = tm.m[2], m22 = tm.m[3];
  const double a = spec.a();
  const double b = spec.b();
  const cplx ik = kI * k;
  const cplx D = ik * m11 + k * k * m12 - m21 + ik * m22;
  const cplx N = ik * m11 - k * k * m12 - m21 - ik * m22;
  const cplx P = -ik * m11 - k * k * m12 - m21 + ik * m22;

  ScatteringData sd;
  sd.k = k;
  sd.R = -std::exp(2.0 * ik * a) * N / D;
  sd.T = 2.0 * ik * std::exp(ik * (a - b)) * std::exp(-tm.log_scale) / D;
  sd.Rp = -std::exp(-2.0 * ik * b) * P / D;

  // Half-line phase from sin(kr) propagated to r = b; free of the 1/(1+R) cancellation.
  const double psi = m11 * std::sin(k * a) + m12 * k * std::cos(k * a);
  const double dpsi = m21 * std::sin(k * a) + m22 * k * std::cos(k * a);
  const cplx e_itheta = -(ik * psi + dpsi) * std::exp(-2.0 * ik * b) / (ik * psi - dpsi);
  sd.Theta = std::arg(e_itheta);
  sd.theta_pole = std::abs(1.0 + sd.R) < 1e-12;
  if (!std::isfinite(sd.T.real()) || !std::isfinite(sd.R.real()) || !std::isfinite(sd.Rp.real()))
    throw NumericalError("scattering: non-finite amplitude");
  return sd;
}

std::vector<ScatteringData> amplitudes(const PotentialSpec& spec, std::span<const double> ks) {
  std::vector<ScatteringData> out;
  out.reserve(ks.size());
  for (double k : ks) out.push_back(amplitudes(spec, k));
  return out;
}

HalfLineMode half_line_mode(const PotentialSpec& spec, double k) {
  check_k(k);
  const TransferMatrix tm = barrier_matrix(spec, k);
  const double a = spec.a();
  const double b = spec.b();
  const double psi = tm.m[0] * std::sin(k * a) + tm.m[1] * k * std::cos(k * a);
  const double dpsi = tm.m[2] * std::sin(k * a) + tm.m[3] * k * std::cos(k * a);
  const cplx ik = kI * k;
  const cplx denom = ik * psi - dpsi;
  HalfLineMode hm;
  hm.tau = -k * std::exp(-ik * b) * std::exp(-tm.log_scale) / denom;
  hm.exp_itheta = -(ik * psi + dpsi) * std::exp(-2.0 * ik * b) / denom;
  return hm;
}

ScatteringData closed_form_square(double a, double d, double V0, double M, double k) {
  check_k(k);
  if (!(d > 0.0) || V0 < 0.0 || !(M > 0.0)) throw InvalidArgument("closed_form_square: bad parameters");
  const double g2 = 2.0 * M * V0 - k * k;  // gamma^2
  double f = 1.0;   // common rescaling of cosh and sinh/gamma
  double c = 1.0;   // f * cosh(gamma d)
  double sg = d;    // f * sinh(gamma d) / gamma
  if (g2 > 0.0) {
    const double g = std::sqrt(g2);
    const double x = std::exp(-g * d);
    f = 2.0 * x;
    c = 1.0 + x * x;
    sg = (g * d < 1e-12) ? 2.0 * d : -std::expm1(-2.0 * g * d) / g;
  } else if (g2 < 0.0) {
    const double q = std::sqrt(-g2);
    const double qd = q * d;
    c = std::cos(qd);
    sg = (qd < 1e-6) ? d * (1.0 - qd * qd / 6.0) : std::sin(qd) / q;
  }
  const double sum = g2 + k * k;  // gamma^2 + k^2 = 2 M V0
  const cplx bracket = 2.0 * k * c - kI * (g2 - k * k) * sg;
  const double den = 4.0 * k * k * f * f + sum * sum * sg * sg;
  ScatteringData sd;
  sd.k = k;
  sd.T = std::exp(-kI * k * d) * 2.0 * k * f * bracket / den;
  sd.R = -kI * std::exp(2.0 * kI * k * a) * sum * sg * bracket / den;
  sd.Rp = -sd.T * std::conj(sd.R) / std::conj(sd.T);
  const ThetaValue th = theta(sd);
  sd.Theta = th.value;
  sd.theta_pole = th.pole;
  return sd;
}

ScatteringData closed_form_delta(double a, double kappa, double k) {
  check_k(k);
  if (!(kappa > 0.0)) throw InvalidArgument("closed_form_delta: kappa must be positive");
  ScatteringData sd;
  sd.k = k;
  sd.T = 1.0 / (1.0 + kI * kappa / k);
  sd.R = -std::exp(2.0 * kI * k * a) / (1.0 - kI * k / kappa);
  sd.Rp = -sd.T * std::conj(sd.R) / std::conj(sd.T);
  const ThetaValue th = theta(sd);
  sd.Theta = th.value;
  sd.theta_pole = th.pole;
  return sd;
}

ThetaValue theta(const ScatteringData& sd) {
  ThetaValue tv;
  const cplx onepr = 1.0 + sd.R;
  if (std::abs(onepr) < 1e-12) {
    tv.pole = true;
    tv.value = sd.Theta;
    return tv;
  }
  tv.value = std::arg(-(sd.Rp - sd.T * sd.T / onepr));
  return tv;
}

double nearest_branch(double principal, double reference) {
  return principal + 2.0 * kPi * std::round((reference - principal) / (2.0 * kPi));
}

namespace {

// Follows the continuous branch of Theta from (k0, theta0) to k1 with adaptive steps.
double track_theta(const PotentialSpec& spec, double k0, double theta0, double k1) {
  double k = k0;
  double th = theta0;
  double step = (k1 - k0);
  while (k < k1) {
    double h = std::min(step, k1 - k);
    for (;;) {
      const double cand = nearest_branch(amplitudes(spec, k + h).Theta, th);
      if (std::abs(cand - th) < kPi / 4.0 || h < 1e-13 * std::max(k, 1e-300)) {
        th = cand;
        k += h;
        step = 2.0 * h;
        break;
      }
      h *= 0.5;
    }
  }
  return th;
}

}  // namespace

std::vector<double> theta_unwrapped(const PotentialSpec& spec, std::span<const double> ks) {
  std::vector<double> out;
  out.reserve(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i == 0) {
      out.push_back(amplitudes(spec, ks[0]).Theta);
    } else {
      if (!(ks[i] > ks[i - 1])) throw InvalidArgument("theta_unwrapped: grid must increase");
      out.push_back(track_theta(spec, ks[i - 1], out.back(), ks[i]));
    }
  }
  return out;
}

std::vector<DirichletMode> dirichlet_modes(const PotentialSpec& spec, double L, int n_max) {
  if (!(L >= 10.0 * spec.b())) throw InvalidArgument("dirichlet_modes: requires L >= 10 b");
  if (n_max < 1) throw InvalidArgument("dirichlet_modes: n_max must be at least 1");

  // Theta -> 0 as k -> 0 for any barrier (R -> -1); start the branch there.
  double k_cur = 1e-6 * kPi / L;
  double th_cur = nearest_branch(amplitudes(spec, k_cur).Theta, 0.0);
  auto F = [&](double k, double th, int n) { return 2.0 * L * k + th - 2.0 * kPi * n; };

  std::vector<DirichletMode> modes;
  const double dk = 0.25 * kPi / L;
  for (int n = 1; n <= n_max; ++n) {
    // march until F changes sign; F increases at rate >= 2(L - b) > 0
    double k_lo = k_cur, th_lo = th_cur;
    double k_hi = k_lo, th_hi = th_lo;
    while (F(k_hi, th_hi, n) <= 0.0) {
      k_lo = k_hi;
      th_lo = th_hi;
      k_hi = k_lo + dk;
      th_hi = track_theta(spec, k_lo, th_lo, k_hi);
    }
    double k = k_lo, th = th_lo;
    int it = 0;
    bool converged = false;
    for (; it < 100; ++it) {
      // fixed-point candidate, kept only if it stays inside the bracket; else Newton, else bisection
      const double k_fp = (2.0 * kPi * n - th) / (2.0 * L);
      double k_new = k_fp;
      if (!(k_new > k_lo && k_new < k_hi)) {
        const double h = 1e-7 * std::max(k, 1e-12);
        const double thp = nearest_branch(amplitudes(spec, k + h).Theta, th);
        const double slope = 2.0 * L + (thp - th) / h;
        k_new = k - F(k, th, n) / slope;
        if (!(k_new > k_lo && k_new < k_hi)) k_new = 0.5 * (k_lo + k_hi);
      }
      const double th_new = nearest_branch(amplitudes(spec, k_new).Theta, th_lo + (th_hi - th_lo) *
                                                                                 (k_new - k_lo) / (k_hi - k_lo));
      const double fv = F(k_new, th_new, n);
      if (fv > 0.0) {
        k_hi = k_new;
        th_hi = th_new;
      } else {
        k_lo = k_new;
        th_lo = th_new;
      }
      const double change = std::abs(k_new - k);
      k = k_new;
      th = th_new;
      if (std::abs(fv) < 1e-13 * 2.0 * L * std::max(k, 1e-300) || change < 1e-16 * k) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NumericalError("dirichlet_modes: no convergence after 100 iterations for n = " + std::to_string(n));
    DirichletMode mode;
    mode.n = n;
    mode.k = k;
    mode.theta = th;
    mode.D = 2.0 * kI * (1.0 / std::sqrt(2.0 * L)) * std::exp(0.5 * kI * th);
    mode.iterations = it + 1;
    modes.push_back(mode);
    k_cur = k;
    th_cur = th;
  }
  return modes;
}

}  // namespace decay_povm
