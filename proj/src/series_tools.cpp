#include "decay_povm/series_tools.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "decay_povm/errors.hpp"

namespace decay_povm {

ProbabilitySeries make_series(std::vector<double> t, std::vector<double> p, std::string method) {
  if (t.size() != p.size()) throw InvalidArgument("make_series: size mismatch");
  ProbabilitySeries s;
  for (double& v : p) {
    if (v < 0.0) {
      s.max_negative_violation = std::max(s.max_negative_violation, -v);
      if (v < -1e-12)
        s.positivity_violated = true;
      else
        v = 0.0;
    }
  }
  s.mass_detected = trapezoid(t, p);
  s.t = std::move(t);
  s.p = std::move(p);
  s.method = std::move(method);
  return s;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return acc;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g = uniform_grid(std::log(lo), std::log(hi), n);
  for (double& v : g) v = std::exp(v);
  return g;
}

std::vector<std::size_t> find_peaks(std::span<const double> y) {
  std::vector<std::size_t> out;
  const std::size_t n = y.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;
    if (j + 1 < n && y[j + 1] < y[i]) out.push_back(i);
    i = j;
  }
  return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("linear_fit: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

LinearFit log_linear_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) ly[i] = std::log(y[i]);
  return linear_fit(x, ly);
}

LinearFit log_log_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return linear_fit(lx, ly);
}

std::vector<double> moving_average(std::span<const double> t, std::span<const double> y, double window) {
  const std::size_t n = t.size();
  std::vector<double> out(n, 0.0);
  std::vector<double> cum(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) cum[i] = cum[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (t[lo] < t[i] - 0.5 * window) ++lo;
    while (hi + 1 < n && t[hi + 1] <= t[i] + 0.5 * window) ++hi;
    const double span = t[hi] - t[lo];
    out[i] = span > 0.0 ? (cum[hi] - cum[lo]) / span : y[i];
  }
  return out;
}

double peak_half_width(std::span<const double> t, std::span<const double> y, std::size_t i, double level) {
  const double target = level * y[i];
  auto crossing = [&](int dir) {
    std::size_t j = i;
    for (;;) {
      if ((dir < 0 && j == 0) || (dir > 0 && j + 1 >= y.size())) return t[j];
      const std::size_t nxt = dir < 0 ? j - 1 : j + 1;
      if (y[nxt] <= target) {
        const double f = (y[j] - target) / (y[j] - y[nxt]);
        return t[j] + f * (t[nxt] - t[j]);
      }
      j = nxt;
    }
  };
  return 0.5 * (crossing(1) - crossing(-1));
}

double rms_width(std::span<const double> t, std::span<const double> y, std::size_t lo, std::size_t hi) {
  auto tt = t.subspan(lo, hi - lo);
  auto yy = y.subspan(lo, hi - lo);
  const double m0 = trapezoid(tt, yy);
  std::vector<double> ty(tt.size()), t2y(tt.size());
  for (std::size_t i = 0; i < tt.size(); ++i) ty[i] = tt[i] * yy[i];
  const double m1 = trapezoid(tt, ty) / m0;
  for (std::size_t i = 0; i < tt.size(); ++i) t2y[i] = (tt[i] - m1) * (tt[i] - m1) * yy[i];
  return std::sqrt(trapezoid(tt, t2y) / m0);
}

std::vector<double> derivative(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d[0] = (y[1] - y[0]) / (t[1] - t[0]);
  d[n - 1] = (y[n - 1] - y[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
  return d;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace decay_povm
