#include "decay_povm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "decay_povm/errors.hpp"
#include "decay_povm/parallel.hpp"

namespace decay_povm {

QuadratureRule gauss_legendre(int n) {
  if (n < 2) throw InvalidArgument("gauss_legendre: n must be at least 2");
  QuadratureRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

QuadratureRule composite_rule(std::span<const KInterval> intervals, int panels, int order) {
  const QuadratureRule base = gauss_legendre(order);
  double total = 0.0;
  for (const KInterval& iv : intervals) {
    const double lo = iv.sqrt_map ? std::sqrt(iv.lo) : iv.lo;
    const double hi = iv.sqrt_map ? std::sqrt(iv.hi) : iv.hi;
    total += (iv.sqrt_map ? 2.0 * std::sqrt(iv.hi) : 1.0) * (hi - lo);
  }
  QuadratureRule r;
  for (const KInterval& iv : intervals) {
    const double lo = iv.sqrt_map ? std::sqrt(iv.lo) : iv.lo;
    const double hi = iv.sqrt_map ? std::sqrt(iv.hi) : iv.hi;
    if (!(hi > lo)) continue;
    const double share = (iv.sqrt_map ? 2.0 * std::sqrt(iv.hi) : 1.0) * (hi - lo) / total;
    const int np = std::max(1, static_cast<int>(std::lround(share * panels)));
    const double width = (hi - lo) / np;
    for (int p = 0; p < np; ++p) {
      const double c = lo + (p + 0.5) * width;
      for (int j = 0; j < order; ++j) {
        const double u = c + 0.5 * width * base.x[j];
        const double wu = 0.5 * width * base.w[j];
        if (iv.sqrt_map) {
          r.x.push_back(u * u);
          r.w.push_back(2.0 * u * wu);
        } else {
          r.x.push_back(u);
          r.w.push_back(wu);
        }
      }
    }
  }
  return r;
}

namespace {

// Times are processed in fixed groups that each restart from exact phases, and within a group
// equal steps advance the phases by one complex multiply; the grouping does not depend on the
// worker count, so results are reproducible across thread settings.
constexpr std::size_t kTimeGroup = 32;
constexpr std::size_t kNodeBlock = 2048;

std::vector<std::complex<double>> evaluate(const std::vector<double>& k, const std::vector<std::complex<double>>& fw,
                                           std::span<const double> ts, double M) {
  std::vector<std::complex<double>> out(ts.size());
  const std::size_t groups = (ts.size() + kTimeGroup - 1) / kTimeGroup;
  parallel_for(groups, [&](std::size_t gb, std::size_t ge) {
    std::vector<double> pre(kNodeBlock), pim(kNodeBlock), sre(kNodeBlock), sim(kNodeBlock);
    for (std::size_t g = gb; g < ge; ++g) {
      const std::size_t t0 = g * kTimeGroup, t1 = std::min(ts.size(), t0 + kTimeGroup);
      std::vector<double> are(t1 - t0, 0.0), aim(t1 - t0, 0.0);
      for (std::size_t n0 = 0; n0 < k.size(); n0 += kNodeBlock) {
        const std::size_t nn = std::min(kNodeBlock, k.size() - n0);
        auto exact = [&](double t) {
          const double c = t / (2.0 * M);
          for (std::size_t i = 0; i < nn; ++i) {
            const double ph = -k[n0 + i] * k[n0 + i] * c;
            pre[i] = std::cos(ph);
            pim[i] = std::sin(ph);
          }
        };
        double step = -1.0;
        bool have_step = false;
        for (std::size_t it = t0; it < t1; ++it) {
          if (it == t0) {
            exact(ts[it]);
          } else {
            const double d = ts[it] - ts[it - 1];
            if (step > 0.0 && std::abs(d - step) <= 1e-13 * std::max(1.0, std::abs(ts[it]))) {
              if (!have_step) {
                const double c = step / (2.0 * M);
                for (std::size_t i = 0; i < nn; ++i) {
                  const double ph = -k[n0 + i] * k[n0 + i] * c;
                  sre[i] = std::cos(ph);
                  sim[i] = std::sin(ph);
                }
                have_step = true;
              }
              for (std::size_t i = 0; i < nn; ++i) {
                const double r = pre[i] * sre[i] - pim[i] * sim[i];
                pim[i] = pre[i] * sim[i] + pim[i] * sre[i];
                pre[i] = r;
              }
            } else {
              exact(ts[it]);
              step = d;
              have_step = false;
            }
          }
          double re = 0.0, im = 0.0;
          for (std::size_t i = 0; i < nn; ++i) {
            const std::complex<double>& f = fw[n0 + i];
            re += f.real() * pre[i] - f.imag() * pim[i];
            im += f.real() * pim[i] + f.imag() * pre[i];
          }
          are[it - t0] += re;
          aim[it - t0] += im;
        }
      }
      for (std::size_t it = t0; it < t1; ++it) out[it] = {are[it - t0], aim[it - t0]};
    }
  });
  return out;
}

}  // namespace

std::vector<std::complex<double>> phase_integral(const std::function<std::complex<double>(double)>& f,
                                                 std::span<const KInterval> intervals,
                                                 std::span<const double> ts, double M,
                                                 const QuadratureConfig& cfg, QuadratureReport* report) {
  if (cfg.order < 2) throw InvalidArgument("phase_integral: quadrature order too small");
  int panels = std::max(1, (cfg.nodes - 1) / cfg.order);
  std::vector<std::complex<double>> prev;
  QuadratureReport rep;
  for (;;) {
    const QuadratureRule rule = composite_rule(intervals, panels, cfg.order);
    std::vector<std::complex<double>> fw(rule.x.size());
    parallel_for(rule.x.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) fw[i] = f(rule.x[i]) * rule.w[i];
    });
    double l1 = 0.0;
    for (const auto& v : fw) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericalError("phase_integral: non-finite integrand");
      l1 += std::abs(v);
    }
    auto cur = evaluate(rule.x, fw, ts, M);
    rep.nodes = static_cast<long>(rule.x.size());
    rep.l1_norm = l1;
    if (!prev.empty()) {
      const double floor = 64.0 * 2.2e-16 * l1;
      bool ok = true;
      double worst = 0.0;
      for (std::size_t i = 0; i < cur.size(); ++i) {
        const double diff = std::abs(cur[i] - prev[i]);
        const double allowed = cfg.rel_tol * std::abs(cur[i]) + floor;
        if (diff > allowed) ok = false;
        const double denom = std::max(std::abs(cur[i]), floor / std::max(cfg.rel_tol, 1e-300));
        worst = std::max(worst, denom > 0.0 ? diff / denom : 0.0);
      }
      rep.max_change = worst;
      if (ok) {
        rep.converged = true;
        if (report) *report = rep;
        return cur;
      }
    }
    if (2L * rep.nodes > cfg.max_nodes) {
      rep.converged = false;
      if (report) *report = rep;
      return cur;
    }
    prev = std::move(cur);
    panels *= 2;
    ++rep.doublings;
  }
}

}  // namespace decay_povm
