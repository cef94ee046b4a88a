#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shrink {

/// Raised when adaptive refinement exhausts its interval budget before
/// reaching the requested tolerance. Carries the tolerance actually achieved.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double achieved_rel_error)
      : std::runtime_error(what), achieved_rel_error_(achieved_rel_error) {}
  double achieved_rel_error() const { return achieved_rel_error_; }

private:
  double achieved_rel_error_;
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-300;
  int max_intervals = 4000;
};

namespace detail {

// Gauss 7 / Kronrod 15 node-weight table on [-1,1].
// Column 0: abscissa, column 1: Gauss weight, column 2: Kronrod weight.
inline constexpr double kG7K15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

template <class Func>
double g7k15_panel(const Func& f, double a, double b, double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double g7 = kG7K15[0][1] * f0;
  double k15 = kG7K15[0][2] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kG7K15[i][0];
    const double fi = f(mid + dx) + f(mid - dx);
    g7 += kG7K15[i][1] * fi;
    k15 += kG7K15[i][2] * fi;
  }
  g7 *= half;
  k15 *= half;
  const double diff = 200.0 * std::fabs(g7 - k15);
  err = diff * std::sqrt(diff);
  return k15;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration on a finite interval.
template <class Func>
double integrate(const Func& f, double a, double b,
                 const QuadratureOptions& opt = {}) {
  struct Interval {
    double a, b, value, error;
  };
  std::vector<Interval> stack;
  stack.reserve(64);
  double err0;
  double v0 = detail::g7k15_panel(f, a, b, err0);
  if (!std::isfinite(v0)) {
    throw QuadratureError("integrand produced a non-finite panel sum",
                          std::numeric_limits<double>::infinity());
  }
  stack.push_back({a, b, v0, err0});
  double total = v0;
  double total_err = err0;
  int n_panels = 1;
  while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::fabs(total))) {
    if (n_panels >= opt.max_intervals || stack.empty()) {
      const double rel =
          std::fabs(total) > 0 ? total_err / std::fabs(total) : total_err;
      throw QuadratureError(
          "adaptive quadrature did not converge (achieved relative error " +
              std::to_string(rel) + ")",
          rel);
    }
    // refine the interval with the largest error estimate
    auto worst = std::max_element(
        stack.begin(), stack.end(),
        [](const Interval& u, const Interval& v) { return u.error < v.error; });
    Interval cur = *worst;
    const double mid = 0.5 * (cur.a + cur.b);
    if (cur.error <= 0.0) {
      // every interval is settled; re-evaluate the achieved error and stop
      total_err = 0.0;
      for (const Interval& iv : stack) total_err += iv.error;
      if (total_err <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total)))
        return total;
      const double rel =
          std::fabs(total) > 0 ? total_err / std::fabs(total) : total_err;
      throw QuadratureError(
          "adaptive quadrature stalled (achieved relative error " +
              std::to_string(rel) + ")",
          rel);
    }
    if (!(mid > cur.a && mid < cur.b)) {
      // interval at machine resolution; freeze its estimate and move on
      total_err -= worst->error;
      worst->error = 0.0;
      continue;
    }
    stack.erase(worst);
    double e1, e2;
    const double v1 = detail::g7k15_panel(f, cur.a, mid, e1);
    const double v2 = detail::g7k15_panel(f, mid, cur.b, e2);
    total += v1 + v2 - cur.value;
    total_err += e1 + e2 - cur.error;
    stack.push_back({cur.a, mid, v1, e1});
    stack.push_back({mid, cur.b, v2, e2});
    ++n_panels;
    if (!std::isfinite(total)) {
      throw QuadratureError("integrand produced a non-finite panel sum",
                            std::numeric_limits<double>::infinity());
    }
  }
  return total;
}

/// Integrates f over the whole real line. The line is mapped through the
/// algebraic stretch x = center + width * u/(1-u^2), u in (-1,1), which
/// keeps even 1/x^2-tailed integrands bounded after the change of
/// variables. The panel layout is seeded with splits at the images of
/// `breakpoints` (likelihood centers, prior modes, poles) so kinks land on
/// panel boundaries.
template <class Func>
double integrate_real_line(const Func& f, std::span<const double> breakpoints,
                           const QuadratureOptions& opt = {}) {
  double center = 0.0;
  double spread = 1.0;
  if (!breakpoints.empty()) {
    double lo = breakpoints[0], hi = breakpoints[0];
    for (double p : breakpoints) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    center = 0.5 * (lo + hi);
    spread = std::max(1.0, 0.5 * (hi - lo));
  }
  const double width = 4.0 * spread;

  auto mapped = [&](double u) {
    const double q = (1.0 - u) * (1.0 + u);
    const double x = center + width * u / q;
    // past the representable range nothing integrable has mass left; a
    // divergent integrand has already overflowed at finite x and is NOT
    // masked here, so the panel sum goes non-finite and integrate() throws
    if (!std::isfinite(x)) return 0.0;
    const double jac = width * (1.0 + u * u) / (q * q);
    return f(x) * jac;
  };

  auto to_u = [&](double x) {
    const double t = (x - center) / width;
    if (t == 0.0) return 0.0;
    return (std::sqrt(1.0 + 4.0 * t * t) - 1.0) / (2.0 * t);
  };

  std::vector<double> cuts{-1.0};
  for (double p : breakpoints) cuts.push_back(to_u(p));
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Tolerance is applied per panel segment against the accumulated value;
  // run one pass to get the scale, then a strict pass against it.
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadratureOptions seg = opt;
    seg.abs_tol = std::max(opt.abs_tol, 1e-12 * std::fabs(total));
    total += integrate(mapped, cuts[i], cuts[i + 1], seg);
  }
  return total;
}

/// Integrates f over [a, infinity) through x = a + width * u/(1-u).
template <class Func>
double integrate_half_line(const Func& f, double a,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& opt = {}) {
  double width = 1.0;
  for (double p : breakpoints) width = std::max(width, p - a);

  auto mapped = [&](double u) {
    const double q = 1.0 - u;
    const double x = a + width * u / q;
    if (!std::isfinite(x)) return 0.0;
    const double jac = width / (q * q);
    return f(x) * jac;
  };

  std::vector<double> cuts{0.0};
  for (double p : breakpoints) {
    if (p > a) {
      const double t = (p - a) / width;
      cuts.push_back(t / (1.0 + t));
    }
  }
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadratureOptions seg = opt;
    seg.abs_tol = std::max(opt.abs_tol, 1e-12 * std::fabs(total));
    total += integrate(mapped, cuts[i], cuts[i + 1], seg);
  }
  return total;
}

}  // namespace shrink
