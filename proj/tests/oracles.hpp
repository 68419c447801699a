#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library's quadrature or kernel code.

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson quadrature on [a, b], started on pieces no longer than
/// 1/4 so that a narrow bump cannot slip between the first samples.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
  if (a == b) return 0.0;
  const int pieces = std::max(1, int(std::ceil(4.0 * std::abs(b - a))));
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + (b - a) * k / pieces;
    const double hi = k + 1 == pieces ? b : a + (b - a) * (k + 1) / pieces;
    const double fa = f(lo);
    const double fb = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson_step(f, lo, hi, fa, fm, fb, whole, tol / pieces, 50);
  }
  return total;
}

/// Integral over [a, b] split at the given interior points (kinks).
inline double integrate_split(const std::function<double(double)>& f, double a, double b,
                              std::initializer_list<double> cuts, double tol = 1e-13) {
  double lo = a;
  double total = 0.0;
  for (double c : cuts) {
    if (c <= lo || c >= b) continue;
    total += integrate(f, lo, c, tol);
    lo = c;
  }
  return total + integrate(f, lo, b, tol);
}

/// P(x) = 1/2 int e^{-|x-y|} (u^2 + u_x^2 / 2)(y) dy and its x-derivative for
/// a datum given by u and u_x, over [a, b] with kinks.
struct Convolution {
  std::function<double(double)> u;
  std::function<double(double)> ux;
  double a;
  double b;
  std::initializer_list<double> kinks;

  double density(double y) const {
    const double uy = u(y);
    const double dy = ux(y);
    return uy * uy + 0.5 * dy * dy;
  }
  double P(double x) const {
    auto f = [&](double y) { return 0.5 * std::exp(-std::abs(x - y)) * density(y); };
    return split(f, x);
  }
  double Px(double x) const {
    auto f = [&](double y) {
      const double s = y > x ? 1.0 : -1.0;
      return 0.5 * s * std::exp(-std::abs(x - y)) * density(y);
    };
    return split(f, x);
  }

 private:
  double split(const std::function<double(double)>& f, double x) const {
    double total = 0.0;
    double lo = a;
    auto add_to = [&](double c) {
      if (c <= lo || c >= b) return;
      total += integrate(f, lo, c, 1e-12);
      lo = c;
    };
    // cut at every kink and at x, in increasing order
    for (double k : kinks)
      if (k < x) add_to(k);
    add_to(x);
    for (double k : kinks)
      if (k > x) add_to(k);
    return total + integrate(f, lo, b, 1e-12);
  }
};

}  // namespace oracle
