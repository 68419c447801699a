#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace chsolve {

/// Closed interval [lo, hi] on the real line.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double s) const { return s >= lo && s <= hi; }
};

/// Cauchy datum u0 in H^1 together with its a.e. derivative.
///
/// `support_hint` is the region outside which u0 is numerically negligible
/// up to the exponential tails of the kernel e^{-|x|}; the chart transform
/// pads it before integrating.
struct InitialProfile {
  std::function<double(double)> u0;
  std::function<double(double)> u0x;
  Interval support_hint;
};

/// Profile that vanishes identically.
InitialProfile zero_profile(Interval support = {-1.0, 1.0});

/// C^1 profile through samples (x_k, u_k): cubic Hermite pieces whose node
/// slopes are second-order differences, so u0x is the exact derivative of u0.
/// Outside the sampled range both u0 and u0x are zero.
///
/// Throws InvalidInput on fewer than three samples, non-increasing x or
/// non-finite values.
InitialProfile sampled_profile(std::vector<double> x, std::vector<double> u);

/// Parses two-column whitespace separated text (x u0). Lines starting with
/// '#' and blank lines are skipped.
InitialProfile read_profile(std::istream& in);
InitialProfile read_profile_file(const std::string& path);

/// Trapezoid estimate of ||u0||_{H^1}^2 over the padded support.
double h1_norm_squared(const InitialProfile& profile, double pad, int n_fine = 1 << 15);

}  // namespace chsolve
