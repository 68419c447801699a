#pragma once

#include <Eigen/Core>

#include <vector>

#include "chsolve/profile.hpp"

namespace chsolve {

using Array = Eigen::ArrayXd;

/// Padding, in e-folding lengths of the kernel e^{-|x|}, added on both sides
/// of a profile's support hint.
inline constexpr double kSupportPad = 10.0;

/// Neighbouring markers may have x decreasing by up to this fraction of their
/// beta gap; such roundoff-level inversions are read as plateaus.
inline constexpr double kXGapTolerance = 1e-4;

/// One time slice of the solution in adapted coordinates.
///
/// Markers are stored column-wise: marker i carries the fixed label
/// `label[i]`, its current adapted coordinate `beta[i]`, position `x[i]`,
/// velocity `u[i]` and the unwrapped angle `v[i]` (u_x = tan(v/2) where
/// defined). `weights` holds trapezoid weights over the current beta nodes
/// and must be refreshed with `refresh_weights()` whenever beta changes.
/// `breaks` lists, sorted, the panels [i, i+1] that straddle a kink or crease
/// of the datum. The system is pointwise in the label, so v (or its slope)
/// can jump there and nowhere else; difference stencils never reach across.
struct ChartState {
  double t = 0.0;
  Array label;
  Array beta;
  Array x;
  Array u;
  Array v;
  Array weights;
  std::vector<Eigen::Index> breaks;

  Eigen::Index size() const { return label.size(); }
  void refresh_weights();
};

/// Trapezoid weights for nodes `nodes` (strictly increasing).
Array trapezoid_weights(const Array& nodes);

/// Cumulative trapezoid integral: out[0] = 0, out[i] = int_{nodes[0]}^{nodes[i]}.
Array cumulative_trapezoid(const Array& nodes, const Array& values);

/// Slope of `f` at node i for the panel toward i + dir (dir = +-1): the
/// derivative of the quadratic through i - dir, i, i + dir, or through
/// i, i + dir, i + 2 dir when the first would cross a panel in `breaks`.
/// Two points when neither fits, including on a break panel itself. The
/// choice depends only on the indices, so the result is smooth in f.
double one_sided_slope(const Array& nodes, const Array& f, Eigen::Index i, int dir,
                       const std::vector<Eigen::Index>& breaks = {});

/// Cumulative trapezoid with the endpoint correction -h^2/12 [f']_a^b on each
/// panel; fourth order where f is smooth between breaks.
Array cumulative_corrected_trapezoid(const Array& nodes, const Array& values,
                                     const std::vector<Eigen::Index>& breaks = {});

/// cos^2(v/2), the chart slope x_beta.
inline Array x_beta(const Array& v) { return (0.5 * v).cos().square(); }

/// Allocates a state of n markers at rest on the identity chart beta = x.
ChartState identity_state(const Array& labels);

/// Numerically inverts beta(x) = x + int_{-inf}^x u0x^2 on a fine grid.
///
/// The fine grid is uniform over the padded support with the given kinks
/// inserted as nodes; each fine panel is integrated by five-point
/// Gauss-Legendre, so beta is accurate to high order between kinks. The
/// inverse is refined by Newton's method inside the bracketing panel. Outside
/// the grid beta continues with slope one, where u0x vanishes to truncation
/// accuracy. Keeps a copy of the profile.
class AdaptedCoordinate {
 public:
  AdaptedCoordinate(const InitialProfile& profile, int n_fine, double pad = kSupportPad,
                    const std::vector<double>& kinks = {});

  double beta(double x) const;
  double x(double beta) const;

  Interval x_range() const { return {grid_x_[0], grid_x_[grid_x_.size() - 1]}; }
  Interval beta_range() const { return {grid_beta_[0], grid_beta_[grid_beta_.size() - 1]}; }

  /// Energy int (u0^2 + u0x^2) dx restricted to the part of the padded support
  /// whose beta value lies outside `span`.
  double energy_outside(const Interval& span) const;
  double total_energy() const { return total_energy_; }

 private:
  Eigen::Index panel_of_x(double s) const;

  InitialProfile profile_;
  Array grid_x_;
  Array grid_beta_;
  Array grid_energy_;  // cumulative int (u0^2 + u0x^2) dx at the grid nodes
  double total_energy_ = 0.0;
};

/// beta coordinate of the point x at t = 0. Throws InvalidInput when the
/// profile produces non-finite samples.
double beta_of_x(const InitialProfile& profile, double x, int n_fine = 1 << 15);

/// Options for `transform_initial`.
struct TransformOptions {
  int refine = 8;          // fine-grid points per marker for the inversion
  double pad = kSupportPad;
  double truncation_rel = 4.5399929762484854e-5;  // e^{-10}, relative to E(0)
  /// Points where u0x jumps. They become nodes of the fine grid, and the
  /// marker nearest to a kink is placed exactly on it when it lands within
  /// `kink_snap`.
  std::vector<double> kinks;
  double kink_snap = 1e-9;
  /// Points where only u0xx jumps. Markers are not moved, but the panel
  /// holding each one becomes a structural break.
  std::vector<double> creases;
};

/// Initial marker state: uniform labels on `beta_span`, x from the inverse
/// chart, u = u0(x), v = 2 arctan u0x(x).
///
/// Throws InvalidInput when n_markers < 2 or the span is empty, and
/// TruncationError when the span misses more than `truncation_rel * E(0)` of
/// the profile's energy.
ChartState transform_initial(const InitialProfile& profile, int n_markers, Interval beta_span,
                             const TransformOptions& options = {});

/// Default beta span covering the padded support of `profile`.
Interval default_beta_span(const InitialProfile& profile, double pad = kSupportPad);

/// Smallest change of `span` that puts the beta image of every kink on a
/// node of the uniform n-marker label grid. With two or more kinks the node
/// spacing is taken as the first-to-last kink distance divided by an integer,
/// chosen so the adjusted span still covers `span`. Throws InvalidInput if the
/// kinks cannot be aligned (not commensurate or too many markers needed).
Interval align_span_to_kinks(const InitialProfile& profile, Interval span, int n_markers,
                             const std::vector<double>& kinks, int refine = 8,
                             double pad = kSupportPad);

/// Non-uniform label grid for data with kinks.
///
/// Near a kink, on the side where markers drift apart (left of a crest with
/// u0 > 0, right of one with u0 < 0, both sides when u0 = 0), the spacing is
/// floor + growth * distance, with floor = floor_fraction * (uniform spacing)
/// or larger when n is too small to grade that far down in half the labels.
/// Elsewhere it is a constant cap chosen so exactly n labels cover the span.
/// Every kink lands on a label. With a positive `twin_fraction` each kink
/// label gets a twin `twin_fraction * floor` to its right, so the two one-sided
/// slopes of u0 are carried by separate markers and the jump of u_x stays in
/// a panel of negligible width.
struct LabelGrading {
  double floor_fraction = 1e-3;
  double growth = 0.01;
  double twin_fraction = 1e-3;
  bool both_sides = false;  // grade on both sides of every kink
};
Array graded_labels(const InitialProfile& profile, Interval span, int n_markers,
                    const std::vector<double>& kinks, const LabelGrading& grading = {},
                    int refine = 8, double pad = kSupportPad);

/// Same as above with explicit, strictly increasing labels.
ChartState transform_initial(const InitialProfile& profile, const Array& labels,
                             const TransformOptions& options = {});

/// max_i |x[i] - (x[0] + int_{beta_0}^{beta_i} cos^2(v/2))|, the gap between the
/// evolved positions and the positions rebuilt from v.
double chart_consistency_residual(const ChartState& state);

/// Largest excess over all pairs i < j of
///   x[j] - x[i] - (beta[j] - beta[i])            (1-Lipschitz chart)
/// and
///   |u[j] - u[i]| - (beta[j] - beta[i]) / 2      (1/2-Lipschitz velocity).
/// Non-positive values mean the inequality holds exactly.
struct LipschitzExcess {
  double x = 0.0;
  double u = 0.0;
};
LipschitzExcess lipschitz_excess(const ChartState& state);

/// Throws OrderingViolation unless beta is strictly increasing and x is
/// non-decreasing up to x_gap_allowance(state, x_tol), and NonFiniteState on
/// NaN/Inf.
void validate(const ChartState& state, double x_tol = kXGapTolerance);

/// Largest tolerated decrease of x between neighbours: `x_tol` times the mean
/// label spacing. Scaling by the local gap instead would leave nothing but
/// rounding room between a kink marker and its twin.
double x_gap_allowance(const ChartState& state, double x_tol = kXGapTolerance);

/// Reduces an unwrapped angle into [-pi, pi].
double wrap_angle(double v);

}  // namespace chsolve
