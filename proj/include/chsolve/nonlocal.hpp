#pragma once

#include <utility>

#include "chsolve/chart.hpp"

namespace chsolve {

/// Nonlocal terms evaluated at the markers of one ChartState.
struct NonlocalFields {
  Array P;
  Array Px;
  Array G;
  double source_l1 = 0.0;  // discrete ||u^2 + u_x^2/2||_{L^1}
};

/// Weighted source density w_j [u_j^2 cos^2(v_j/2) + sin^2(v_j/2)/2], the
/// beta-form of (u^2 + u_x^2/2) dx.
Array kernel_source(const ChartState& state);

/// Per-marker source masses for the one-sided kernel sums. `*_above[i]` is
/// the share of the panel [beta_i, beta_{i+1}] carried by node i, `*_below[i]`
/// the share of [beta_{i-1}, beta_i]. Without correction both are half the
/// panel width times the density (trapezoid). With correction each panel also
/// gets the endpoint term -h^2/12 [g']_a^b, g being density times the kernel
/// as seen from the right (`right_*`, kernel e^{-(x - x_i)}) or from the left
/// (`left_*`), with three-point density slopes kept off break panels; the rule is
/// then fourth order on smooth stretches.
struct KernelSources {
  Array right_above;
  Array right_below;
  Array left_above;
  Array left_below;
};
KernelSources kernel_sources(const ChartState& state, bool corrected = true);

/// P_i = 1/2 sum_j w_j e^{-|x_j - x_i|} [u_j^2 cos^2(v_j/2) + sin^2(v_j/2)/2],
/// in O(N) through left/right exponential prefix recursions.
///
/// Throws OrderingViolation if x decreases by more than x_gap_allowance(state,
/// x_tol) between neighbours; smaller decreases count as zero gaps.
Array compute_P(const ChartState& state, double x_tol = kXGapTolerance);

/// P_x split at the marker's own beta: the integral over larger beta counts
/// positive and over smaller beta negative, each side by its own trapezoid
/// sum. O(N).
Array compute_Px(const ChartState& state, double x_tol = kXGapTolerance);

/// P and P_x from a single pair of prefix sweeps.
std::pair<Array, Array> compute_P_Px(const ChartState& state, double x_tol = kXGapTolerance);

/// G_i = u_i + int_{beta_0}^{beta_i} (u^2 - P) sin v dbeta, rewritten as
/// 2/3 [u^3] - 2 [P u] + 2 int u P_x cos^2(v/2) dbeta so that only continuous
/// quantities are integrated.
Array compute_G(const ChartState& state, const Array& P, const Array& Px);

/// All fields at once.
NonlocalFields compute_fields(const ChartState& state, double x_tol = kXGapTolerance);

/// Direct O(N^2) evaluation of the same sums, with |x_j - x_i| in the
/// kernel. Ground truth for the prefix recursions.
std::pair<Array, Array> convolution_oracle(const ChartState& state);

/// max over interior smooth markers of |D_x^2 P - (P - u^2 - u_x^2/2)|, with a
/// three-point second difference in x. Smooth markers have |v| < pi - margin.
/// Throws DiagnosticUnavailable when fewer than three consecutive smooth
/// markers exist.
double pxx_residual(const ChartState& state, double margin = 0.1);

/// Discrete norms entering the a-priori bounds, all in beta-form.
struct SourceNorms {
  double u_sup = 0.0;
  double u_l2 = 0.0;
  double ux_l2 = 0.0;
  double P_l2 = 0.0;
  double source_l1 = 0.0;      // ||2 (u^2 - P) u_x||_{L^1}
  double source_bound = 0.0;   // 2 (||u||_inf ||u||_2 + ||P||_2) ||u_x||_2
};
SourceNorms source_norms(const ChartState& state, const Array& P);

/// Largest discrete slope |G_{i+1} - G_i| / (beta_{i+1} - beta_i).
double discrete_lipschitz(const Array& beta, const Array& values);

/// Bound on |G_beta| = |sin v (1 + 2u^2 - 2P)| / 2 from the state's sup norms:
/// (1 + 2 ||u||_inf^2 + 2 ||P||_inf) / 2.
double g_slope_bound(const ChartState& state, const Array& P);

}  // namespace chsolve
