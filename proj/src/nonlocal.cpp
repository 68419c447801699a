#include "chsolve/nonlocal.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "chsolve/errors.hpp"

namespace chsolve {

namespace {

// e^{-(x_{i+1} - x_i)} for every neighbour pair; negative gaps within the
// allowance are plateaus with factor one.
Array neighbour_decay(const ChartState& state, double x_tol) {
  const Eigen::Index n = state.size();
  Array decay(std::max<Eigen::Index>(n - 1, 0));
  const double allowance = x_gap_allowance(state, x_tol);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double gap = state.x[i + 1] - state.x[i];
    if (gap < -allowance) {
      std::ostringstream msg;
      msg << "nonlocal fields: x decreases by " << -gap << " at marker " << i
          << " (t = " << state.t << ")";
      throw OrderingViolation(msg.str());
    }
    decay[i] = std::exp(-std::max(gap, 0.0));
  }
  return decay;
}

}  // namespace

KernelSources kernel_sources(const ChartState& state, bool corrected) {
  const Eigen::Index n = state.size();
  const Array c2 = x_beta(state.v);
  const Array density = state.u.square() * c2 + 0.5 * (1.0 - c2);
  KernelSources out;
  out.right_below = Array::Zero(n);
  out.right_above = Array::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double half = 0.5 * (state.beta[i + 1] - state.beta[i]);
    out.right_above[i] = half * density[i];
    out.right_below[i + 1] = half * density[i + 1];
  }
  out.left_below = out.right_below;
  out.left_above = out.right_above;
  if (!corrected) return out;

  // Endpoint corrections -h^2/12 [g']_a^b of each panel, where g is the
  // density times the kernel seen from the right (e^{-(x - x_i)}) or the left
  // (e^{-(x_i - x)}); its beta-derivative at a node is density' -+ x_beta
  // density.
  for (Eigen::Index i = 0; i < n; ++i) {
    const double kernel_slope = c2[i] * density[i];
    if (i + 1 < n) {
      const double h = state.beta[i + 1] - state.beta[i];
      const double d = one_sided_slope(state.beta, density, i, +1, state.breaks);
      out.right_above[i] += h * h / 12.0 * (d - kernel_slope);
      out.left_above[i] += h * h / 12.0 * (d + kernel_slope);
    }
    if (i > 0) {
      const double h = state.beta[i] - state.beta[i - 1];
      const double d = one_sided_slope(state.beta, density, i, -1, state.breaks);
      out.right_below[i] -= h * h / 12.0 * (d - kernel_slope);
      out.left_below[i] -= h * h / 12.0 * (d + kernel_slope);
    }
  }
  return out;
}

Array kernel_source(const ChartState& state) {
  const Array c2 = x_beta(state.v);
  return state.weights * (state.u.square() * c2 + 0.5 * (1.0 - c2));
}

std::pair<Array, Array> compute_P_Px(const ChartState& state, double x_tol) {
  const Eigen::Index n = state.size();
  if (n == 0) return {Array(), Array()};
  const Array decay = neighbour_decay(state, x_tol);
  const KernelSources src = kernel_sources(state);

  // Each side of marker i is its own quadrature: the half panel right of
  // node i belongs to the right sum only, and likewise on the left.
  Array left(n);
  Array right(n);
  left[0] = src.left_below[0];
  for (Eigen::Index i = 1; i < n; ++i)
    left[i] = src.left_below[i] + decay[i - 1] * (src.left_above[i - 1] + left[i - 1]);
  right[n - 1] = src.right_above[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i)
    right[i] = src.right_above[i] + decay[i] * (src.right_below[i + 1] + right[i + 1]);

  Array P = 0.5 * (left + right);
  Array Px = 0.5 * (right - left);
  return {std::move(P), std::move(Px)};
}

Array compute_P(const ChartState& state, double x_tol) { return compute_P_Px(state, x_tol).first; }

Array compute_Px(const ChartState& state, double x_tol) {
  return compute_P_Px(state, x_tol).second;
}

Array compute_G(const ChartState& state, const Array& P, const Array& Px) {
  // (u^2 - P) sin v dbeta = 2 (u^2 - P) du. The u^3 part is exact; the P part
  // is integrated by parts, int P du = [P u] - int u P_x x_beta dbeta, whose
  // integrand is continuous across peakon crests where v jumps.
  const Eigen::Index n = state.size();
  Array G(n);
  if (n == 0) return G;
  const Array& u = state.u;
  const Array by_parts =
      cumulative_corrected_trapezoid(state.beta, u * Px * x_beta(state.v), state.breaks);
  for (Eigen::Index i = 0; i < n; ++i)
    G[i] = u[i] + (2.0 / 3.0) * (u[i] * u[i] * u[i] - u[0] * u[0] * u[0]) -
           2.0 * (P[i] * u[i] - P[0] * u[0]) + 2.0 * by_parts[i];
  return G;
}

NonlocalFields compute_fields(const ChartState& state, double x_tol) {
  NonlocalFields out;
  std::tie(out.P, out.Px) = compute_P_Px(state, x_tol);
  out.G = compute_G(state, out.P, out.Px);
  out.source_l1 = kernel_source(state).sum();
  return out;
}

std::pair<Array, Array> convolution_oracle(const ChartState& state) {
  const Eigen::Index n = state.size();
  const KernelSources src = kernel_sources(state);
  Array P = Array::Zero(n);
  Array Px = Array::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double right = 0.0;
    double left = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double k = std::exp(-std::abs(state.x[j] - state.x[i]));
      if (j >= i) right += k * src.right_above[j];
      if (j > i) right += k * src.right_below[j];
      if (j <= i) left += k * src.left_below[j];
      if (j < i) left += k * src.left_above[j];
    }
    P[i] = 0.5 * (right + left);
    Px[i] = 0.5 * (right - left);
  }
  return {P, Px};
}

double pxx_residual(const ChartState& state, double margin) {
  const Eigen::Index n = state.size();
  const Array P = compute_P(state);
  auto smooth = [&](Eigen::Index i) {
    return std::abs(wrap_angle(state.v[i])) < std::numbers::pi - margin;
  };
  double worst = 0.0;
  bool any = false;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    if (!smooth(i - 1) || !smooth(i) || !smooth(i + 1)) continue;
    const double hl = state.x[i] - state.x[i - 1];
    const double hr = state.x[i + 1] - state.x[i];
    if (!(hl > 0.0) || !(hr > 0.0)) continue;
    const double d2 =
        2.0 * ((P[i + 1] - P[i]) / hr - (P[i] - P[i - 1]) / hl) / (hl + hr);
    const double ux = std::tan(0.5 * state.v[i]);
    const double rhs = P[i] - state.u[i] * state.u[i] - 0.5 * ux * ux;
    worst = std::max(worst, std::abs(d2 - rhs));
    any = true;
  }
  if (!any) throw DiagnosticUnavailable("pxx_residual: no smooth interior markers");
  return worst;
}

SourceNorms source_norms(const ChartState& state, const Array& P) {
  SourceNorms s;
  if (state.size() == 0) return s;
  const Array c2 = x_beta(state.v);
  const Array& w = state.weights;
  s.u_sup = state.u.abs().maxCoeff();
  s.u_l2 = std::sqrt((w * state.u.square() * c2).sum());
  s.ux_l2 = std::sqrt((w * (1.0 - c2)).sum());
  s.P_l2 = std::sqrt((w * P.square() * c2).sum());
  s.source_l1 = (w * ((state.u.square() - P) * state.v.sin()).abs()).sum();
  s.source_bound = 2.0 * (s.u_sup * s.u_l2 + s.P_l2) * s.ux_l2;
  return s;
}

double discrete_lipschitz(const Array& beta, const Array& values) {
  const Eigen::Index n = beta.size();
  double worst = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    worst = std::max(worst, std::abs(values[i + 1] - values[i]) / (beta[i + 1] - beta[i]));
  return worst;
}

double g_slope_bound(const ChartState& state, const Array& P) {
  if (state.size() == 0) return 0.5;
  const double u2 = state.u.square().maxCoeff();
  const double p = P.abs().maxCoeff();
  return 0.5 * (1.0 + 2.0 * u2 + 2.0 * p);
}

}  // namespace chsolve
