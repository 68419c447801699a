#include "chsolve/eulerian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chsolve/errors.hpp"

namespace chsolve {

namespace {

double lerp_in_beta(const ChartState& s, const Array& values, double b) {
  const Eigen::Index n = s.size();
  if (b <= s.beta[0]) return values[0];
  if (b >= s.beta[n - 1]) return values[n - 1];
  const double* first = s.beta.data();
  const auto j = static_cast<Eigen::Index>(std::upper_bound(first, first + n, b) - first);
  const double w = (b - s.beta[j - 1]) / (s.beta[j] - s.beta[j - 1]);
  return (1.0 - w) * values[j - 1] + w * values[j];
}

}  // namespace

double invert_chart(const ChartState& state, double x, bool* clamped, double plateau_tol) {
  const Eigen::Index n = state.size();
  if (n == 0) throw InvalidInput("invert_chart: empty state");
  if (clamped != nullptr) *clamped = false;
  if (x < state.x[0] || x > state.x[n - 1]) {
    if (clamped != nullptr) *clamped = true;
    x = std::clamp(x, state.x[0], state.x[n - 1]);
  }
  const double* first = state.x.data();
  auto j = static_cast<Eigen::Index>(std::lower_bound(first, first + n, x) - first);
  j = std::min(j, n - 1);
  const double tol = plateau_tol * (1.0 + std::abs(x));
  if (state.x[j] - x <= tol) {
    Eigen::Index lo = j;
    Eigen::Index hi = j;
    while (lo > 0 && x - state.x[lo - 1] <= tol) --lo;
    while (hi + 1 < n && state.x[hi + 1] - x <= tol) ++hi;
    return 0.5 * (state.beta[lo] + state.beta[hi]);
  }
  const double w = (x - state.x[j - 1]) / (state.x[j] - state.x[j - 1]);
  return state.beta[j - 1] + w * (state.beta[j] - state.beta[j - 1]);
}

Array sample_u(const ChartState& state, const Array& x_grid) {
  Array out(x_grid.size());
  for (Eigen::Index k = 0; k < x_grid.size(); ++k)
    out[k] = lerp_in_beta(state, state.u, invert_chart(state, x_grid[k]));
  return out;
}

EulerianSnapshot eulerian_snapshot(const ChartState& state, const Array& x_grid) {
  EulerianSnapshot snap;
  snap.t = state.t;
  snap.x_grid = x_grid;
  snap.u_vals.resize(x_grid.size());
  snap.ux_vals.reserve(static_cast<std::size_t>(x_grid.size()));
  for (Eigen::Index k = 0; k < x_grid.size(); ++k) {
    const double b = invert_chart(state, x_grid[k]);
    snap.u_vals[k] = lerp_in_beta(state, state.u, b);
    const double v = wrap_angle(lerp_in_beta(state, state.v, b));
    if (std::abs(v) >= std::numbers::pi - kUndefinedSlopeMargin) snap.ux_vals.emplace_back();
    else snap.ux_vals.emplace_back(std::tan(0.5 * v));
  }
  return snap;
}

EnergyMeasure energy_measure(const ChartState& state, double plateau_eps) {
  if (!(plateau_eps > 0.0)) throw InvalidInput("energy_measure: plateau threshold must be positive");
  const Eigen::Index n = state.size();
  const Array c2 = x_beta(state.v);
  const Array s2 = 1.0 - c2;
  const Array& w = state.weights;
  EnergyMeasure m;
  m.x = state.x;
  m.ac_density = Array::Zero(n);
  m.u2_mass = (w * state.u.square() * c2).sum();
  for (Eigen::Index i = 0; i < n;) {
    if (c2[i] > plateau_eps) {
      m.ac_density[i] = s2[i] / c2[i];
      m.ac_mass += w[i] * s2[i];
      ++i;
      continue;
    }
    EnergyAtom atom{state.x[i], 0.0};
    for (; i < n && c2[i] <= plateau_eps; ++i) atom.mass += w[i] * s2[i];
    m.singular_mass += atom.mass;
    m.singular.push_back(atom);
  }
  return m;
}

}  // namespace chsolve
