#pragma once

#include <optional>
#include <vector>

#include "chsolve/chart.hpp"

namespace chsolve {

/// |v| (reduced to [-pi, pi]) at or above pi - kUndefinedSlopeMargin leaves u_x
/// undefined.
inline constexpr double kUndefinedSlopeMargin = 1e-4;

/// Markers with cos^2(v/2) at or below this carry singular energy.
inline constexpr double kPlateauThreshold = 1e-8;

/// u(t, .) and u_x(t, .) sampled on an x grid; u_x is empty where the chart
/// is (numerically) vertical.
struct EulerianSnapshot {
  double t = 0.0;
  Array x_grid;
  Array u_vals;
  std::vector<std::optional<double>> ux_vals;
};

/// Point mass of the energy measure.
struct EnergyAtom {
  double x = 0.0;
  double mass = 0.0;
};

/// Decomposition of the energy at one time. `x` and `ac_density` are per
/// marker (u_x^2 = tan^2(v/2), zero on singular markers). The three masses
/// add up to energy(state) exactly:
///   ac_mass       sum of w_i sin^2(v_i/2) over regular markers  (int u_x^2 dx)
///   singular_mass sum of w_i sin^2(v_i/2) over singular markers
///   u2_mass       sum of w_i u_i^2 cos^2(v_i/2)                  (int u^2 dx)
struct EnergyMeasure {
  Array x;
  Array ac_density;
  std::vector<EnergyAtom> singular;
  double ac_mass = 0.0;
  double singular_mass = 0.0;
  double u2_mass = 0.0;

  double total() const { return ac_mass + singular_mass + u2_mass; }
};

/// Smallest beta with x(beta) >= x, by bisection on the marker positions and
/// linear interpolation. Where markers share x (a plateau, up to `plateau_tol`)
/// the midpoint of the plateau is returned. Points outside [x_first, x_last]
/// are clamped and reported through `clamped` when given.
double invert_chart(const ChartState& state, double x, bool* clamped = nullptr,
                    double plateau_tol = 1e-12);

/// u(x) through invert_chart and linear interpolation in beta.
Array sample_u(const ChartState& state, const Array& x_grid);

EulerianSnapshot eulerian_snapshot(const ChartState& state, const Array& x_grid);

EnergyMeasure energy_measure(const ChartState& state, double plateau_eps = kPlateauThreshold);

}  // namespace chsolve
