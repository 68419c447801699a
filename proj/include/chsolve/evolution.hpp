#pragma once

#include <vector>

#include "chsolve/chart.hpp"
#include "chsolve/nonlocal.hpp"

namespace chsolve {

struct Tolerances {
  double energy_drift = 1e-4;   // relative |E(t) - E(0)| / E(0)
  double consistency = 1e-2;    // chart_consistency_residual
  double lipschitz = 1e-6;      // excess in the discrete Lipschitz inequalities
};

/// Discretization and output parameters of a run. A non-positive `dt` selects
/// the default step from `default_dt`.
struct RunConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int snap_every = 10;
  int n_markers = 4096;
  Interval beta_span{0.0, 0.0};  // empty: derived from the profile
  Tolerances tolerances;
};

/// Per-snapshot conservation and bound diagnostics.
struct Diagnostics {
  double t = 0.0;
  double energy = 0.0;
  double energy_drift = 0.0;  // relative to the first snapshot
  double sup_u = 0.0;
  double min_xbeta = 1.0;     // min cos^2(v/2)
  double C_inf = 0.0;         // ||u||_{H^1}
  double C_S = 0.0;           // 2 (||u||_inf ||u||_2 + ||P||_2) ||u_x||_2
  double source_l1 = 0.0;     // ||2 (u^2 - P) u_x||_{L^1}
  double consistency = 0.0;
  LipschitzExcess lipschitz;
  double x_speed = 0.0;       // max |dx| / dt since the previous snapshot
  double g_lipschitz = 0.0;   // discrete Lipschitz constant of G in beta
};

/// Cheap scalars recorded after every step, so extrema between snapshots
/// are not missed.
struct StepRecord {
  double t = 0.0;
  double energy = 0.0;
  double sup_u = 0.0;
  double min_xbeta = 1.0;
};

/// Stored snapshots of one run, with the nonlocal fields of each snapshot.
struct SolutionHistory {
  RunConfig config;
  std::vector<ChartState> snapshots;
  std::vector<NonlocalFields> fields;
  std::vector<Diagnostics> diagnostics;
  std::vector<StepRecord> steps;  // initial state and every step

  bool empty() const { return snapshots.empty(); }
  std::size_t size() const { return snapshots.size(); }
  std::vector<double> times() const;
};

/// Time derivatives of the four marker variables.
struct MarkerRates {
  Array beta;
  Array x;
  Array u;
  Array v;
};

/// dbeta/dt = G, dx/dt = u, du/dt = -P_x, dv/dt = (2u^2 - 2P + 1) cos^2(v/2) - 1.
/// Throws NonFiniteState when a field is not finite.
MarkerRates rhs(const ChartState& state);
MarkerRates rhs(const ChartState& state, const NonlocalFields& fields);

/// One classical fourth-order Runge-Kutta step with fields recomputed at
/// every stage. Throws OrderingViolation when beta stops being strictly
/// increasing.
ChartState rk4_step(const ChartState& state, double dt);

/// Step size heuristic min(1e-3, 0.1 / (1 + 2 sup u^2 + 2 sup |P|)).
double default_dt(const ChartState& state);

/// E = sum_i w_i [u_i^2 cos^2(v_i/2) + sin^2(v_i/2)].
double energy(const ChartState& state);

/// Diagnostics of one state; `previous` (may be null) provides the
/// reference energy and the time-Lipschitz estimate.
Diagnostics diagnose(const ChartState& state, const NonlocalFields& fields,
                     const ChartState* previous, double reference_energy);

/// Integrates to config.t_end, storing a snapshot every `snap_every` steps
/// and at the final time. Energy drift beyond tolerance is only recorded;
/// a non-finite state is fatal.
SolutionHistory evolve(const ChartState& initial, const RunConfig& config);

}  // namespace chsolve
