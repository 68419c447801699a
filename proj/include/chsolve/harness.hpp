#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chsolve/characteristics.hpp"
#include "chsolve/eulerian.hpp"
#include "chsolve/evolution.hpp"
#include "chsolve/presets.hpp"

namespace chsolve {

/// Everything needed to reproduce a run.
struct RunSetup {
  Preset preset;
  /// Sampled datum replacing the preset when set.
  std::optional<InitialProfile> profile;
  std::string profile_source;  // file name echoed in reports
  RunConfig config;
  /// Kinked data get graded labels unless `graded` is set to false; smooth
  /// data always use uniform labels.
  std::optional<bool> graded;
  LabelGrading grading;
};

/// Initial profile with its support widened for travel up to t_end, the kinks
/// and the transformed marker state.
struct PreparedRun {
  InitialProfile profile;
  std::vector<double> kinks;
  std::vector<double> creases;
  Interval beta_span;
  ChartState initial;
};
PreparedRun prepare(const RunSetup& setup);

struct AcceptanceFlags {
  bool energy = true;       // max relative drift <= tolerances.energy_drift
  bool consistency = true;  // max chart residual <= tolerances.consistency
  bool lipschitz = true;    // both Lipschitz excesses <= tolerances.lipschitz
  bool ordering = true;     // every snapshot passes validate()

  bool all() const { return energy && consistency && lipschitz && ordering; }
};

struct RunReport {
  RunSetup setup;
  Interval beta_span;
  SolutionHistory history;
  AcceptanceFlags flags;
  double max_energy_drift = 0.0;
  double max_consistency = 0.0;
  LipschitzExcess max_lipschitz{-1e300, -1e300};
  /// sup over snapshots of |u - exact| when the preset has a closed form.
  std::optional<double> exact_error;
};

/// transform_initial -> evolve -> flags.
RunReport run(const RunSetup& setup);

/// Flags and maxima of an existing history against its tolerances.
void assess(RunReport& report);

/// sup |u - exact| over the markers and a uniform grid of `grid_points`
/// across the occupied x range, at one snapshot.
double exact_error(const Preset& preset, const ChartState& state, int grid_points = 4001);

/// Uniform grid over [x_first, x_last] of a state.
Array uniform_x_grid(const ChartState& state, int points);

/// Independent check for smooth data: u_t + u u_x = -P_x on a uniform x grid
/// with central differences, P_x by trapezoid quadrature against a dense
/// kernel matrix, classical RK4. Valid only before breaking.
struct ReferenceOptions {
  int points = 1501;
  double pad = kSupportPad;
  double dt = 1e-3;
  double gradient_guard = 50.0;  // max |u_x| before the result is rejected
};

/// Throws DiagnosticUnavailable when max |u_x| exceeds the guard.
EulerianSnapshot reference_solver(const InitialProfile& profile, double t_end,
                                  const ReferenceOptions& options = {});

/// Observed orders from successive differences along a refinement ladder.
/// `error` of row k compares rung k with rung k + 1; `order` compares the
/// errors of rows k and k + 1 and is empty when either vanishes.
struct StudyRow {
  int n_markers = 0;
  double dt = 0.0;
  double error = 0.0;
  std::optional<double> order;
};
struct StudyTable {
  std::vector<StudyRow> spatial;   // varying N at the setup's dt
  std::vector<StudyRow> temporal;  // varying dt at the setup's N
};

/// Spatial differences compare u sampled on a common x grid; temporal ones
/// compare u at the (identical) markers.
StudyTable convergence_study(const RunSetup& setup, const std::vector<int>& ladder_n,
                             const std::vector<double>& ladder_dt);

}  // namespace chsolve
