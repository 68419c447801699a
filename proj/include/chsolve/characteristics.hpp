#pragma once

#include <vector>

#include "chsolve/evolution.hpp"

namespace chsolve {

/// One characteristic sampled at the stored times of a history.
struct CharPath {
  double label = 0.0;
  std::vector<double> times;
  std::vector<double> beta_path;
  std::vector<double> x_path;
  std::vector<double> u_path;

  // Picard bookkeeping: the Lipschitz constant of G used to size the
  // windows, and per window the largest ratio of successive sup-changes.
  double lipschitz_G = 0.0;
  std::vector<double> window_ends;
  std::vector<double> contraction_ratios;
  int sweeps = 0;
};

struct PicardOptions {
  double tol = 1e-12;
  /// Windows are chosen so that lipschitz_G * length <= window_contraction.
  double window_contraction = 0.5;
  /// Optional first iterate on the stored times; empty means constant label.
  std::vector<double> initial_guess;
};

/// Largest discrete Lipschitz constant of G in beta over all snapshots.
double history_lipschitz_G(const SolutionHistory& history);

/// beta(t) = label + int_0^t G(s, beta(s)) ds on the stored times, with G
/// linear in beta within each snapshot and linear in t between snapshots (so
/// the integral is a trapezoid sum). Solved by Picard iteration window by
/// window; x and u are read off the chart by linear interpolation in beta.
///
/// Throws InvalidInput when the history is empty or the label is outside the
/// initial beta range, and ConvergenceFailure when a window needs more sweeps
/// than its contraction factor predicts.
CharPath picard_trace(const SolutionHistory& history, double label,
                      const PicardOptions& options = {});

/// max over stored times of |u(t, x(t)) - u(0, x(0)) + int_0^t P_x(s, x(s)) ds|,
/// the integral by the trapezoid rule on the stored times.
double verify_ucar(const SolutionHistory& history, const CharPath& path);

/// Two traced characteristics checked against
///   e^{-C t} |d0| <= |beta_1(t) - beta_2(t)| <= e^{C t} |d0|
/// with C = history_lipschitz_G.
struct SeparationReport {
  double C = 0.0;
  double initial_separation = 0.0;
  std::vector<double> times;
  std::vector<double> separation;
  /// max over t > 0 of |log(separation / initial)| / t
  double empirical_rate = 0.0;
  /// Worst relative excess over the two bounds; non-positive when they hold.
  double worst_excess = 0.0;
  bool ordered = true;   // beta_1 < beta_2 at all times when label_1 < label_2
  bool within = true;
};
SeparationReport separation_bound(const SolutionHistory& history, double label_1, double label_2,
                                  double tolerance = 1e-9, const PicardOptions& options = {});

}  // namespace chsolve
