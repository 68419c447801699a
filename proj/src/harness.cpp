#include "chsolve/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chsolve/errors.hpp"

namespace chsolve {

PreparedRun prepare(const RunSetup& setup) {
  const RunConfig& cfg = setup.config;
  if (cfg.n_markers < 2) throw InvalidInput("need at least two markers");
  PreparedRun p;
  const InitialProfile base = setup.profile ? *setup.profile : setup.preset.profile();
  if (!setup.profile) {
    p.kinks = setup.preset.kinks();
    p.creases = setup.preset.creases();
  }
  p.profile = base;
  p.profile.support_hint = travel_support(base, cfg.t_end);

  const bool user_span = cfg.beta_span.length() > 0.0;
  p.beta_span = user_span ? cfg.beta_span : default_beta_span(p.profile);
  TransformOptions opt;
  opt.kinks = p.kinks;
  opt.creases = p.creases;
  if (!p.kinks.empty() && setup.graded.value_or(true)) {
    const Array labels = graded_labels(p.profile, p.beta_span, cfg.n_markers, p.kinks, setup.grading);
    p.initial = transform_initial(p.profile, labels, opt);
  } else {
    if (!p.kinks.empty()) p.beta_span = align_span_to_kinks(p.profile, p.beta_span, cfg.n_markers, p.kinks);
    p.initial = transform_initial(p.profile, cfg.n_markers, p.beta_span, opt);
  }
  return p;
}

Array uniform_x_grid(const ChartState& state, int points) {
  return Array::LinSpaced(points, state.x[0], state.x[state.size() - 1]);
}

double exact_error(const Preset& preset, const ChartState& state, int grid_points) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const auto e = preset.exact(state.t, state.x[i]);
    if (!e) throw InvalidInput("preset '" + preset.name() + "' has no closed form");
    worst = std::max(worst, std::abs(state.u[i] - *e));
  }
  const Array grid = uniform_x_grid(state, grid_points);
  const Array u = sample_u(state, grid);
  for (Eigen::Index k = 0; k < grid.size(); ++k)
    worst = std::max(worst, std::abs(u[k] - *preset.exact(state.t, grid[k])));
  return worst;
}

void assess(RunReport& r) {
  const Tolerances& tol = r.history.config.tolerances;
  r.max_energy_drift = 0.0;
  r.max_consistency = 0.0;
  r.max_lipschitz = {-1e300, -1e300};
  for (const auto& d : r.history.diagnostics) {
    r.max_energy_drift = std::max(r.max_energy_drift, d.energy_drift);
    r.max_consistency = std::max(r.max_consistency, d.consistency);
    r.max_lipschitz.x = std::max(r.max_lipschitz.x, d.lipschitz.x);
    r.max_lipschitz.u = std::max(r.max_lipschitz.u, d.lipschitz.u);
  }
  r.flags.energy = r.max_energy_drift <= tol.energy_drift;
  r.flags.consistency = r.max_consistency <= tol.consistency;
  r.flags.lipschitz = r.max_lipschitz.x <= tol.lipschitz && r.max_lipschitz.u <= tol.lipschitz;
  r.flags.ordering = true;
  for (const auto& s : r.history.snapshots) {
    try {
      validate(s);
    } catch (const Error&) {
      r.flags.ordering = false;
    }
  }
}

RunReport run(const RunSetup& setup) {
  RunReport r;
  r.setup = setup;
  const PreparedRun p = prepare(setup);
  r.beta_span = p.beta_span;
  r.history = evolve(p.initial, setup.config);
  assess(r);
  if (!setup.profile && setup.preset.exact(0.0, 0.0)) {
    double worst = 0.0;
    for (const auto& s : r.history.snapshots) worst = std::max(worst, exact_error(setup.preset, s));
    r.exact_error = worst;
  }
  return r;
}

EulerianSnapshot reference_solver(const InitialProfile& profile, double t_end,
                                  const ReferenceOptions& options) {
  if (options.points < 5) throw InvalidInput("reference solver: need at least five points");
  if (!(options.dt > 0.0) || !(t_end >= 0.0)) throw InvalidInput("reference solver: bad time range");
  const Interval support = travel_support(profile, t_end);
  const Eigen::Index m = options.points;
  const Array x = Array::LinSpaced(m, support.lo - options.pad, support.hi + options.pad);
  const double h = x[1] - x[0];

  // Trapezoid weights folded into the kernel columns.
  Eigen::VectorXd w = Eigen::VectorXd::Constant(m, h);
  w[0] = w[m - 1] = 0.5 * h;
  Eigen::MatrixXd kernel_x(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) {
      const double d = x[j] - x[i];
      kernel_x(i, j) = d == 0.0 ? 0.0 : 0.5 * std::copysign(std::exp(-std::abs(d)), d) * w[j];
    }

  auto slope = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd ux(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double left = i > 0 ? u[i - 1] : 0.0;
      const double right = i + 1 < m ? u[i + 1] : 0.0;
      ux[i] = (right - left) / (2.0 * h);
    }
    return ux;
  };
  auto rate = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    const Eigen::VectorXd ux = slope(u);
    const Eigen::VectorXd source = (u.array().square() + 0.5 * ux.array().square()).matrix();
    const Eigen::VectorXd px = kernel_x * source;
    return (-u.array() * ux.array()).matrix() - px;
  };

  Eigen::VectorXd u(m);
  for (Eigen::Index i = 0; i < m; ++i) u[i] = profile.u0(x[i]);
  const auto steps = static_cast<long>(std::ceil(t_end / options.dt - 1e-9));
  for (long k = 0; k < steps; ++k) {
    const double dt = std::min(options.dt, t_end - static_cast<double>(k) * options.dt);
    const Eigen::VectorXd k1 = rate(u);
    const Eigen::VectorXd k2 = rate(u + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = rate(u + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = rate(u + dt * k3);
    u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double steepest = slope(u).cwiseAbs().maxCoeff();
    if (!std::isfinite(steepest) || steepest > options.gradient_guard) {
      std::ostringstream msg;
      msg << "reference solver: |u_x| reached " << steepest << " at t = "
          << static_cast<double>(k + 1) * options.dt << "; data are breaking";
      throw DiagnosticUnavailable(msg.str());
    }
  }

  EulerianSnapshot snap;
  snap.t = t_end;
  snap.x_grid = x;
  snap.u_vals = u.array();
  const Eigen::VectorXd ux = slope(u);
  for (Eigen::Index i = 0; i < m; ++i) snap.ux_vals.emplace_back(ux[i]);
  return snap;
}

namespace {

std::vector<StudyRow> orders(std::vector<StudyRow> rows, const std::vector<double>& steps) {
  for (std::size_t k = 0; k + 2 < rows.size(); ++k) {
    const double e0 = rows[k].error;
    const double e1 = rows[k + 1].error;
    if (e0 > 0.0 && e1 > 0.0) rows[k].order = std::log(e0 / e1) / std::log(steps[k] / steps[k + 1]);
  }
  if (!rows.empty()) rows.pop_back();
  return rows;
}

}  // namespace

StudyTable convergence_study(const RunSetup& setup, const std::vector<int>& ladder_n,
                             const std::vector<double>& ladder_dt) {
  StudyTable table;
  auto final_state = [&](int n, double dt) {
    RunSetup s = setup;
    s.config.n_markers = n;
    s.config.dt = dt;
    s.config.snap_every = std::max(1, static_cast<int>(std::ceil(s.config.t_end / dt)));
    const PreparedRun p = prepare(s);
    return evolve(p.initial, s.config).snapshots.back();
  };

  if (ladder_n.size() >= 2) {
    std::vector<ChartState> finals;
    for (int n : ladder_n) finals.push_back(final_state(n, setup.config.dt));
    const Array grid = uniform_x_grid(finals.back(), 2001);
    std::vector<Array> u;
    for (const auto& s : finals) u.push_back(sample_u(s, grid));
    std::vector<StudyRow> rows;
    std::vector<double> h;
    for (std::size_t k = 0; k < finals.size(); ++k) {
      StudyRow row{ladder_n[k], setup.config.dt, 0.0, std::nullopt};
      if (k + 1 < finals.size()) row.error = (u[k] - u[k + 1]).abs().maxCoeff();
      rows.push_back(row);
      h.push_back(1.0 / (ladder_n[k] - 1));
    }
    table.spatial = orders(rows, h);
  }
  if (ladder_dt.size() >= 2) {
    std::vector<ChartState> finals;
    for (double dt : ladder_dt) finals.push_back(final_state(setup.config.n_markers, dt));
    std::vector<StudyRow> rows;
    for (std::size_t k = 0; k < finals.size(); ++k) {
      StudyRow row{setup.config.n_markers, ladder_dt[k], 0.0, std::nullopt};
      if (k + 1 < finals.size()) row.error = (finals[k].u - finals[k + 1].u).abs().maxCoeff();
      rows.push_back(row);
    }
    table.temporal = orders(rows, ladder_dt);
  }
  return table;
}

}  // namespace chsolve
