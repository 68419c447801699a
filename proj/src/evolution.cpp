#include "chsolve/evolution.hpp"

#include <cmath>
#include <sstream>

#include "chsolve/errors.hpp"

namespace chsolve {

std::vector<double> SolutionHistory::times() const {
  std::vector<double> t;
  t.reserve(snapshots.size());
  for (const auto& s : snapshots) t.push_back(s.t);
  return t;
}

MarkerRates rhs(const ChartState& state, const NonlocalFields& fields) {
  if (!fields.P.allFinite() || !fields.Px.allFinite() || !fields.G.allFinite())
    throw NonFiniteState("non-finite nonlocal field at t = " + std::to_string(state.t));
  MarkerRates r;
  r.beta = fields.G;
  r.x = state.u;
  r.u = -fields.Px;
  r.v = (2.0 * state.u.square() - 2.0 * fields.P + 1.0) * x_beta(state.v) - 1.0;
  return r;
}

MarkerRates rhs(const ChartState& state) { return rhs(state, compute_fields(state)); }

namespace {

ChartState advance(const ChartState& base, const MarkerRates& k, double h) {
  ChartState s;
  s.t = base.t + h;
  s.label = base.label;
  s.breaks = base.breaks;
  s.beta = base.beta + h * k.beta;
  s.x = base.x + h * k.x;
  s.u = base.u + h * k.u;
  s.v = base.v + h * k.v;
  s.refresh_weights();
  return s;
}

void check_order(const ChartState& s, double dt) {
  for (Eigen::Index i = 0; i + 1 < s.size(); ++i) {
    if (!(s.beta[i + 1] > s.beta[i])) {
      std::ostringstream msg;
      msg << "markers " << i << " and " << i + 1 << " crossed in beta at t = " << s.t
          << "; reduce dt (currently " << dt << ") or add markers";
      throw OrderingViolation(msg.str());
    }
  }
}

MarkerRates stage_rhs(const ChartState& s, double dt) {
  try {
    return rhs(s);
  } catch (const OrderingViolation& e) {
    throw OrderingViolation(std::string(e.what()) + "; add markers or reduce dt (currently " +
                            std::to_string(dt) + ")");
  }
}

}  // namespace

ChartState rk4_step(const ChartState& state, double dt) {
  const MarkerRates k1 = stage_rhs(state, dt);
  const ChartState s2 = advance(state, k1, 0.5 * dt);
  check_order(s2, dt);
  const MarkerRates k2 = stage_rhs(s2, dt);
  const ChartState s3 = advance(state, k2, 0.5 * dt);
  check_order(s3, dt);
  const MarkerRates k3 = stage_rhs(s3, dt);
  const ChartState s4 = advance(state, k3, dt);
  check_order(s4, dt);
  const MarkerRates k4 = stage_rhs(s4, dt);

  const double c = dt / 6.0;
  ChartState out;
  out.t = state.t + dt;
  out.label = state.label;
  out.breaks = state.breaks;
  out.beta = state.beta + c * (k1.beta + 2.0 * k2.beta + 2.0 * k3.beta + k4.beta);
  out.x = state.x + c * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  out.u = state.u + c * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
  out.v = state.v + c * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  out.refresh_weights();
  check_order(out, dt);
  if (!out.x.allFinite() || !out.u.allFinite() || !out.v.allFinite())
    throw NonFiniteState("rk4 step produced non-finite values at t = " + std::to_string(out.t));
  return out;
}

double default_dt(const ChartState& state) {
  if (state.size() == 0) return 1e-3;
  const Array P = compute_P(state);
  const double bound = 1.0 + 2.0 * state.u.square().maxCoeff() + 2.0 * P.abs().maxCoeff();
  return std::min(1e-3, 0.1 / bound);
}

double energy(const ChartState& state) {
  const Array c2 = x_beta(state.v);
  return (state.weights * (state.u.square() * c2 + (1.0 - c2))).sum();
}

Diagnostics diagnose(const ChartState& state, const NonlocalFields& fields,
                     const ChartState* previous, double reference_energy) {
  Diagnostics d;
  d.t = state.t;
  d.energy = energy(state);
  d.energy_drift = reference_energy > 0.0 ? std::abs(d.energy - reference_energy) / reference_energy
                                          : std::abs(d.energy - reference_energy);
  if (state.size() > 0) {
    d.sup_u = state.u.abs().maxCoeff();
    d.min_xbeta = x_beta(state.v).minCoeff();
  }
  const SourceNorms norms = source_norms(state, fields.P);
  d.C_inf = std::sqrt(norms.u_l2 * norms.u_l2 + norms.ux_l2 * norms.ux_l2);
  d.C_S = norms.source_bound;
  d.source_l1 = norms.source_l1;
  d.consistency = chart_consistency_residual(state);
  d.lipschitz = lipschitz_excess(state);
  d.g_lipschitz = discrete_lipschitz(state.beta, fields.G);
  if (previous != nullptr && state.t > previous->t)
    d.x_speed = (state.x - previous->x).abs().maxCoeff() / (state.t - previous->t);
  return d;
}

SolutionHistory evolve(const ChartState& initial, const RunConfig& config) {
  if (!(config.dt > 0.0)) throw InvalidInput("evolve: dt must be positive");
  if (!(config.t_end >= 0.0)) throw InvalidInput("evolve: t_end must be non-negative");
  if (config.snap_every < 1) throw InvalidInput("evolve: snap_every must be at least one");
  validate(initial);

  SolutionHistory h;
  h.config = config;
  auto record = [&](const ChartState& s) {
    NonlocalFields f = compute_fields(s);
    const ChartState* prev = h.snapshots.empty() ? nullptr : &h.snapshots.back();
    const double e0 = h.diagnostics.empty() ? energy(s) : h.diagnostics.front().energy;
    h.diagnostics.push_back(diagnose(s, f, prev, e0));
    h.snapshots.push_back(s);
    h.fields.push_back(std::move(f));
  };
  auto log_step = [&](const ChartState& s) {
    StepRecord r;
    r.t = s.t;
    r.energy = energy(s);
    if (s.size() > 0) {
      r.sup_u = s.u.abs().maxCoeff();
      r.min_xbeta = x_beta(s.v).minCoeff();
    }
    h.steps.push_back(r);
  };

  const auto steps = static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9));
  ChartState state = initial;
  record(state);
  log_step(state);
  for (long k = 1; k <= steps; ++k) {
    const double dt =
        k < steps ? config.dt : config.t_end - static_cast<double>(steps - 1) * config.dt;
    state = rk4_step(state, dt);
    state.t = initial.t + (k < steps ? static_cast<double>(k) * config.dt : config.t_end);
    log_step(state);
    if (k % config.snap_every == 0 || k == steps) record(state);
  }
  return h;
}

}  // namespace chsolve
