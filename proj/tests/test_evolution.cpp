#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chsolve/errors.hpp"
#include "chsolve/evolution.hpp"
#include "chsolve/harness.hpp"

using namespace chsolve;

namespace {

ChartState prepared(const std::string& name, int n, const std::map<std::string, double>& params = {},
                    double t_end = 0.0) {
  RunSetup s;
  s.preset = make_preset(name, params);
  s.config.n_markers = n;
  s.config.t_end = t_end;
  return prepare(s).initial;
}

Eigen::Index crest_of(const ChartState& s) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s.u[i] > s.u[best]) best = i;
  return best;
}

}  // namespace

TEST_CASE("rhs on the zero state and at a vertical marker") {
  ChartState s = transform_initial(zero_profile(), 64, {-11.0, 11.0});
  const MarkerRates r = rhs(s);
  CHECK(r.beta.abs().maxCoeff() == 0.0);
  CHECK(r.x.abs().maxCoeff() == 0.0);
  CHECK(r.u.abs().maxCoeff() == 0.0);
  CHECK(r.v.abs().maxCoeff() == 0.0);

  s.v[30] = std::numbers::pi;
  CHECK(rhs(s).v[30] == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("rhs at the peakon crest") {
  const ChartState s = prepared("peakon", 4096);
  const Eigen::Index c = crest_of(s);
  const MarkerRates r = rhs(s);
  CHECK(r.x[c] == 1.0);
  CHECK(std::abs(r.u[c]) <= 1e-7);
  CHECK(r.beta[c] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("rk4_step keeps the zero state and moves the peakon crest at unit speed") {
  const ChartState z = transform_initial(zero_profile(), 64, {-11.0, 11.0});
  const ChartState z1 = rk4_step(z, 0.01);
  CHECK(z1.t == doctest::Approx(0.01));
  CHECK((z1.x - z.x).abs().maxCoeff() == 0.0);
  CHECK(z1.u.abs().maxCoeff() == 0.0);

  const ChartState p = prepared("peakon", 4096);
  const Eigen::Index c = crest_of(p);
  const ChartState p1 = rk4_step(p, 1e-3);
  CHECK(p1.x[c] - p.x[c] == doctest::Approx(1e-3).epsilon(1e-6));
  CHECK(std::abs(p1.u[c] - 1.0) <= 1e-8);
}

TEST_CASE("rk4_step is fourth order in time") {
  const ChartState s = prepared("gaussian", 512);
  auto advance = [&](double dt) {
    ChartState st = s;
    const int steps = int(std::lround(0.4 / dt));
    for (int k = 0; k < steps; ++k) st = rk4_step(st, dt);
    return st;
  };
  const ChartState fine = advance(0.0025);
  const double e1 = (advance(0.04).u - fine.u).abs().maxCoeff();
  const double e2 = (advance(0.02).u - fine.u).abs().maxCoeff();
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("energy of known states") {
  CHECK(energy(transform_initial(zero_profile(), 64, {-11.0, 11.0})) == 0.0);
  // trapezoid weights are second order across the crest
  CHECK(energy(prepared("peakon", 4096)) == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(energy(prepared("peakon", 4096, {{"c", 0.5}})) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(energy(prepared("peakon_antipeakon", 4096)) == doctest::Approx(4.0).epsilon(1e-2));
  const ChartState g = prepared("gaussian", 2048);
  // |u|^2 + |u_x|^2 of e^{-x^2} integrates to sqrt(pi/2) (1 + 1)
  CHECK(energy(g) == doctest::Approx(2.0 * std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-9));
}

TEST_CASE("default_dt") {
  CHECK(default_dt(transform_initial(zero_profile(), 64, {-11.0, 11.0})) == 1e-3);
  // sup u^2 = 100 and sup P = 50 put it below the 1e-3 cap
  CHECK(default_dt(prepared("peakon", 512, {{"c", 10.0}})) == doctest::Approx(0.1 / 301.0).epsilon(1e-6));
}

TEST_CASE("evolve validates its configuration") {
  const ChartState s = transform_initial(zero_profile(), 16, {-5.0, 5.0});
  RunConfig c;
  c.dt = 0.0;
  CHECK_THROWS_AS(evolve(s, c), InvalidInput);
  c = RunConfig{};
  c.t_end = -1.0;
  CHECK_THROWS_AS(evolve(s, c), InvalidInput);
  c = RunConfig{};
  c.snap_every = 0;
  CHECK_THROWS_AS(evolve(s, c), InvalidInput);
  ChartState bad = s;
  bad.u[3] = std::nan("");
  CHECK_THROWS_AS(evolve(bad, RunConfig{}), Error);
}

TEST_CASE("evolve stores snapshots, final time and a step log") {
  const ChartState s = prepared("gaussian", 256);
  RunConfig c;
  c.dt = 0.01;
  c.t_end = 0.255;
  c.snap_every = 10;
  const SolutionHistory h = evolve(s, c);
  const auto t = h.times();
  REQUIRE(t.size() >= 3);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == doctest::Approx(0.255).epsilon(1e-12));
  CHECK(h.fields.size() == h.size());
  CHECK(h.diagnostics.size() == h.size());
  CHECK(h.steps.front().t == 0.0);
  CHECK(h.steps.back().t == doctest::Approx(0.255).epsilon(1e-12));
  for (std::size_t k = 1; k < t.size(); ++k) CHECK(t[k] > t[k - 1]);
}

TEST_CASE("a colliding pair keeps markers ordered and respects the a-priori bounds") {
  const ChartState s = prepared("peakon_antipeakon", 1024, {{"sep", 2.0}}, 3.0);
  RunConfig c;
  c.dt = 2e-3;
  c.t_end = 3.0;
  c.snap_every = 25;
  const SolutionHistory h = evolve(s, c);
  double min_xbeta = 1.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const ChartState& st = h.snapshots[k];
    CHECK_NOTHROW(validate(st));
    const Diagnostics& d = h.diagnostics[k];
    CHECK(d.sup_u <= d.C_inf);
    CHECK(d.source_l1 <= d.C_S * (1.0 + 1e-12));
    if (k > 0) CHECK(d.x_speed <= d.C_inf * (1.0 + 1e-9));
    CHECK(d.energy_drift <= 1e-4);
  }
  for (const auto& r : h.steps) min_xbeta = std::min(min_xbeta, r.min_xbeta);
  // the pair meets near t = 1.5, where the chart goes nearly vertical
  CHECK(min_xbeta <= 1e-2);
}
