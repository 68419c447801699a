#include <doctest.h>

#include <cmath>

#include "chsolve/characteristics.hpp"
#include "chsolve/errors.hpp"
#include "chsolve/harness.hpp"

using namespace chsolve;

namespace {

SolutionHistory history_of(const std::string& name, int n, double dt, double t_end, int snap_every) {
  RunSetup s;
  s.preset = make_preset(name);
  s.config.n_markers = n;
  s.config.dt = dt;
  s.config.t_end = t_end;
  s.config.snap_every = snap_every;
  return run(s).history;
}

const SolutionHistory& peakon_history() {
  static const SolutionHistory h = history_of("peakon", 2048, 2e-3, 5.0, 25);
  return h;
}

double crest_label(const ChartState& s) {
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s.x[i] == 0.0) return s.label[i];
  throw std::logic_error("no crest marker");
}

}  // namespace

TEST_CASE("zero history: characteristics stand still") {
  const SolutionHistory h = history_of("zero", 128, 1e-2, 1.0, 10);
  const CharPath p = picard_trace(h, 0.3);
  REQUIRE(p.times.size() == h.size());
  for (std::size_t k = 0; k < p.times.size(); ++k) {
    CHECK(p.beta_path[k] == 0.3);
    CHECK(p.x_path[k] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(p.u_path[k] == 0.0);
  }
  CHECK(verify_ucar(h, p) == 0.0);
  const SeparationReport r = separation_bound(h, -1.0, 2.0);
  for (double d : r.separation) CHECK(d == 3.0);
  CHECK(r.within);
}

TEST_CASE("peakon crest travels at unit speed with u = 1") {
  const SolutionHistory& h = peakon_history();
  const CharPath p = picard_trace(h, crest_label(h.snapshots.front()));
  double worst = 0.0;
  for (std::size_t k = 0; k < p.times.size(); ++k) worst = std::max(worst, std::abs(p.x_path[k] - p.times[k]));
  CHECK(worst <= 1e-2);
  CHECK(verify_ucar(h, p) <= 1e-3);
  for (double r : p.contraction_ratios) CHECK(r <= 0.5);
  CHECK(p.lipschitz_G == doctest::Approx(history_lipschitz_G(h)));
}

TEST_CASE("Picard limit does not depend on the first iterate") {
  const SolutionHistory& h = peakon_history();
  PicardOptions o;
  const CharPath a = picard_trace(h, 0.2, o);
  for (std::size_t k = 0; k < a.times.size(); ++k) o.initial_guess.push_back(0.2 + 0.3 * std::sin(a.times[k]));
  const CharPath b = picard_trace(h, 0.2, o);
  for (std::size_t k = 0; k < a.times.size(); ++k)
    CHECK(std::abs(a.beta_path[k] - b.beta_path[k]) <= 2.0 * o.tol);
}

TEST_CASE("traced paths keep their order and coincide for equal labels") {
  const SolutionHistory& h = peakon_history();
  std::vector<CharPath> paths;
  for (double label : {-1.0, 0.0, 0.4, 0.5, 0.6, 1.5, 3.0}) paths.push_back(picard_trace(h, label));
  for (std::size_t k = 0; k < h.size(); ++k)
    for (std::size_t j = 0; j + 1 < paths.size(); ++j)
      CHECK(paths[j].beta_path[k] < paths[j + 1].beta_path[k]);
  const CharPath again = picard_trace(h, 0.4);
  CHECK(again.beta_path == paths[2].beta_path);
  CHECK(again.x_path == paths[2].x_path);
}

TEST_CASE("separation of two peakon characteristics stays within the Gronwall bounds") {
  const SeparationReport r = separation_bound(peakon_history(), 0.4, 0.6);
  CHECK(r.initial_separation == doctest::Approx(0.2));
  CHECK(r.ordered);
  CHECK(r.within);
  CHECK(r.worst_excess <= 0.0);
  CHECK(r.empirical_rate <= r.C);
}

TEST_CASE("a traced path follows the evolved marker with the same label") {
  const SolutionHistory h = history_of("gaussian", 1024, 2e-3, 1.0, 10);
  const ChartState& s0 = h.snapshots.front();
  for (Eigen::Index i : {Eigen::Index(300), Eigen::Index(512), Eigen::Index(700)}) {
    const CharPath p = picard_trace(h, s0.label[i]);
    for (std::size_t k = 0; k < h.size(); ++k) {
      CHECK(std::abs(p.beta_path[k] - h.snapshots[k].beta[i]) <= 1e-4);
      CHECK(std::abs(p.x_path[k] - h.snapshots[k].x[i]) <= 1e-4);
    }
  }
}

TEST_CASE("u along a Gaussian characteristic obeys du = -P_x dt, improving with snapshot density") {
  auto residual = [](int snap_every) {
    const SolutionHistory h = history_of("gaussian", 1024, 2e-3, 1.0, snap_every);
    return verify_ucar(h, picard_trace(h, 0.3));
  };
  const double coarse = residual(20);
  const double fine = residual(10);
  CHECK(coarse <= 1e-2);
  CHECK(fine < coarse);
}

TEST_CASE("picard_trace rejects empty histories and labels out of range") {
  CHECK_THROWS_AS(picard_trace(SolutionHistory{}, 0.0), InvalidInput);
  const SolutionHistory h = history_of("zero", 32, 1e-2, 0.1, 5);
  CHECK_THROWS_AS(picard_trace(h, 1e6), InvalidInput);
  PicardOptions o;
  o.initial_guess = {1.0};
  CHECK_THROWS_AS(picard_trace(h, 0.0, o), InvalidInput);
}
