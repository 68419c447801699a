#include "chsolve/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chsolve/errors.hpp"

namespace chsolve {

namespace {

// Piecewise-linear interpolation on increasing nodes, constant beyond the ends.
double interp(const Array& nodes, const Array& values, double s) {
  const Eigen::Index n = nodes.size();
  if (s <= nodes[0]) return values[0];
  if (s >= nodes[n - 1]) return values[n - 1];
  const double* first = nodes.data();
  const auto j = static_cast<Eigen::Index>(std::upper_bound(first, first + n, s) - first);
  const double w = (s - nodes[j - 1]) / (nodes[j] - nodes[j - 1]);
  return (1.0 - w) * values[j - 1] + w * values[j];
}

double G_at(const SolutionHistory& h, std::size_t k, double beta) {
  return interp(h.snapshots[k].beta, h.fields[k].G, beta);
}

}  // namespace

double history_lipschitz_G(const SolutionHistory& history) {
  double C = 0.0;
  for (std::size_t k = 0; k < history.size(); ++k)
    C = std::max(C, discrete_lipschitz(history.snapshots[k].beta, history.fields[k].G));
  return C;
}

CharPath picard_trace(const SolutionHistory& history, double label,
                      const PicardOptions& options) {
  if (history.empty()) throw InvalidInput("picard_trace: empty history");
  if (!(options.tol > 0.0)) throw InvalidInput("picard_trace: tol must be positive");
  if (!(options.window_contraction > 0.0) || !(options.window_contraction < 1.0))
    throw InvalidInput("picard_trace: window contraction must lie in (0, 1)");
  const ChartState& first = history.snapshots.front();
  if (!(label >= first.beta[0] && label <= first.beta[first.size() - 1])) {
    std::ostringstream msg;
    msg << "picard_trace: label " << label << " outside [" << first.beta[0] << ", "
        << first.beta[first.size() - 1] << "]";
    throw InvalidInput(msg.str());
  }
  const std::size_t K = history.size();
  if (!options.initial_guess.empty() && options.initial_guess.size() != K)
    throw InvalidInput("picard_trace: initial guess must have one value per stored time");

  CharPath path;
  path.label = label;
  path.times = history.times();
  path.lipschitz_G = history_lipschitz_G(history);
  const double C = path.lipschitz_G;
  const auto& t = path.times;

  std::vector<double> beta(K, label);
  if (!options.initial_guess.empty()) beta = options.initial_guess;
  beta[0] = label;
  std::vector<double> g(K);
  g[0] = G_at(history, 0, label);

  std::size_t a = 0;
  while (a + 1 < K) {
    std::size_t b = a + 1;
    while (b + 1 < K && C * (t[b + 1] - t[a]) <= options.window_contraction) ++b;
    // the endpoint enters a one-step trapezoid with half weight
    const double q = b == a + 1 ? 0.5 * C * (t[b] - t[a]) : C * (t[b] - t[a]);
    if (!(q < 1.0)) {
      std::ostringstream msg;
      msg << "picard_trace: snapshot spacing " << t[b] - t[a] << " too coarse for G Lipschitz "
          << C;
      throw ConvergenceFailure(msg.str());
    }

    double scale = std::abs(label);
    for (std::size_t k = a; k <= b; ++k) scale = std::max(scale, std::abs(beta[k]));
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + scale);
    const double tol = std::max(options.tol, floor);

    double worst_ratio = 0.0;
    double previous = -1.0;
    int budget = -1;
    for (int sweep = 1;; ++sweep) {
      for (std::size_t k = a + 1; k <= b; ++k) g[k] = G_at(history, k, beta[k]);
      double change = 0.0;
      double acc = beta[a];
      for (std::size_t k = a + 1; k <= b; ++k) {
        acc += 0.5 * (t[k] - t[k - 1]) * (g[k - 1] + g[k]);
        change = std::max(change, std::abs(acc - beta[k]));
        beta[k] = acc;
      }
      ++path.sweeps;
      if (previous > 10.0 * floor && change > 10.0 * floor)
        worst_ratio = std::max(worst_ratio, change / previous);
      if (change <= tol) break;
      if (budget < 0) {
        // sweeps needed if every later change shrinks by q
        budget = q > 0.0 ? static_cast<int>(std::ceil(std::log(tol / change) / std::log(q))) + 8
                         : 8;
      } else if (sweep > budget) {
        std::ostringstream msg;
        msg << "picard_trace: no convergence on [" << t[a] << ", " << t[b] << "] after " << sweep
            << " sweeps (change " << change << ", contraction bound " << q << ")";
        throw ConvergenceFailure(msg.str());
      }
      previous = change;
    }
    path.window_ends.push_back(t[b]);
    path.contraction_ratios.push_back(worst_ratio);
    a = b;
  }

  path.beta_path = beta;
  path.x_path.resize(K);
  path.u_path.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const ChartState& s = history.snapshots[k];
    path.x_path[k] = interp(s.beta, s.x, beta[k]);
    path.u_path[k] = interp(s.beta, s.u, beta[k]);
  }
  return path;
}

double verify_ucar(const SolutionHistory& history, const CharPath& path) {
  const std::size_t K = path.times.size();
  if (K == 0) return 0.0;
  if (K != history.size()) throw InvalidInput("verify_ucar: path and history differ in length");
  std::vector<double> px(K);
  for (std::size_t k = 0; k < K; ++k)
    px[k] = interp(history.snapshots[k].beta, history.fields[k].Px, path.beta_path[k]);
  double integral = 0.0;
  double worst = 0.0;
  for (std::size_t k = 1; k < K; ++k) {
    integral += 0.5 * (path.times[k] - path.times[k - 1]) * (px[k - 1] + px[k]);
    worst = std::max(worst, std::abs(path.u_path[k] - path.u_path[0] + integral));
  }
  return worst;
}

SeparationReport separation_bound(const SolutionHistory& history, double label_1, double label_2,
                                  double tolerance, const PicardOptions& options) {
  const CharPath p1 = picard_trace(history, label_1, options);
  const CharPath p2 = picard_trace(history, label_2, options);
  SeparationReport r;
  r.C = p1.lipschitz_G;
  r.times = p1.times;
  r.initial_separation = std::abs(label_2 - label_1);
  const double d0 = r.initial_separation;
  const double sign = label_2 >= label_1 ? 1.0 : -1.0;
  r.worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const double d = sign * (p2.beta_path[k] - p1.beta_path[k]);
    r.separation.push_back(std::abs(d));
    if (d0 > 0.0 && !(d > 0.0)) r.ordered = false;
    const double tk = r.times[k] - r.times.front();
    double excess;
    if (d0 > 0.0) {
      const double upper = std::exp(r.C * tk) * d0;
      const double lower = std::exp(-r.C * tk) * d0;
      excess = std::max(std::abs(d) / upper - 1.0, 1.0 - std::abs(d) / lower);
      if (tk > 0.0 && d != 0.0)
        r.empirical_rate = std::max(r.empirical_rate, std::abs(std::log(std::abs(d) / d0)) / tk);
    } else {
      excess = std::abs(d);
    }
    r.worst_excess = std::max(r.worst_excess, excess);
  }
  r.within = r.ordered && r.worst_excess <= tolerance;
  return r;
}

}  // namespace chsolve
