#include "chsolve/chart.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chsolve/errors.hpp"

namespace chsolve {

void ChartState::refresh_weights() { weights = trapezoid_weights(beta); }

Array trapezoid_weights(const Array& nodes) {
  const Eigen::Index n = nodes.size();
  Array w = Array::Zero(n);
  if (n < 2) return w;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double half = 0.5 * (nodes[i + 1] - nodes[i]);
    w[i] += half;
    w[i + 1] += half;
  }
  return w;
}

Array cumulative_trapezoid(const Array& nodes, const Array& values) {
  const Eigen::Index n = nodes.size();
  Array out(n);
  if (n == 0) return out;
  out[0] = 0.0;
  for (Eigen::Index i = 1; i < n; ++i)
    out[i] = out[i - 1] + 0.5 * (nodes[i] - nodes[i - 1]) * (values[i] + values[i - 1]);
  return out;
}

double one_sided_slope(const Array& nodes, const Array& f, Eigen::Index i, int dir,
                       const std::vector<Eigen::Index>& breaks) {
  const Eigen::Index n = nodes.size();
  const Eigen::Index j = i + dir;
  if (j < 0 || j >= n) return 0.0;
  auto is_break = [&](Eigen::Index a, Eigen::Index b) {
    return std::binary_search(breaks.begin(), breaks.end(), std::min(a, b));
  };
  const double d1 = (f[j] - f[i]) / (nodes[j] - nodes[i]);
  if (is_break(i, j)) return d1;
  const Eigen::Index back = i - dir;
  const Eigen::Index far = i + 2 * dir;
  Eigen::Index k = -1;
  if (back >= 0 && back < n && !is_break(i, back)) k = back;
  else if (far >= 0 && far < n && !is_break(j, far)) k = far;
  if (k < 0) return d1;
  const double d2 = ((f[k] - f[j]) / (nodes[k] - nodes[j]) - d1) / (nodes[k] - nodes[i]);
  return d1 + d2 * (nodes[i] - nodes[j]);
}

Array cumulative_corrected_trapezoid(const Array& nodes, const Array& values,
                                     const std::vector<Eigen::Index>& breaks) {
  const Eigen::Index n = nodes.size();
  Array out(n);
  if (n == 0) return out;
  out[0] = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double h = nodes[i] - nodes[i - 1];
    const double slope_a = one_sided_slope(nodes, values, i - 1, +1, breaks);
    const double slope_b = one_sided_slope(nodes, values, i, -1, breaks);
    out[i] = out[i - 1] + 0.5 * h * (values[i] + values[i - 1]) - h * h / 12.0 * (slope_b - slope_a);
  }
  return out;
}

ChartState identity_state(const Array& labels) {
  ChartState s;
  s.label = labels;
  s.beta = labels;
  s.x = labels;
  s.u = Array::Zero(labels.size());
  s.v = Array::Zero(labels.size());
  s.refresh_weights();
  return s;
}

double wrap_angle(double v) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return std::remainder(v, two_pi);
}

// ---------------------------------------------------------------------------

namespace {

// five-point Gauss-Legendre rule on [0, 1]
constexpr double kGaussNode[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                                  0.76923465505284155, 0.95308992296933200};
constexpr double kGaussWeight[5] = {0.11846344252809454, 0.23931433524968324,
                                    0.28444444444444444, 0.23931433524968324,
                                    0.11846344252809454};

template <class F>
double gauss(const F& f, double a, double b) {
  double sum = 0.0;
  for (int q = 0; q < 5; ++q) sum += kGaussWeight[q] * f(a + (b - a) * kGaussNode[q]);
  return (b - a) * sum;
}

}  // namespace

AdaptedCoordinate::AdaptedCoordinate(const InitialProfile& profile, int n_fine, double pad,
                                     const std::vector<double>& kinks)
    : profile_(profile) {
  if (n_fine < 2) throw InvalidInput("adapted coordinate: fine grid needs at least two points");
  const double lo = profile.support_hint.lo - pad;
  const double hi = profile.support_hint.hi + pad;
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw InvalidInput("adapted coordinate: invalid support hint");

  std::vector<double> nodes(static_cast<std::size_t>(n_fine));
  for (int k = 0; k < n_fine; ++k) nodes[k] = lo + (hi - lo) * k / (n_fine - 1);
  const double min_gap = 1e-3 * (hi - lo) / (n_fine - 1);
  for (double k : kinks) {
    if (!(k > lo && k < hi)) continue;
    // the kink replaces any node too close to it
    std::erase_if(nodes, [&](double s) { return std::abs(s - k) < min_gap && s != lo && s != hi; });
    nodes.insert(std::upper_bound(nodes.begin(), nodes.end(), k), k);
  }
  const auto n = static_cast<Eigen::Index>(nodes.size());
  grid_x_ = Eigen::Map<const Array>(nodes.data(), n);

  auto stretch = [&](double s) {
    const double d = profile.u0x(s);
    return d * d;
  };
  auto density = [&](double s) {
    const double a = profile.u0(s);
    const double d = profile.u0x(s);
    if (!std::isfinite(a) || !std::isfinite(d)) {
      std::ostringstream msg;
      msg << "profile is not finite at x = " << s;
      throw InvalidInput(msg.str());
    }
    return a * a + d * d;
  };
  grid_beta_.resize(n);
  grid_energy_.resize(n);
  grid_beta_[0] = lo;
  grid_energy_[0] = 0.0;
  for (Eigen::Index k = 1; k < n; ++k) {
    const double a = grid_x_[k - 1];
    const double b = grid_x_[k];
    density(a);
    grid_beta_[k] = grid_beta_[k - 1] + (b - a) + gauss(stretch, a, b);
    grid_energy_[k] = grid_energy_[k - 1] + gauss(density, a, b);
  }
  density(hi);
  total_energy_ = grid_energy_[n - 1];
}

Eigen::Index AdaptedCoordinate::panel_of_x(double s) const {
  const Eigen::Index n = grid_x_.size();
  const double* first = grid_x_.data();
  const Eigen::Index k = (std::upper_bound(first, first + n, s) - first) - 1;
  return std::clamp<Eigen::Index>(k, 0, n - 2);
}

double AdaptedCoordinate::beta(double s) const {
  const Eigen::Index n = grid_x_.size();
  if (s <= grid_x_[0]) return grid_beta_[0] - (grid_x_[0] - s);
  if (s >= grid_x_[n - 1]) return grid_beta_[n - 1] + (s - grid_x_[n - 1]);
  const Eigen::Index k = panel_of_x(s);
  auto stretch = [&](double r) {
    const double d = profile_.u0x(r);
    return d * d;
  };
  return grid_beta_[k] + (s - grid_x_[k]) + gauss(stretch, grid_x_[k], s);
}

double AdaptedCoordinate::x(double b) const {
  const Eigen::Index n = grid_beta_.size();
  if (b <= grid_beta_[0]) return grid_x_[0] - (grid_beta_[0] - b);
  if (b >= grid_beta_[n - 1]) return grid_x_[n - 1] + (b - grid_beta_[n - 1]);
  const double* first = grid_beta_.data();
  const Eigen::Index k =
      std::clamp<Eigen::Index>((std::upper_bound(first, first + n, b) - first) - 1, 0, n - 2);
  double lo = grid_x_[k];
  double hi = grid_x_[k + 1];
  if (b == grid_beta_[k]) return lo;
  // safeguarded Newton on the monotone map beta(x) inside the bracketing panel
  const double a = (b - grid_beta_[k]) / (grid_beta_[k + 1] - grid_beta_[k]);
  double s = lo + a * (hi - lo);
  for (int it = 0; it < 60; ++it) {
    const double r = beta(s) - b;
    if (r > 0.0) hi = s;
    else lo = s;
    const double d = profile_.u0x(s);
    double next = s - r / (1.0 + d * d);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-15 * std::max(1.0, std::abs(s)) || hi - lo <= 0.0) {
      s = next;
      break;
    }
    s = next;
  }
  return s;
}

double AdaptedCoordinate::energy_outside(const Interval& span) const {
  auto energy_left_of = [&](double s) {
    const Eigen::Index n = grid_x_.size();
    if (s <= grid_x_[0]) return 0.0;
    if (s >= grid_x_[n - 1]) return total_energy_;
    const Eigen::Index k = panel_of_x(s);
    auto density = [&](double r) {
      const double a = profile_.u0(r);
      const double d = profile_.u0x(r);
      return a * a + d * d;
    };
    return grid_energy_[k] + gauss(density, grid_x_[k], s);
  };
  const double left = energy_left_of(x(span.lo));
  const double right = total_energy_ - energy_left_of(x(span.hi));
  return std::max(0.0, left) + std::max(0.0, right);
}

double beta_of_x(const InitialProfile& profile, double x, int n_fine) {
  const AdaptedCoordinate coord(profile, n_fine);
  return coord.beta(x);
}

Interval default_beta_span(const InitialProfile& profile, double pad) {
  const AdaptedCoordinate coord(profile, 1 << 14, pad);
  return coord.beta_range();
}

Interval align_span_to_kinks(const InitialProfile& profile, Interval span, int n_markers,
                             const std::vector<double>& kinks, int refine, double pad) {
  if (kinks.empty()) return span;
  if (n_markers < 3) throw InvalidInput("kink alignment needs at least three markers");
  if (!(span.hi > span.lo)) throw InvalidInput("kink alignment: empty beta span");
  const AdaptedCoordinate coord(profile, std::max(refine * n_markers, 2048), pad, kinks);
  std::vector<double> b;
  for (double k : kinks) b.push_back(coord.beta(k));
  std::sort(b.begin(), b.end());

  const double min_h = span.length() / (n_markers - 2);
  double h = min_h;
  if (b.size() > 1) {
    const double d = b.back() - b.front();
    const double m = std::floor(d / min_h);
    if (m < 1.0) throw InvalidInput("kinks closer than one marker spacing cannot be aligned");
    h = d / m;
  }
  const double lo = b.front() - std::ceil((b.front() - span.lo) / h) * h;
  return {lo, lo + (n_markers - 1) * h};
}

namespace {

// Label space on one side of an anchor (a kink), out to the next kink
// midpoint or the span end.
struct LabelSegment {
  double anchor;
  double end;
  int dir;
  bool graded;
  double length;
};

LabelSegment segment(double anchor, double end, bool graded) {
  return {anchor, end, end > anchor ? +1 : -1, graded, std::abs(end - anchor)};
}

// Spacing floor + growth * distance near graded anchors, capped at `cap`.
struct Spacing {
  double floor;
  double growth;
  double cap;

  double graded_reach() const { return std::max(0.0, (cap - floor) / growth); }
  double graded_count(double d) const { return std::log1p(growth * d / floor) / growth; }

  double count(const LabelSegment& s) const {
    if (!s.graded) return s.length / cap;
    const double reach = graded_reach();
    if (s.length <= reach) return graded_count(s.length);
    return graded_count(reach) + (s.length - reach) / cap;
  }

  double distance(const LabelSegment& s, double m) const {
    if (!s.graded) return m * cap;
    const double reach = graded_reach();
    const double m_reach = graded_count(reach);
    if (m <= m_reach) return floor / growth * std::expm1(growth * m);
    return reach + (m - m_reach) * cap;
  }
};

}  // namespace

Array graded_labels(const InitialProfile& profile, Interval span, int n_markers,
                    const std::vector<double>& kinks, const LabelGrading& grading, int refine,
                    double pad) {
  if (n_markers < 2) throw InvalidInput("graded labels: need at least two markers");
  if (!(span.hi > span.lo)) throw InvalidInput("graded labels: empty beta span");
  if (!(grading.floor_fraction > 0.0) || !(grading.growth > 0.0))
    throw InvalidInput("graded labels: floor fraction and growth must be positive");
  if (!(grading.twin_fraction >= 0.0) || !(grading.twin_fraction < 1.0))
    throw InvalidInput("graded labels: twin fraction must lie in [0, 1)");
  if (kinks.empty()) return Array::LinSpaced(n_markers, span.lo, span.hi);

  const AdaptedCoordinate coord(profile, std::max(refine * n_markers, 2048), pad, kinks);
  struct Anchor {
    double beta;
    bool left;   // markers on this side drift apart
    bool right;
  };
  std::vector<Anchor> anchors;
  for (double k : kinks) {
    const double b = coord.beta(k);
    if (!(b > span.lo && b < span.hi)) throw InvalidInput("graded labels: kink outside the span");
    // a crest running right leaves its left flank behind, and vice versa
    const double u = profile.u0(k);
    anchors.push_back({b, u >= 0.0 || grading.both_sides, u <= 0.0 || grading.both_sides});
  }
  std::sort(anchors.begin(), anchors.end(),
            [](const Anchor& a, const Anchor& b) { return a.beta < b.beta; });

  std::vector<LabelSegment> segs;
  segs.push_back(segment(anchors.front().beta, span.lo, anchors.front().left));
  for (std::size_t i = 0; i + 1 < anchors.size(); ++i) {
    const double mid = 0.5 * (anchors[i].beta + anchors[i + 1].beta);
    segs.push_back(segment(anchors[i].beta, mid, anchors[i].right));
    segs.push_back(segment(anchors[i + 1].beta, mid, anchors[i + 1].left));
  }
  segs.push_back(segment(anchors.back().beta, span.hi, anchors.back().right));
  const int twins = grading.twin_fraction > 0.0 ? static_cast<int>(anchors.size()) : 0;
  const int intervals = n_markers - 1 - twins;
  if (static_cast<int>(segs.size()) > intervals)
    throw InvalidInput("graded labels: more kink segments than marker intervals");

  // Growing from the floor back to the uniform spacing h costs ln(h / floor)
  // / growth intervals per graded side; with few markers the floor is raised
  // so grading takes at most half of them.
  const double h = span.length() / (n_markers - 1);
  int graded = 0;
  for (const auto& s : segs) graded += s.graded ? 1 : 0;
  double floor = grading.floor_fraction * h;
  if (graded > 0)
    floor = std::max(floor, h * std::exp(-grading.growth * 0.5 * intervals / graded));
  Spacing sp{floor, grading.growth, span.length()};
  // the cap that spends exactly n - 1 intervals
  double lo = floor;
  double hi = span.length();
  for (int it = 0; it < 200; ++it) {
    sp.cap = std::sqrt(lo * hi);
    double total = 0.0;
    for (const auto& s : segs) total += sp.count(s);
    if (total > intervals) lo = sp.cap;
    else hi = sp.cap;
  }
  sp.cap = std::sqrt(lo * hi);

  std::vector<double> real;
  std::vector<int> count;
  int used = 0;
  for (const auto& s : segs) {
    real.push_back(sp.count(s));
    count.push_back(std::max(1, static_cast<int>(std::floor(real.back()))));
    used += count.back();
  }
  while (used < intervals) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (real[i] - count[i] > real[best] - count[best]) best = i;
    ++count[best];
    ++used;
  }
  while (used > intervals) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (count[i] - real[i] > count[best] - real[best] && count[i] > 1) best = i;
    --count[best];
    --used;
  }

  std::vector<double> labels;
  labels.reserve(static_cast<std::size_t>(n_markers) + segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    const double scale = real[i] / count[i];
    for (int j = 0; j < count[i]; ++j) labels.push_back(s.anchor + s.dir * sp.distance(s, j * scale));
    labels.push_back(s.end);
  }
  // the kink label carries the left limit of u0x and its twin the right one
  if (twins > 0)
    for (const auto& a : anchors) labels.push_back(a.beta + grading.twin_fraction * floor);
  std::sort(labels.begin(), labels.end());
  // segment ends are shared by neighbours
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (static_cast<int>(labels.size()) != n_markers)
    throw InvalidInput("graded labels: label spacing underflows");
  return Eigen::Map<const Array>(labels.data(), n_markers);
}

ChartState transform_initial(const InitialProfile& profile, int n_markers, Interval beta_span,
                             const TransformOptions& options) {
  if (n_markers < 2) throw InvalidInput("transform_initial: need at least two markers");
  if (!(beta_span.hi > beta_span.lo)) throw InvalidInput("transform_initial: empty beta span");
  return transform_initial(profile, Array::LinSpaced(n_markers, beta_span.lo, beta_span.hi),
                           options);
}

ChartState transform_initial(const InitialProfile& profile, const Array& labels,
                             const TransformOptions& options) {
  const Eigen::Index n = labels.size();
  if (n < 2) throw InvalidInput("transform_initial: need at least two markers");
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    if (!(labels[i + 1] > labels[i]))
      throw InvalidInput("transform_initial: labels must be strictly increasing");
  const Interval span{labels[0], labels[n - 1]};
  const int n_fine = std::max(options.refine * static_cast<int>(n), 2048);
  std::vector<double> fine_nodes = options.kinks;
  fine_nodes.insert(fine_nodes.end(), options.creases.begin(), options.creases.end());
  const AdaptedCoordinate coord(profile, n_fine, options.pad, fine_nodes);

  const double missing = coord.energy_outside(span);
  const double budget = options.truncation_rel * std::max(coord.total_energy(), 1e-300);
  if (missing > budget) {
    std::ostringstream msg;
    msg << "beta span [" << span.lo << ", " << span.hi << "] drops energy " << missing << " > "
        << budget << "; needed span is [" << coord.beta_range().lo << ", "
        << coord.beta_range().hi << "]";
    throw TruncationError(msg.str());
  }

  ChartState s;
  s.t = 0.0;
  s.label = labels;
  s.beta = labels;
  s.x.resize(n);
  s.u.resize(n);
  s.v.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) s.x[i] = coord.x(labels[i]);
  for (double k : options.kinks) {
    Eigen::Index nearest;
    (s.x - k).abs().minCoeff(&nearest);
    if (std::abs(s.x[nearest] - k) <= options.kink_snap) s.x[nearest] = k;
  }
  // a marker on a kink carries the left limit, so the jump sits in the
  // panel to its right
  for (double k : fine_nodes) {
    const auto after = std::upper_bound(s.x.begin(), s.x.end(), k) - s.x.begin();
    if (after >= 1 && after < n) s.breaks.push_back(after - 1);
  }
  std::sort(s.breaks.begin(), s.breaks.end());
  s.breaks.erase(std::unique(s.breaks.begin(), s.breaks.end()), s.breaks.end());
  for (Eigen::Index i = 0; i < n; ++i) {
    s.u[i] = profile.u0(s.x[i]);
    s.v[i] = 2.0 * std::atan(profile.u0x(s.x[i]));
  }
  s.refresh_weights();
  validate(s);
  return s;
}

double chart_consistency_residual(const ChartState& state) {
  if (state.size() == 0) return 0.0;
  const Array rebuilt = state.x[0] + cumulative_trapezoid(state.beta, x_beta(state.v));
  return (state.x - rebuilt).abs().maxCoeff();
}

LipschitzExcess lipschitz_excess(const ChartState& state) {
  LipschitzExcess out{-std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()};
  const Eigen::Index n = state.size();
  if (n < 2) return {0.0, 0.0};
  // max_{i<j} (a_j - a_i) with a = x - beta, resp. a = +-u - beta/2
  double min_x = state.x[0] - state.beta[0];
  double min_up = state.u[0] - 0.5 * state.beta[0];
  double min_um = -state.u[0] - 0.5 * state.beta[0];
  for (Eigen::Index j = 1; j < n; ++j) {
    const double ax = state.x[j] - state.beta[j];
    const double aup = state.u[j] - 0.5 * state.beta[j];
    const double aum = -state.u[j] - 0.5 * state.beta[j];
    out.x = std::max(out.x, ax - min_x);
    out.u = std::max({out.u, aup - min_up, aum - min_um});
    min_x = std::min(min_x, ax);
    min_up = std::min(min_up, aup);
    min_um = std::min(min_um, aum);
  }
  return out;
}

double x_gap_allowance(const ChartState& state, double x_tol) {
  const Eigen::Index n = state.size();
  if (n < 2) return 0.0;
  return x_tol * (state.beta[n - 1] - state.beta[0]) / double(n - 1);
}

void validate(const ChartState& state, double x_tol) {
  const Eigen::Index n = state.size();
  if (state.beta.size() != n || state.x.size() != n || state.u.size() != n || state.v.size() != n)
    throw InvalidInput("chart state: field lengths differ");
  if (!state.beta.allFinite() || !state.x.allFinite() || !state.u.allFinite() ||
      !state.v.allFinite())
    throw NonFiniteState("chart state contains non-finite values at t = " + std::to_string(state.t));
  const double allowance = x_gap_allowance(state, x_tol);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (!(state.beta[i + 1] > state.beta[i])) {
      std::ostringstream msg;
      msg << "beta not strictly increasing at marker " << i << " (t = " << state.t << ")";
      throw OrderingViolation(msg.str());
    }
    if (state.x[i + 1] - state.x[i] < -allowance) {
      std::ostringstream msg;
      msg << "x decreasing at marker " << i << " by " << state.x[i] - state.x[i + 1]
          << " (t = " << state.t << ")";
      throw OrderingViolation(msg.str());
    }
  }
}

}  // namespace chsolve
