#include "chsolve/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chsolve/chart.hpp"
#include "chsolve/errors.hpp"

namespace chsolve {

namespace {

struct NamedKind {
  const char* name;
  PresetKind kind;
};

constexpr NamedKind kKinds[] = {
    {"zero", PresetKind::zero},
    {"gaussian", PresetKind::gaussian},
    {"cosine_bump", PresetKind::cosine_bump},
    {"peakon", PresetKind::peakon},
    {"antipeakon", PresetKind::antipeakon},
    {"peakon_antipeakon", PresetKind::peakon_antipeakon},
};

// c e^{-|x - x0|} and its derivative, taking the left limit c at the crest.
double peak(double c, double x0, double x) { return c * std::exp(-std::abs(x - x0)); }
double peak_x(double c, double x0, double x) {
  const double s = x - x0;
  return s <= 0.0 ? c * std::exp(s) : -c * std::exp(-s);
}

}  // namespace

PresetKind parse_preset_kind(const std::string& name) {
  for (const auto& k : kKinds)
    if (name == k.name) return k.kind;
  throw InvalidInput("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& k : kKinds) out.emplace_back(k.name);
  return out;
}

std::string Preset::name() const {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.name;
  return "unknown";
}

Preset make_preset(const std::string& name, const std::map<std::string, double>& params) {
  Preset p;
  p.kind = parse_preset_kind(name);
  for (const auto& [key, value] : params) {
    if (!std::isfinite(value)) throw InvalidInput("preset parameter '" + key + "' is not finite");
    if (key == "c") p.c = value;
    else if (key == "x0") p.x0 = value;
    else if (key == "width") p.width = value;
    else if (key == "sep") p.sep = value;
    else throw InvalidInput("unknown preset parameter '" + key + "'");
  }
  if (!(p.width > 0.0)) throw InvalidInput("preset width must be positive");
  if (!(p.sep >= 0.0)) throw InvalidInput("preset separation must be non-negative");
  return p;
}

InitialProfile Preset::profile() const {
  const double c_ = c;
  const double x0_ = x0;
  const double w = width;
  const double half = 0.5 * sep;
  switch (kind) {
    case PresetKind::zero:
      return zero_profile({x0 - 1.0, x0 + 1.0});
    case PresetKind::gaussian:
      return {[=](double x) { const double s = (x - x0_) / w; return c_ * std::exp(-s * s); },
              [=](double x) {
                const double s = (x - x0_) / w;
                return -2.0 * c_ * s / w * std::exp(-s * s);
              },
              {x0 - 5.0 * w, x0 + 5.0 * w}};
    case PresetKind::cosine_bump:
      return {[=](double x) {
                const double s = x - x0_;
                if (std::abs(s) >= w) return 0.0;
                const double a = std::cos(0.5 * std::numbers::pi * s / w);
                return c_ * a * a;
              },
              [=](double x) {
                const double s = x - x0_;
                if (std::abs(s) >= w) return 0.0;
                return -c_ * 0.5 * std::numbers::pi / w * std::sin(std::numbers::pi * s / w);
              },
              {x0 - w, x0 + w}};
    case PresetKind::peakon:
      return {[=](double x) { return peak(c_, x0_, x); },
              [=](double x) { return peak_x(c_, x0_, x); },
              {x0, x0}};
    case PresetKind::antipeakon:
      return {[=](double x) { return peak(-c_, x0_, x); },
              [=](double x) { return peak_x(-c_, x0_, x); },
              {x0, x0}};
    case PresetKind::peakon_antipeakon:
      return {[=](double x) { return peak(c_, x0_ - half, x) + peak(-c_, x0_ + half, x); },
              [=](double x) { return peak_x(c_, x0_ - half, x) + peak_x(-c_, x0_ + half, x); },
              {x0 - half, x0 + half}};
  }
  throw InvalidInput("unhandled preset");
}

std::optional<double> Preset::exact(double t, double x) const {
  switch (kind) {
    case PresetKind::zero:
      return 0.0;
    case PresetKind::peakon:
      return peak(c, x0 + c * t, x);
    case PresetKind::antipeakon:
      return peak(-c, x0 - c * t, x);
    default:
      return std::nullopt;
  }
}

std::vector<double> Preset::kinks() const {
  switch (kind) {
    case PresetKind::peakon:
    case PresetKind::antipeakon:
      return {x0};
    case PresetKind::peakon_antipeakon:
      return {x0 - 0.5 * sep, x0 + 0.5 * sep};
    default:
      return {};
  }
}

std::vector<double> Preset::creases() const {
  if (kind == PresetKind::cosine_bump) return {x0 - width, x0 + width};
  return {};
}

Interval travel_support(const InitialProfile& profile, double t_end) {
  const Interval& s = profile.support_hint;
  const double lo = s.lo - kSupportPad;
  const double hi = s.hi + kSupportPad;
  constexpr int n = 4097;
  double up = 0.0;
  double down = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = profile.u0(lo + (hi - lo) * k / (n - 1));
    up = std::max(up, u);
    down = std::max(down, -u);
  }
  return {s.lo - down * t_end, s.hi + up * t_end};
}

}  // namespace chsolve
