#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chsolve/profile.hpp"

namespace chsolve {

enum class PresetKind { zero, gaussian, cosine_bump, peakon, antipeakon, peakon_antipeakon };

/// Named initial datum with its parameters.
///
/// Recognised parameters: `c` (amplitude, default 1), `x0` (center, default 0),
/// `width` (gaussian e-folding / cosine half-width, default 1) and `sep`
/// (peakon-antipeakon crest separation, default 10).
struct Preset {
  PresetKind kind = PresetKind::zero;
  double c = 1.0;
  double x0 = 0.0;
  double width = 1.0;
  double sep = 10.0;

  std::string name() const;
  InitialProfile profile() const;

  /// Points where u0x jumps (peakon crests).
  std::vector<double> kinks() const;

  /// Points where u0x is continuous but u0xx jumps (edges of the cosine bump).
  std::vector<double> creases() const;

  /// Closed-form solution u(t, x) when one is known (zero, single peakons).
  std::optional<double> exact(double t, double x) const;
};

/// Parses a preset name; throws InvalidInput for unknown names.
PresetKind parse_preset_kind(const std::string& name);
std::vector<std::string> preset_names();

/// Builds a preset from its name and `key=value` parameters. Throws
/// InvalidInput on unknown keys, unparsable or out-of-range values.
Preset make_preset(const std::string& name, const std::map<std::string, double>& params = {});

/// Support hint widened by the distance the data can travel by `t_end`:
/// sup(u0)^+ * t_end to the right and sup(-u0)^+ * t_end to the left.
Interval travel_support(const InitialProfile& profile, double t_end);

}  // namespace chsolve
