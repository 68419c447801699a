#include "chsolve/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "chsolve/errors.hpp"

namespace chsolve {

using nlohmann::json;

namespace {

// Enough digits to read back the same double.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> to_vector(const Array& a) { return {a.data(), a.data() + a.size()}; }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json diagnostics_json(const Diagnostics& d) {
  return {{"t", d.t},
          {"energy", d.energy},
          {"energy_drift", d.energy_drift},
          {"sup_u", d.sup_u},
          {"min_xbeta", d.min_xbeta},
          {"C_inf", d.C_inf},
          {"C_S", d.C_S},
          {"source_l1", d.source_l1},
          {"consistency", d.consistency},
          {"lipschitz_x", d.lipschitz.x},
          {"lipschitz_u", d.lipschitz.u},
          {"x_speed", d.x_speed},
          {"g_lipschitz", d.g_lipschitz}};
}

json measure_json(const EnergyMeasure& m) {
  json atoms = json::array();
  for (const auto& a : m.singular) atoms.push_back({{"x", a.x}, {"mass", a.mass}});
  return {{"ac_mass", m.ac_mass},
          {"singular_mass", m.singular_mass},
          {"u2_mass", m.u2_mass},
          {"atoms", atoms}};
}

json ux_json(const EulerianSnapshot& s) {
  json out = json::array();
  for (const auto& v : s.ux_vals) out.push_back(optional_json(v));
  return out;
}

json study_rows(const std::vector<StudyRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"n_markers", r.n_markers},
                   {"dt", r.dt},
                   {"error", r.error},
                   {"order", optional_json(r.order)}});
  return out;
}

std::string indexed(const char* stem, std::size_t k, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.%s", stem, k, ext);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write " + path.string());
  f << text;
}

}  // namespace

OutputFormat parse_output_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw InvalidInput("unknown output format '" + name + "' (csv or json)");
}

void write_snapshot_csv(std::ostream& out, const ChartState& s) {
  const Array c2 = x_beta(s.v);
  out << "label,beta,x,u,v,xbeta,energy_density\n";
  for (Eigen::Index i = 0; i < s.size(); ++i)
    out << num(s.label[i]) << ',' << num(s.beta[i]) << ',' << num(s.x[i]) << ',' << num(s.u[i])
        << ',' << num(s.v[i]) << ',' << num(c2[i]) << ','
        << num(s.u[i] * s.u[i] * c2[i] + 1.0 - c2[i]) << '\n';
}

void write_eulerian_csv(std::ostream& out, const EulerianSnapshot& snap) {
  out << "x,u,ux\n";
  for (Eigen::Index k = 0; k < snap.x_grid.size(); ++k) {
    out << num(snap.x_grid[k]) << ',' << num(snap.u_vals[k]) << ',';
    const auto& ux = snap.ux_vals[static_cast<std::size_t>(k)];
    if (ux) out << num(*ux);
    out << '\n';
  }
}

void write_trace_csv(std::ostream& out, const CharPath& path) {
  out << "t,beta,x,u\n";
  for (std::size_t k = 0; k < path.times.size(); ++k)
    out << num(path.times[k]) << ',' << num(path.beta_path[k]) << ',' << num(path.x_path[k])
        << ',' << num(path.u_path[k]) << '\n';
}

std::string manifest_json(const RunReport& r, const RunExtras& extras, bool embed_snapshots) {
  const RunConfig& c = r.history.config;
  json params = {{"c", r.setup.preset.c},
                 {"x0", r.setup.preset.x0},
                 {"width", r.setup.preset.width},
                 {"sep", r.setup.preset.sep}};
  json config = {{"dt", c.dt},
                 {"t_end", c.t_end},
                 {"snap_every", c.snap_every},
                 {"n_markers", c.n_markers},
                 {"beta_span", {r.beta_span.lo, r.beta_span.hi}},
                 {"tolerances",
                  {{"energy_drift", c.tolerances.energy_drift},
                   {"consistency", c.tolerances.consistency},
                   {"lipschitz", c.tolerances.lipschitz}}}};
  if (r.setup.profile) {
    config["profile"] = r.setup.profile_source;
  } else {
    config["preset"] = r.setup.preset.name();
    config["params"] = params;
  }

  json diags = json::array();
  for (const auto& d : r.history.diagnostics) diags.push_back(diagnostics_json(d));
  json measures = json::array();
  for (const auto& s : r.history.snapshots) measures.push_back(measure_json(energy_measure(s)));

  json m = {{"config", config},
            {"times", r.history.times()},
            {"diagnostics", diags},
            {"energy_measure", measures},
            {"summary",
             {{"max_energy_drift", r.max_energy_drift},
              {"max_consistency", r.max_consistency},
              {"max_lipschitz_x", r.max_lipschitz.x},
              {"max_lipschitz_u", r.max_lipschitz.u},
              {"exact_error", optional_json(r.exact_error)}}},
            {"flags",
             {{"energy", r.flags.energy},
              {"consistency", r.flags.consistency},
              {"lipschitz", r.flags.lipschitz},
              {"ordering", r.flags.ordering},
              {"all", r.flags.all()}}}};

  if (extras.trace) {
    const CharPath& p = *extras.trace;
    m["trace"] = {{"label", p.label},
                  {"lipschitz_G", p.lipschitz_G},
                  {"sweeps", p.sweeps},
                  {"window_ends", p.window_ends},
                  {"contraction_ratios", p.contraction_ratios},
                  {"ucar_residual", optional_json(extras.ucar_residual)}};
    if (embed_snapshots) {
      m["trace"]["times"] = p.times;
      m["trace"]["beta"] = p.beta_path;
      m["trace"]["x"] = p.x_path;
      m["trace"]["u"] = p.u_path;
    }
  }
  if (extras.study)
    m["study"] = {{"spatial", study_rows(extras.study->spatial)},
                  {"temporal", study_rows(extras.study->temporal)}};

  if (embed_snapshots) {
    json snaps = json::array();
    for (const auto& s : r.history.snapshots) {
      const Array c2 = x_beta(s.v);
      const EulerianSnapshot e = eulerian_snapshot(s, uniform_x_grid(s, extras.eulerian_points));
      snaps.push_back({{"t", s.t},
                       {"label", to_vector(s.label)},
                       {"beta", to_vector(s.beta)},
                       {"x", to_vector(s.x)},
                       {"u", to_vector(s.u)},
                       {"v", to_vector(s.v)},
                       {"xbeta", to_vector(c2)},
                       {"energy_density", to_vector(s.u.square() * c2 + 1.0 - c2)},
                       {"eulerian",
                        {{"x", to_vector(e.x_grid)}, {"u", to_vector(e.u_vals)}, {"ux", ux_json(e)}}}});
    }
    m["snapshots"] = snaps;
  }
  return m.dump(2) + "\n";
}

std::vector<std::filesystem::path> export_run(const std::filesystem::path& dir,
                                              const RunReport& report, OutputFormat format,
                                              const RunExtras& extras) {
  for (const auto& s : report.history.snapshots) validate(s);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  if (format == OutputFormat::json) {
    written.push_back(dir / "run.json");
    write_file(written.back(), manifest_json(report, extras, true));
  } else {
    written.push_back(dir / "manifest.json");
    write_file(written.back(), manifest_json(report, extras, false));
    for (std::size_t k = 0; k < report.history.size(); ++k) {
      const ChartState& s = report.history.snapshots[k];
      written.push_back(dir / indexed("snapshot", k, "csv"));
      std::ofstream f(written.back(), std::ios::binary);
      write_snapshot_csv(f, s);
      written.push_back(dir / indexed("eulerian", k, "csv"));
      std::ofstream g(written.back(), std::ios::binary);
      write_eulerian_csv(g, eulerian_snapshot(s, uniform_x_grid(s, extras.eulerian_points)));
    }
  }
  if (extras.trace) {
    written.push_back(dir / "trace.csv");
    std::ofstream f(written.back(), std::ios::binary);
    write_trace_csv(f, *extras.trace);
  }
  return written;
}

}  // namespace chsolve
