#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chsolve/errors.hpp"
#include "chsolve/harness.hpp"
#include "chsolve/profile.hpp"
#include "chsolve/report_io.hpp"

namespace {

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw chsolve::InvalidInput("cannot parse " + what + " '" + text + "'");
  return v;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw chsolve::InvalidInput("--param expects key=value, got '" + item + "'");
    out[item.substr(0, eq)] = parse_number(item.substr(eq + 1), "parameter " + item.substr(0, eq));
  }
  return out;
}

chsolve::Interval parse_span(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw chsolve::InvalidInput("--beta-span expects A:B");
  const chsolve::Interval span{parse_number(text.substr(0, colon), "beta span"),
                               parse_number(text.substr(colon + 1), "beta span")};
  if (!(span.hi > span.lo)) throw chsolve::InvalidInput("--beta-span needs A < B");
  return span;
}

void print_study(const chsolve::StudyTable& t) {
  auto rows = [](const char* title, const std::vector<chsolve::StudyRow>& rs) {
    std::printf("%s\n  %8s %10s %12s %8s\n", title, "N", "dt", "difference", "order");
    for (const auto& r : rs) {
      std::printf("  %8d %10.3g %12.4e ", r.n_markers, r.dt, r.error);
      if (r.order) std::printf("%8.3f\n", *r.order);
      else std::printf("%8s\n", "-");
    }
  };
  rows("spatial", t.spatial);
  rows("temporal", t.temporal);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Camassa-Holm solver in energy-adapted characteristic coordinates"};
  std::string preset = "gaussian";
  std::vector<std::string> params;
  std::string profile_file;
  int n_markers = 4096;
  std::string beta_span;
  double dt = 1e-3;
  double t_end = 1.0;
  int snap_every = 100;
  std::string out_dir = "out";
  std::string format = "csv";
  std::optional<double> trace;
  bool study = false;
  bool uniform = false;

  app.add_option("--preset", preset, "zero, gaussian, cosine_bump, peakon, antipeakon, peakon_antipeakon")
      ->capture_default_str();
  app.add_option("--param", params, "preset parameter key=value (c, x0, width, sep); repeatable");
  app.add_option("--profile", profile_file, "two-column text file (x u0) used instead of a preset");
  app.add_option("--n-markers", n_markers, "number of markers")->capture_default_str();
  app.add_option("--beta-span", beta_span, "label range A:B (default: padded support)");
  app.add_option("--dt", dt, "time step")->capture_default_str();
  app.add_option("--t-end", t_end, "final time")->capture_default_str();
  app.add_option("--snap-every", snap_every, "steps between snapshots")->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--format", format, "csv or json")->capture_default_str();
  app.add_option("--trace", trace, "trace the characteristic with this label");
  app.add_flag("--study", study, "also run the N and dt refinement ladders");
  app.add_flag("--uniform-labels", uniform, "uniform labels even for kinked data");
  CLI11_PARSE(app, argc, argv);

  try {
    chsolve::RunSetup setup;
    const auto fmt = chsolve::parse_output_format(format);
    if (!profile_file.empty()) {
      if (!params.empty()) throw chsolve::InvalidInput("--param applies to presets only");
      setup.profile = chsolve::read_profile_file(profile_file);
      setup.profile_source = profile_file;
    } else {
      setup.preset = chsolve::make_preset(preset, parse_params(params));
    }
    if (!(dt > 0.0)) throw chsolve::InvalidInput("--dt must be positive");
    if (!(t_end >= 0.0)) throw chsolve::InvalidInput("--t-end must be non-negative");
    if (snap_every < 1) throw chsolve::InvalidInput("--snap-every must be at least 1");
    setup.config.dt = dt;
    setup.config.t_end = t_end;
    setup.config.snap_every = snap_every;
    setup.config.n_markers = n_markers;
    if (!beta_span.empty()) setup.config.beta_span = parse_span(beta_span);
    if (uniform) setup.graded = false;

    const chsolve::RunReport report = chsolve::run(setup);
    chsolve::RunExtras extras;
    if (trace) {
      extras.trace = chsolve::picard_trace(report.history, *trace);
      extras.ucar_residual = chsolve::verify_ucar(report.history, *extras.trace);
      std::printf("trace %.6g: x(t_end) = %.9g, ucar residual %.3e, sweeps %d\n", *trace,
                  extras.trace->x_path.back(), *extras.ucar_residual, extras.trace->sweeps);
    }
    if (study) {
      extras.study = chsolve::convergence_study(setup, {512, 1024, 2048}, {4e-3, 2e-3, 1e-3});
      print_study(*extras.study);
    }
    chsolve::export_run(out_dir, report, fmt, extras);

    const auto& f = report.flags;
    std::printf("energy drift %.3e [%s]\n", report.max_energy_drift, f.energy ? "pass" : "FAIL");
    std::printf("consistency  %.3e [%s]\n", report.max_consistency, f.consistency ? "pass" : "FAIL");
    std::printf("lipschitz    x %.3e u %.3e [%s]\n", report.max_lipschitz.x, report.max_lipschitz.u,
                f.lipschitz ? "pass" : "FAIL");
    std::printf("ordering     [%s]\n", f.ordering ? "pass" : "FAIL");
    if (report.exact_error) std::printf("exact error  %.3e\n", *report.exact_error);
    return f.all() ? 0 : 1;
  } catch (const chsolve::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
