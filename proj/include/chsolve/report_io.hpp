#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chsolve/harness.hpp"

namespace chsolve {

enum class OutputFormat { csv, json };
OutputFormat parse_output_format(const std::string& name);

/// label,beta,x,u,v,xbeta,energy_density; one row per marker.
void write_snapshot_csv(std::ostream& out, const ChartState& state);
/// x,u,ux with an empty ux field where it is undefined.
void write_eulerian_csv(std::ostream& out, const EulerianSnapshot& snap);
/// t,beta,x,u
void write_trace_csv(std::ostream& out, const CharPath& path);

/// Optional pieces of a run's output.
struct RunExtras {
  std::optional<CharPath> trace;
  std::optional<double> ucar_residual;
  std::optional<StudyTable> study;
  int eulerian_points = 1001;
};

/// JSON manifest: config echo, snapshot times, diagnostics, energy
/// decomposition per snapshot and flags. With `embed_snapshots` the marker
/// arrays and Eulerian samples are included as well.
std::string manifest_json(const RunReport& report, const RunExtras& extras, bool embed_snapshots);

/// Writes the run into `dir` (created if needed). csv: manifest.json plus
/// snapshot_NNNN.csv and eulerian_NNNN.csv per snapshot; json: run.json with
/// everything embedded. A trace goes to trace.csv. Every snapshot is
/// validated before it is written. Returns the files written.
std::vector<std::filesystem::path> export_run(const std::filesystem::path& dir,
                                              const RunReport& report, OutputFormat format,
                                              const RunExtras& extras = {});

}  // namespace chsolve
