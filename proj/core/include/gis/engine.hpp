#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gis/adaptive.hpp"
#include "gis/analysis.hpp"
#include "gis/geometry.hpp"
#include "gis/image.hpp"
#include "gis/symbolic_graph.hpp"
#include "gis/system.hpp"

namespace gis {

struct RunConfig {
  std::string model = "cstr";
  ModelParameters model_params;
  std::size_t iterations = 20;
  double min_diameter = 0.0;                // 0 disables the diameter stop
  std::vector<std::size_t> input_grid{3};   // per input dimension; one value applies to all
  AdaptiveConfig adaptive;
  ImageConfig image;
  BuildPlan build;
  NonLeavingMode analysis = NonLeavingMode::all_cycles;

  void validate() const;
  /// Per-dimension input counts for an m-dimensional input box.
  std::vector<std::size_t> input_counts(std::size_t m) const;
};

struct IterationMetrics {
  std::size_t iteration = 0;
  std::size_t cells_before = 0;    // after subdivision, before retention
  std::size_t cells_after = 0;     // after retention
  std::size_t edges = 0;
  std::size_t boundary_cells = 0;  // adaptive mode only
  std::size_t selected_cells = 0;  // cells split this iteration
  double t_subdivide_ms = 0.0;
  double t_build_ms = 0.0;
  double t_analyze_ms = 0.0;
  double diameter = 0.0;           // diameter of the covering the graph was built on
};

enum class Termination { iteration_limit, min_diameter, empty };

std::string_view to_string(Termination t);

struct StopDecision {
  bool stop = false;
  Termination reason = Termination::iteration_limit;
};

/// Stop once the iteration limit is reached, the covering diameter drops to
/// min_diameter, or nothing was retained.
StopDecision check_stop(const std::vector<IterationMetrics>& history, const RunConfig& config);

struct RunResult {
  Covering covering;
  std::vector<IterationMetrics> metrics;
  Termination termination = Termination::iteration_limit;

  bool empty() const { return covering.empty(); }
};

/// Read-only view of one finished iteration, handed to a RunObserver.
struct IterationView {
  const IterationMetrics& metrics;
  const Covering& subdivided;
  const SymbolicImage& graph;
  const Covering& retained;
};

using RunObserver = std::function<void(const IterationView&)>;

/// Iterates subdivide -> index -> graph -> non-leaving -> retain. The first
/// iteration splits the root box once along every dimension; later iterations
/// split the cells chosen by config.adaptive. The model argument overrides the
/// registry lookup of config.model.
RunResult run(const RunConfig& config, const RunObserver& observer = {});
RunResult run(const SystemModel& model, const RunConfig& config, const RunObserver& observer = {});

/// Tab-separated metrics table: iteration, cells_before, cells_after, edges,
/// boundary_cells, t_subdivide_ms, t_build_ms, t_analyze_ms, diameter.
void write_metrics(std::ostream& os, const std::vector<IterationMetrics>& metrics);

/// Writes cells.tsv, metrics.tsv, summary.txt into `dir` (created if needed).
/// Cells are flagged boundary/interior using the run's boundary test.
void write_run_outputs(const std::string& dir, const RunResult& result, const RunConfig& config);

}  // namespace gis
