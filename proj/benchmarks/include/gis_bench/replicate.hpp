#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gis/engine.hpp"

namespace gis::bench {

struct ReplicateOptions {
  std::size_t iterations = 20;
  std::vector<std::size_t> N_values{0, 1, 3, 5};
  std::size_t parallel_iterations = 14;
  std::vector<std::size_t> worker_counts{2, 4};
  std::size_t batch_size = 1024;
};

struct ExperimentRow {
  std::string label;
  SubdivisionMode mode = SubdivisionMode::full;
  std::size_t N = 0;
  std::size_t workers = 1;
  std::size_t iterations = 0;
  std::size_t final_cells = 0;
  std::size_t total_cells = 0;   // sum of cells_before over iterations
  double wall_ms = 0.0;
  double build_ms = 0.0;
  double hull_area = 0.0;
  double hull_sym_diff_vs_full = 0.0;  // relative to the full-mode hull area
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Report {
  std::vector<ExperimentRow> rows;
  std::vector<Check> checks;
  double adaptive_speedup = 0.0;  // full wall time / N=3 wall time
  std::vector<std::pair<std::size_t, double>> parallel_speedups;  // workers -> serial build / parallel build
  std::size_t hardware_threads = 0;

  bool all_passed() const;
};

/// CSTR N-sweep (adaptive N values plus full mode) and serial-vs-parallel
/// sweep. Orderings that do not depend on hardware are asserted as checks;
/// raw speedup ratios are only recorded.
Report replicate_paper_experiments(const ReplicateOptions& options = {});

/// Delimited table of rows followed by a human-readable summary.
void write_report(std::ostream& os, const Report& report);

}  // namespace gis::bench
