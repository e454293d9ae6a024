#include "gis_bench/replicate.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <thread>

#include "gis/hull.hpp"

namespace gis::bench {

namespace {

std::vector<CellRecord> records(const Covering& c) {
  std::vector<CellRecord> out;
  out.reserve(c.size());
  for (const auto& cell : c.cells()) out.push_back({cell.id, cell.box, CellStatus::retained});
  return out;
}

struct Outcome {
  ExperimentRow row;
  std::vector<Point2> hull;
};

Outcome run_point(const std::string& label, SubdivisionMode mode, std::size_t N, std::size_t workers,
                  std::size_t iterations, std::size_t batch) {
  RunConfig rc;
  rc.model = "cstr";
  rc.iterations = iterations;
  rc.adaptive.mode = mode;
  rc.adaptive.N = N;
  rc.build.workers = workers;
  rc.build.batch_size = batch;

  const auto t0 = std::chrono::steady_clock::now();
  const RunResult result = run(rc);
  const auto t1 = std::chrono::steady_clock::now();

  Outcome out;
  ExperimentRow& row = out.row;
  row.label = label;
  row.mode = mode;
  row.N = N;
  row.workers = workers;
  row.iterations = result.metrics.size();
  row.final_cells = result.covering.size();
  row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  for (const auto& m : result.metrics) {
    row.total_cells += m.cells_before;
    row.build_ms += m.t_build_ms;
  }
  if (!result.covering.empty()) {
    const auto recs = records(result.covering);
    out.hull = cells_hull(recs);
    row.hull_area = polygon_area(out.hull);
  }
  return out;
}

}  // namespace

bool Report::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

Report replicate_paper_experiments(const ReplicateOptions& options) {
  Report report;
  report.hardware_threads = std::thread::hardware_concurrency();

  const Outcome full = run_point("full", SubdivisionMode::full, 0, 1, options.iterations, options.batch_size);
  std::vector<Outcome> sweep;
  for (std::size_t N : options.N_values) {
    sweep.push_back(run_point("N=" + std::to_string(N), SubdivisionMode::adaptive, N, 1, options.iterations,
                              options.batch_size));
  }

  report.rows.push_back(full.row);
  for (auto& o : sweep) {
    if (!full.hull.empty() && !o.hull.empty()) {
      o.row.hull_sym_diff_vs_full = convex_symmetric_difference_area(o.hull, full.hull) / full.row.hull_area;
    }
    report.rows.push_back(o.row);
  }

  for (const auto& o : sweep) {
    if (o.row.N != 3) continue;
    report.adaptive_speedup = o.row.wall_ms > 0.0 ? full.row.wall_ms / o.row.wall_ms : 0.0;
    report.checks.push_back({"adaptive N=3 wall time < full", o.row.wall_ms < full.row.wall_ms,
                             std::to_string(o.row.wall_ms) + " ms vs " + std::to_string(full.row.wall_ms) + " ms"});
    report.checks.push_back({"adaptive N=3 final cells < full", o.row.final_cells < full.row.final_cells,
                             std::to_string(o.row.final_cells) + " vs " + std::to_string(full.row.final_cells)});
    report.checks.push_back({"hull(N=3) vs hull(full) symmetric difference <= 5%",
                             o.row.hull_sym_diff_vs_full <= 0.05,
                             std::to_string(100.0 * o.row.hull_sym_diff_vs_full) + "%"});
  }

  const Outcome serial =
      run_point("serial", SubdivisionMode::full, 0, 1, options.parallel_iterations, options.batch_size);
  report.rows.push_back(serial.row);
  for (std::size_t w : options.worker_counts) {
    const Outcome par = run_point("workers=" + std::to_string(w), SubdivisionMode::full, 0, w,
                                  options.parallel_iterations, options.batch_size);
    report.rows.push_back(par.row);
    report.parallel_speedups.emplace_back(w, par.row.build_ms > 0.0 ? serial.row.build_ms / par.row.build_ms : 0.0);
    report.checks.push_back({"workers=" + std::to_string(w) + " final covering equals serial",
                             par.row.final_cells == serial.row.final_cells &&
                                 par.row.hull_area == serial.row.hull_area,
                             std::to_string(par.row.final_cells) + " cells"});
  }
  return report;
}

void write_report(std::ostream& os, const Report& report) {
  os << "label\tmode\tN\tworkers\titerations\tfinal_cells\ttotal_cells\twall_ms\tbuild_ms\thull_area\t"
        "hull_sym_diff_vs_full\n";
  char buf[256];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%s\t%s\t%zu\t%zu\t%zu\t%zu\t%zu\t%.3f\t%.3f\t%.10g\t%.6g\n", r.label.c_str(),
                  std::string(to_string(r.mode)).c_str(), r.N, r.workers, r.iterations, r.final_cells,
                  r.total_cells, r.wall_ms, r.build_ms, r.hull_area, r.hull_sym_diff_vs_full);
    os << buf;
  }
  os << "\n# summary\n";
  os << "# hardware threads: " << report.hardware_threads << '\n';
  std::snprintf(buf, sizeof buf, "# adaptive speedup (full / N=3 wall time): %.2fx\n", report.adaptive_speedup);
  os << buf;
  for (const auto& [w, s] : report.parallel_speedups) {
    std::snprintf(buf, sizeof buf, "# graph-build speedup with %zu workers: %.2fx\n", w, s);
    os << buf;
  }
  for (const auto& c : report.checks) {
    os << "# " << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
  }
}

}  // namespace gis::bench
