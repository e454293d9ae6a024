#include "gis/engine.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace gis {

void RunConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations: must be at least 1");
  if (!(min_diameter >= 0.0)) throw std::invalid_argument("min_diameter: must be nonnegative");
  if (input_grid.empty()) throw std::invalid_argument("input_grid: at least one count required");
  for (auto c : input_grid) {
    if (c < 2) throw std::invalid_argument("input_grid: every count must be at least 2");
  }
  adaptive.validate();
  image.validate();
  build.validate();
}

std::vector<std::size_t> RunConfig::input_counts(std::size_t m) const {
  if (input_grid.size() == m) return input_grid;
  if (input_grid.size() == 1) return std::vector<std::size_t>(m, input_grid[0]);
  throw std::invalid_argument("input_grid: expected 1 or " + std::to_string(m) + " counts, got " +
                              std::to_string(input_grid.size()));
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::iteration_limit: return "iteration_limit";
    case Termination::min_diameter: return "min_diameter";
    case Termination::empty: return "empty";
  }
  return "iteration_limit";
}

StopDecision check_stop(const std::vector<IterationMetrics>& history, const RunConfig& config) {
  if (history.empty()) return {};
  const IterationMetrics& last = history.back();
  if (last.cells_after == 0) return {true, Termination::empty};
  if (config.min_diameter > 0.0 && last.diameter <= config.min_diameter) return {true, Termination::min_diameter};
  if (last.iteration >= config.iterations) return {true, Termination::iteration_limit};
  return {};
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration<double, std::milli>(to - from).count();
}

}  // namespace

RunResult run(const RunConfig& config, const RunObserver& observer) {
  return run(make_model(config.model, config.model_params), config, observer);
}

RunResult run(const SystemModel& model, const RunConfig& config, const RunObserver& observer) {
  config.validate();
  const auto counts = config.input_counts(model.m);
  const InputGrid inputs = sample_inputs(model.input_box, counts);

  RunResult result;
  Covering covering(model.state_box);
  for (std::size_t k = 1;; ++k) {
    IterationMetrics m;
    m.iteration = k;

    const auto t0 = Clock::now();
    Covering subdivided;
    if (k == 1) {
      subdivided = covering;
      for (std::size_t d = 0; d < model.n; ++d) subdivided = subdivide_all(subdivided);
      m.selected_cells = 1;
    } else {
      const SpatialIndex previous(covering);
      const Selection sel = select_for_subdivision(covering, previous, config.adaptive);
      m.boundary_cells = sel.boundary_count;
      m.selected_cells = config.adaptive.mode == SubdivisionMode::full ? covering.size() : sel.count();
      subdivided = subdivide_selected(covering, sel.selected);
    }
    const auto t1 = Clock::now();

    const SpatialIndex index(subdivided);
    const SymbolicImage graph = build_graph_parallel(subdivided, index, model, inputs, config.image, config.build);
    const auto t2 = Clock::now();

    const auto keep = non_leaving_mask(graph, config.analysis);
    Covering retained = retain(subdivided, keep);
    const auto t3 = Clock::now();

    m.cells_before = subdivided.size();
    m.cells_after = retained.size();
    m.edges = graph.edge_count();
    m.diameter = subdivided.diameter();
    m.t_subdivide_ms = elapsed_ms(t0, t1);
    m.t_build_ms = elapsed_ms(t1, t2);
    m.t_analyze_ms = elapsed_ms(t2, t3);
    result.metrics.push_back(m);

    if (observer) observer(IterationView{result.metrics.back(), subdivided, graph, retained});

    covering = std::move(retained);
    const StopDecision stop = check_stop(result.metrics, config);
    if (stop.stop) {
      result.termination = stop.reason;
      break;
    }
  }
  result.covering = std::move(covering);
  return result;
}

void write_metrics(std::ostream& os, const std::vector<IterationMetrics>& metrics) {
  os << "iteration\tcells_before\tcells_after\tedges\tboundary_cells\tt_subdivide_ms\tt_build_ms\tt_analyze_ms\t"
        "diameter\n";
  char buf[64];
  for (const auto& m : metrics) {
    os << m.iteration << '\t' << m.cells_before << '\t' << m.cells_after << '\t' << m.edges << '\t'
       << m.boundary_cells;
    for (double t : {m.t_subdivide_ms, m.t_build_ms, m.t_analyze_ms}) {
      std::snprintf(buf, sizeof buf, "%.3f", t);
      os << '\t' << buf;
    }
    os << '\t' << format_real(m.diameter) << '\n';
  }
}

void write_run_outputs(const std::string& dir, const RunResult& result, const RunConfig& config) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);

  std::vector<CellStatus> status;
  if (!result.covering.empty()) {
    const SpatialIndex index(result.covering);
    const auto boundary =
        select_boundary(result.covering, index, config.adaptive.delta, config.adaptive.include_face_points);
    status.reserve(boundary.size());
    for (bool b : boundary) status.push_back(b ? CellStatus::boundary : CellStatus::interior);
  }
  if (result.covering.dim() > 0) {
    write_cells_file((base / "cells.tsv").string(), result.covering, status);
  } else {
    std::ofstream(base / "cells.tsv") << "";
  }

  {
    std::ofstream os(base / "metrics.tsv");
    if (!os) throw std::runtime_error("cannot write metrics in " + dir);
    write_metrics(os, result.metrics);
  }

  std::ofstream os(base / "summary.txt");
  if (!os) throw std::runtime_error("cannot write summary in " + dir);
  os << "model=" << config.model << '\n';
  os << "termination=" << to_string(result.termination) << '\n';
  os << "iterations_completed=" << result.metrics.size() << '\n';
  os << "final_cells=" << result.covering.size() << '\n';
  os << "final_diameter=" << format_real(result.covering.diameter()) << '\n';
  os << "final_volume=" << format_real(result.covering.volume()) << '\n';
  const Box& root = result.covering.root();
  os << "root_lo=";
  for (std::size_t d = 0; d < root.dim(); ++d) os << (d ? "," : "") << format_real(root.lo(d));
  os << "\nroot_hi=";
  for (std::size_t d = 0; d < root.dim(); ++d) os << (d ? "," : "") << format_real(root.hi(d));
  os << '\n';
}

}  // namespace gis
