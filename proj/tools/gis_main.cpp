// gis: command-line front end for control invariant set computation.
//
//   gis run      single configuration
//   gis sweep    N / workers / batch-size / mode sweep, one directory per point
//   gis hull     convex hull polygon of a 2-D cells file
//   gis compare  symmetric-difference volume of two cells files
//   gis replicate  CSTR N-sweep and parallel sweep report
//
// Exit codes: 0 success, 1 invalid configuration, 2 runtime failure,
// 3 empty invariant set.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gis/config.hpp"
#include "gis/engine.hpp"
#include "gis/hull.hpp"
#include "gis_bench/replicate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitEmpty = 3;

/// Flag values as given on the command line; empty strings are "not given".
struct FlagValues {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::vector<std::string> sets;  // key=value overrides
};

void add_run_flags(CLI::App& cmd, FlagValues& f, bool lists) {
  cmd.add_option("--config", f.config_path, "key = value configuration file");
  const char* list_note = lists ? " (comma-separated list)" : "";
  auto opt = [&](const std::string& flag, const std::string& key, const std::string& help) {
    cmd.add_option(flag, f.values[key], help);
  };
  opt("--model", "model", "cstr | linear | identity | shift");
  opt("--iterations", "iterations", "maximum iteration count");
  opt("--mode", "mode", std::string("full | adaptive") + list_note);
  opt("--N", "N", std::string("nearest-neighbour count") + (lists ? " (list; 'full' selects full mode)" : ""));
  opt("--delta", "delta", "relative enlargement for the boundary test");
  opt("--samples-per-dim", "samples_per_dim", "sample points per state dimension in each cell");
  opt("--bloat", "bloat", "relative inflation of image boxes");
  opt("--input-grid", "input_grid", "input samples per input dimension (comma list)");
  opt("--workers", "workers", std::string("graph-build worker count") + list_note);
  opt("--batch-size", "batch_size", std::string("cells per batch") + list_note);
  opt("--min-diameter", "min_diameter", "stop once the covering diameter is at most this");
  opt("--output-dir", "output_dir", "directory for result files");
  opt("--edges-at", "edges_at", "iterations whose edge list is exported (comma list)");
  opt("--analysis", "analysis", "all_cycles | largest_only");
  opt("--include-face-points", "include_face_points", "true | false");
  cmd.add_option("--set", f.sets, "model parameter override, e.g. --set cstr.UA=4.5e4");
}

/// File < GIS_WORKERS environment variable < flags.
gis::ConfigMap layered_config(const FlagValues& f) {
  gis::ConfigMap merged;
  if (!f.config_path.empty()) merged = gis::parse_config_file(f.config_path);
  if (const char* env = std::getenv("GIS_WORKERS"); env != nullptr && *env != '\0') merged["workers"] = env;
  for (const auto& [k, v] : f.values) {
    if (!v.empty()) merged[k] = v;
  }
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw gis::ConfigError("--set", "expected key=value, got '" + kv + "'");
    merged[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return merged;
}

std::string edge_file_name(std::size_t iteration) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "edges_iter_%04zu.txt", iteration);
  return buf;
}

/// Runs one configuration and writes its outputs. Returns the result.
gis::RunResult execute(const gis::Settings& s) {
  std::filesystem::create_directories(s.output_dir);
  const std::filesystem::path dir(s.output_dir);
  gis::RunObserver observer;
  if (!s.edges_at.empty()) {
    observer = [&](const gis::IterationView& view) {
      for (auto k : s.edges_at) {
        if (k == view.metrics.iteration) gis::write_edge_list_file((dir / edge_file_name(k)).string(), view.graph);
      }
    };
  }
  gis::RunResult result = gis::run(s.run, observer);
  gis::write_run_outputs(s.output_dir, result, s.run);
  std::ofstream(dir / "config.cfg") << gis::serialize_config(s);
  return result;
}

void print_run_summary(const gis::RunResult& r, const std::string& dir) {
  std::cout << "iterations: " << r.metrics.size() << "  final cells: " << r.covering.size()
            << "  termination: " << gis::to_string(r.termination) << "  output: " << dir << '\n';
}

int cmd_run(const FlagValues& f) {
  gis::Settings s;
  gis::apply_config(s, layered_config(f));
  const auto result = execute(s);
  print_run_summary(result, s.output_dir);
  if (result.empty()) {
    std::cerr << "no invariant set at this resolution\n";
    return kExitEmpty;
  }
  return kExitOk;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_sweep(const FlagValues& f) {
  gis::ConfigMap base = layered_config(f);
  auto take = [&](const std::string& key, std::vector<std::string> fallback) {
    auto it = base.find(key);
    if (it == base.end()) return fallback;
    auto list = split_list(it->second);
    base.erase(it);
    if (list.empty()) throw gis::ConfigError(key, "sweep list must not be empty");
    return list;
  };
  const bool n_given = base.contains("N");
  const auto n_values = take("N", {"3"});
  const auto modes = take("mode", {n_given ? "adaptive" : "full"});
  const auto workers = take("workers", {"1"});
  const auto batches = take("batch_size", {"1024"});

  struct Point {
    std::string mode;
    std::string n;
  };
  std::vector<Point> points;
  for (const auto& mode : modes) {
    if (mode == "full") {
      points.push_back({"full", n_values.front() == "full" ? "3" : n_values.front()});
      continue;
    }
    for (const auto& n : n_values) {
      points.push_back(n == "full" ? Point{"full", "3"} : Point{mode, n});
    }
  }

  gis::Settings root_settings;
  gis::apply_config(root_settings, base);
  const std::filesystem::path out_root(root_settings.output_dir);
  std::filesystem::create_directories(out_root);
  std::ofstream table(out_root / "sweep_metrics.tsv");
  table << "point\tmode\tN\tworkers\tbatch_size\titeration\tcells_before\tcells_after\tedges\tboundary_cells\t"
           "t_subdivide_ms\tt_build_ms\tt_analyze_ms\tdiameter\n";

  bool any_empty = false;
  std::vector<std::string> seen;
  for (const auto& p : points) {
    for (const auto& w : workers) {
      for (const auto& b : batches) {
        gis::ConfigMap cfg = base;
        cfg["mode"] = p.mode;
        cfg["N"] = p.n;
        cfg["workers"] = w;
        cfg["batch_size"] = b;
        std::string name = p.mode == "full" ? "full" : "N" + p.n;
        if (workers.size() > 1) name += "_w" + w;
        if (batches.size() > 1) name += "_b" + b;
        if (std::find(seen.begin(), seen.end(), name) != seen.end()) continue;
        seen.push_back(name);
        cfg["output_dir"] = (out_root / name).string();

        gis::Settings s;
        gis::apply_config(s, cfg);
        const auto result = execute(s);
        print_run_summary(result, s.output_dir);
        any_empty = any_empty || result.empty();
        std::stringstream rows;
        gis::write_metrics(rows, result.metrics);
        std::string line;
        std::getline(rows, line);  // header
        while (std::getline(rows, line)) {
          table << name << '\t' << p.mode << '\t' << p.n << '\t' << w << '\t' << b << '\t' << line << '\n';
        }
      }
    }
  }
  std::cout << "combined metrics: " << (out_root / "sweep_metrics.tsv").string() << '\n';
  return any_empty ? kExitEmpty : kExitOk;
}

int cmd_hull(const std::string& cells_path, const std::string& out_path) {
  const auto cells = gis::read_cells_file(cells_path);
  const auto hull = gis::cells_hull(cells);
  if (out_path.empty()) {
    gis::write_polygon(std::cout, hull);
  } else {
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot open " + out_path);
    gis::write_polygon(os, hull);
  }
  std::cerr << "hull vertices: " << hull.size() << "  area: " << gis::format_real(gis::polygon_area(hull)) << '\n';
  return kExitOk;
}

int cmd_compare(const std::string& a_path, const std::string& b_path) {
  const auto a = gis::read_cells_file(a_path);
  const auto b = gis::read_cells_file(b_path);
  double va = 0.0;
  double vb = 0.0;
  for (const auto& c : a) va += c.box.volume();
  for (const auto& c : b) vb += c.box.volume();
  const double diff = gis::cells_symmetric_difference(a, b);
  std::cout << "volume_a\t" << gis::format_real(va) << '\n';
  std::cout << "volume_b\t" << gis::format_real(vb) << '\n';
  std::cout << "symmetric_difference\t" << gis::format_real(diff) << '\n';
  return kExitOk;
}

int cmd_replicate(const std::string& out_path, std::size_t iterations, std::size_t parallel_iterations) {
  gis::bench::ReplicateOptions opt;
  opt.iterations = iterations;
  opt.parallel_iterations = parallel_iterations;
  const auto report = gis::bench::replicate_paper_experiments(opt);
  gis::bench::write_report(std::cout, report);
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    gis::bench::write_report(os, report);
  }
  return report.all_passed() ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based control invariant set computation"};
  app.require_subcommand(1);

  FlagValues run_flags;
  auto* run = app.add_subcommand("run", "compute an outer approximation for one configuration");
  add_run_flags(*run, run_flags, false);

  FlagValues sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "run a grid of configurations (lists in --N, --mode, --workers, --batch-size)");
  add_run_flags(*sweep, sweep_flags, true);

  std::string hull_in;
  std::string hull_out;
  auto* hull = app.add_subcommand("hull", "convex hull polygon of a 2-D cells file");
  hull->add_option("cells", hull_in, "cells file")->required();
  hull->add_option("-o,--output", hull_out, "polygon file (default: stdout)");

  std::string cmp_a;
  std::string cmp_b;
  auto* compare = app.add_subcommand("compare", "symmetric-difference volume of two cells files");
  compare->add_option("a", cmp_a, "first cells file")->required();
  compare->add_option("b", cmp_b, "second cells file")->required();

  std::string rep_out;
  std::size_t rep_iterations = 20;
  std::size_t rep_parallel_iterations = 14;
  auto* replicate = app.add_subcommand("replicate", "CSTR N-sweep and serial-vs-parallel report");
  replicate->add_option("-o,--output", rep_out, "report file");
  replicate->add_option("--iterations", rep_iterations, "iterations for the N-sweep");
  replicate->add_option("--parallel-iterations", rep_parallel_iterations, "iterations for the parallel sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*sweep) return cmd_sweep(sweep_flags);
    if (*hull) return cmd_hull(hull_in, hull_out);
    if (*compare) return cmd_compare(cmp_a, cmp_b);
    if (*replicate) return cmd_replicate(rep_out, rep_iterations, rep_parallel_iterations);
  } catch (const gis::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
