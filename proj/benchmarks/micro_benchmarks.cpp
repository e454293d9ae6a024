#include <benchmark/benchmark.h>

#include "gis/adaptive.hpp"
#include "gis/analysis.hpp"
#include "gis/engine.hpp"
#include "gis/image.hpp"
#include "gis/symbolic_graph.hpp"

namespace {

// Uniform covering of the CSTR state box at the given depth.
gis::Covering cstr_grid(int depth) {
  gis::Covering c(gis::cstr_model().state_box);
  for (int i = 0; i < depth; ++i) c = gis::subdivide_all(c);
  return c;
}

void BM_CstrCellImage(benchmark::State& state) {
  const auto model = gis::cstr_model();
  const gis::Box cell{{0.45, 0.5}, {349.5, 350.0}};
  const gis::ImageConfig cfg;
  const double u = 300.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gis::cell_image(model, cell, std::span(&u, 1), cfg));
  }
}
BENCHMARK(BM_CstrCellImage);

void BM_QueryIntersecting(benchmark::State& state) {
  const auto covering = cstr_grid(static_cast<int>(state.range(0)));
  const gis::SpatialIndex index(covering);
  const gis::Box query{{0.40, 0.42}, {349.0, 349.3}};
  std::vector<std::size_t> hits;
  for (auto _ : state) {
    hits.clear();
    index.query_intersecting(query, hits);
    benchmark::DoNotOptimize(hits.data());
  }
  state.SetLabel(std::to_string(covering.size()) + " cells");
}
BENCHMARK(BM_QueryIntersecting)->Arg(10)->Arg(14)->Arg(18);

void BM_KnnCenters(benchmark::State& state) {
  const auto covering = cstr_grid(14);
  const gis::SpatialIndex index(covering);
  const gis::Vec p = covering[covering.size() / 3].box.center();
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.knn_centers(p.span(), static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_KnnCenters)->Arg(3)->Arg(7)->Arg(50);

void BM_BuildGraph(benchmark::State& state) {
  const auto model = gis::cstr_model();
  const auto covering = cstr_grid(12);
  const gis::SpatialIndex index(covering);
  const std::size_t counts[] = {3};
  const auto inputs = gis::sample_inputs(model.input_box, counts);
  const gis::BuildPlan plan{1024, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(gis::build_graph_parallel(covering, index, model, inputs, {}, plan));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(covering.size()));
}
BENCHMARK(BM_BuildGraph)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_NonLeaving(benchmark::State& state) {
  const auto model = gis::cstr_model();
  const auto covering = cstr_grid(14);
  const gis::SpatialIndex index(covering);
  const std::size_t counts[] = {3};
  const auto inputs = gis::sample_inputs(model.input_box, counts);
  const auto graph = gis::build_graph_serial(covering, index, model, inputs, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(gis::non_leaving_mask(graph));
  }
  state.SetLabel(std::to_string(graph.edge_count()) + " edges");
}
BENCHMARK(BM_NonLeaving)->Unit(benchmark::kMillisecond);

void BM_SelectBoundary(benchmark::State& state) {
  const auto covering = cstr_grid(14);
  const gis::SpatialIndex index(covering);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gis::select_boundary(covering, index, 0.01));
  }
}
BENCHMARK(BM_SelectBoundary)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
