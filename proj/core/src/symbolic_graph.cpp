#include "gis/symbolic_graph.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace gis {

SymbolicImage::SymbolicImage(std::shared_ptr<const std::vector<CellId>> vertices, std::vector<std::uint64_t> offsets,
                             std::vector<Vertex> targets)
    : vertices_(std::move(vertices)), offsets_(std::move(offsets)), targets_(std::move(targets)) {
  const std::size_t n = vertices_ ? vertices_->size() : 0;
  if (offsets_.size() != n + 1 || offsets_.back() != targets_.size()) {
    throw ContractViolation("SymbolicImage: offsets do not match vertex and edge counts");
  }
}

SymbolicImage SymbolicImage::from_adjacency(std::vector<CellId> vertices,
                                            std::vector<std::vector<Vertex>> adjacency) {
  if (adjacency.size() != vertices.size()) throw ContractViolation("from_adjacency: one list per vertex required");
  std::vector<std::uint64_t> offsets{0};
  std::vector<Vertex> targets;
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (Vertex t : list) {
      if (t >= vertices.size()) throw ContractViolation("from_adjacency: edge target out of range");
      targets.push_back(t);
    }
    offsets.push_back(targets.size());
  }
  return {std::make_shared<const std::vector<CellId>>(std::move(vertices)), std::move(offsets), std::move(targets)};
}

const std::vector<CellId>& SymbolicImage::vertices() const {
  static const std::vector<CellId> empty;
  return vertices_ ? *vertices_ : empty;
}

std::optional<std::size_t> SymbolicImage::index_of(const CellId& id) const {
  const auto& vs = vertices();
  auto it = std::lower_bound(vs.begin(), vs.end(), id);
  if (it == vs.end() || !(*it == id)) return std::nullopt;
  return static_cast<std::size_t>(it - vs.begin());
}

SymbolicImage SymbolicImage::reversed() const {
  const std::size_t n = vertex_count();
  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (Vertex t : targets_) ++offsets[t + 1];
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  std::vector<Vertex> targets(targets_.size());
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t v = 0; v < n; ++v) {
    for (Vertex t : successors(v)) targets[cursor[t]++] = static_cast<Vertex>(v);
  }
  SymbolicImage r;
  r.vertices_ = vertices_;
  r.offsets_ = std::move(offsets);
  r.targets_ = std::move(targets);
  return r;
}

bool operator==(const SymbolicImage& a, const SymbolicImage& b) {
  return a.vertices() == b.vertices() && a.offsets_ == b.offsets_ && a.targets_ == b.targets_;
}

std::size_t out_degree(const SymbolicImage& graph, const CellId& v) {
  const auto i = graph.index_of(v);
  if (!i) throw std::out_of_range("out_degree: unknown vertex " + v.path());
  return graph.successors(*i).size();
}

SymbolicImage merge_subgraphs(std::span<const Subgraph> parts,
                              std::shared_ptr<const std::vector<CellId>> vertices) {
  const std::size_t n = vertices ? vertices->size() : 0;
  // owner[v] = index of the part that owns v's out-edges
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n, kNone);
  std::vector<std::uint64_t> local(n, 0);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Subgraph& part = parts[p];
    if (part.offsets.size() != part.sources.size() + 1) throw ContractViolation("merge_subgraphs: malformed part");
    for (std::size_t k = 0; k < part.sources.size(); ++k) {
      const auto v = part.sources[k];
      if (v >= n) throw ContractViolation("merge_subgraphs: source out of range");
      if (owner[v] != kNone) {
        throw ContractViolation("merge_subgraphs: vertex " + (*vertices)[v].path() + " owned by two parts");
      }
      owner[v] = p;
      local[v] = k;
    }
  }

  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    std::uint64_t deg = 0;
    if (owner[v] != kNone) {
      const Subgraph& part = parts[owner[v]];
      deg = part.offsets[local[v] + 1] - part.offsets[local[v]];
    }
    offsets[v + 1] = offsets[v] + deg;
  }
  std::vector<SymbolicImage::Vertex> targets(offsets[n]);
  for (std::size_t v = 0; v < n; ++v) {
    if (owner[v] == kNone) continue;
    const Subgraph& part = parts[owner[v]];
    auto first = part.targets.begin() + static_cast<std::ptrdiff_t>(part.offsets[local[v]]);
    auto last = part.targets.begin() + static_cast<std::ptrdiff_t>(part.offsets[local[v] + 1]);
    auto out = targets.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
    std::copy(first, last, out);
    std::sort(out, out + (last - first));
    if (std::adjacent_find(out, out + (last - first)) != out + (last - first)) {
      throw ContractViolation("merge_subgraphs: duplicate edge from " + (*vertices)[v].path());
    }
  }
  if (!vertices) vertices = std::make_shared<const std::vector<CellId>>();
  return {std::move(vertices), std::move(offsets), std::move(targets)};
}

void BuildPlan::validate() const {
  if (batch_size < 1) throw std::invalid_argument("batch_size: must be at least 1");
  if (workers < 1) throw std::invalid_argument("workers: must be at least 1");
}

void CpuBatchEvaluator::evaluate(const SystemModel& model, std::span<const Cell> cells, const InputGrid& inputs,
                                 const ImageConfig& cfg, std::vector<std::optional<Box>>& images) const {
  evaluate_images(model, cells, inputs, cfg, images);
}

namespace {

std::shared_ptr<const std::vector<CellId>> vertex_list(const Covering& covering) {
  auto ids = std::make_shared<std::vector<CellId>>();
  ids->reserve(covering.size());
  for (const auto& c : covering.cells()) ids->push_back(c.id);
  return ids;
}

/// Appends the out-edges of cells [first, last) to `part`, given their images.
void intersect_images(const SpatialIndex& index, std::size_t first, std::size_t last, std::size_t input_count,
                      std::span<const std::optional<Box>> images, Subgraph& part) {
  std::vector<std::size_t> hits;
  for (std::size_t i = first; i < last; ++i) {
    hits.clear();
    for (std::size_t k = 0; k < input_count; ++k) {
      const auto& img = images[(i - first) * input_count + k];
      if (img) index.query_intersecting(*img, hits);
    }
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    part.sources.push_back(static_cast<SymbolicImage::Vertex>(i));
    for (std::size_t j : hits) part.targets.push_back(static_cast<SymbolicImage::Vertex>(j));
    part.offsets.push_back(part.targets.size());
  }
}

void check_inputs(const Covering& covering, const SpatialIndex& index, const SystemModel& model) {
  if (!covering.empty() && !index.built_over(covering)) {
    throw ContractViolation("graph build: spatial index was built over a different covering");
  }
  if (!covering.empty() && covering.dim() != model.n) {
    throw ContractViolation("graph build: covering dimension differs from model state dimension");
  }
  if (covering.size() > std::numeric_limits<SymbolicImage::Vertex>::max()) {
    throw ContractViolation("graph build: too many cells for 32-bit vertex ids");
  }
}

}  // namespace

SymbolicImage build_graph_serial(const Covering& covering, const SpatialIndex& index, const SystemModel& model,
                                 const InputGrid& inputs, const ImageConfig& cfg) {
  check_inputs(covering, index, model);
  Subgraph part;
  std::vector<std::optional<Box>> images;
  const std::size_t k = inputs.points.size();
  for (std::size_t i = 0; i < covering.size(); ++i) {
    evaluate_images(model, std::span(covering.cells()).subspan(i, 1), inputs, cfg, images);
    intersect_images(index, i, i + 1, k, images, part);
  }
  return merge_subgraphs(std::span(&part, 1), vertex_list(covering));
}

SymbolicImage build_graph_parallel(const Covering& covering, const SpatialIndex& index, const SystemModel& model,
                                   const InputGrid& inputs, const ImageConfig& cfg, const BuildPlan& plan,
                                   const BatchEvaluator& evaluator) {
  plan.validate();
  check_inputs(covering, index, model);
  const std::size_t cells = covering.size();
  const std::size_t batches = (cells + plan.batch_size - 1) / plan.batch_size;
  const std::size_t workers = std::max<std::size_t>(1, std::min(plan.workers, batches));
  const std::size_t k = inputs.points.size();

  struct WorkerState {
    Subgraph part;
    std::exception_ptr error;
    std::size_t failed_batch = 0;
  };
  std::vector<WorkerState> states(workers);

  auto work = [&](std::size_t w) {
    WorkerState& st = states[w];
    const std::size_t b_first = batches * w / workers;
    const std::size_t b_last = batches * (w + 1) / workers;
    std::vector<std::optional<Box>> images;
    for (std::size_t b = b_first; b < b_last; ++b) {
      try {
        const std::size_t first = b * plan.batch_size;
        const std::size_t last = std::min(cells, first + plan.batch_size);
        evaluator.evaluate(model, std::span(covering.cells()).subspan(first, last - first), inputs, cfg, images);
        if (images.size() != (last - first) * k) throw std::runtime_error("evaluator returned wrong image count");
        intersect_images(index, first, last, k, images, st.part);
      } catch (...) {
        st.error = std::current_exception();
        st.failed_batch = b;
        return;
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
  }

  for (const auto& st : states) {
    if (!st.error) continue;
    const std::size_t first = st.failed_batch * plan.batch_size;
    const std::size_t last = std::min(cells, first + plan.batch_size);
    std::string what = "unknown error";
    try {
      std::rethrow_exception(st.error);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    throw std::runtime_error("graph build failed in batch " + std::to_string(st.failed_batch) + " (cells " +
                             std::to_string(first) + ".." + std::to_string(last) + "): " + what);
  }

  std::vector<Subgraph> parts;
  parts.reserve(workers);
  for (auto& st : states) parts.push_back(std::move(st.part));
  return merge_subgraphs(parts, vertex_list(covering));
}

void write_edge_list(std::ostream& os, const SymbolicImage& graph) {
  // Vertex order is CellId order, which matches lexicographic order of paths.
  std::vector<std::string> paths;
  paths.reserve(graph.vertex_count());
  for (const auto& id : graph.vertices()) paths.push_back(id.path());
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    for (auto t : graph.successors(v)) os << paths[v] << ' ' << paths[t] << '\n';
  }
}

void write_edge_list_file(const std::string& path, const SymbolicImage& graph) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_edge_list(os, graph);
}

}  // namespace gis
