#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gis/geometry.hpp"
#include "gis/image.hpp"
#include "gis/system.hpp"

namespace gis {

/// Directed graph over the cells of a covering: i -> j iff cell j meets an
/// image enclosure of cell i. Vertices are addressed by their position in the
/// covering (which is CellId order); adjacency lists are sorted and unique.
class SymbolicImage {
 public:
  using Vertex = std::uint32_t;

  SymbolicImage() = default;
  SymbolicImage(std::shared_ptr<const std::vector<CellId>> vertices, std::vector<std::uint64_t> offsets,
                std::vector<Vertex> targets);
  /// Convenience constructor from adjacency lists (sorted and deduplicated here).
  static SymbolicImage from_adjacency(std::vector<CellId> vertices, std::vector<std::vector<Vertex>> adjacency);

  std::size_t vertex_count() const { return vertices_ ? vertices_->size() : 0; }
  std::size_t edge_count() const { return targets_.size(); }
  const CellId& vertex(std::size_t v) const { return (*vertices_)[v]; }
  const std::vector<CellId>& vertices() const;
  std::span<const Vertex> successors(std::size_t v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::optional<std::size_t> index_of(const CellId& id) const;

  /// Graph with every edge reversed (same vertex set).
  SymbolicImage reversed() const;

  friend bool operator==(const SymbolicImage& a, const SymbolicImage& b);

 private:
  std::shared_ptr<const std::vector<CellId>> vertices_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<Vertex> targets_;
};

/// Number of outgoing edges of `v`; throws std::out_of_range for unknown cells.
std::size_t out_degree(const SymbolicImage& graph, const CellId& v);

/// Out-edges computed by one worker. `sources` lists the vertices this part
/// owns, ascending; part.offsets/targets are indexed by position in `sources`.
struct Subgraph {
  std::vector<SymbolicImage::Vertex> sources;
  std::vector<std::uint64_t> offsets{0};
  std::vector<SymbolicImage::Vertex> targets;
};

/// Unions worker subgraphs over a shared vertex list. Each vertex's out-edges
/// must be owned by at most one part; overlap throws ContractViolation.
/// The result does not depend on the order of `parts`.
SymbolicImage merge_subgraphs(std::span<const Subgraph> parts,
                              std::shared_ptr<const std::vector<CellId>> vertices);

/// Cells per batch, worker count. Batches are assigned to workers in
/// contiguous runs of roughly equal length.
struct BuildPlan {
  std::size_t batch_size = 1024;
  std::size_t workers = 1;

  void validate() const;
};

/// Map-evaluation stage of the builder: images of a batch of cells under every
/// grid input, cell-major. This is the seam for non-CPU backends.
class BatchEvaluator {
 public:
  virtual ~BatchEvaluator() = default;
  virtual void evaluate(const SystemModel& model, std::span<const Cell> cells, const InputGrid& inputs,
                        const ImageConfig& cfg, std::vector<std::optional<Box>>& images) const = 0;
};

class CpuBatchEvaluator final : public BatchEvaluator {
 public:
  void evaluate(const SystemModel& model, std::span<const Cell> cells, const InputGrid& inputs,
                const ImageConfig& cfg, std::vector<std::optional<Box>>& images) const override;
};

SymbolicImage build_graph_serial(const Covering& covering, const SpatialIndex& index, const SystemModel& model,
                                 const InputGrid& inputs, const ImageConfig& cfg);

/// Same edge set as build_graph_serial for every plan. A failure in any
/// worker aborts the build with a std::runtime_error naming the batch.
SymbolicImage build_graph_parallel(const Covering& covering, const SpatialIndex& index, const SystemModel& model,
                                   const InputGrid& inputs, const ImageConfig& cfg, const BuildPlan& plan,
                                   const BatchEvaluator& evaluator = CpuBatchEvaluator{});

/// Canonical edge list: one "src_path dst_path" line per edge, sorted.
void write_edge_list(std::ostream& os, const SymbolicImage& graph);
void write_edge_list_file(const std::string& path, const SymbolicImage& graph);

}  // namespace gis
