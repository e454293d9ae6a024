#pragma once

#include <cstdint>
#include <vector>

#include "gis/geometry.hpp"
#include "gis/symbolic_graph.hpp"

namespace gis {

/// Strongly connected components of a SymbolicImage.
struct SccResult {
  std::vector<std::uint32_t> component;               // component id per vertex
  std::vector<std::vector<std::uint32_t>> members;    // vertices per component, ascending
  std::vector<bool> nontrivial;                       // size >= 2, or a self-loop singleton

  std::size_t count() const { return members.size(); }
};

/// Iterative Tarjan; no recursion, so safe for millions of vertices.
SccResult strongly_connected_components(const SymbolicImage& graph);

enum class NonLeavingMode {
  all_cycles,      // every nontrivial component and all of its ancestors
  largest_only,    // only the largest nontrivial component and its ancestors
};

/// Vertices from which an infinite admissible path starts, as a membership
/// mask indexed by vertex position.
std::vector<bool> non_leaving_mask(const SymbolicImage& graph, NonLeavingMode mode = NonLeavingMode::all_cycles);

/// Same set as CellIds, ascending.
std::vector<CellId> non_leaving(const SymbolicImage& graph, NonLeavingMode mode = NonLeavingMode::all_cycles);

/// Covering restricted to the cells in `keep` (a mask over covering positions).
/// Any SpatialIndex over the input covering does not apply to the result.
Covering retain(const Covering& covering, const std::vector<bool>& keep);
Covering retain(const Covering& covering, std::span<const CellId> keep);

}  // namespace gis
