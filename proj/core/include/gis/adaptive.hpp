#pragma once

#include <string_view>
#include <vector>

#include "gis/geometry.hpp"

namespace gis {

enum class SubdivisionMode { full, adaptive };

std::string_view to_string(SubdivisionMode mode);
SubdivisionMode parse_subdivision_mode(std::string_view text);

struct AdaptiveConfig {
  SubdivisionMode mode = SubdivisionMode::full;
  std::size_t N = 3;                 // nearest neighbours added around each boundary cell
  double delta = 0.01;               // relative enlargement for the boundary test
  bool include_face_points = false;  // also probe face and edge midpoints of the enlarged box

  void validate() const;
};

/// Probe points for the boundary test of one cell: the vertices of the
/// enlarged box, or with face points every non-central point of its
/// 3-per-axis grid.
std::vector<Vec> boundary_probes(const Box& box, double delta, bool include_face_points);

/// A cell is a boundary cell when at least one probe point of its enlarged
/// box lies in no cell of the covering. Result is a mask over covering positions.
std::vector<bool> select_boundary(const Covering& covering, const SpatialIndex& index, double delta,
                                  bool include_face_points = false);

/// Union of the N nearest cells (by center) around every boundary cell,
/// excluding cells already marked boundary.
std::vector<bool> select_neighborhood(const Covering& covering, const SpatialIndex& index,
                                      const std::vector<bool>& boundary, std::size_t N);

struct Selection {
  std::vector<bool> selected;
  std::size_t boundary_count = 0;
  std::size_t neighborhood_count = 0;

  std::size_t count() const { return boundary_count + neighborhood_count; }
};

/// Full mode selects every cell (boundary counts stay 0); adaptive mode
/// selects boundary cells plus their N-neighbourhood.
Selection select_for_subdivision(const Covering& covering, const SpatialIndex& index, const AdaptiveConfig& cfg);

/// Splits each selected cell along axis (depth mod n); other cells carry over.
Covering subdivide_selected(const Covering& covering, const std::vector<bool>& selected);

/// Splits every cell once.
Covering subdivide_all(const Covering& covering);

}  // namespace gis
