#include "gis/adaptive.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gis {

std::string_view to_string(SubdivisionMode mode) {
  return mode == SubdivisionMode::full ? "full" : "adaptive";
}

SubdivisionMode parse_subdivision_mode(std::string_view text) {
  if (text == "full") return SubdivisionMode::full;
  if (text == "adaptive") return SubdivisionMode::adaptive;
  throw std::invalid_argument("mode: expected 'full' or 'adaptive', got '" + std::string(text) + "'");
}

void AdaptiveConfig::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta: must be positive");
}

std::vector<Vec> boundary_probes(const Box& box, double delta, bool include_face_points) {
  const Box grown = enlarge(box, delta);
  if (!include_face_points) return vertices(grown);

  const std::size_t n = grown.dim();
  std::size_t total = 1;
  for (std::size_t d = 0; d < n; ++d) total *= 3;
  std::vector<Vec> out;
  out.reserve(total - 1);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vec p(n);
    std::size_t rest = flat;
    bool on_surface = false;
    for (std::size_t d = n; d-- > 0;) {
      const std::size_t i = rest % 3;
      rest /= 3;
      p[d] = i == 0 ? grown.lo(d) : i == 1 ? grown.center(d) : grown.hi(d);
      on_surface = on_surface || i != 1;
    }
    if (on_surface) out.push_back(p);
  }
  return out;
}

std::vector<bool> select_boundary(const Covering& covering, const SpatialIndex& index, double delta,
                                  bool include_face_points) {
  std::vector<bool> boundary(covering.size(), false);
  for (std::size_t i = 0; i < covering.size(); ++i) {
    for (const Vec& probe : boundary_probes(covering[i].box, delta, include_face_points)) {
      if (!index.any_contains(probe.span())) {
        boundary[i] = true;
        break;
      }
    }
  }
  return boundary;
}

std::vector<bool> select_neighborhood(const Covering& covering, const SpatialIndex& index,
                                      const std::vector<bool>& boundary, std::size_t N) {
  if (boundary.size() != covering.size()) throw ContractViolation("select_neighborhood: mask length mismatch");
  std::vector<bool> out(covering.size(), false);
  if (N == 0) return out;
  for (std::size_t i = 0; i < covering.size(); ++i) {
    if (!boundary[i]) continue;
    const Vec c = covering[i].box.center();
    for (std::size_t j : index.knn_centers(c.span(), N).cells) {
      if (!boundary[j]) out[j] = true;
    }
  }
  return out;
}

Selection select_for_subdivision(const Covering& covering, const SpatialIndex& index, const AdaptiveConfig& cfg) {
  Selection sel;
  if (cfg.mode == SubdivisionMode::full) {
    sel.selected.assign(covering.size(), true);
    return sel;
  }
  sel.selected = select_boundary(covering, index, cfg.delta, cfg.include_face_points);
  const auto near = select_neighborhood(covering, index, sel.selected, cfg.N);
  for (std::size_t i = 0; i < covering.size(); ++i) {
    if (sel.selected[i]) {
      ++sel.boundary_count;
    } else if (near[i]) {
      sel.selected[i] = true;
      ++sel.neighborhood_count;
    }
  }
  return sel;
}

Covering subdivide_selected(const Covering& covering, const std::vector<bool>& selected) {
  if (selected.size() != covering.size()) throw ContractViolation("subdivide_selected: mask length mismatch");
  const std::size_t n = covering.dim();
  std::vector<Cell> cells;
  cells.reserve(covering.size() * 2);
  for (std::size_t i = 0; i < covering.size(); ++i) {
    const Cell& c = covering[i];
    if (!selected[i]) {
      cells.push_back(c);
      continue;
    }
    auto [lower, upper] = subdivide_cell(c, split_axis(c.id.depth(), n));
    // Children occupy the parent's slot in CellId order, so the list stays sorted.
    cells.push_back(lower);
    cells.push_back(upper);
  }
  return Covering(covering.root(), std::move(cells));
}

Covering subdivide_all(const Covering& covering) {
  return subdivide_selected(covering, std::vector<bool>(covering.size(), true));
}

}  // namespace gis
