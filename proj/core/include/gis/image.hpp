#pragma once

#include <optional>
#include <vector>

#include "gis/geometry.hpp"
#include "gis/system.hpp"

namespace gis {

/// Sampling density and inflation used to enclose the one-step image of a cell.
struct ImageConfig {
  std::size_t samples_per_dim = 3;
  double bloat = 0.1;  // relative to the image box's own half-widths

  void validate() const;
};

/// Uniform grid of samples_per_dim^n points over the box, vertices included.
/// Same ordering convention as vertices(): first coordinate varies slowest.
std::vector<Vec> cell_sample_points(const Box& box, std::size_t samples_per_dim);

/// Inflates each half-width of `box` by the relative factor `bloat`.
Box bloat_box(const Box& box, double bloat);

/// Bounding box of step(p, u) over the cell's sample points, inflated by
/// cfg.bloat. Non-finite images are dropped (they lie outside any state box);
/// std::nullopt means every sample escaped.
std::optional<Box> cell_image(const SystemModel& model, const Box& box, std::span<const double> u,
                              const ImageConfig& cfg);

struct InputImage {
  Vec u;
  std::optional<Box> image;
};

/// cell_image for every input of the grid, in grid order.
std::vector<InputImage> cell_images(const SystemModel& model, const Box& box, const InputGrid& inputs,
                                    const ImageConfig& cfg);

/// Evaluates per-input enclosures for a run of cells, reusing sample buffers.
/// out receives cells.size() * inputs.points.size() entries, cell-major.
void evaluate_images(const SystemModel& model, std::span<const Cell> cells, const InputGrid& inputs,
                     const ImageConfig& cfg, std::vector<std::optional<Box>>& out);

}  // namespace gis
