#include "gis/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gis {

void ImageConfig::validate() const {
  if (samples_per_dim < 2) throw std::invalid_argument("samples_per_dim: must be at least 2");
  if (!(bloat >= 0.0) || !std::isfinite(bloat)) throw std::invalid_argument("bloat: must be a nonnegative number");
}

namespace {

void sample_points_into(const Box& box, std::size_t s, std::vector<Vec>& out) {
  if (s < 2) throw ContractViolation("cell_sample_points: samples_per_dim must be at least 2");
  const std::size_t n = box.dim();
  std::size_t total = 1;
  for (std::size_t d = 0; d < n; ++d) total *= s;
  out.clear();
  out.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vec p(n);
    std::size_t rest = flat;
    for (std::size_t d = n; d-- > 0;) {
      const std::size_t i = rest % s;
      rest /= s;
      if (i == 0) p[d] = box.lo(d);
      else if (i + 1 == s) p[d] = box.hi(d);
      else p[d] = box.lo(d) + box.width(d) * static_cast<double>(i) / static_cast<double>(s - 1);
    }
    out.push_back(p);
  }
}

bool all_finite(const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

std::optional<Box> enclose(const SystemModel& model, std::span<const Vec> points, std::span<const double> u,
                           double bloat) {
  std::optional<Box> bounds;
  Vec next(model.n);
  for (const Vec& p : points) {
    model.step(p.span(), u, next.span());
    if (!all_finite(next)) continue;
    if (bounds) bounds->expand_to(next.span());
    else bounds = Box(next, next);
  }
  if (bounds && bloat > 0.0) bounds = bloat_box(*bounds, bloat);
  return bounds;
}

}  // namespace

std::vector<Vec> cell_sample_points(const Box& box, std::size_t samples_per_dim) {
  std::vector<Vec> out;
  sample_points_into(box, samples_per_dim, out);
  return out;
}

Box bloat_box(const Box& box, double bloat) {
  if (bloat == 0.0) return box;
  const Box grown = enlarge(box, bloat);
  // Rounding in enlarge() must never shrink the enclosure.
  Vec lo(box.dim());
  Vec hi(box.dim());
  for (std::size_t d = 0; d < box.dim(); ++d) {
    lo[d] = std::min(grown.lo(d), box.lo(d));
    hi[d] = std::max(grown.hi(d), box.hi(d));
  }
  return {lo, hi};
}

std::optional<Box> cell_image(const SystemModel& model, const Box& box, std::span<const double> u,
                              const ImageConfig& cfg) {
  const auto points = cell_sample_points(box, cfg.samples_per_dim);
  return enclose(model, points, u, cfg.bloat);
}

std::vector<InputImage> cell_images(const SystemModel& model, const Box& box, const InputGrid& inputs,
                                    const ImageConfig& cfg) {
  const auto points = cell_sample_points(box, cfg.samples_per_dim);
  std::vector<InputImage> out;
  out.reserve(inputs.points.size());
  for (const Vec& u : inputs.points) out.push_back({u, enclose(model, points, u.span(), cfg.bloat)});
  return out;
}

void evaluate_images(const SystemModel& model, std::span<const Cell> cells, const InputGrid& inputs,
                     const ImageConfig& cfg, std::vector<std::optional<Box>>& out) {
  out.clear();
  out.reserve(cells.size() * inputs.points.size());
  std::vector<Vec> points;
  for (const Cell& c : cells) {
    sample_points_into(c.box, cfg.samples_per_dim, points);
    for (const Vec& u : inputs.points) out.push_back(enclose(model, points, u.span(), cfg.bloat));
  }
}

}  // namespace gis
