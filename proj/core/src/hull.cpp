#include "gis/hull.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace gis {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool lower_left(const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

}  // namespace

std::vector<Point2> convex_hull(std::span<const Point2> points) {
  std::vector<Point2> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), lower_left);
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) throw DegenerateHull("convex hull needs at least 3 distinct points");

  std::vector<Point2> hull(2 * p.size());
  std::size_t k = 0;
  for (const auto& pt : p) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pt) <= 0) --k;
    hull[k++] = pt;
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
    hull[k++] = p[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateHull("points are collinear");

  // Start at the lowest, then leftmost vertex.
  auto start = std::min_element(hull.begin(), hull.end(), [](const Point2& a, const Point2& b) {
    return a.y < b.y || (a.y == b.y && a.x < b.x);
  });
  std::rotate(hull.begin(), start, hull.end());
  return hull;
}

double polygon_area(std::span<const Point2> polygon) {
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Point2& a = polygon[i];
    const Point2& b = polygon[(i + 1) % polygon.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

std::vector<Point2> convex_intersection(std::span<const Point2> a, std::span<const Point2> b) {
  std::vector<Point2> out(a.begin(), a.end());
  for (std::size_t i = 0; i < b.size() && !out.empty(); ++i) {
    const Point2& e0 = b[i];
    const Point2& e1 = b[(i + 1) % b.size()];
    std::vector<Point2> in;
    in.swap(out);
    for (std::size_t j = 0; j < in.size(); ++j) {
      const Point2& p = in[j];
      const Point2& q = in[(j + 1) % in.size()];
      const double sp = cross(e0, e1, p);
      const double sq = cross(e0, e1, q);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) {
        const double t = sp / (sp - sq);
        out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
      }
    }
  }
  return out;
}

double convex_symmetric_difference_area(std::span<const Point2> a, std::span<const Point2> b) {
  const auto inter = convex_intersection(a, b);
  const double common = inter.size() >= 3 ? std::abs(polygon_area(inter)) : 0.0;
  return std::abs(polygon_area(a)) + std::abs(polygon_area(b)) - 2.0 * common;
}

std::vector<Point2> cells_hull(std::span<const CellRecord> cells) {
  std::vector<Point2> corners;
  corners.reserve(cells.size() * 4);
  for (const auto& c : cells) {
    if (c.box.dim() != 2) throw ContractViolation("hull requires a 2-D state space");
    for (const Vec& v : vertices(c.box)) corners.push_back({v[0], v[1]});
  }
  return convex_hull(corners);
}

double cells_symmetric_difference(std::span<const CellRecord> a, std::span<const CellRecord> b) {
  if (a.empty() || b.empty()) {
    double v = 0.0;
    for (const auto& c : a) v += c.box.volume();
    for (const auto& c : b) v += c.box.volume();
    return v;
  }
  if (a.front().box.dim() != b.front().box.dim()) throw ContractViolation("cells files differ in dimension");

  std::vector<Cell> b_cells;
  b_cells.reserve(b.size());
  Box bounds = b.front().box;
  for (const auto& c : b) {
    b_cells.push_back({c.id, c.box});
    bounds.expand_to(c.box.lo().span());
    bounds.expand_to(c.box.hi().span());
  }
  const Covering cover_b(bounds, std::move(b_cells));
  const SpatialIndex index(cover_b);

  double vol_a = 0.0;
  double common = 0.0;
  std::vector<std::size_t> hits;
  for (const auto& c : a) {
    vol_a += c.box.volume();
    hits.clear();
    index.query_intersecting(c.box, hits);
    for (std::size_t j : hits) common += c.box.overlap_volume(cover_b[j].box);
  }
  return vol_a + cover_b.volume() - 2.0 * common;
}

void write_polygon(std::ostream& os, std::span<const Point2> polygon) {
  os << "x\ty\n";
  for (std::size_t i = 0; i <= polygon.size() && !polygon.empty(); ++i) {
    const Point2& p = polygon[i % polygon.size()];
    os << format_real(p.x) << '\t' << format_real(p.y) << '\n';
  }
}

std::vector<Point2> read_polygon(std::istream& is) {
  std::string line;
  std::getline(is, line);
  std::vector<Point2> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    Point2 p;
    if (!(row >> p.x >> p.y)) throw std::runtime_error("polygon file: malformed row");
    out.push_back(p);
  }
  if (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

}  // namespace gis
