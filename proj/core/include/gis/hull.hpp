#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "gis/geometry.hpp"

namespace gis {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

class DegenerateHull : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Convex hull (Andrew's monotone chain), counter-clockwise, starting at the
/// lowest-then-leftmost point, without the closing repeat. Collinear points
/// on hull edges are dropped. Throws DegenerateHull when the points do not
/// span a positive area.
std::vector<Point2> convex_hull(std::span<const Point2> points);

/// Signed shoelace area (positive for counter-clockwise).
double polygon_area(std::span<const Point2> polygon);

/// Intersection of two convex counter-clockwise polygons (Sutherland-Hodgman).
std::vector<Point2> convex_intersection(std::span<const Point2> a, std::span<const Point2> b);

/// Area of (A \ B) U (B \ A) for convex polygons.
double convex_symmetric_difference_area(std::span<const Point2> a, std::span<const Point2> b);

/// Hull of every corner of every 2-D cell.
std::vector<Point2> cells_hull(std::span<const CellRecord> cells);

/// Volume of the symmetric difference of the unions of two cell sets. Cells
/// within one set must have disjoint interiors.
double cells_symmetric_difference(std::span<const CellRecord> a, std::span<const CellRecord> b);

/// Tab-separated "x y" rows with a header, closed (first vertex repeated).
void write_polygon(std::ostream& os, std::span<const Point2> polygon);
std::vector<Point2> read_polygon(std::istream& is);

}  // namespace gis
