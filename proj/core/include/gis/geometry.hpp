#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gis {

/// Largest state (or input) dimension supported by the fixed-capacity vector types.
inline constexpr std::size_t kMaxDim = 4;

/// Thrown when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Fixed-capacity real vector. Holds up to kMaxDim coordinates inline so that
/// millions of cells do not each own a heap allocation.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n, double fill = 0.0);
  Vec(std::initializer_list<double> values);
  explicit Vec(std::span<const double> values);

  std::size_t size() const { return size_; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> span() { return {data_.data(), size_}; }
  std::span<const double> span() const { return {data_.data(), size_}; }

  friend bool operator==(const Vec& a, const Vec& b);

 private:
  std::array<double, kMaxDim> data_{};
  std::uint8_t size_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Vec& v);

/// Closed axis-aligned box [lo, hi]. Cells require lo < hi in every
/// dimension; image enclosures may be degenerate (lo == hi).
class Box {
 public:
  Box() = default;
  Box(const Vec& lo, const Vec& hi);
  Box(std::initializer_list<std::pair<double, double>> intervals);

  std::size_t dim() const { return lo_.size(); }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  double lo(std::size_t d) const { return lo_[d]; }
  double hi(std::size_t d) const { return hi_[d]; }
  double width(std::size_t d) const { return hi_[d] - lo_[d]; }
  double center(std::size_t d) const { return 0.5 * (lo_[d] + hi_[d]); }
  Vec center() const;

  /// Euclidean norm of (hi - lo).
  double diameter() const;
  double volume() const;
  bool has_interior() const;

  bool intersects(const Box& other) const;
  bool contains(std::span<const double> point) const;
  bool contains(const Box& other) const;
  /// Intersection volume of two boxes (0 when disjoint or only touching).
  double overlap_volume(const Box& other) const;

  void expand_to(std::span<const double> point);

  friend bool operator==(const Box& a, const Box& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

 private:
  Vec lo_;
  Vec hi_;
};

std::ostream& operator<<(std::ostream& os, const Box& b);

/// Each half-width scaled by (1 + delta) about the center.
Box enlarge(const Box& box, double delta);

/// All 2^n corners. Lexicographic over (lo, hi) choices with the first
/// coordinate varying slowest: (lo0,lo1), (lo0,hi1), (hi0,lo1), (hi0,hi1).
std::vector<Vec> vertices(const Box& box);

/// Identity of a cell: the sequence of binary split choices taken from the
/// root box (0 = lower half, 1 = upper half). Ordering is the depth-first
/// order of the split tree, which is also the lexicographic order of path().
class CellId {
 public:
  static constexpr std::uint32_t kMaxDepth = 64;

  CellId() = default;
  static CellId root() { return {}; }
  /// Parses the path() rendering: "r" followed by '0'/'1' characters.
  static CellId parse(std::string_view path);

  std::uint32_t depth() const { return depth_; }
  /// Split choice taken at level `level` (0-based from the root).
  int bit(std::uint32_t level) const;
  CellId child(int which) const;
  std::string path() const;

  friend bool operator==(const CellId& a, const CellId& b) {
    return a.depth_ == b.depth_ && a.bits_ == b.bits_;
  }
  friend bool operator<(const CellId& a, const CellId& b);
  friend bool operator>(const CellId& a, const CellId& b) { return b < a; }

  std::size_t hash() const;

 private:
  std::uint64_t aligned_key() const;

  std::uint64_t bits_ = 0;  // right-aligned, first split is the most significant used bit
  std::uint8_t depth_ = 0;
};

struct CellIdHash {
  std::size_t operator()(const CellId& id) const { return id.hash(); }
};

struct Cell {
  CellId id;
  Box box;
};

/// Split axis used for a cell at the given depth in an n-dimensional space.
inline std::size_t split_axis(std::uint32_t depth, std::size_t n) { return depth % n; }

/// Halves the cell at the midpoint of `axis`; returns (lower, upper).
std::pair<Cell, Cell> subdivide_cell(const Cell& cell, std::size_t axis);

/// Rebuilds the box of `id` from the root under the cycled-axis rule.
Box box_from_path(const Box& root, const CellId& id);

/// Finite set of cells sorted by CellId. Immutable once built; a new
/// covering is produced for every subdivision or retention step.
class Covering {
 public:
  Covering() = default;
  /// Single-cell covering of the root box.
  explicit Covering(const Box& root);
  /// Validates containment in root, nonempty interiors, and unique ids;
  /// sorts the cells by id.
  Covering(const Box& root, std::vector<Cell> cells);
  /// Reconstructs boxes from paths.
  static Covering from_paths(const Box& root, std::span<const CellId> ids);

  const Box& root() const { return root_; }
  std::size_t dim() const { return root_.dim(); }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& operator[](std::size_t i) const { return cells_[i]; }

  /// Position of id in cells(), if present.
  std::optional<std::size_t> find(const CellId& id) const;

  /// Largest cell diameter (0 for an empty covering).
  double diameter() const;
  double volume() const;
  std::uint32_t max_depth() const;

 private:
  Box root_;
  std::vector<Cell> cells_;
};

struct KnnResult {
  std::vector<std::size_t> cells;  // positions in the covering, nearest first
  bool clamped = false;            // fewer than the requested count were available
};

/// Bulk-loaded R-tree over a covering's cell boxes plus a second tree over
/// the cell centers for nearest-neighbour queries.
///
/// Leaves are packed from consecutive cells in CellId order. That order is the
/// depth-first order of the binary split tree, so consecutive cells are
/// spatially adjacent and the packing behaves like a sort-tile bulk load
/// without a separate sort.
///
/// The index refers to the covering it was built from; the covering must
/// outlive it and must not change.
class SpatialIndex {
 public:
  static constexpr std::size_t kNodeCapacity = 16;

  SpatialIndex() = default;
  explicit SpatialIndex(const Covering& covering);

  const Covering& covering() const { return *covering_; }
  bool built_over(const Covering& c) const { return covering_ == &c; }

  /// Cells whose closed box meets the query box, as ascending covering positions.
  std::vector<std::size_t> query_intersecting(const Box& box) const;
  /// Same as query_intersecting, appending into `out` (not cleared).
  void query_intersecting(const Box& box, std::vector<std::size_t>& out) const;
  /// True if any cell's closed box contains the point.
  bool any_contains(std::span<const double> point) const;

  /// The `count` cells with the nearest centers, excluding any cell whose
  /// center equals `point`. Distance ties go to the smaller CellId.
  KnnResult knn_centers(std::span<const double> point, std::size_t count) const;

 private:
  struct Tree {
    // levels[0] holds leaf nodes; each node at level L covers children
    // [i*cap, (i+1)*cap) of level L-1 (or of the cell array for L = 0).
    std::vector<std::vector<Box>> levels;
  };

  static Tree pack(std::vector<Box> leaves_of_entries);
  std::size_t child_count(const Tree& tree, std::size_t level, std::size_t node) const;

  const Covering* covering_ = nullptr;
  Tree boxes_;
  Tree centers_;
  std::vector<Vec> center_points_;
};

enum class CellStatus { retained, boundary, interior };

std::string_view to_string(CellStatus s);
CellStatus parse_cell_status(std::string_view s);

struct CellRecord {
  CellId id;
  Box box;
  CellStatus status = CellStatus::retained;
};

/// Tab-separated cells file: a header row
///   path depth lo_0 .. lo_{n-1} hi_0 .. hi_{n-1} status
/// then one row per cell, coordinates rendered with 17 significant digits.
void write_cells(std::ostream& os, const Covering& covering,
                 std::span<const CellStatus> status = {});
std::vector<CellRecord> read_cells(std::istream& is);
void write_cells_file(const std::string& path, const Covering& covering,
                      std::span<const CellStatus> status = {});
std::vector<CellRecord> read_cells_file(const std::string& path);

/// Renders a double with 17 significant digits (round-trip exact).
std::string format_real(double value);

}  // namespace gis
