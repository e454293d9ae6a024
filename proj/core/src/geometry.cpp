#include "gis/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

namespace gis {

namespace {

void check_dim(std::size_t n) {
  if (n > kMaxDim) {
    throw ContractViolation("dimension " + std::to_string(n) + " exceeds supported maximum " +
                            std::to_string(kMaxDim));
  }
}

}  // namespace

Vec::Vec(std::size_t n, double fill) : size_(static_cast<std::uint8_t>(n)) {
  check_dim(n);
  std::fill_n(data_.begin(), n, fill);
}

Vec::Vec(std::initializer_list<double> values) : size_(static_cast<std::uint8_t>(values.size())) {
  check_dim(values.size());
  std::copy(values.begin(), values.end(), data_.begin());
}

Vec::Vec(std::span<const double> values) : size_(static_cast<std::uint8_t>(values.size())) {
  check_dim(values.size());
  std::copy(values.begin(), values.end(), data_.begin());
}

bool operator==(const Vec& a, const Vec& b) {
  return a.size_ == b.size_ && std::equal(a.data_.begin(), a.data_.begin() + a.size_, b.data_.begin());
}

std::ostream& operator<<(std::ostream& os, const Vec& v) {
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os << ')';
}

Box::Box(const Vec& lo, const Vec& hi) : lo_(lo), hi_(hi) {
  if (lo.size() != hi.size()) throw ContractViolation("box bounds differ in dimension");
  for (std::size_t d = 0; d < lo.size(); ++d) {
    if (!(lo[d] <= hi[d])) throw ContractViolation("box lower bound exceeds upper bound");
  }
}

Box::Box(std::initializer_list<std::pair<double, double>> intervals) {
  Vec lo(intervals.size());
  Vec hi(intervals.size());
  std::size_t d = 0;
  for (const auto& [a, b] : intervals) {
    lo[d] = a;
    hi[d] = b;
    ++d;
  }
  *this = Box(lo, hi);
}

Vec Box::center() const {
  Vec c(dim());
  for (std::size_t d = 0; d < dim(); ++d) c[d] = center(d);
  return c;
}

double Box::diameter() const {
  double s = 0.0;
  for (std::size_t d = 0; d < dim(); ++d) s += width(d) * width(d);
  return std::sqrt(s);
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t d = 0; d < dim(); ++d) v *= width(d);
  return v;
}

bool Box::has_interior() const {
  for (std::size_t d = 0; d < dim(); ++d) {
    if (!(lo_[d] < hi_[d])) return false;
  }
  return dim() > 0;
}

bool Box::intersects(const Box& other) const {
  for (std::size_t d = 0; d < dim(); ++d) {
    if (other.hi_[d] < lo_[d] || hi_[d] < other.lo_[d]) return false;
  }
  return true;
}

bool Box::contains(std::span<const double> point) const {
  for (std::size_t d = 0; d < dim(); ++d) {
    if (point[d] < lo_[d] || hi_[d] < point[d]) return false;
  }
  return true;
}

bool Box::contains(const Box& other) const {
  for (std::size_t d = 0; d < dim(); ++d) {
    if (other.lo_[d] < lo_[d] || hi_[d] < other.hi_[d]) return false;
  }
  return true;
}

double Box::overlap_volume(const Box& other) const {
  double v = 1.0;
  for (std::size_t d = 0; d < dim(); ++d) {
    const double w = std::min(hi_[d], other.hi_[d]) - std::max(lo_[d], other.lo_[d]);
    if (w <= 0.0) return 0.0;
    v *= w;
  }
  return v;
}

void Box::expand_to(std::span<const double> point) {
  for (std::size_t d = 0; d < dim(); ++d) {
    lo_[d] = std::min(lo_[d], point[d]);
    hi_[d] = std::max(hi_[d], point[d]);
  }
}

std::ostream& operator<<(std::ostream& os, const Box& b) {
  for (std::size_t d = 0; d < b.dim(); ++d) {
    os << (d ? "x" : "") << '[' << b.lo(d) << ',' << b.hi(d) << ']';
  }
  return os;
}

Box enlarge(const Box& box, double delta) {
  if (delta < 0.0) throw ContractViolation("enlarge: delta must be nonnegative");
  Vec lo(box.dim());
  Vec hi(box.dim());
  for (std::size_t d = 0; d < box.dim(); ++d) {
    const double c = box.center(d);
    const double h = 0.5 * box.width(d) * (1.0 + delta);
    lo[d] = c - h;
    hi[d] = c + h;
  }
  return {lo, hi};
}

std::vector<Vec> vertices(const Box& box) {
  const std::size_t n = box.dim();
  const std::size_t count = std::size_t{1} << n;
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vec v(n);
    for (std::size_t d = 0; d < n; ++d) {
      const bool upper = (mask >> (n - 1 - d)) & 1U;
      v[d] = upper ? box.hi(d) : box.lo(d);
    }
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CellId

CellId CellId::parse(std::string_view path) {
  if (path.empty() || path.front() != 'r') {
    throw std::invalid_argument("cell path must start with 'r': " + std::string(path));
  }
  CellId id;
  for (char c : path.substr(1)) {
    if (c != '0' && c != '1') throw std::invalid_argument("bad cell path: " + std::string(path));
    id = id.child(c - '0');
  }
  return id;
}

int CellId::bit(std::uint32_t level) const {
  return static_cast<int>((bits_ >> (depth_ - 1 - level)) & 1U);
}

CellId CellId::child(int which) const {
  if (depth_ >= kMaxDepth) throw ContractViolation("cell depth limit reached");
  CellId c;
  c.bits_ = (bits_ << 1) | static_cast<std::uint64_t>(which & 1);
  c.depth_ = static_cast<std::uint8_t>(depth_ + 1);
  return c;
}

std::string CellId::path() const {
  std::string s(depth_ + 1, 'r');
  for (std::uint32_t i = 0; i < depth_; ++i) s[i + 1] = static_cast<char>('0' + bit(i));
  return s;
}

std::uint64_t CellId::aligned_key() const {
  return depth_ == 0 ? 0 : bits_ << (64 - depth_);
}

bool operator<(const CellId& a, const CellId& b) {
  const auto ka = a.aligned_key();
  const auto kb = b.aligned_key();
  if (ka != kb) return ka < kb;
  return a.depth_ < b.depth_;
}

std::size_t CellId::hash() const {
  std::uint64_t h = bits_ * 0x9E3779B97F4A7C15ULL;
  h ^= (static_cast<std::uint64_t>(depth_) + 0x632BE59BD9B4E019ULL) + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h);
}

std::pair<Cell, Cell> subdivide_cell(const Cell& cell, std::size_t axis) {
  if (axis >= cell.box.dim()) throw ContractViolation("subdivide_cell: axis out of range");
  const Box& b = cell.box;
  const double mid = 0.5 * (b.lo(axis) + b.hi(axis));
  Vec lo_hi = b.hi();
  lo_hi[axis] = mid;
  Vec hi_lo = b.lo();
  hi_lo[axis] = mid;
  return {Cell{cell.id.child(0), Box(b.lo(), lo_hi)}, Cell{cell.id.child(1), Box(hi_lo, b.hi())}};
}

Box box_from_path(const Box& root, const CellId& id) {
  Cell cell{CellId::root(), root};
  for (std::uint32_t level = 0; level < id.depth(); ++level) {
    auto [lower, upper] = subdivide_cell(cell, split_axis(level, root.dim()));
    cell = id.bit(level) ? upper : lower;
  }
  return cell.box;
}

// ---------------------------------------------------------------------------
// Covering

Covering::Covering(const Box& root) : root_(root) {
  if (!root.has_interior()) throw ContractViolation("root box must have nonempty interior");
  cells_.push_back(Cell{CellId::root(), root});
}

Covering::Covering(const Box& root, std::vector<Cell> cells) : root_(root), cells_(std::move(cells)) {
  if (!root.has_interior()) throw ContractViolation("root box must have nonempty interior");
  if (!std::is_sorted(cells_.begin(), cells_.end(),
                      [](const Cell& a, const Cell& b) { return a.id < b.id; })) {
    std::sort(cells_.begin(), cells_.end(), [](const Cell& a, const Cell& b) { return a.id < b.id; });
  }
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    if (c.box.dim() != root.dim()) throw ContractViolation("cell dimension differs from root");
    if (!c.box.has_interior()) throw ContractViolation("cell " + c.id.path() + " has empty interior");
    if (!root.contains(c.box)) throw ContractViolation("cell " + c.id.path() + " lies outside root");
    if (i > 0 && cells_[i - 1].id == c.id) throw ContractViolation("duplicate cell " + c.id.path());
  }
}

Covering Covering::from_paths(const Box& root, std::span<const CellId> ids) {
  std::vector<Cell> cells;
  cells.reserve(ids.size());
  for (const auto& id : ids) cells.push_back(Cell{id, box_from_path(root, id)});
  return Covering(root, std::move(cells));
}

std::optional<std::size_t> Covering::find(const CellId& id) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), id,
                             [](const Cell& c, const CellId& key) { return c.id < key; });
  if (it == cells_.end() || !(it->id == id)) return std::nullopt;
  return static_cast<std::size_t>(it - cells_.begin());
}

double Covering::diameter() const {
  double d = 0.0;
  for (const auto& c : cells_) d = std::max(d, c.box.diameter());
  return d;
}

double Covering::volume() const {
  double v = 0.0;
  for (const auto& c : cells_) v += c.box.volume();
  return v;
}

std::uint32_t Covering::max_depth() const {
  std::uint32_t d = 0;
  for (const auto& c : cells_) d = std::max(d, c.id.depth());
  return d;
}

// ---------------------------------------------------------------------------
// SpatialIndex

SpatialIndex::Tree SpatialIndex::pack(std::vector<Box> entries) {
  Tree tree;
  std::vector<Box> below = std::move(entries);
  while (true) {
    const std::size_t count = below.size();
    const std::size_t nodes = (count + kNodeCapacity - 1) / kNodeCapacity;
    std::vector<Box> level;
    level.reserve(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
      Box bounds = below[i * kNodeCapacity];
      const std::size_t end = std::min(count, (i + 1) * kNodeCapacity);
      for (std::size_t j = i * kNodeCapacity + 1; j < end; ++j) {
        bounds.expand_to(below[j].lo().span());
        bounds.expand_to(below[j].hi().span());
      }
      level.push_back(bounds);
    }
    tree.levels.push_back(level);
    if (nodes <= 1) break;
    below = std::move(level);
  }
  return tree;
}

SpatialIndex::SpatialIndex(const Covering& covering) : covering_(&covering) {
  if (covering.empty()) return;
  std::vector<Box> boxes;
  std::vector<Box> centers;
  boxes.reserve(covering.size());
  centers.reserve(covering.size());
  center_points_.reserve(covering.size());
  for (const auto& c : covering.cells()) {
    boxes.push_back(c.box);
    const Vec p = c.box.center();
    center_points_.push_back(p);
    centers.emplace_back(p, p);
  }
  boxes_ = pack(std::move(boxes));
  centers_ = pack(std::move(centers));
}

std::size_t SpatialIndex::child_count(const Tree& tree, std::size_t level, std::size_t node) const {
  const std::size_t below = level == 0 ? covering_->size() : tree.levels[level - 1].size();
  return std::min(kNodeCapacity, below - node * kNodeCapacity);
}

void SpatialIndex::query_intersecting(const Box& box, std::vector<std::size_t>& out) const {
  if (covering_ == nullptr || covering_->empty()) return;
  const auto& cells = covering_->cells();
  struct Frame {
    std::size_t level;
    std::size_t node;
  };
  Frame stack[64 * kNodeCapacity];
  std::size_t top = 0;
  const std::size_t root_level = boxes_.levels.size() - 1;
  stack[top++] = {root_level, 0};
  while (top > 0) {
    const Frame f = stack[--top];
    if (!boxes_.levels[f.level][f.node].intersects(box)) continue;
    const std::size_t first = f.node * kNodeCapacity;
    const std::size_t n = child_count(boxes_, f.level, f.node);
    if (f.level == 0) {
      for (std::size_t j = first; j < first + n; ++j) {
        if (cells[j].box.intersects(box)) out.push_back(j);
      }
    } else {
      // Reverse push keeps the output in ascending position order.
      for (std::size_t j = first + n; j-- > first;) stack[top++] = {f.level - 1, j};
    }
  }
}

std::vector<std::size_t> SpatialIndex::query_intersecting(const Box& box) const {
  std::vector<std::size_t> out;
  query_intersecting(box, out);
  return out;
}

bool SpatialIndex::any_contains(std::span<const double> point) const {
  if (covering_ == nullptr || covering_->empty()) return false;
  const auto& cells = covering_->cells();
  struct Frame {
    std::size_t level;
    std::size_t node;
  };
  Frame stack[64 * kNodeCapacity];
  std::size_t top = 0;
  stack[top++] = {boxes_.levels.size() - 1, 0};
  while (top > 0) {
    const Frame f = stack[--top];
    if (!boxes_.levels[f.level][f.node].contains(point)) continue;
    const std::size_t first = f.node * kNodeCapacity;
    const std::size_t n = child_count(boxes_, f.level, f.node);
    for (std::size_t j = first; j < first + n; ++j) {
      if (f.level == 0) {
        if (cells[j].box.contains(point)) return true;
      } else {
        stack[top++] = {f.level - 1, j};
      }
    }
  }
  return false;
}

namespace {

double squared_distance(std::span<const double> p, const Vec& q) {
  double s = 0.0;
  for (std::size_t d = 0; d < q.size(); ++d) s += (p[d] - q[d]) * (p[d] - q[d]);
  return s;
}

double squared_min_distance(std::span<const double> p, const Box& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < b.dim(); ++d) {
    double gap = 0.0;
    if (p[d] < b.lo(d)) gap = b.lo(d) - p[d];
    else if (p[d] > b.hi(d)) gap = p[d] - b.hi(d);
    s += gap * gap;
  }
  return s;
}

}  // namespace

KnnResult SpatialIndex::knn_centers(std::span<const double> point, std::size_t count) const {
  KnnResult result;
  if (covering_ == nullptr || covering_->empty() || count == 0) return result;

  // Best-first search. At equal distance nodes are expanded before entries
  // and entries come out in position (= CellId) order.
  struct Item {
    double dist;
    int is_entry;
    std::size_t level;
    std::size_t index;
  };
  auto worse = [](const Item& a, const Item& b) {
    if (a.dist != b.dist) return a.dist > b.dist;
    if (a.is_entry != b.is_entry) return a.is_entry > b.is_entry;
    if (a.level != b.level) return a.level < b.level;
    return a.index > b.index;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(worse)> queue(worse);
  const std::size_t root_level = centers_.levels.size() - 1;
  queue.push({squared_min_distance(point, centers_.levels[root_level][0]), 0, root_level, 0});
  while (!queue.empty() && result.cells.size() < count) {
    const Item it = queue.top();
    queue.pop();
    if (it.is_entry) {
      if (it.dist > 0.0) result.cells.push_back(it.index);
      continue;
    }
    const std::size_t first = it.index * kNodeCapacity;
    const std::size_t n = child_count(centers_, it.level, it.index);
    for (std::size_t j = first; j < first + n; ++j) {
      if (it.level == 0) {
        queue.push({squared_distance(point, center_points_[j]), 1, 0, j});
      } else {
        queue.push({squared_min_distance(point, centers_.levels[it.level - 1][j]), 0, it.level - 1, j});
      }
    }
  }
  result.clamped = result.cells.size() < count;
  return result;
}

// ---------------------------------------------------------------------------
// Cells file

std::string_view to_string(CellStatus s) {
  switch (s) {
    case CellStatus::retained: return "retained";
    case CellStatus::boundary: return "boundary";
    case CellStatus::interior: return "interior";
  }
  return "retained";
}

CellStatus parse_cell_status(std::string_view s) {
  if (s == "retained") return CellStatus::retained;
  if (s == "boundary") return CellStatus::boundary;
  if (s == "interior") return CellStatus::interior;
  throw std::invalid_argument("unknown cell status: " + std::string(s));
}

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_cells(std::ostream& os, const Covering& covering, std::span<const CellStatus> status) {
  if (!status.empty() && status.size() != covering.size()) {
    throw ContractViolation("write_cells: status list length differs from covering size");
  }
  const std::size_t n = covering.dim();
  os << "path\tdepth";
  for (std::size_t d = 0; d < n; ++d) os << "\tlo_" << d;
  for (std::size_t d = 0; d < n; ++d) os << "\thi_" << d;
  os << "\tstatus\n";
  for (std::size_t i = 0; i < covering.size(); ++i) {
    const Cell& c = covering[i];
    os << c.id.path() << '\t' << c.id.depth();
    for (std::size_t d = 0; d < n; ++d) os << '\t' << format_real(c.box.lo(d));
    for (std::size_t d = 0; d < n; ++d) os << '\t' << format_real(c.box.hi(d));
    os << '\t' << to_string(status.empty() ? CellStatus::retained : status[i]) << '\n';
  }
}

std::vector<CellRecord> read_cells(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("cells file: missing header");
  std::size_t columns = 0;
  {
    std::istringstream header(line);
    std::string tok;
    while (header >> tok) ++columns;
  }
  if (columns < 5 || (columns - 3) % 2 != 0) throw std::runtime_error("cells file: malformed header");
  const std::size_t n = (columns - 3) / 2;
  check_dim(n);

  std::vector<CellRecord> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string path;
    std::string status;
    unsigned depth = 0;
    Vec lo(n);
    Vec hi(n);
    row >> path >> depth;
    for (std::size_t d = 0; d < n; ++d) row >> lo[d];
    for (std::size_t d = 0; d < n; ++d) row >> hi[d];
    row >> status;
    if (!row) throw std::runtime_error("cells file: malformed row " + std::to_string(line_no));
    CellRecord rec{CellId::parse(path), Box(lo, hi), parse_cell_status(status)};
    if (rec.id.depth() != depth) {
      throw std::runtime_error("cells file: depth mismatch on row " + std::to_string(line_no));
    }
    out.push_back(rec);
  }
  return out;
}

void write_cells_file(const std::string& path, const Covering& covering,
                      std::span<const CellStatus> status) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_cells(os, covering, status);
}

std::vector<CellRecord> read_cells_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_cells(is);
}

}  // namespace gis
