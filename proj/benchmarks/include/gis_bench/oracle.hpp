#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gis/geometry.hpp"
#include "gis/image.hpp"
#include "gis/symbolic_graph.hpp"
#include "gis/system.hpp"

// Independent oracles for acceptance testing. brute_force_cis_1d only uses
// the model's step function; it never touches coverings or graphs.

namespace gis::bench {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Membership predicate for a system whose largest control invariant set is known.
struct OracleCis {
  std::function<bool(std::span<const double>)> contains;
  std::string description;
};

/// Largest CIS of x+ = a x + u (a > 1) on [x_lo, x_hi] with u in [u_lo, u_hi]:
/// the fixed point of the interval map
///   [l, h] -> [max(l, (l - u_hi)/a), min(h, (h - u_lo)/a)],
/// i.e. [max(x_lo, -u_hi/(a-1)), min(x_hi, -u_lo/(a-1))]. Empty interval
/// (lo > hi) when no invariant set exists.
Interval linear_cis_interval(double a, double x_lo, double x_hi, double u_lo, double u_hi);

OracleCis linear_cis_oracle(double a, double x_lo, double x_hi, double u_lo, double u_hi);
OracleCis whole_state_oracle(const SystemModel& model);
OracleCis empty_oracle();

/// Grid fixed point for 1-D models: start with every grid point of X (spacing
/// `resolution`), then repeatedly delete points with no input (from a uniform
/// grid of `input_samples` points over U) whose successor rounds to a
/// surviving grid point. Returns maximal runs of surviving points.
std::vector<Interval> brute_force_cis_1d(const SystemModel& model, double resolution,
                                         std::size_t input_samples = 201);

/// Largest covering accepted by brute_force_graph.
inline constexpr std::size_t kBruteForceGraphCap = 1000;

/// Edge set by exhaustive (cell x input x cell) enclosure tests. Throws
/// ContractViolation for coverings above kBruteForceGraphCap.
SymbolicImage brute_force_graph(const Covering& covering, const SystemModel& model, const InputGrid& inputs,
                                const ImageConfig& cfg);

/// Vertices that survive repeated deletion of zero-out-degree vertices
/// (and of the edges into them). Mask over vertex positions.
std::vector<bool> peel_zero_out_degree(const SymbolicImage& graph);

/// For each vertex, the set of vertices reachable by a path of length >= 1.
/// O(V (V + E)); for small graphs only.
std::vector<std::vector<bool>> reachability_matrix(const SymbolicImage& graph);

}  // namespace gis::bench
