#include "gis_bench/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gis::bench {

Interval linear_cis_interval(double a, double x_lo, double x_hi, double u_lo, double u_hi) {
  if (!(a > 1.0)) throw ContractViolation("linear_cis_interval: closed form needs a > 1");
  return {std::max(x_lo, -u_hi / (a - 1.0)), std::min(x_hi, -u_lo / (a - 1.0))};
}

OracleCis linear_cis_oracle(double a, double x_lo, double x_hi, double u_lo, double u_hi) {
  const Interval cis = linear_cis_interval(a, x_lo, x_hi, u_lo, u_hi);
  return {[cis](std::span<const double> x) { return cis.lo <= x[0] && x[0] <= cis.hi; },
          "x+ = " + std::to_string(a) + " x + u: [" + std::to_string(cis.lo) + ", " + std::to_string(cis.hi) + "]"};
}

OracleCis whole_state_oracle(const SystemModel& model) {
  const Box x = model.state_box;
  return {[x](std::span<const double> p) { return x.contains(p); }, model.name + ": all of X"};
}

OracleCis empty_oracle() {
  return {[](std::span<const double>) { return false; }, "empty"};
}

std::vector<Interval> brute_force_cis_1d(const SystemModel& model, double resolution, std::size_t input_samples) {
  if (model.n != 1) throw ContractViolation("brute_force_cis_1d: 1-D models only");
  if (!(resolution > 0.0)) throw ContractViolation("brute_force_cis_1d: resolution must be positive");
  if (input_samples < 2) throw ContractViolation("brute_force_cis_1d: at least 2 input samples");

  const double lo = model.state_box.lo(0);
  const double hi = model.state_box.hi(0);
  const auto points = static_cast<std::size_t>(std::llround((hi - lo) / resolution)) + 1;
  auto grid_x = [&](std::size_t i) { return i + 1 == points ? hi : lo + resolution * static_cast<double>(i); };

  // Input samples over U (first coordinate varies slowest), own construction.
  std::vector<std::vector<double>> us;
  {
    const std::size_t m = model.m;
    std::vector<std::size_t> idx(m, 0);
    while (true) {
      std::vector<double> u(m);
      for (std::size_t d = 0; d < m; ++d) {
        const double a = model.input_box.lo(d);
        const double b = model.input_box.hi(d);
        u[d] = idx[d] + 1 == input_samples ? b
                                           : a + (b - a) * static_cast<double>(idx[d]) /
                                                     static_cast<double>(input_samples - 1);
      }
      us.push_back(u);
      std::size_t d = m;
      bool done = true;
      while (d-- > 0) {
        if (++idx[d] < input_samples) {
          done = false;
          break;
        }
        idx[d] = 0;
      }
      if (done) break;
    }
  }

  std::vector<bool> alive(points, true);
  double next = 0.0;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < points; ++i) {
      if (!alive[i]) continue;
      const double x = grid_x(i);
      bool ok = false;
      for (const auto& u : us) {
        model.step(std::span(&x, 1), u, std::span(&next, 1));
        if (!std::isfinite(next)) continue;
        const double pos = (next - lo) / resolution;
        if (pos < -0.5 || pos > static_cast<double>(points - 1) + 0.5) continue;
        const auto j = static_cast<std::size_t>(std::clamp<long long>(std::llround(pos), 0,
                                                                      static_cast<long long>(points - 1)));
        if (alive[j]) {
          ok = true;
          break;
        }
      }
      if (!ok) {
        alive[i] = false;
        changed = true;
      }
    }
  }

  std::vector<Interval> out;
  for (std::size_t i = 0; i < points; ++i) {
    if (!alive[i]) continue;
    std::size_t j = i;
    while (j + 1 < points && alive[j + 1]) ++j;
    out.push_back({grid_x(i), grid_x(j)});
    i = j;
  }
  return out;
}

SymbolicImage brute_force_graph(const Covering& covering, const SystemModel& model, const InputGrid& inputs,
                                const ImageConfig& cfg) {
  if (covering.size() > kBruteForceGraphCap) {
    throw ContractViolation("brute_force_graph: covering has " + std::to_string(covering.size()) +
                            " cells, cap is " + std::to_string(kBruteForceGraphCap));
  }
  std::vector<CellId> ids;
  std::vector<std::vector<SymbolicImage::Vertex>> adjacency(covering.size());
  for (std::size_t i = 0; i < covering.size(); ++i) {
    ids.push_back(covering[i].id);
    for (const Vec& u : inputs.points) {
      const auto img = cell_image(model, covering[i].box, u.span(), cfg);
      if (!img) continue;
      for (std::size_t j = 0; j < covering.size(); ++j) {
        if (img->intersects(covering[j].box)) adjacency[i].push_back(static_cast<SymbolicImage::Vertex>(j));
      }
    }
  }
  return SymbolicImage::from_adjacency(std::move(ids), std::move(adjacency));
}

std::vector<bool> peel_zero_out_degree(const SymbolicImage& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<bool> alive(n, true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      const auto succ = graph.successors(v);
      const bool has_live_edge = std::any_of(succ.begin(), succ.end(), [&](auto w) { return alive[w]; });
      if (!has_live_edge) {
        alive[v] = false;
        changed = true;
      }
    }
  }
  return alive;
}

std::vector<std::vector<bool>> reachability_matrix(const SymbolicImage& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    stack.assign(1, s);
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto w : graph.successors(v)) {
        if (!reach[s][w]) {
          reach[s][w] = true;
          stack.push_back(w);
        }
      }
    }
  }
  return reach;
}

}  // namespace gis::bench
