#include "gis/analysis.hpp"

#include <algorithm>
#include <limits>

namespace gis {

SccResult strongly_connected_components(const SymbolicImage& graph) {
  using V = std::uint32_t;
  constexpr V kUnvisited = std::numeric_limits<V>::max();
  const std::size_t n = graph.vertex_count();

  SccResult result;
  result.component.assign(n, kUnvisited);

  std::vector<V> order(n, kUnvisited);  // discovery index
  std::vector<V> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<V> stack;
  struct Frame {
    V v;
    std::size_t next;  // next successor position to explore
  };
  std::vector<Frame> call;
  V counter = 0;

  for (std::size_t start = 0; start < n; ++start) {
    if (order[start] != kUnvisited) continue;
    call.push_back({static_cast<V>(start), 0});
    order[start] = low[start] = counter++;
    stack.push_back(static_cast<V>(start));
    on_stack[start] = true;

    while (!call.empty()) {
      Frame& f = call.back();
      const auto succ = graph.successors(f.v);
      if (f.next < succ.size()) {
        const V w = succ[f.next++];
        if (order[w] == kUnvisited) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], order[w]);
        }
        continue;
      }

      const V v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] != order[v]) continue;

      const auto id = static_cast<V>(result.members.size());
      std::vector<V> members;
      V w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        result.component[w] = id;
        members.push_back(w);
      } while (w != v);
      std::sort(members.begin(), members.end());
      bool cyclic = members.size() >= 2;
      if (!cyclic) {
        const auto s = graph.successors(v);
        cyclic = std::binary_search(s.begin(), s.end(), v);
      }
      result.members.push_back(std::move(members));
      result.nontrivial.push_back(cyclic);
    }
  }
  return result;
}

std::vector<bool> non_leaving_mask(const SymbolicImage& graph, NonLeavingMode mode) {
  const std::size_t n = graph.vertex_count();
  const SccResult scc = strongly_connected_components(graph);

  std::vector<bool> in(n, false);
  std::vector<std::uint32_t> frontier;
  auto seed = [&](std::size_t c) {
    for (auto v : scc.members[c]) {
      in[v] = true;
      frontier.push_back(v);
    }
  };
  if (mode == NonLeavingMode::all_cycles) {
    for (std::size_t c = 0; c < scc.count(); ++c) {
      if (scc.nontrivial[c]) seed(c);
    }
  } else {
    // Largest nontrivial component; ties go to the one with the smallest vertex.
    std::size_t best = scc.count();
    for (std::size_t c = 0; c < scc.count(); ++c) {
      if (!scc.nontrivial[c]) continue;
      if (best == scc.count() || scc.members[c].size() > scc.members[best].size() ||
          (scc.members[c].size() == scc.members[best].size() && scc.members[c][0] < scc.members[best][0])) {
        best = c;
      }
    }
    if (best != scc.count()) seed(best);
  }

  // Ancestors: reverse reachability.
  const SymbolicImage rev = graph.reversed();
  while (!frontier.empty()) {
    const auto v = frontier.back();
    frontier.pop_back();
    for (auto u : rev.successors(v)) {
      if (!in[u]) {
        in[u] = true;
        frontier.push_back(u);
      }
    }
  }
  return in;
}

std::vector<CellId> non_leaving(const SymbolicImage& graph, NonLeavingMode mode) {
  const auto mask = non_leaving_mask(graph, mode);
  std::vector<CellId> out;
  for (std::size_t v = 0; v < mask.size(); ++v) {
    if (mask[v]) out.push_back(graph.vertex(v));
  }
  return out;
}

Covering retain(const Covering& covering, const std::vector<bool>& keep) {
  if (keep.size() != covering.size()) throw ContractViolation("retain: mask length differs from covering size");
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < covering.size(); ++i) {
    if (keep[i]) cells.push_back(covering[i]);
  }
  return Covering(covering.root(), std::move(cells));
}

Covering retain(const Covering& covering, std::span<const CellId> keep) {
  std::vector<bool> mask(covering.size(), false);
  for (const auto& id : keep) {
    const auto i = covering.find(id);
    if (!i) throw ContractViolation("retain: cell " + id.path() + " is not in the covering");
    mask[*i] = true;
  }
  return retain(covering, mask);
}

}  // namespace gis
