#include "stochroute/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace stochroute {

namespace {

std::vector<uint8_t> membership(const std::vector<int>& vertex_set, const Instance& inst) {
  std::vector<uint8_t> in(inst.num_vertices(), 0);
  for (int v : vertex_set) {
    if (v < 0 || v >= inst.num_vertices())
      throw std::invalid_argument("unknown vertex index " + std::to_string(v));
    in[v] = 1;
  }
  return in;
}

}  // namespace

std::vector<std::pair<int, int>> out_arcs(const std::vector<int>& vertex_set,
                                          const Instance& inst) {
  auto in = membership(vertex_set, inst);
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < inst.num_vertices(); ++i) {
    if (!in[i]) continue;
    for (int j = 0; j < inst.num_vertices(); ++j)
      if (!in[j] && inst.arc_exists(i, j)) arcs.emplace_back(i, j);
  }
  return arcs;
}

std::vector<std::pair<int, int>> in_arcs(const std::vector<int>& vertex_set,
                                         const Instance& inst) {
  auto in = membership(vertex_set, inst);
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < inst.num_vertices(); ++i) {
    if (in[i]) continue;
    for (int j = 0; j < inst.num_vertices(); ++j)
      if (in[j] && inst.arc_exists(i, j)) arcs.emplace_back(i, j);
  }
  return arcs;
}

namespace {

struct TarjanState {
  const std::vector<std::vector<int>>& adj;
  std::vector<int> index, lowlink, on_stack, stack;
  int counter = 0;
  std::vector<std::vector<int>> sccs;

  explicit TarjanState(const std::vector<std::vector<int>>& a)
      : adj(a),
        index(a.size(), -1),
        lowlink(a.size(), -1),
        on_stack(a.size(), 0) {}

  void visit(int v) {
    index[v] = lowlink[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (int w : adj[v]) {
      if (index[w] < 0) {
        visit(w);
        lowlink[v] = std::min(lowlink[v], lowlink[w]);
      } else if (on_stack[w]) {
        lowlink[v] = std::min(lowlink[v], index[w]);
      }
    }
    if (lowlink[v] == index[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      sccs.push_back(std::move(comp));
    }
  }
};

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adjacency) {
  TarjanState st(adjacency);
  for (int v = 0; v < static_cast<int>(adjacency.size()); ++v)
    if (st.index[v] < 0) st.visit(v);
  std::sort(st.sccs.begin(), st.sccs.end());
  return st.sccs;
}

}  // namespace stochroute
