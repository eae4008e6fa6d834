#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "dendro/io.hpp"

namespace dendro::test {

inline Tree T(const std::string& text) { return parse_tree(text); }

inline int E(const Tree& t, const std::string& name) { return t.edge(name); }

inline int V(const Tree& t, const std::string& out_edge) { return t.producer[t.edge(out_edge)]; }

inline std::vector<std::string> vertex_names(const Tree& t, VertexSet s) {
  std::vector<std::string> out;
  for (int v = 0; v < t.num_vertices(); ++v)
    if (s >> v & 1) out.push_back(t.names[t.out[v]]);
  std::sort(out.begin(), out.end());
  return out;
}

// Orderings of all vertices in which each vertex comes after the one it feeds.
inline long long brute_linear_extensions(const Tree& t) {
  std::vector<int> order(t.num_vertices());
  std::iota(order.begin(), order.end(), 0);
  long long count = 0;
  do {
    std::vector<int> pos(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
    bool ok = true;
    for (int v = 0; v < t.num_vertices() && ok; ++v) {
      int below = t.consumer[t.out[v]];
      if (below >= 0 && pos[below] > pos[v]) ok = false;
    }
    count += ok;
  } while (std::next_permutation(order.begin(), order.end()));
  return count;
}

// Every edge map S -> T checked against the morphism conditions.
inline std::vector<TreeMorphism> brute_hom(const Tree& s, const Tree& t) {
  std::vector<TreeMorphism> out;
  std::vector<int> map(s.num_edges(), 0);
  while (true) {
    TreeMorphism f{s, t, map};
    if (!check_morphism(f)) out.push_back(f);
    int i = 0;
    while (i < s.num_edges() && ++map[i] == t.num_edges()) map[i++] = 0;
    if (i == s.num_edges()) break;
  }
  return out;
}

// The edge of a linear tree at height i above the leaf.
inline std::vector<int> linear_edges(const Tree& t) {
  std::vector<int> out;
  int e = t.root;
  while (true) {
    out.push_back(e);
    int v = t.producer[e];
    if (v < 0 || t.in[v].empty()) break;
    e = t.in[v][0];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

inline std::shared_ptr<const Operad> shared(const Operad& p) {
  return std::make_shared<const Operad>(p);
}

}  // namespace dendro::test
