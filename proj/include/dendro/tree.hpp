#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dendro {

// Vertex sets are bitmasks; trees are capped at 63 vertices.
using VertexSet = std::uint64_t;

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

struct TreeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A finite rooted non-planar tree with named edges. Vertex v has output
// edge out[v] and input edges in[v]; a vertex is named after its output.
struct Tree {
  std::vector<std::string> names;
  int root = 0;
  std::vector<int> out;
  std::vector<std::vector<int>> in;
  std::vector<int> producer;  // edge -> vertex with that output, or -1
  std::vector<int> consumer;  // edge -> vertex with that input, or -1

  int num_edges() const { return static_cast<int>(names.size()); }
  int num_vertices() const { return static_cast<int>(out.size()); }
  VertexSet all_vertices() const;
  int edge(const std::string& name) const;
  std::optional<int> find_edge(const std::string& name) const;
  bool is_eta() const { return out.empty(); }
};

// Builds a tree from raw incidence data and checks every structural invariant.
Tree make_tree(std::vector<std::string> names, int root, std::vector<int> out,
               std::vector<std::vector<int>> in);

Tree parse_tree(const std::string& text);
Tree eta(const std::string& name = "r");
Tree corolla(int n, const std::string& root = "r");
// Linear tree [n]: edges e0 (leaf) .. en (root), n unary vertices.
Tree linear_tree(int n);

std::string to_string(const Tree& t);  // canonical child order
std::string to_dot(const Tree& t);

bool edge_leq(const Tree& t, int e, int f);

struct EdgeClasses {
  std::vector<int> leaves;
  std::vector<int> inner;
  int root;
};
EdgeClasses classify_edges(const Tree& t);
std::vector<int> leaves(const Tree& t);
bool is_leaf(const Tree& t, int e);
bool is_inner(const Tree& t, int e);
bool is_leaf_vertex(const Tree& t, int v);

// A subtree is its root edge plus its vertex set (empty for eta-subtrees).
struct Subtree {
  int root = 0;
  VertexSet verts = 0;
  auto operator<=>(const Subtree&) const = default;
};

bool is_subtree(const Tree& t, const Subtree& s);
int vertex_count(const Subtree& s);
std::vector<int> subtree_leaves(const Tree& t, const Subtree& s);  // in DFS order
std::vector<int> subtree_edges(const Tree& t, const Subtree& s);   // sorted ids
bool contains_edge(const Tree& t, const Subtree& s, int e);
bool subtree_includes(const Subtree& big, const Subtree& small_, const Tree& t);
Subtree whole(const Tree& t);
Subtree eta_at(int e);

Subtree t_up(const Tree& t, int e);
std::optional<Subtree> subtree_with_root_and_leaves(const Tree& t, int e,
                                                     const std::vector<int>& ebar);
std::vector<Subtree> subtrees_rooted_at(const Tree& t, int e);
std::vector<Subtree> all_subtrees(const Tree& t);

// Standalone copy of a subtree; edge_of[i] is the parent edge of new edge i.
struct Extracted {
  Tree tree;
  std::vector<int> edge_of;
};
Extracted extract(const Tree& t, const Subtree& s);

struct GraftResult {
  Tree tree;
  std::map<std::string, std::string> renamed;  // names of R that were changed
};
GraftResult graft(const Tree& s, int leaf, const Tree& r);

std::string canonical_form(const Tree& t);
std::string canonical_form_at(const Tree& t, int e);
bool is_isomorphic(const Tree& a, const Tree& b);
// Edge bijections a -> b respecting the structure, in deterministic order.
std::vector<std::vector<int>> isomorphisms(const Tree& a, const Tree& b);
std::vector<std::vector<int>> automorphisms(const Tree& t);

// Vertices in depth-first order following the canonical child order.
std::vector<int> canonical_vertex_order(const Tree& t);
// One tree per isomorphism class with at most max_vertices vertices and vertex
// arity at most max_arity, ordered by vertex count. Without leaves every input
// edge comes from a vertex, so each vertex poset appears exactly once.
std::vector<Tree> enumerate_trees(int max_vertices, int max_arity, bool with_leaves = true);
// A uniformly grown tree: each new vertex is attached to a random open edge.
Tree random_tree(std::mt19937& rng, int max_vertices, int max_arity);
std::string fresh_name(const Tree& t, const std::string& base);

}  // namespace dendro
