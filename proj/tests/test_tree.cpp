#include <doctest.h>

#include <bit>
#include <set>

#include "support.hpp"

using namespace dendro;
using namespace dendro::test;

namespace {

// Connected vertex sets, plus one edge-only subtree per edge.
int brute_subtree_count(const Tree& t) {
  int n = t.num_vertices(), count = t.num_edges();
  for (VertexSet s = 1; s < (VertexSet{1} << n); ++s) {
    int first = std::countr_zero(s);
    VertexSet seen = VertexSet{1} << first, frontier = seen;
    while (frontier) {
      VertexSet next = 0;
      for (int v = 0; v < n; ++v) {
        if (!(frontier >> v & 1)) continue;
        int below = t.consumer[t.out[v]];
        if (below >= 0) next |= VertexSet{1} << below;
        for (int e : t.in[v])
          if (t.producer[e] >= 0) next |= VertexSet{1} << t.producer[e];
      }
      next &= s & ~seen;
      seen |= next;
      frontier = next;
    }
    count += seen == s;
  }
  return count;
}

}  // namespace

TEST_SUITE("tree") {
  TEST_CASE("parse and print") {
    Tree t = T("r(b(z),a(y,x))");
    CHECK(t.num_edges() == 6);
    CHECK(t.num_vertices() == 3);
    CHECK(t.names[t.root] == "r");
    CHECK(to_string(t) == to_string(T("r(a(x,y),b(z))")));
    CHECK(canonical_form(t) == canonical_form(T("q(c(u),d(v,w))")));
    CHECK(canonical_form(T("r()")) != canonical_form(T("r")));
    CHECK(T("r").is_eta());
    CHECK(T("r()").num_vertices() == 1);
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS_AS(parse_tree("r(x,"), ParseError);
    CHECK_THROWS_AS(parse_tree("r(x,x)"), ParseError);
    CHECK_THROWS_AS(parse_tree(""), ParseError);
    CHECK_THROWS_AS(parse_tree("r(x))"), ParseError);
  }

  TEST_CASE("edge classes") {
    Tree t = T("r(a(x,y),b(z),c())");
    EdgeClasses ec = classify_edges(t);
    std::set<std::string> ls, in;
    for (int e : ec.leaves) ls.insert(t.names[e]);
    for (int e : ec.inner) in.insert(t.names[e]);
    CHECK(ls == std::set<std::string>{"x", "y", "z"});
    CHECK(in == std::set<std::string>{"a", "b", "c"});
    CHECK(ec.root == t.root);
    CHECK(is_leaf_vertex(t, V(t, "a")));
    CHECK(is_leaf_vertex(t, V(t, "c")));
    CHECK_FALSE(is_leaf_vertex(t, V(t, "r")));
    CHECK(edge_leq(t, E(t, "x"), E(t, "r")));
    CHECK_FALSE(edge_leq(t, E(t, "x"), E(t, "b")));
  }

  TEST_CASE("linear trees and corollas") {
    Tree l = linear_tree(3);
    CHECK(l.num_vertices() == 3);
    CHECK(l.names[l.root] == "e3");
    CHECK(is_leaf(l, l.edge("e0")));
    Tree c = corolla(3);
    CHECK(leaves(c).size() == 3);
    CHECK(automorphisms(c).size() == 6);
  }

  TEST_CASE("subtrees agree with connected vertex sets") {
    std::mt19937 rng(5);
    for (int i = 0; i < 60; ++i) {
      Tree t = random_tree(rng, 6, 3);
      CHECK(static_cast<int>(all_subtrees(t).size()) == brute_subtree_count(t));
      for (const Subtree& s : all_subtrees(t)) CHECK(is_subtree(t, s));
    }
  }

  TEST_CASE("subtree queries") {
    Tree t = T("r(a(x,y),b(z))");
    CHECK(subtrees_rooted_at(t, t.root).size() == 5);
    CHECK(subtrees_rooted_at(t, E(t, "a")).size() == 2);
    Subtree up = t_up(t, E(t, "a"));
    CHECK(vertex_names(t, up.verts) == std::vector<std::string>{"a"});
    auto s = subtree_with_root_and_leaves(t, t.root, {E(t, "x"), E(t, "y"), E(t, "b")});
    REQUIRE(s);
    CHECK(vertex_names(t, s->verts) == std::vector<std::string>{"a", "r"});
    CHECK_FALSE(subtree_with_root_and_leaves(t, t.root, {E(t, "x"), E(t, "b")}));
    Extracted ex = extract(t, *s);
    CHECK(canonical_form(ex.tree) == canonical_form(T("r(a(x,y),b)")));
  }

  TEST_CASE("grafting") {
    Tree s = T("r(x,y)");
    GraftResult g = graft(s, E(s, "x"), T("x(u,v)"));
    CHECK(g.tree.num_vertices() == 2);
    CHECK(canonical_form(g.tree) == canonical_form(T("r(x(u,v),y)")));
    CHECK(g.renamed.empty());
    GraftResult h = graft(s, E(s, "x"), T("x(y)"));
    CHECK(h.tree.num_edges() == 4);
    CHECK(h.renamed.count("y") == 1);
    CHECK_THROWS(graft(s, s.root, T("q(w)")));
  }

  TEST_CASE("isomorphisms") {
    Tree a = T("r(a(x,y),b(z))"), b = T("q(m(n),p(s,t))");
    CHECK(is_isomorphic(a, b));
    CHECK(isomorphisms(a, b).size() == 2);
    CHECK(automorphisms(T("r(a(x),b(y))")).size() == 2);
    CHECK_FALSE(is_isomorphic(a, T("r(a(x,y,z))")));
  }

  TEST_CASE("enumeration of rooted trees") {
    // Unlabeled rooted trees by vertex count.
    std::vector<int> rooted = {0, 1, 1, 2, 4, 9, 20, 48};
    std::vector<int> by_size(8, 0);
    for (const Tree& t : enumerate_trees(7, 7, false)) by_size[t.num_vertices()]++;
    CHECK(by_size == rooted);
    // With leaves and arity at most 3, frozen from a multiset-of-children count.
    std::vector<int> cumulative;
    for (int v = 0; v <= 5; ++v) cumulative.push_back(static_cast<int>(enumerate_trees(v, 3).size()));
    // Per size 1, 4, 12, 56, 284, 1576.
    CHECK(cumulative == std::vector<int>{1, 5, 17, 73, 357, 1933});
    std::set<std::string> forms;
    for (const Tree& t : enumerate_trees(4, 3)) forms.insert(canonical_form(t));
    CHECK(forms.size() == enumerate_trees(4, 3).size());
    std::mt19937 rng(3);
    for (int i = 0; i < 300; ++i) CHECK(forms.count(canonical_form(random_tree(rng, 4, 3))) == 1);
  }

  TEST_CASE("random trees are well formed") {
    std::mt19937 rng(17);
    for (int i = 0; i < 200; ++i) {
      Tree t = random_tree(rng, 5, 3);
      CHECK(t.num_vertices() <= 5);
      for (int v = 0; v < t.num_vertices(); ++v) CHECK(t.in[v].size() <= 3);
      CHECK(is_isomorphic(t, parse_tree(to_string(t))));
    }
  }

  TEST_CASE("dot output names every edge") {
    Tree t = T("r(x,y)");
    std::string dot = to_dot(t);
    CHECK(dot.find("digraph") == 0);
    for (const auto& n : t.names) CHECK(dot.find("\"" + n + "\"") != std::string::npos);
  }
}
