#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace dendro;
using namespace dendro::test;

namespace {

std::set<std::vector<int>> edge_maps(const std::vector<TreeMorphism>& fs) {
  std::set<std::vector<int>> out;
  for (const auto& f : fs) out.insert(f.edge_map);
  return out;
}

std::multiset<std::string> labels(const FaceFamily& fam) {
  return {fam.labels.begin(), fam.labels.end()};
}

}  // namespace

TEST_SUITE("omega") {
  TEST_CASE("hom sets agree with exhaustive edge maps") {
    std::vector<Tree> trees;
    for (const Tree& t : enumerate_trees(3, 3))
      if (t.num_edges() <= 4) trees.push_back(t);
    for (const Tree& s : trees)
      for (const Tree& t : trees) {
        auto homs = hom_set(s, t);
        CHECK(homs.size() == edge_maps(homs).size());
        CHECK(edge_maps(homs) == edge_maps(brute_hom(s, t)));
      }
  }

  TEST_CASE("frozen hom counts") {
    CHECK(hom_set(T("r"), T("r(a(x,y),b(z))")).size() == 6);
    CHECK(hom_set(corolla(2), corolla(2)).size() == 2);
    // Unary trees are chains of edges; maps are monotone maps of chains.
    CHECK(hom_set(T("r(a(x))"), T("r(x)")).size() == 4);
    CHECK(hom_set(T("r(x)"), T("r(a(x))")).size() == 6);
  }

  TEST_CASE("composition is associative and unital") {
    std::mt19937 rng(23);
    auto pick = [&](const std::vector<TreeMorphism>& v) {
      return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    std::vector<Tree> trees = enumerate_trees(3, 2);
    int checked = 0;
    for (int i = 0; i < 1500; ++i) {
      const Tree& a = trees[rng() % trees.size()];
      const Tree& b = trees[rng() % trees.size()];
      const Tree& c = trees[rng() % trees.size()];
      const Tree& d = trees[rng() % trees.size()];
      auto ab = hom_set(a, b), bc = hom_set(b, c), cd = hom_set(c, d);
      if (ab.empty() || bc.empty() || cd.empty()) continue;
      TreeMorphism f = pick(ab), g = pick(bc), h = pick(cd);
      CHECK(compose(h, compose(g, f)) == compose(compose(h, g), f));
      CHECK(compose(identity(b), f) == f);
      CHECK(compose(f, identity(a)) == f);
      CHECK_FALSE(check_morphism(compose(g, f)));
      ++checked;
    }
    CHECK(checked > 50);
  }

  TEST_CASE("boundary of the two-vertex-over-root tree") {
    FaceFamily b = boundary(T("r(a(x,y),b(z))"));
    CHECK(labels(b) == std::multiset<std::string>{"inner:a", "inner:b", "external:top:a",
                                                  "external:top:b"});
    for (const auto& f : b.faces) CHECK(is_elementary_face(f));
  }

  TEST_CASE("boundary of a corolla is its edges") {
    FaceFamily b = boundary(corolla(3));
    CHECK(b.faces.size() == 4);
    for (const auto& f : b.faces) CHECK(f.source.is_eta());
  }

  TEST_CASE("root face exists when the root vertex has one inner input") {
    FaceFamily b = boundary(T("r(a(x,y),z)"));
    CHECK(labels(b) == std::multiset<std::string>{"inner:a", "external:root", "external:top:a"});
  }

  TEST_CASE("horns omit exactly one face") {
    Tree t = T("r(a(x,y),b(z))");
    FaceFamily h = horn(t, {HornCenter::Kind::InnerEdge, E(t, "a")});
    CHECK(labels(h) == std::multiset<std::string>{"inner:b", "external:top:a", "external:top:b"});
    FaceFamily l = horn(t, {HornCenter::Kind::LeafVertex, V(t, "b")});
    CHECK(labels(l) == std::multiset<std::string>{"inner:a", "inner:b", "external:top:a"});
    CHECK_THROWS_AS(horn(t, {HornCenter::Kind::InnerEdge, E(t, "x")}), TreeError);
    CHECK_THROWS_AS(horn(t, {HornCenter::Kind::LeafVertex, V(t, "r")}), TreeError);
    FaceFamily c = horn(corolla(2), {HornCenter::Kind::CorollaLeaves, -1});
    CHECK(c.faces.size() == 2);
  }

  TEST_CASE("degeneracy inserts a unary vertex") {
    Tree t = T("r(a(x),y)");
    TreeMorphism s = degeneracy(t, E(t, "a"));
    CHECK(s.source.num_vertices() == 3);
    CHECK_FALSE(check_morphism(s));
    int d = s.source.edge("a_d");
    CHECK(s.edge_map[d] == E(t, "a"));
    // Contracting either edge of the new vertex gives back an isomorphism.
    for (int e : classify_edges(s.source).inner)
      if (s.source.names[e] == "a" || s.source.names[e] == "a_d")
        CHECK(is_isomorphism(compose(s, inner_face(s.source, e))));
  }

  TEST_CASE("factorizations recompose") {
    std::vector<Tree> trees = enumerate_trees(3, 2);
    int checked = 0;
    for (const Tree& s : trees)
      for (const Tree& t : trees)
        for (const TreeMorphism& f : hom_set(s, t)) {
          Factorization fz = factorize(f);
          CHECK(compose(fz.face, compose(fz.iso, fz.degeneracy)) == f);
          CHECK(is_face(fz.face));
          CHECK(is_isomorphism(fz.iso));
          ++checked;
        }
    CHECK(checked > 100);
  }

  TEST_CASE("face classification") {
    Tree t = T("r(a(x,y),b(z))");
    TreeMorphism i = inner_face(t, E(t, "a"));
    CHECK(is_inner_face(i));
    CHECK(is_root_preserving(i));
    auto sub = subtrees_rooted_at(t, E(t, "a"));
    TreeMorphism ext = external_face(t, sub.back());
    CHECK(is_face(ext));
    CHECK_FALSE(is_root_preserving(ext));
    CHECK_FALSE(is_inner_face(ext));
    TreeMorphism both = inner_face(t, std::vector<int>{E(t, "a"), E(t, "b")});
    CHECK(both.source.num_vertices() == 1);
    CHECK_FALSE(is_elementary_face(both));
  }

  TEST_CASE("equality over the target ignores source relabeling") {
    Tree t = T("r(x,y)");
    auto homs = hom_set(corolla(2), t);
    REQUIRE(homs.size() == 2);
    CHECK(equal_over_target(homs[0], homs[1]));
    CHECK_FALSE(homs[0] == homs[1]);
  }
}
