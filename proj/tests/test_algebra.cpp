#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace dendro;
using namespace dendro::test;

namespace {

DendrexLayout free_layout(const Tree& t, std::shared_ptr<const Operad>* omega) {
  *omega = shared(finalize_operad(free_operad_on_tree(t)));
  return dendrex_layout(**omega, t, tree_map_from_morphism(**omega, identity(t)));
}

}  // namespace

TEST_SUITE("algebra") {
  TEST_CASE("subtree algebras") {
    Tree t = T("r(a(x,y),b(z))");
    TreeAlgebra at = build_AT(t);
    CHECK_FALSE(check_poset_algebra(at.poset));
    CHECK_FALSE(check_algebra(at.nerve, 3));
    CHECK(at.subtrees[t.root].size() == 5);
    // Reversed inclusion: the whole tree is the least element.
    int whole_el = at.element(t.root, whole(t)), eta_el = at.element(t.root, eta_at(t.root));
    CHECK(at.poset.value[t.root].leq[whole_el][eta_el]);
    CHECK_FALSE(at.poset.value[t.root].leq[eta_el][whole_el]);
    CHECK(at.nerve_at(t.root).sset.counts() == std::vector<int>{5, 9, 7, 2});
  }

  TEST_CASE("morphisms of trees act on subtree algebras") {
    std::vector<Tree> trees = enumerate_trees(3, 2);
    int checked = 0;
    for (const Tree& s : trees)
      for (const Tree& t : trees)
        for (const TreeMorphism& f : hom_set(s, t)) {
          TreeAlgebra as = build_AT(s), at = build_AT(t);
          CHECK_FALSE(check_tree_morphism_action(f, as, at, tree_morphism_action(f, as, at)));
          if (++checked > 150) return;
        }
  }

  TEST_CASE("rectified free representables are subtree algebras") {
    for (const Tree& t : enumerate_trees(3, 3)) {
      auto omega = shared(finalize_operad(free_operad_on_tree(t)));
      TreeMap id = tree_map_from_morphism(*omega, identity(t));
      TreeAlgebra at = build_AT(t);
      for (int e = 0; e < t.num_edges(); ++e) {
        CommaPoset cp = comma_poset(*omega, t, id, e);
        CHECK_FALSE(cp.violation);
        CHECK(find_isomorphism(nerve_poset(cp.poset).sset, at.nerve_at(e).sset, 4));
      }
      Rectified r = rectify_representable(omega, t, id);
      CHECK_FALSE(check_poset_algebra(r.poset));
    }
  }

  TEST_CASE("comma posets of a category are slices") {
    Operad p = arrow_operad();
    Tree t = linear_tree(1);
    auto maps = dendroidal_nerve_at(p, t);
    REQUIRE(maps.size() == 3);
    for (const TreeMap& a : maps) {
      CommaPoset at1 = comma_poset(p, t, a, p.color("1"));
      CHECK_FALSE(at1.violation);
      // Every edge maps into 1 in the arrow category.
      CHECK(at1.poset.n == 2);
    }
  }

  TEST_CASE("terminal algebras have one dendrex") {
    for (const auto& [name, op] : shipped_operads()) {
      auto p = shared(op);
      SAlgebra f = nerve_algebra(terminal_algebra(p));
      CHECK_FALSE(check_algebra(f, 2));
      for (const Tree& t : enumerate_trees(2, 2))
        for (const TreeMap& a : dendroidal_nerve_at(*p, t)) {
          DendrexLayout l = dendrex_layout(*p, t, a);
          CHECK(relative_nerve_dendrices(f, l).size() == 1);
        }
    }
  }

  TEST_CASE("random join algebras are algebras") {
    std::mt19937 rng(8);
    for (const auto& [name, op] : shipped_operads()) {
      if (op.arity_bound >= 0) continue;
      auto p = shared(op);
      for (int i = 0; i < 10; ++i) {
        INFO(name << " " << i);
        JoinAlgebra j = random_join_algebra(rng, p);
        CHECK_FALSE(check_poset_algebra(j.algebra));
        auto [g, m] = restrict_join_algebra(j, rng() % 8);
        CHECK_FALSE(check_poset_algebra(g.algebra));
        CHECK_FALSE(check_poset_algebra_map(j.algebra, g.algebra, m));
      }
    }
  }

  TEST_CASE("products and projections") {
    auto p = shared(span_operad());
    std::mt19937 rng(2);
    PosetAlgebra a = random_join_algebra(rng, p).algebra, b = random_join_algebra(rng, p).algebra;
    PosetAlgebra ab = product_algebra(a, b);
    CHECK_FALSE(check_poset_algebra(ab));
    CHECK_FALSE(check_poset_algebra_map(ab, a, product_projection(a, b, 0)));
    CHECK_FALSE(check_poset_algebra_map(ab, b, product_projection(a, b, 1)));
    CHECK_FALSE(check_poset_algebra_map(a, terminal_algebra(p), terminal_map(a)));
  }

  TEST_CASE("dendrices restrict along faces") {
    std::mt19937 rng(13);
    for (const char* s : {"r(a(x),y)", "r(a(x,y),b(z))", "r(a(b(x)))"}) {
      Tree t = T(s);
      std::shared_ptr<const Operad> omega;
      DendrexLayout lt = free_layout(t, &omega);
      SAlgebra f = nerve_algebra(random_tree_join_algebra(rng, omega, t).algebra);
      DendrexSearch opts;
      opts.limit = 30;
      auto ds = relative_nerve_dendrices(f, lt, opts);
      REQUIRE_FALSE(ds.empty());
      for (const Dendrex& g : ds) {
        CHECK_FALSE(check_dendrex(f, lt, g));
        for (const TreeMorphism& face : elementary_faces(t)) {
          DendrexLayout ls = dendrex_layout(*omega, face.source, compose_tree_map(*omega, lt.alpha, face));
          CHECK_FALSE(check_dendrex(f, ls, restrict_dendrex(f, lt, g, ls, face)));
        }
      }
    }
  }

  TEST_CASE("changing the top simplex breaks a dendrex unless it gives another one") {
    Tree t = T("r(a(x),y)");
    TreeAlgebra at = build_AT(t);
    DendrexLayout l = dendrex_layout(*at.omega, t, tree_map_from_morphism(*at.omega, identity(t)));
    auto ds = relative_nerve_dendrices(at.nerve, l);
    REQUIRE_FALSE(ds.empty());
    std::set<Dendrex> known(ds.begin(), ds.end());
    int top = l.top_slot();
    int e = l.slots[top].edge;
    int rejected = 0;
    for (const Dendrex& g : ds)
      for (int cell = 0; cell < at.nerve.value[e].count(g[top].dim()); ++cell) {
        Dendrex h = g;
        h[top] = nondeg(cell, g[top].dim());
        bool valid = !check_dendrex(at.nerve, l, h);
        CHECK(valid == (known.count(h) == 1));
        rejected += !valid;
      }
    CHECK(rejected > 0);
  }

  TEST_CASE("fibers of relative nerves") {
    std::mt19937 rng(4);
    auto p = shared(pointed_pair_operad());
    JoinAlgebra j = random_join_algebra(rng, p);
    SAlgebra f = nerve_algebra(j.algebra);
    for (int c = 0; c < 3; ++c) {
      Fiber fib = fiber_of_relative_nerve(f, c, 2);
      CHECK_FALSE(check_fiber_comparison(f, c, fib));
      for (int k = 0; k <= 2; ++k) CHECK(fib.presented.sset.count(k) == f.value[c].count(k));
    }
  }
}
