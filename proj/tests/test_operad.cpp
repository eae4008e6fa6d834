#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace dendro;
using namespace dendro::test;

TEST_SUITE("operad") {
  TEST_CASE("shipped operads satisfy every law") {
    auto ops = shipped_operads();
    CHECK(ops.size() == 6);
    for (const auto& [name, p] : ops) {
      INFO(name);
      CHECK_FALSE(check_operad(p));
    }
  }

  TEST_CASE("broken tables are rejected") {
    Operad z = z2_operad();
    // Setting g*g = g would give the idempotent monoid, so break the unit law instead.
    z.comp[{z.op("g"), 0, z.op("e")}] = z.op("e");
    auto f = check_operad(z);
    REQUIRE(f);
    CHECK_THROWS(finalize_operad(z));

    Operad p = pointed_pair_operad();
    p.swaps.erase({p.op("mu"), 0});
    CHECK(check_operad(p));
  }

  TEST_CASE("free operads of trees") {
    Tree t = T("r(a(x,y),b(z))");
    Operad p = finalize_operad(free_operad_on_tree(t));
    CHECK(p.colors.size() == 6);
    // Subtrees weighted by leaf orderings: 6 edges, then r, r+a, r+b, r+a+b, a, b.
    CHECK(p.ops.size() == 6 + 2 + 6 + 2 + 6 + 2 + 1);
    CHECK(is_sigma_free(p));
    int w = p.op(free_op_name(t, t.root, {E(t, "a"), E(t, "b")}));
    int a = p.op(free_op_name(t, E(t, "a"), {E(t, "x"), E(t, "y")}));
    int b = p.op(free_op_name(t, E(t, "b"), {E(t, "z")}));
    int full = p.compose_all(w, {a, b});
    CHECK(p.ops[full].name == "x,y,z->r");
    CHECK(p.ops[p.act(full, {2, 0, 1})].name == "z,x,y->r");
  }

  TEST_CASE("sigma freeness detects fixed points") {
    CHECK_FALSE(is_sigma_free(commutative_truncated(3)));
    CHECK(is_sigma_free(pointed_pair_operad()));
    CHECK(is_sigma_free(z2_operad()));
  }

  TEST_CASE("dendroidal nerve of a free operad is the hom set") {
    for (const Tree& s : enumerate_trees(2, 2))
      for (const Tree& t : enumerate_trees(3, 2)) {
        Operad p = free_operad_on_tree(t);
        auto maps = dendroidal_nerve_at(p, s);
        CHECK(maps.size() == hom_set(s, t).size());
        for (const TreeMap& a : maps) CHECK_FALSE(check_tree_map(p, s, a));
      }
  }

  TEST_CASE("tree maps compose along morphisms") {
    Operad p = pointed_pair_operad();
    Tree t = T("r(a,b)");
    auto maps = dendroidal_nerve_at(p, t);
    REQUIRE_FALSE(maps.empty());
    for (const TreeMap& a : maps)
      for (const TreeMorphism& f : hom_set(corolla(1), t)) {
        TreeMap b = compose_tree_map(p, a, f);
        CHECK_FALSE(check_tree_map(p, f.source, b));
      }
  }

  TEST_CASE("evaluation of subtrees") {
    Operad p = pointed_pair_operad();
    Tree t = T("z(x(),y)");
    auto maps = dendroidal_nerve_at(p, t);
    REQUIRE(maps.size() == 2);
    std::set<std::string> names;
    for (const TreeMap& a : maps) names.insert(p.ops[eval_subtree(p, t, a, whole(t), {E(t, "y")})].name);
    CHECK(names == std::set<std::string>{"mu_ex", "mu_ey"});
  }

  TEST_CASE("categories as unary operads") {
    FinCategory c = total_order(2);
    Operad p = finalize_operad(operad_from_category(c));
    FinCategory back = category_of(p);
    CHECK(back.num_objects() == 3);
    CHECK(back.num_arrows() == 6);
    CHECK_FALSE(check_category(back));
    CHECK_THROWS(category_of(pointed_pair_operad()));
  }

  TEST_CASE("envelopes are categories") {
    for (const auto& [name, p] : shipped_operads()) {
      if (p.arity_bound >= 0) continue;
      INFO(name);
      EnvCategory e = envelope(p, 2);
      CHECK_FALSE(check_category(e.cat));
      int x = e.object({0});
      CHECK(e.tensor_objects(x, x) == e.object({0, 0}));
    }
    EnvCategory e = envelope(arrow_operad(), 2);
    // Objects are strings of length at most 2 over two colors.
    CHECK(e.cat.num_objects() == 1 + 2 + 4);
  }

  TEST_CASE("operad morphisms from tree maps") {
    Tree t = T("r(a(x),y)");
    Operad omega = finalize_operad(free_operad_on_tree(t));
    Operad p = pointed_pair_operad();
    for (const TreeMap& a : dendroidal_nerve_at(p, t)) {
      OperadMorphism f = extend_tree_map(omega, t, p, a);
      CHECK_FALSE(check_operad_morphism(omega, p, f));
    }
    for (const TreeMorphism& g : hom_set(T("r(x,y)"), t)) {
      Operad os = finalize_operad(free_operad_on_tree(g.source));
      CHECK_FALSE(check_operad_morphism(os, omega, induced_operad_map(os, omega, g)));
    }
  }

  TEST_CASE("truncated commutative operad") {
    Operad c = commutative_truncated(3);
    CHECK(c.arity_bound == 3);
    CHECK(c.max_arity() == 3);
    CHECK_FALSE(check_operad(c));
  }
}
