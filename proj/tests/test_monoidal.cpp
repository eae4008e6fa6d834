#include <doctest.h>

#include <memory>

#include "support.hpp"

using namespace dendro;
using namespace dendro::test;

TEST_SUITE("monoidal") {
  TEST_CASE("sample categories are strict symmetric monoidal") {
    auto all = sample_smcats();
    CHECK(all.size() == 5);
    for (const SMCat& m : all) {
      INFO(m.name);
      CHECK_FALSE(check_smcat(m));
    }
  }

  TEST_CASE("a broken tensor is rejected") {
    SMCat m = truncated_sum_smcat();
    m.tensor_obj[1][2] = 1;
    CHECK(check_smcat(m));
    SMCat z = cyclic_z2_smcat();
    z.tensor_arrow[1][1] = 1;
    CHECK(check_smcat(z));
  }

  TEST_CASE("over-objects") {
    std::mt19937 rng(3);
    for (const SMCat& m : sample_smcats()) {
      CatNerve na = nerve_category(m.cat, 3);
      for (int i = 0; i < 10; ++i) {
        OverObject u = random_over(rng, m.cat, na, 2);
        CHECK_FALSE(check_sset(u.x));
        CHECK_FALSE(check_over(u, na));
      }
      CHECK_FALSE(check_over(point_over(na, 0), na));
    }
  }

  TEST_CASE("boxtimes lies over the tensor") {
    std::mt19937 rng(5);
    SMCat m = truncated_sum_smcat();
    CatNerve na = nerve_category(m.cat, 3);
    for (int i = 0; i < 10; ++i) {
      OverObject u = random_over(rng, m.cat, na, 2), v = random_over(rng, m.cat, na, 2);
      Boxed b = boxtimes(m, na, u, v, 3);
      CHECK_FALSE(check_over(b.over, na));
    }
  }

  TEST_CASE("rectified over-objects are functors") {
    std::mt19937 rng(9);
    for (const SMCat& m : sample_smcats()) {
      CatNerve na = nerve_category(m.cat, 3);
      auto r = std::make_shared<const RectifiedOver>(
          rectify_over_category(m.cat, na, random_over(rng, m.cat, na, 2), 3));
      CHECK_FALSE(check_sfunctor(m.cat, functor_of(r), 3));
      for (int a = 0; a < m.cat.num_objects(); ++a)
        for (int k = 0; k <= 2; ++k)
          for (const Simplex& s : simplices(r->value[a].sset, k)) {
            auto [x, u] = r->split(a, s);
            CHECK(r->join(a, x, u) == s);
            CHECK(m.cat.arrows[u].src == r->last_object(x));
            CHECK(r->act(m.cat.identity[a], s) == s);
          }
    }
  }

  TEST_CASE("over a single simplex the rectification is a slice nerve") {
    FinCategory c = total_order(3);
    CatNerve na = nerve_category(c, 3);
    RectifiedOver r = rectify_over_category(c, na, point_over(na, 1), 3);
    // The point over 1 rectifies to hom(1, a).
    for (int a = 0; a <= 3; ++a) CHECK(r.value[a].sset.count(0) == (a >= 1 ? 1 : 0));
  }

  TEST_CASE("representables") {
    for (const SMCat& m : sample_smcats())
      for (int a = 0; a < m.cat.num_objects(); ++a) {
        SFunctor y = representable(m.cat, a);
        CHECK_FALSE(check_sfunctor(m.cat, y, 2));
        for (int b = 0; b < m.cat.num_objects(); ++b)
          CHECK(y.value[b].count(0) == static_cast<int>(m.cat.hom(a, b).size()));
      }
  }

  TEST_CASE("Day convolution of representables") {
    for (const SMCat& m : sample_smcats()) {
      int n = m.cat.num_objects();
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            INFO(m.name << " " << a << " " << b << " " << c);
            CHECK_FALSE(representable_day_failure(m, a, b, c, 2));
            DayValue d = day_convolution(m, representable(m.cat, a), representable(m.cat, b), c, 2);
            CHECK(d.presented.sset.count(0) ==
                  static_cast<int>(m.cat.hom(m.tensor_obj[a][b], c).size()));
            CHECK(d.presented.sset.count(1) == 0);
          }
    }
  }

  TEST_CASE("laxity and colaxity are inverse") {
    std::mt19937 rng(21);
    for (const SMCat& m : sample_smcats()) {
      CatNerve na = nerve_category(m.cat, 3);
      int checked = 0;
      for (int i = 0; i < 8; ++i) {
        OverObject u = random_over(rng, m.cat, na, 2), v = random_over(rng, m.cat, na, 2);
        int c = std::uniform_int_distribution<int>(0, m.cat.num_objects() - 1)(rng);
        LaxityReport r = check_laxity(m, u, v, c, 3);
        INFO(m.name);
        CHECK_FALSE(r.failure);
        checked += r.checked_box;
      }
      CHECK(checked > 0);
    }
  }

  TEST_CASE("envelope comparison for unary operads is cellwise") {
    for (const char* name : {"arrow", "z2", "span", "idempotent"}) {
      Operad p = shipped_operads().at(name);
      for (const Tree& t : enumerate_trees(3, 1))
        for (const TreeMap& a : dendroidal_nerve_at(p, t))
          for (int c = 0; c < static_cast<int>(p.colors.size()); ++c) {
            EnvComparison r = compare_with_envelope(p, t, a, c, 3);
            INFO(name << " " << to_string(t));
            CHECK(r.isomorphic);
            CHECK(r.finding.empty());
          }
    }
  }

  TEST_CASE("envelope comparison finding for the pointed pair") {
    Operad p = pointed_pair_operad();
    Tree t = T("r(e1,e2)");
    int findings = 0;
    for (const TreeMap& a : dendroidal_nerve_at(p, t)) {
      EnvComparison r = compare_with_envelope(p, t, a, p.color("z"), 2);
      CHECK(r.reflection_isomorphic);
      if (r.isomorphic) continue;
      ++findings;
      CHECK(r.comma_counts == std::vector<int>{5, 1, 0});
      // Two isomorphic objects give nondegenerate cells in every dimension.
      CHECK(r.pullback_counts == std::vector<int>{6, 4, 4});
      CHECK(r.pullback_objects == 6);
      CHECK(r.pullback_iso_classes == 5);
      CHECK(r.comma_components == r.pullback_components);
      CHECK_FALSE(r.finding.empty());
    }
    CHECK(findings == 2);
  }

  TEST_CASE("truncated operads have no envelope comparison") {
    Operad c = commutative_truncated(3);
    Tree t = T("r(x,y)");
    auto maps = dendroidal_nerve_at(c, t);
    REQUIRE_FALSE(maps.empty());
    EnvComparison r = compare_with_envelope(c, t, maps[0], 0, 2);
    CHECK_FALSE(r.isomorphic);
    CHECK_FALSE(r.finding.empty());
  }

  TEST_CASE("connected components") {
    CHECK(connected_components(simplex(3).sset) == 1);
    CHECK(connected_components(boundary_sset(1).sset) == 2);
  }
}
