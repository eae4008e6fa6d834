#include <doctest.h>

#include "support.hpp"

using namespace dendro;
using namespace dendro::test;

namespace {

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_SUITE("sset") {
  TEST_CASE("monotone maps") {
    CHECK(coface(2, 1) == Monotone{0, 2});
    CHECK(codegeneracy(1, 0) == Monotone{0, 0, 1});
    CHECK(surjections(3, 1).size() == 3);
    CHECK(injections(1, 3).size() == 6);
    // Cosimplicial identity d^j d^i = d^i d^{j-1} for i < j.
    for (int k = 2; k <= 4; ++k)
      for (int j = 0; j <= k; ++j)
        for (int i = 0; i < j; ++i)
          CHECK(compose_maps(coface(k, j), coface(k - 1, i)) ==
                compose_maps(coface(k, i), coface(k - 1, j - 1)));
  }

  TEST_CASE("standard simplices, boundaries and horns") {
    for (int n = 0; n <= 4; ++n) {
      SSet d = simplex(n).sset;
      CHECK_FALSE(check_sset(d));
      for (int k = 0; k <= n; ++k) CHECK(d.count(k) == binom(n + 1, k + 1));
      CHECK(euler_characteristic(d) == 1);
      if (n == 0) continue;
      SSet b = boundary_sset(n).sset;
      CHECK(b.count(n) == 0);
      CHECK(euler_characteristic(b) == (n % 2 == 1 ? 2 : 0));
      for (int k = 0; k <= n; ++k) {
        SSet h = horn_sset(n, k).sset;
        CHECK(h.count(n - 1) == n);
        CHECK(euler_characteristic(h) == 1);
      }
    }
  }

  TEST_CASE("simplicial identities on random simplices") {
    std::mt19937 rng(41);
    FinCategory c = cyclic_group(3);
    CatNerve n = nerve_category(c, 4);
    CHECK_FALSE(check_sset(n.sset));
    for (int trial = 0; trial < 300; ++trial) {
      int k = std::uniform_int_distribution<int>(2, 4)(rng);
      auto all = simplices(n.sset, k);
      Simplex x = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
      int j = std::uniform_int_distribution<int>(1, k)(rng);
      int i = std::uniform_int_distribution<int>(0, j - 1)(rng);
      CHECK(face(n.sset, face(n.sset, x, j), i) == face(n.sset, face(n.sset, x, i), j - 1));
      CHECK(face(n.sset, degen(x, i), i) == x);
      CHECK(face(n.sset, degen(x, i), i + 1) == x);
    }
  }

  TEST_CASE("nerves of categories") {
    CatNerve z = nerve_category(cyclic_group(2), 3);
    CHECK(z.sset.counts() == std::vector<int>{1, 1, 1, 1});
    CatNerve o = nerve_category(total_order(2), 3);
    CHECK(o.sset.counts() == std::vector<int>{3, 3, 1});
    CHECK(find_isomorphism(o.sset, simplex(2).sset, 3));
  }

  TEST_CASE("products") {
    SSet d1 = simplex(1).sset;
    Combined p = product({&d1, &d1}, 3);
    CHECK(p.sset.counts() == std::vector<int>{4, 5, 2});
    CHECK_FALSE(check_sset(p.sset));
    CHECK(euler_characteristic(p.sset) == 1);
  }

  TEST_CASE("fiber products over a point are products") {
    SSet d1 = simplex(1).sset, pt = simplex(0).sset;
    SSetMap to_pt;
    to_pt.image = {{nondeg(0, 0), nondeg(0, 0)}, {Simplex{0, {0, 0}}}};
    CHECK_FALSE(check_map(d1, pt, to_pt));
    Combined f = fiber_product(d1, to_pt, d1, to_pt, pt, 3);
    CHECK(find_isomorphism(f.sset, product({&d1, &d1}, 3).sset, 3));
  }

  TEST_CASE("isomorphism search distinguishes horns") {
    CHECK(find_isomorphism(horn_sset(2, 0).sset, horn_sset(2, 0).sset, 2));
    CHECK_FALSE(find_isomorphism(horn_sset(2, 0).sset, horn_sset(2, 1).sset, 2));
    CHECK_FALSE(find_isomorphism(horn_sset(2, 0).sset, horn_sset(2, 2).sset, 2));
  }

  TEST_CASE("presentations of posets") {
    FinPoset p = chain_poset(2);
    CHECK_FALSE(check_poset(p));
    p.leq[2][0] = 1;
    CHECK(check_poset(p));
  }

  TEST_CASE("maps compose") {
    PosetNerve d2 = simplex(2);
    SSetMap id = identity_sset_map(d2.sset);
    CHECK_FALSE(check_map(d2.sset, d2.sset, id));
    SSetMap twice = compose_sset_maps(d2.sset, id, id);
    for (int k = 0; k <= 2; ++k)
      for (const Simplex& s : simplices(d2.sset, k))
        CHECK(apply_map(d2.sset, twice, s) == s);
  }
}
