#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace dendro;
using namespace dendro::test;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void fail(const std::string& why) {
    if (pass) note.str("");
    if (pass) note << why;
    pass = false;
  }
};

bool same_cells(const SSet& a, const SSet& b, int d) { return find_isomorphism(a, b, d).has_value(); }

// 1. Two maximal chains of r(a(x,y),b(z)), right vertex first, then left vertex first.
void chains_example(Outcome& o) {
  Tree t = T("r(a(x,y),b(z))");
  auto chains = enumerate_max_chains(t);
  if (chains.size() != 2) return o.fail("expected 2 chains, got " + std::to_string(chains.size()));
  std::vector<std::vector<std::vector<std::string>>> want = {
      {{"a", "b", "r"}, {"b", "r"}, {"r"}, {}},
      {{"a", "b", "r"}, {"a", "r"}, {"r"}, {}},
  };
  for (int c = 0; c < 2; ++c) {
    if (chains[c].length() != 3) return o.fail("chain length is not 3");
    for (int j = 0; j <= 3; ++j) {
      if (chains[c].steps[j].root != t.root) return o.fail("step is not rooted at the root");
      if (vertex_names(t, chains[c].steps[j].verts) != want[c][j])
        return o.fail("chain " + std::to_string(c) + " differs at step " + std::to_string(j));
    }
  }
  o.note << "chain 0 adds r,b,a; chain 1 adds r,a,b";
}

// 2. Induced triples for d = (0,1,3) and d = (0,2,3) along the first chain.
void lemma_example(Outcome& o) {
  Tree t = T("r(a(x,y),b(z))");
  auto chains = enumerate_max_chains(t);
  const MaxChain& u = chains[0];

  InitialTriple a = induced_triple(t, u, {0, 1, 3});
  if (auto e = check_triple(t, u, {0, 1, 3}, a)) return o.fail("d(0,1,3): " + *e);
  if (a.contracted.size() != 1 || t.names[a.contracted[0]] != "b")
    return o.fail("d(0,1,3) should contract exactly the edge b");
  if (!is_inner_face(a.face) || !is_elementary_face(a.face))
    return o.fail("d(0,1,3) face is not an elementary inner face");
  if (canonical_form(a.tree) != canonical_form(T("r(a(x,y),z)")))
    return o.fail("d(0,1,3) tree is " + to_string(a.tree));

  InitialTriple b = induced_triple(t, u, {0, 2, 3});
  if (auto e = check_triple(t, u, {0, 2, 3}, b)) return o.fail("d(0,2,3): " + *e);
  if (!is_isomorphism(b.face) || !b.contracted.empty()) return o.fail("d(0,2,3) face is not the identity");
  if (vertex_count(b.chain[2]) != 0) return o.fail("d(0,2,3): u2 is not the root edge");
  auto c2 = extract(b.tree, b.chain[1]).tree;
  if (canonical_form(c2) != canonical_form(corolla(2))) return o.fail("d(0,2,3): u1 is not C2");
  if (b.chain[0] != whole(b.tree)) return o.fail("d(0,2,3): u0 is not T");
  o.note << "d(0,1,3) contracts b; d(0,2,3) is (T, id) with C2 and the root edge";
}

// 3. A^[n](i) and the monoidal fiber product against the standard simplex.
void linear_collapse(Outcome& o) {
  int cases = 0;
  for (int n = 0; n <= 5; ++n) {
    Tree t = linear_tree(n);
    TreeAlgebra at = build_AT(t);
    FinCategory cat = total_order(n);
    CatNerve na = nerve_category(cat, n);
    std::vector<int> arrows;
    for (int j = 0; j < n; ++j) arrows.push_back(cat.hom(j, j + 1).at(0));
    RectifiedOver r = rectify_over_category(cat, na, simplex_over(cat, na, 0, arrows), n);
    for (int i = 0; i <= n; ++i) {
      const SSet& di = simplex(i).sset;
      if (!same_cells(at.nerve_at(t.edge("e" + std::to_string(i))).sset, di, n))
        return o.fail("A^[" + std::to_string(n) + "](" + std::to_string(i) + ") is not a simplex");
      if (!same_cells(r.value[i].sset, di, n))
        return o.fail("fiber product at n=" + std::to_string(n) + " i=" + std::to_string(i) +
                      " is not a simplex");
      ++cases;
    }
  }
  o.note << cases << " pairs (n,i)";
}

// 4. Fibers of relative nerves against the algebra values, with naturality.
void fiber_lemma(Outcome& o) {
  std::mt19937 rng(2024);
  int d = 3, algebras = 0, maps = 0, nontrivial = 0;
  std::set<std::string> operads;
  for (const auto& [name, op] : shipped_operads()) {
    if (op.arity_bound >= 0) continue;
    auto p = shared(op);
    for (int trial = 0; trial < 3; ++trial) {
      JoinAlgebra j = random_join_algebra(rng, p);
      if (auto e = check_poset_algebra(j.algebra)) return o.fail(name + ": " + *e);
      auto w = std::uniform_int_distribution<std::uint32_t>(1, 6)(rng);
      auto [g, m] = restrict_join_algebra(j, w);
      if (auto e = check_poset_algebra_map(j.algebra, g.algebra, m)) return o.fail(name + ": " + *e);
      SAlgebra fa = nerve_algebra(j.algebra), ga = nerve_algebra(g.algebra);
      for (int c = 0; c < static_cast<int>(p->colors.size()); ++c) {
        Fiber ff = fiber_of_relative_nerve(fa, c, d), fg = fiber_of_relative_nerve(ga, c, d);
        if (auto e = check_fiber_comparison(fa, c, ff)) return o.fail(name + ": " + *e);
        if (auto e = check_fiber_comparison(ga, c, fg)) return o.fail(name + ": " + *e);
        if (auto e = check_fiber_naturality(fa, ga, m, c, ff, fg)) return o.fail(name + ": " + *e);
      }
      operads.insert(name);
      nontrivial += std::any_of(j.algebra.value.begin(), j.algebra.value.end(),
                                [](const FinPoset& x) { return x.n > 1; });
      ++algebras;
      ++maps;
    }
  }
  if (algebras < 10 || maps < 10 || operads.size() < 3) return o.fail("too few instances");
  if (nontrivial < 10) return o.fail("too few nontrivial algebras");
  o.note << algebras << " algebras (" << nontrivial << " nontrivial) over " << operads.size()
         << " operads, " << maps
         << " maps, d=" << d;
}

// 5. Comma posets against the fiber product formula and against the envelope pullback.
void rectification(Outcome& o) {
  int linear = 0, compared = 0, findings = 0, skipped = 0;
  for (const auto& [name, p] : shipped_operads()) {
    bool unary = p.max_arity() == 1 && std::all_of(p.ops.begin(), p.ops.end(), [](const Operation& x) {
                   return x.inputs.size() == 1;
                 });
    if (unary) {
      FinCategory cat = category_of(p);
      for (int n = 0; n <= 4; ++n) {
        Tree t = linear_tree(n);
        auto edges = linear_edges(t);
        CatNerve na = nerve_category(cat, n);
        for (const TreeMap& a : dendroidal_nerve_at(p, t)) {
          std::vector<int> arrows;
          for (int k = 1; k <= n; ++k) arrows.push_back(a.vertex_op[t.producer[edges[k]]]);
          RectifiedOver r = rectify_over_category(cat, na, simplex_over(cat, na, a.color[edges[0]], arrows), n);
          for (int c = 0; c < static_cast<int>(p.colors.size()); ++c) {
            CommaPoset cp = comma_poset(p, t, a, c);
            if (cp.violation) return o.fail(name + ": " + *cp.violation);
            if (!same_cells(nerve_poset(cp.poset).sset, r.value[c].sset, n))
              return o.fail(name + " on " + to_string(t) + ": comma nerve differs from the fiber product");
            ++linear;
          }
        }
      }
    }
    int top = std::max(1, p.max_arity());
    for (const Tree& t : enumerate_trees(4, top))
      for (const TreeMap& a : dendroidal_nerve_at(p, t))
        for (int c = 0; c < static_cast<int>(p.colors.size()); ++c) {
          if (p.arity_bound >= 0) {
            ++skipped;
            continue;
          }
          EnvComparison r = compare_with_envelope(p, t, a, c, t.num_vertices());
          ++compared;
          if (!r.isomorphic) {
            if (r.finding.empty()) return o.fail("mismatch without a finding");
            if (!r.reflection_isomorphic)
              return o.fail(name + " on " + to_string(t) + ": not even the poset reflection agrees");
            ++findings;
          }
        }
  }
  o.note << linear << " linear cases agree; " << compared << " envelope comparisons, " << findings
         << " findings (pullback differs cellwise, poset reflection agrees); " << skipped
         << " cases over the truncated operad have no envelope";
}

// 6. Lift assembly certificates on generated problems.
void lift_certificates(Outcome& o) {
  std::mt19937 rng(11);
  int boundary = 0, horns = 0;
  for (int round = 0; boundary + horns < 20 || boundary == 0 || horns == 0; ++round) {
    if (round > 5) return o.fail("generator produced too few problems");
    for (const LiftProblem& p : generate_lift_problems(rng, 3)) {
      if (p.tree.num_vertices() > 3) return o.fail("problem tree is too large");
      SolvedLift s = solve_lift_problem(p);
      if (!s.result.ok())
        return o.fail(p.name + ": " + s.result.witness.value_or("certificate failed"));
      (p.horn ? horns : boundary)++;
    }
  }
  o.note << boundary << " boundary and " << horns << " horn problems";
}

// 7. Laxity and colaxity are mutually inverse.
void laxity(Outcome& o) {
  int d = 3, cats = 0;
  long long cells = 0;
  for (const SMCat& m : sample_smcats()) {
    if (auto e = check_smcat(m)) return o.fail(m.name + ": " + *e);
    std::mt19937 rng(7);
    CatNerve na = nerve_category(m.cat, d);
    for (int trial = 0; trial < 6; ++trial) {
      OverObject u = random_over(rng, m.cat, na, 2);
      OverObject v = random_over(rng, m.cat, na, 1);
      int c = std::uniform_int_distribution<int>(0, m.cat.num_objects() - 1)(rng);
      LaxityReport r = check_laxity(m, u, v, c, d);
      if (r.failure) return o.fail(m.name + ": " + *r.failure);
      cells += r.checked_day + r.checked_box;
    }
    ++cats;
  }
  o.note << cats << " categories, " << cells << " simplices checked through d=" << d;
}

// 8. Oracle suites.
void oracles(Outcome& o) {
  std::vector<Tree> small;
  for (const Tree& t : enumerate_trees(5, 4))
    if (t.num_edges() <= 5) small.push_back(t);
  int pairs = 0;
  for (const Tree& s : small)
    for (const Tree& t : small) {
      auto homs = hom_set(s, t);
      auto maps = dendroidal_nerve_at(free_operad_on_tree(t), s);
      if (homs.size() != maps.size())
        return o.fail("(a) " + to_string(s) + " -> " + to_string(t));
      ++pairs;
    }

  int trees = 0;
  for (const Tree& t : enumerate_trees(7, 7, false)) {
    auto n = static_cast<long long>(enumerate_max_chains(t).size());
    if (n != brute_linear_extensions(t) || n != count_linear_extensions(t))
      return o.fail("(b) " + to_string(t));
    ++trees;
  }

  std::mt19937 rng(99);
  int identities = 0;
  for (; identities < 1000; ++identities) {
    Tree t = random_tree(rng, 4, 3);
    int e = std::uniform_int_distribution<int>(0, t.num_edges() - 1)(rng);
    TreeMorphism sigma = degeneracy(t, e);
    auto faces = elementary_faces(sigma.source);
    const TreeMorphism& delta = faces[std::uniform_int_distribution<std::size_t>(0, faces.size() - 1)(rng)];
    TreeMorphism g = compose(sigma, delta);
    if (check_morphism(g)) return o.fail("(c) composite is not a morphism");
    Factorization f = factorize(g);
    if (!(compose(f.face, compose(f.iso, f.degeneracy)) == g)) return o.fail("(c) factorization");
    int collapsed = f.degeneracy.source.num_vertices() - f.degeneracy.target.num_vertices();
    bool invertible = is_isomorphism(g);
    if (!invertible && (collapsed != 1 || !is_elementary_face(f.face)))
      return o.fail("(c) " + to_string(t) + ": not a face after one degeneracy");
  }

  int free_checked = 0;
  for (; free_checked < 100; ++free_checked) {
    Tree t = random_tree(rng, 4, 3);
    while (leaves(t).size() > 7) t = random_tree(rng, 4, 3);
    if (!is_sigma_free(free_operad_on_tree(t))) return o.fail("(d) " + to_string(t));
  }

  int day = 0;
  for (const SMCat& m : sample_smcats()) {
    int n = m.cat.num_objects();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          if (auto e = representable_day_failure(m, a, b, c, 3)) return o.fail("(e) " + m.name + ": " + *e);
          ++day;
        }
  }
  o.note << "(a) " << pairs << " pairs (b) " << trees << " trees (c) " << identities
         << " pairs (d) " << free_checked << " trees (e) " << day << " triples";
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"max-chains", chains_example},    {"induced-triples", lemma_example},
      {"linear-collapse", linear_collapse}, {"fiber-lemma", fiber_lemma},
      {"rectification", rectification}, {"lift-certificates", lift_certificates},
      {"laxity", laxity},                {"oracles", oracles},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << " ("
              << o.note.str() << "; " << std::fixed << std::setprecision(2) << secs << "s)\n";
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
