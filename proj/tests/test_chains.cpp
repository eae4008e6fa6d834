#include <doctest.h>

#include "support.hpp"

using namespace dendro;
using namespace dendro::test;

namespace {

// Restrictions of a full dendrex to the boundary, chain by chain, with earlier chains read from it.
std::vector<ChainProblem> restrictions(const SAlgebra& f, const DendrexLayout& l, const Dendrex& g,
                                       bool literal) {
  auto chains = enumerate_max_chains(l.tree);
  PartialDendrex chi = restrict_to_family(l, g, boundary(l.tree));
  std::vector<std::optional<Simplex>> prior;
  std::vector<ChainProblem> out;
  for (int c = 0; c < static_cast<int>(chains.size()); ++c) {
    RestrictionOptions o;
    o.literal = literal;
    out.push_back(chain_restriction(f, l, chains, chi, c, prior, o));
    prior.push_back(g[l.slot(l.tree.root, chain_simplex(*l.at, l.tree.root, chains[c].steps))]);
  }
  return out;
}

}  // namespace

TEST_SUITE("chains") {
  TEST_CASE("chain counts are linear extension counts") {
    std::mt19937 rng(29);
    for (int i = 0; i < 100; ++i) {
      Tree t = random_tree(rng, 7, 3);
      long long want = brute_linear_extensions(t);
      CHECK(count_linear_extensions(t) == want);
      CHECK(static_cast<long long>(enumerate_max_chains(t).size()) == want);
    }
    CHECK(enumerate_max_chains(corolla(4)).size() == 1);
    CHECK(enumerate_max_chains(T("r(a(x),b(y),c(z))")).size() == 6);
    CHECK(enumerate_max_chains(T("r")).size() == 1);
  }

  TEST_CASE("chains add one vertex per step") {
    for (const Tree& t : enumerate_trees(4, 3))
      for (const MaxChain& u : enumerate_max_chains(t)) {
        CHECK(u.length() == t.num_vertices());
        CHECK(u.steps.front() == whole(t));
        CHECK(u.steps.back() == eta_at(t.root));
        for (int j = 0; j < u.length(); ++j) {
          CHECK(u.steps[j].verts == (u.steps[j + 1].verts | VertexSet{1} << u.added[j]));
          CHECK(is_subtree(t, u.steps[j]));
        }
      }
  }

  TEST_CASE("induced triples are initial") {
    for (const Tree& t : enumerate_trees(4, 2)) CHECK(initiality_failures(t).empty());
  }

  TEST_CASE("every root preserving face gives a valid triple") {
    for (const Tree& t : enumerate_trees(4, 3))
      for (const MaxChain& u : enumerate_max_chains(t)) {
        int n = u.length();
        for (int i = 0; i <= n; ++i)
          for (Monotone d : injections(i, n)) {
            if (d.back() != n) continue;
            InitialTriple tr = induced_triple(t, u, d);
            CHECK_FALSE(check_triple(t, u, d, tr));
            CHECK(is_root_preserving(tr.face));
            // Faces with d(i-1) < n-1, or i = 1 < n, never give an isomorphism.
            bool contributes = (i >= 1 && d[i - 1] < n - 1) || (i == 1 && n > 1);
            CHECK(is_boundary_contributor(u, d) == contributes);
            if (contributes) CHECK_FALSE(is_isomorphism(tr.face));
          }
      }
  }

  TEST_CASE("maximal extensions recover the face") {
    Tree t = T("r(a(x,y),b(z))");
    auto chains = enumerate_max_chains(t);
    for (int c = 0; c < 2; ++c)
      for (Monotone d : injections(2, 3)) {
        std::vector<Subtree> w;
        for (int j : d) w.push_back(chains[c].steps[j]);
        MaximalExtension ext = maximal_extension(chains, w);
        REQUIRE(ext.chain >= 0);
        CHECK(ext.chain <= c);
        for (std::size_t j = 0; j < d.size(); ++j) CHECK(chains[ext.chain].steps[ext.d[j]] == w[j]);
      }
  }

  TEST_CASE("horn indices") {
    Tree t = T("r(a(x,y),b(z))");
    auto chains = enumerate_max_chains(t);
    HornCenter a{HornCenter::Kind::InnerEdge, E(t, "a")};
    // The inner edge a enters with the root vertex, which both chains add last.
    CHECK(horn_index(t, chains[0], a) == 2);
    CHECK(horn_index(t, chains[1], a) == 2);
    HornCenter b{HornCenter::Kind::LeafVertex, V(t, "b")};
    CHECK(horn_index(t, chains[0], b) == 1);
    CHECK(horn_index(t, chains[1], b) == 0);
  }

  TEST_CASE("chain simplices round trip") {
    Tree t = T("r(a(x),b(c(y)))");
    TreeAlgebra at = build_AT(t);
    for (const MaxChain& u : enumerate_max_chains(t)) {
      Simplex s = chain_simplex(at, t.root, u.steps);
      CHECK(s.nondegenerate());
      CHECK(simplex_chain(at, t.root, s) == u.steps);
    }
  }

  TEST_CASE("boundary restrictions of dendrices are coherent") {
    std::mt19937 rng(31);
    for (const char* s : {"r(a(x),b(y))", "r(a(x,y),b(z))", "r(a(b(x)),y)"}) {
      Tree t = T(s);
      auto omega = shared(finalize_operad(free_operad_on_tree(t)));
      DendrexLayout l = dendrex_layout(*omega, t, tree_map_from_morphism(*omega, identity(t)));
      for (int trial = 0; trial < 5; ++trial) {
        SAlgebra f = nerve_algebra(random_tree_join_algebra(rng, omega, t).algebra);
        DendrexSearch opts;
        opts.limit = 20;
        for (const Dendrex& g : relative_nerve_dendrices(f, l, opts))
          for (const ChainProblem& p : restrictions(f, l, g, false)) {
            CHECK_FALSE(p.incoherence);
            // Unfilled faces are interior ones not reached by an earlier chain.
            for (const FaceValue& fv : p.faces) {
              if (fv.value) continue;
              CHECK(fv.source == FaceSource::Free);
              CHECK(is_isomorphism(induced_triple(t, enumerate_max_chains(t)[p.chain], fv.d).face));
            }
            CHECK(problem_map(p).has_value() == p.complete());
            Simplex top = g[l.slot(t.root, chain_simplex(*l.at, t.root,
                                                          enumerate_max_chains(t)[p.chain].steps))];
            CHECK(lift_fits(f, l.alpha.color[t.root], p, top));
          }
      }
    }
  }

  TEST_CASE("the verbatim root-corolla formula is incoherent on the cherry") {
    Tree t = T("r(a(x),b(y))");
    auto omega = shared(finalize_operad(free_operad_on_tree(t)));
    DendrexLayout l = dendrex_layout(*omega, t, tree_map_from_morphism(*omega, identity(t)));
    std::mt19937 rng(37);
    int literal_bad = 0, amended_bad = 0;
    for (int trial = 0; trial < 40; ++trial) {
      SAlgebra f = nerve_algebra(random_tree_join_algebra(rng, omega, t).algebra);
      DendrexSearch opts;
      opts.limit = 10;
      for (const Dendrex& g : relative_nerve_dendrices(f, l, opts)) {
        for (const ChainProblem& p : restrictions(f, l, g, true)) literal_bad += p.incoherence.has_value();
        for (const ChainProblem& p : restrictions(f, l, g, false)) amended_bad += p.incoherence.has_value();
      }
    }
    CHECK(literal_bad > 0);
    CHECK(amended_bad == 0);
  }

  TEST_CASE("generated lift problems pass every certificate") {
    std::mt19937 rng(43);
    auto problems = generate_lift_problems(rng, 2);
    REQUIRE(problems.size() >= 5);
    for (const LiftProblem& p : problems) {
      INFO(p.name);
      SolvedLift s = solve_lift_problem(p);
      CHECK(s.result.preconditions);
      CHECK(s.result.compatible);
      CHECK(s.result.restricts);
      CHECK(s.result.covers);
    }
  }

  TEST_CASE("a wrong lambda is caught") {
    std::mt19937 rng(47);
    int caught = 0;
    for (LiftProblem p : generate_lift_problems(rng, 2)) {
      SAlgebra source = nerve_algebra(p.source);
      const SSet& value = source.value[p.alpha.color[p.tree.root]];
      for (Simplex& lambda : p.lambdas) {
        int n = lambda.dim();
        if (value.count(n) < 2 || !lambda.nondegenerate()) continue;
        lambda = nondeg((lambda.cell + 1) % value.count(n), n);
        SolvedLift s = solve_lift_problem(p);
        // Another lift may exist, but a rejected one must say why.
        if (!s.result.ok()) {
          CHECK(s.result.witness);
          ++caught;
        }
        break;
      }
    }
    CHECK(caught > 0);
  }
}
