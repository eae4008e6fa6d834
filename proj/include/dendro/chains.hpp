#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dendro/algebra.hpp"
#include "dendro/omega.hpp"
#include "dendro/operad.hpp"
#include "dendro/sset.hpp"
#include "dendro/tree.hpp"

namespace dendro {

// steps[0] = T, steps[n] = the root edge; steps[j] adds the vertex added[j] to steps[j+1].
struct MaxChain {
  std::vector<Subtree> steps;
  std::vector<int> added;
  int length() const { return static_cast<int>(steps.size()) - 1; }
};
// In lexicographic order of the added vertices, root first, by canonical vertex position.
std::vector<MaxChain> enumerate_max_chains(const Tree& t);

// Orderings of the vertices in which every vertex follows the vertex it feeds.
long long count_linear_extensions(const Tree& t);

// The least triple (S, face S -> T, chain in A^S(root)) over the chain u restricted along d.
struct InitialTriple {
  Tree tree;
  TreeMorphism face;
  std::vector<Subtree> chain;  // subtrees of tree, chain[j] over u.steps[d[j]]
  std::vector<int> contracted;  // inner edges of T collapsed by the face
};
// d must be injective and root preserving (d.back() = n).
InitialTriple induced_triple(const Tree& t, const MaxChain& u, const Monotone& d);
std::optional<std::string> check_triple(const Tree& t, const MaxChain& u, const Monotone& d,
                                        const InitialTriple& tr);
bool is_boundary_contributor(const MaxChain& u, const Monotone& d);
// Exhaustive search for triples not factoring uniquely through the induced one.
std::vector<std::string> initiality_failures(const Tree& t);

struct MaximalExtension {
  int chain = -1;
  Monotone d;
};
// w is a strictly decreasing chain of root subtrees; the first chain in enumeration order wins.
MaximalExtension maximal_extension(const std::vector<MaxChain>& chains,
                                   const std::vector<Subtree>& w);

// The index k with x in steps[k] but not in steps[k+1].
int horn_index(const Tree& t, const MaxChain& u, const HornCenter& x);

// Chain of root subtrees as a simplex of A^T(root).
Simplex chain_simplex(const TreeAlgebra& at, int e, const std::vector<Subtree>& w);
std::vector<Subtree> simplex_chain(const TreeAlgebra& at, int e, const Simplex& s);

// Dendrex data on the slots covered by a family of faces.
struct PartialDendrex {
  Dendrex values;
  std::vector<char> active;
};
std::vector<char> family_slots(const DendrexLayout& l, const FaceFamily& fam);
PartialDendrex restrict_to_family(const DendrexLayout& l, const Dendrex& g, const FaceFamily& fam);
// Each face's pullback must be a dendrex; returns the first failing face and reason.
std::optional<std::string> check_family_data(const SAlgebra& f, const DendrexLayout& l,
                                             const FaceFamily& fam, const PartialDendrex& chi);

// Boundary data of one maximal chain on the proper faces of the simplex.
enum class FaceSource {
  Chi,      // the face lies in the image of a proper face of T
  Graft,    // not root preserving: the bottom subtree acts on the leaf chains
  Prior,    // outside the family; read off the lift of an earlier maximal chain
  Free,     // outside the family and first met on this chain
  Literal,  // the root-corolla formula taken verbatim, kept for comparison only
};
struct FaceValue {
  Monotone d;
  FaceSource source = FaceSource::Free;
  std::optional<Simplex> value;
  int prior_chain = -1;
};
struct ChainProblem {
  int chain = 0;
  int n = 0;
  int horn_k = -1;  // -1 for the boundary
  std::vector<FaceValue> faces;
  std::optional<std::string> incoherence;  // nested faces that disagree
  bool complete() const;
  const FaceValue* find(const Monotone& d) const;
};
struct RestrictionOptions {
  const HornCenter* horn = nullptr;
  // Use the root-corolla formula verbatim on the faces where the lemma's face is invertible.
  bool literal = false;
};
ChainProblem chain_restriction(const SAlgebra& f, const DendrexLayout& l,
                               const std::vector<MaxChain>& chains, const PartialDendrex& chi,
                               int chain, const std::vector<std::optional<Simplex>>& prior,
                               const RestrictionOptions& opts = {});
ChainProblem boundary_restriction(const SAlgebra& f, const DendrexLayout& l,
                                  const std::vector<MaxChain>& chains, const PartialDendrex& chi,
                                  int chain, const std::vector<std::optional<Simplex>>& prior);
ChainProblem horn_restriction(const SAlgebra& f, const DendrexLayout& l,
                              const std::vector<MaxChain>& chains, const PartialDendrex& chi,
                              int chain, const HornCenter& x,
                              const std::vector<std::optional<Simplex>>& prior);
// The problem as a map out of the boundary or horn, when every face is determined.
std::optional<SSetMap> problem_map(const ChainProblem& p);
bool lift_fits(const SAlgebra& f, int color, const ChainProblem& p, const Simplex& lambda);

struct AlgebraMap {
  std::function<Simplex(int color, const Simplex&)> apply;
};
AlgebraMap poset_algebra_map(const SAlgebra& src, const SAlgebra& tgt, const PosetAlgebraMap& m);

struct LiftResult {
  Dendrex lift;
  bool preconditions = false;
  bool compatible = false;  // the lift is a dendrex
  bool restricts = false;   // it agrees with chi on the family
  bool covers = false;      // f carries it to xi
  std::optional<std::string> witness;
  std::vector<std::pair<int, Monotone>> extensions;  // chosen maximal extension per root slot
  bool ok() const { return preconditions && compatible && restricts && covers; }
};
LiftResult assemble_boundary_lift(const SAlgebra& f_src, const SAlgebra& f_tgt, const AlgebraMap& f,
                                  const DendrexLayout& l, const std::vector<MaxChain>& chains,
                                  const PartialDendrex& chi, const Dendrex& xi,
                                  const std::vector<Simplex>& lambdas);
LiftResult assemble_horn_lift(const SAlgebra& f_src, const SAlgebra& f_tgt, const AlgebraMap& f,
                              const DendrexLayout& l, const std::vector<MaxChain>& chains,
                              const PartialDendrex& chi, const Dendrex& xi,
                              const std::vector<Simplex>& lambdas, const HornCenter& x);

// Backtracking search for per-chain lifts; only meant for small test algebras.
std::optional<std::vector<Simplex>> search_lifts(const SAlgebra& f_src, const AlgebraMap& f,
                                                 const DendrexLayout& l,
                                                 const std::vector<MaxChain>& chains,
                                                 const PartialDendrex& chi, const Dendrex& xi,
                                                 const HornCenter* horn);

struct LiftProblem {
  std::string name;
  std::shared_ptr<const Operad> operad;
  Tree tree;
  TreeMap alpha;
  PosetAlgebra source, target;
  PosetAlgebraMap map;
  std::optional<HornCenter> horn;
  PartialDendrex chi;
  Dendrex xi;
  std::vector<Simplex> lambdas;
};
struct SolvedLift {
  LiftResult result;
  std::vector<ChainProblem> problems;
};
SolvedLift solve_lift_problem(const LiftProblem& p);
// Random boundary and horn problems over free operads of trees with at most max_vertices vertices.
std::vector<LiftProblem> generate_lift_problems(std::mt19937& rng, int max_vertices);

// A union-closed family algebra over the free operad of t, graded by a random set per vertex.
JoinAlgebra random_tree_join_algebra(std::mt19937& rng, std::shared_ptr<const Operad> omega,
                                     const Tree& t, int ground = 3);

}  // namespace dendro
