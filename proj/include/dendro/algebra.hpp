#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dendro/operad.hpp"
#include "dendro/sset.hpp"
#include "dendro/tree.hpp"

namespace dendro {

// An algebra in simplicial sets; act(p, xs, k) acts on k-simplices.
struct SAlgebra {
  std::shared_ptr<const Operad> operad;
  std::vector<SSet> value;
  std::function<Simplex(int, const std::vector<Simplex>&, int)> act;
  // Set for algebras that are nerves of poset algebras.
  std::shared_ptr<const std::vector<PosetNerve>> nerves;
};
std::optional<std::string> check_algebra(const SAlgebra& f, int d);

// An algebra in finite posets; act(p, xs) acts on elements.
struct PosetAlgebra {
  std::shared_ptr<const Operad> operad;
  std::vector<FinPoset> value;
  std::function<int(int, const std::vector<int>&)> act;
};
std::optional<std::string> check_poset_algebra(const PosetAlgebra& a);
SAlgebra nerve_algebra(const PosetAlgebra& a);

// Elementwise monotone maps per color.
struct PosetAlgebraMap {
  std::vector<std::vector<int>> map;
};
std::optional<std::string> check_poset_algebra_map(const PosetAlgebra& a, const PosetAlgebra& b,
                                                   const PosetAlgebraMap& f);
Simplex apply_algebra_map(const SAlgebra& src, const SAlgebra& tgt, const PosetAlgebraMap& f,
                          int color, const Simplex& s);

PosetAlgebra terminal_algebra(std::shared_ptr<const Operad> p);
PosetAlgebraMap terminal_map(const PosetAlgebra& a);
PosetAlgebra product_algebra(const PosetAlgebra& a, const PosetAlgebra& b);
PosetAlgebraMap product_projection(const PosetAlgebra& a, const PosetAlgebra& b, int which);

// Families of subsets of a small ground set, closed under union and containing
// the empty set; operations act by union with a per-operation constant.
struct JoinAlgebra {
  PosetAlgebra algebra;
  std::vector<std::uint32_t> family;   // sorted members
  std::vector<std::uint32_t> grading;  // per operation
  std::vector<int> twist;              // ground permutation applied by each unary operation, or empty
};
// grading must be additive along composites and vanish on units.
JoinAlgebra join_algebra(std::shared_ptr<const Operad> p, std::vector<std::uint32_t> family,
                         std::vector<std::uint32_t> grading,
                         std::vector<std::vector<int>> twists = {});
std::vector<std::uint32_t> random_union_closed(std::mt19937& rng, int ground, int generators,
                                               const std::vector<int>& involution = {});
// A random join algebra over any operad: non-unit operations add a common random
// set, and unary involutions act by a random involution of the ground set.
JoinAlgebra random_join_algebra(std::mt19937& rng, std::shared_ptr<const Operad> p, int ground = 3);
// Intersection with w, a join-homomorphism onto the restricted algebra; w is first
// closed under the twist so that the map commutes with it.
std::pair<JoinAlgebra, PosetAlgebraMap> restrict_join_algebra(const JoinAlgebra& a,
                                                              std::uint32_t w);

// A^T: per edge, the subtrees rooted there ordered by reversed inclusion; operations graft.
struct TreeAlgebra {
  Tree tree;
  std::shared_ptr<const Operad> omega;
  std::vector<std::vector<Subtree>> subtrees;
  std::vector<std::map<VertexSet, int>> element_of;
  PosetAlgebra poset;
  SAlgebra nerve;
  int element(int e, const Subtree& s) const { return element_of[e].at(s.verts); }
  const PosetNerve& nerve_at(int e) const { return (*nerve.nerves)[e]; }
};
TreeAlgebra build_AT(const Tree& t);
// Subtree transport along a tree morphism, per source edge.
std::vector<std::vector<int>> tree_morphism_action(const TreeMorphism& f, const TreeAlgebra& as,
                                                   const TreeAlgebra& at);
std::optional<std::string> check_tree_morphism_action(const TreeMorphism& f, const TreeAlgebra& as,
                                                      const TreeAlgebra& at,
                                                      const std::vector<std::vector<int>>& maps);

struct CommaObject {
  std::vector<int> edges;
  int op = 0;
  auto operator<=>(const CommaObject&) const = default;
};
struct CommaPoset {
  std::vector<CommaObject> objects;
  std::map<CommaObject, int> index;
  FinPoset poset;
  std::optional<std::string> violation;  // poset axiom witness, when one fails
};
CommaPoset comma_poset(const Operad& p, const Tree& t, const TreeMap& a, int c);

struct Rectified {
  std::shared_ptr<const Operad> operad;
  Tree tree;
  TreeMap alpha;
  std::vector<CommaPoset> comma;
  PosetAlgebra poset;
  SAlgebra nerve;
};
Rectified rectify_representable(std::shared_ptr<const Operad> p, const Tree& t, const TreeMap& a);

// Families of simplices indexed by the nondegenerate simplices of every A^T(e).
struct DendrexLayout {
  struct Slot {
    int edge;
    int dim;
    int cell;
  };
  // gamma at target = op acting on the derived values at the inputs, all in dimension k.
  struct Graft {
    int target;
    int op;
    std::vector<std::pair<int, Simplex>> inputs;
    int k;
  };
  Tree tree;
  TreeMap alpha;
  std::shared_ptr<const TreeAlgebra> at;
  std::vector<Slot> slots;  // in search order
  std::vector<std::map<std::pair<int, int>, int>> slot_of;
  std::vector<Graft> grafts;
  std::vector<std::vector<int>> grafts_at;  // by target slot

  int slot(int e, const Simplex& u) const { return slot_of[e].at({u.base_dim(), u.cell}); }
  int top_slot() const;  // the first maximal simplex at the root
};
DendrexLayout dendrex_layout(const Operad& p, const Tree& t, const TreeMap& a);

using Dendrex = std::vector<Simplex>;  // indexed by slot; unset entries have an empty deg

Simplex derived_value(const SAlgebra& f, const DendrexLayout& l, const Dendrex& g, int e,
                      const Simplex& u);
std::optional<std::string> check_dendrex(const SAlgebra& f, const DendrexLayout& l,
                                         const Dendrex& g,
                                         const std::vector<char>* active = nullptr);

struct DendrexSearch {
  std::vector<char> active;  // empty means every slot
  std::vector<std::optional<Simplex>> fixed;
  std::size_t limit = 0;     // 0 means no limit
};
std::vector<Dendrex> relative_nerve_dendrices(const SAlgebra& f, const DendrexLayout& l,
                                              const DendrexSearch& opts = {});

// Pullback of a dendrex along g: (S, alpha g) -> (T, alpha).
Dendrex restrict_dendrex(const SAlgebra& f, const DendrexLayout& lt, const Dendrex& g,
                         const DendrexLayout& ls, const TreeMorphism& m);

struct Fiber {
  Presented presented;
  std::vector<std::vector<Dendrex>> dendrices;  // by dimension
  std::vector<std::map<Dendrex, int>> index;
  std::vector<DendrexLayout> layouts;
  SSetMap comparison;  // to the value at the color, through the top simplex
};
Fiber fiber_of_relative_nerve(const SAlgebra& f, int c, int d);
// The comparison is bijective on all simplices through d and commutes with faces.
std::optional<std::string> check_fiber_comparison(const SAlgebra& f, int c, const Fiber& fib);
// The square through an algebra map m: F -> G commutes on every simplex of the fiber of F.
std::optional<std::string> check_fiber_naturality(const SAlgebra& f, const SAlgebra& g,
                                                  const PosetAlgebraMap& m, int c,
                                                  const Fiber& ff, const Fiber& fg);

}  // namespace dendro
