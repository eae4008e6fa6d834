#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dendro/category.hpp"
#include "dendro/omega.hpp"
#include "dendro/tree.hpp"

namespace dendro {

struct Operation {
  std::string name;
  std::vector<int> inputs;
  int output = 0;
};

struct LawFailure {
  std::string law;
  std::string detail;
};

// A finite discrete colored operad with explicit composition and symmetry tables.
// Slots are 0-based. swaps[{p,i}] is p with input slots i and i+1 exchanged.
struct Operad {
  std::vector<std::string> colors;
  std::vector<Operation> ops;
  std::vector<int> units;
  std::map<std::tuple<int, int, int>, int> comp;
  std::map<std::pair<int, int>, int> swaps;
  // Truncated operads leave composites above this arity undefined; -1 means none are.
  int arity_bound = -1;

  int arity(int p) const { return static_cast<int>(ops[p].inputs.size()); }
  int max_arity() const;
  int color(const std::string& name) const;
  int op(const std::string& name) const;
  std::optional<int> find_op(const std::string& name) const;
  const std::vector<int>& with_profile(const std::vector<int>& in, int out) const;
  std::vector<int> with_output(int out) const;

  std::optional<int> compose(int p, int slot, int q) const;
  int compose_or_throw(int p, int slot, int q) const;
  // p acted on by pi: slot k of the result is slot pi[k] of p.
  int act(int p, const std::vector<int>& pi) const;
  // Full composite w(z_0, ..., z_{m-1}); the slots of z_0 come first.
  int compose_all(int w, const std::vector<int>& zs) const;

  void index();  // rebuild the profile index after editing the tables

 private:
  std::map<std::pair<std::vector<int>, int>, std::vector<int>> by_profile_;
  std::map<std::string, int> by_name_;
};

std::optional<LawFailure> check_operad(const Operad& p);
// Validates and indexes; throws std::runtime_error carrying the first failing law.
Operad finalize_operad(Operad p);

// Named sample operads used by tests and the command line.
Operad commutative_truncated(int max_arity);
Operad operad_from_category(const FinCategory& c);
FinCategory category_of(const Operad& p);  // requires an operad with only unary operations

// The free operad of a tree; the operation with root e and ordered leaves (l...) is
// named "l,...->e".
Operad free_operad_on_tree(const Tree& t);
std::string free_op_name(const Tree& t, int root, const std::vector<int>& leaves);

// A morphism Omega(T) -> P: a color per edge and an operation per vertex whose
// inputs follow the vertex's input order.
struct TreeMap {
  std::vector<int> color;
  std::vector<int> vertex_op;
  auto operator<=>(const TreeMap&) const = default;
};

std::optional<std::string> check_tree_map(const Operad& p, const Tree& t, const TreeMap& a);
// The operation alpha(R) with inputs in the given leaf order.
int eval_subtree(const Operad& p, const Tree& t, const TreeMap& a, const Subtree& r,
                 const std::vector<int>& leaf_order);
TreeMap compose_tree_map(const Operad& p, const TreeMap& a, const TreeMorphism& g);
TreeMap constant_tree_map(const Operad& p, const Tree& t, int c);  // needs a linear tree
TreeMap tree_map_from_morphism(const Operad& omega_t, const TreeMorphism& f);

std::vector<TreeMap> dendroidal_nerve_at(const Operad& p, const Tree& t);

struct OperadMorphism {
  std::vector<int> color_map;
  std::vector<int> op_map;
};
std::optional<std::string> check_operad_morphism(const Operad& src, const Operad& tgt,
                                                 const OperadMorphism& f);
OperadMorphism induced_operad_map(const Operad& omega_s, const Operad& omega_t,
                                  const TreeMorphism& f);
// Extends a tree map to every operation of the free operad Omega(T).
OperadMorphism extend_tree_map(const Operad& omega_t, const Tree& t, const Operad& p,
                               const TreeMap& a);

bool is_sigma_free(const Operad& p);
Operad underlying_category(const Operad& p);

// Morphisms of the envelope: f sends source positions to target positions and
// ops[j] has inputs the source colors over j in increasing position order.
struct EnvArrow {
  std::vector<int> f;
  std::vector<int> ops;
  auto operator<=>(const EnvArrow&) const = default;
};

struct EnvCategory {
  Operad operad;
  int length_bound = 0;
  std::vector<std::vector<int>> objects;
  std::map<std::vector<int>, int> object_index;
  std::vector<EnvArrow> payload;
  std::map<std::pair<int, EnvArrow>, int> arrow_index;  // (source object, arrow)
  FinCategory cat;

  int object(const std::vector<int>& s) const;
  int arrow(int src, const EnvArrow& a) const;
  int tensor_objects(int a, int b) const;  // throws when the bound is exceeded
  int tensor_arrows(int f, int g) const;
};

EnvArrow env_compose(const Operad& p, const EnvArrow& g, const EnvArrow& f);
EnvCategory envelope(const Operad& p, int length_bound);
Functor envelope_functor(const EnvCategory& src, const EnvCategory& tgt, const OperadMorphism& f);
Slice env_slice(const EnvCategory& e, int c);

}  // namespace dendro
