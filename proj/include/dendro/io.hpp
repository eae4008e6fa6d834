#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dendro/algebra.hpp"
#include "dendro/chains.hpp"
#include "dendro/monoidal.hpp"
#include "dendro/omega.hpp"
#include "dendro/operad.hpp"
#include "dendro/sset.hpp"
#include "dendro/tree.hpp"

namespace dendro {

using json = nlohmann::json;

// Malformed or inconsistent input; the command line maps it to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sorted keys and fixed indentation, so equal values print identically.
std::string dump(const json& j);
json read_json_file(const std::string& path);

// Trees are written with their incidence data so edge and vertex order survive
// a round trip; a bare string is parsed.
json tree_to_json(const Tree& t);
Tree tree_from_json(const json& j);

json morphism_to_json(const TreeMorphism& f);
TreeMorphism morphism_from_json(const json& j);

json subtree_to_json(const Tree& t, const Subtree& s);
json chain_to_json(const Tree& t, const MaxChain& c);
json triple_to_json(const Tree& t, const InitialTriple& tr);

json operad_to_json(const Operad& p);
// Accepts the table format or {"free_on": tree}; validates every law.
Operad operad_from_json(const json& j);

json tree_map_to_json(const Operad& p, const Tree& t, const TreeMap& a);
TreeMap tree_map_from_json(const Operad& p, const Tree& t, const json& j);

json category_to_json(const FinCategory& c);
FinCategory category_from_json(const json& j);
json smcat_to_json(const SMCat& m);
SMCat smcat_from_json(const json& j);

json simplex_to_json(const Simplex& s);
Simplex simplex_from_json(const json& j);
json sset_to_json(const SSet& x);

json poset_to_json(const FinPoset& p);
FinPoset poset_from_json(const json& j);
json poset_algebra_to_json(const PosetAlgebra& a);
PosetAlgebra poset_algebra_from_json(std::shared_ptr<const Operad> p, const json& j);
json poset_algebra_map_to_json(const Operad& p, const PosetAlgebraMap& m);
PosetAlgebraMap poset_algebra_map_from_json(const Operad& p, const json& j);

json horn_center_to_json(const Tree& t, const HornCenter& x);
HornCenter horn_center_from_json(const Tree& t, const json& j);

json lift_problem_to_json(const LiftProblem& p);
LiftProblem lift_problem_from_json(const json& j);
json lift_result_to_json(const LiftResult& r);

// Operads shipped with the library, by name.
std::map<std::string, Operad> shipped_operads();
Operad arrow_operad();         // the category 0 -> 1
Operad z2_operad();            // one color, unary Z/2
Operad span_operad();          // x <- s -> y
Operad idempotent_operad();    // one color, unary {1, p} with p p = p
Operad pointed_pair_operad();  // a binary operation with nullary points in both inputs

}  // namespace dendro
