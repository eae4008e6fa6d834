#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dendro/category.hpp"

namespace dendro {

// Monotone maps [k] -> [m] are stored as their value vectors.
using Monotone = std::vector<int>;

Monotone identity_map(int k);
Monotone coface(int k, int i);       // d^i : [k-1] -> [k]
Monotone codegeneracy(int k, int i);  // s^i : [k+1] -> [k]
Monotone compose_maps(const Monotone& g, const Monotone& f);  // g after f
std::vector<Monotone> surjections(int k, int m);             // lexicographic
std::vector<Monotone> injections(int k, int m);              // lexicographic

// A simplex in normal form: a nondegenerate cell of dimension m pulled back
// along a surjection deg: [k] -> [m].
struct Simplex {
  int cell = 0;
  Monotone deg;
  int dim() const { return static_cast<int>(deg.size()) - 1; }
  int base_dim() const { return deg.empty() ? -1 : deg.back(); }
  bool nondegenerate() const { return base_dim() == dim(); }
  auto operator<=>(const Simplex&) const = default;
};
Simplex nondeg(int cell, int m);

struct SSet {
  // faces[m][x][i] is d_i of the m-cell x; 0-cells have no faces.
  std::vector<std::vector<std::vector<Simplex>>> faces;
  std::vector<std::vector<std::string>> labels;
  int truncation = -1;  // -1 when every nondegenerate cell is present

  int top_dim() const { return static_cast<int>(faces.size()) - 1; }
  int count(int m) const {
    return m < static_cast<int>(faces.size()) ? static_cast<int>(faces[m].size()) : 0;
  }
  int add_cell(int m, std::vector<Simplex> fs, std::string label = {});
  std::vector<int> counts() const;
};

Simplex apply_op(const SSet& x, const Simplex& s, const Monotone& theta);
Simplex face(const SSet& x, const Simplex& s, int i);
Simplex degen(const Simplex& s, int i);
std::vector<Simplex> simplices(const SSet& x, int k);  // all k-simplices, degenerate included
std::optional<std::string> check_sset(const SSet& x);
long long euler_characteristic(const SSet& x);

struct SSetMap {
  std::vector<std::vector<Simplex>> image;  // image[m][cell]
};
Simplex apply_map(const SSet& target, const SSetMap& f, const Simplex& s);
std::optional<std::string> check_map(const SSet& source, const SSet& target, const SSetMap& f);
SSetMap identity_sset_map(const SSet& x);
SSetMap compose_sset_maps(const SSet& c, const SSetMap& g, const SSetMap& f);

// Simplicial set from a degreewise presentation through dimension d.
struct Presentation {
  std::vector<int> size;  // number of k-simplices, k = 0..d
  std::function<int(int k, int x, int i)> face;
  std::function<int(int k, int x, int i)> degen;
};
struct Presented {
  SSet sset;
  std::vector<std::vector<Simplex>> normal;  // normal[k][x]
  std::vector<std::vector<int>> element;     // element[m][cell] in degree m
};
Presented build_sset(const Presentation& p);

struct FinPoset {
  int n = 0;
  std::vector<std::vector<char>> leq;
  std::vector<std::string> labels;
};
std::optional<std::string> check_poset(const FinPoset& p);
FinPoset chain_poset(int n);

struct PosetNerve {
  SSet sset;
  std::vector<std::vector<std::vector<int>>> chains;  // chains[m][cell]
  std::map<std::vector<int>, int> index;              // strict chain -> cell
  Simplex simplex_of(const std::vector<int>& weak_chain) const;
  std::vector<int> chain_of(const Simplex& s) const;
};
PosetNerve nerve_poset(const FinPoset& p);
PosetNerve nerve_subcomplex(const FinPoset& p,
                            const std::function<bool(const std::vector<int>&)>& keep);

PosetNerve simplex(int n);
PosetNerve boundary_sset(int n);
PosetNerve horn_sset(int n, int k);

// Chains are stored as the first object followed by the arrows.
struct CatNerve {
  SSet sset;
  std::vector<std::vector<std::vector<int>>> chains;
  std::map<std::vector<int>, int> index;
  std::vector<int> identity;       // object -> identity arrow
  std::vector<char> is_identity;   // per arrow
  std::vector<int> arrow_target;   // per arrow
  Simplex simplex_of(int start, const std::vector<int>& arrows) const;
  std::vector<int> arrows_of(const Simplex& s, int* start) const;
};
CatNerve nerve_category(const FinCategory& c, int d);

struct Combined {
  SSet sset;
  std::vector<std::vector<std::vector<Simplex>>> parts;  // parts[m][cell]
  std::map<std::vector<Simplex>, int> index;
  Simplex simplex_of(const std::vector<Simplex>& tuple) const;
  std::vector<Simplex> tuple_of(const Simplex& s) const;
};
// Product of the factors through dimension d.
Combined product(const std::vector<const SSet*>& factors, int d);
// Pairs (x, y) with f(x) = g(y) through dimension d.
Combined fiber_product(const SSet& x, const SSetMap& f, const SSet& y, const SSetMap& g,
                       const SSet& base, int d);

// Cell bijections a -> b per dimension through d, compatible with faces.
std::optional<std::vector<std::vector<int>>> find_isomorphism(const SSet& a, const SSet& b, int d);

}  // namespace dendro
