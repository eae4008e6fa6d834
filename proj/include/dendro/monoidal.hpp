#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "dendro/algebra.hpp"
#include "dendro/category.hpp"
#include "dendro/operad.hpp"
#include "dendro/sset.hpp"

namespace dendro {

// A strict symmetric monoidal structure on a finite category.
struct SMCat {
  std::string name;
  FinCategory cat;
  std::vector<std::vector<int>> tensor_obj;    // [a][b]
  std::vector<std::vector<int>> tensor_arrow;  // [f][g]
  int unit = 0;
  std::vector<std::vector<int>> symmetry;  // [a][b]: a (x) b -> b (x) a
};
std::optional<std::string> check_smcat(const SMCat& a);

SMCat terminal_smcat();
SMCat discrete_z2_smcat();   // objects 0, 1 under addition mod 2, identities only
SMCat cyclic_z2_smcat();     // one object, arrows Z/2, tensor adds arrows
SMCat max_order_smcat();     // {0 < 1} under max
SMCat truncated_sum_smcat(); // {0 < 1 < 2} under truncated addition
std::vector<SMCat> sample_smcats();

// A simplicial set over the nerve of a category.
struct OverObject {
  SSet x;
  SSetMap h;
};
std::optional<std::string> check_over(const OverObject& u, const CatNerve& na);
// The standard simplex over a composable chain a_0 -> ... -> a_p given by its arrows.
OverObject simplex_over(const FinCategory& a, const CatNerve& na, int start,
                        const std::vector<int>& arrows);
OverObject point_over(const CatNerve& na, int obj);
OverObject random_over(std::mt19937& rng, const FinCategory& a, const CatNerve& na, int max_dim);

struct Boxed {
  OverObject over;
  Combined product;
};
// U x V over N A through the tensor; a chain (a_i) and (b_i) goes to (a_i (x) b_i).
Boxed boxtimes(const SMCat& a, const CatNerve& na, const OverObject& u, const OverObject& v, int d);

// X x_{N A} N(A/a) for every object a; an n-simplex is a simplex x of X with
// an arrow from the last object of h(x) to a.
struct RectifiedOver {
  FinCategory cat;
  CatNerve na;
  OverObject over;
  std::vector<Slice> slices;
  std::vector<std::map<int, int>> object_of;                 // A arrow -> slice object
  std::vector<std::map<std::pair<int, int>, int>> arrow_of;  // (A arrow, target) -> slice arrow
  std::vector<CatNerve> nerves;
  std::vector<SSetMap> forget;
  std::vector<Combined> value;

  std::pair<Simplex, int> split(int a, const Simplex& s) const;  // x and the final arrow
  Simplex join(int a, const Simplex& x, int final_arrow) const;
  Simplex act(int arrow, const Simplex& s) const;  // post-composition
  int last_object(const Simplex& x) const;
};
RectifiedOver rectify_over_category(const FinCategory& a, const CatNerve& na, const OverObject& u,
                                    int d);

// A functor A -> sSet given on simplices.
struct SFunctor {
  std::vector<SSet> value;
  std::function<Simplex(int arrow, const Simplex&)> act;
};
std::optional<std::string> check_sfunctor(const FinCategory& a, const SFunctor& f, int d);
SFunctor representable(const FinCategory& a, int obj);
SFunctor functor_of(std::shared_ptr<const RectifiedOver> r);

struct DayElement {
  int phi;  // a (x) b -> c
  int a, b;
  Simplex s, t;
  auto operator<=>(const DayElement&) const = default;
};
struct DayValue {
  Presented presented;
  std::vector<std::vector<DayElement>> rep;        // rep[n][class]
  std::vector<std::map<DayElement, int>> class_of;  // per degree
  int cls(int n, const DayElement& e) const { return class_of[n].at(e); }
};
DayValue day_convolution(const SMCat& a, const SFunctor& f, const SFunctor& g, int c, int d);

// The Day convolution of y(a) and y(b) at c against hom(a (x) b, c).
std::optional<std::string> representable_day_failure(const SMCat& m, int a, int b, int c, int d);

struct LaxityReport {
  int checked_day = 0;
  int checked_box = 0;
  std::optional<std::string> failure;
};
// Both composites of the laxity and colaxity maps at c, checked on every simplex through d.
LaxityReport check_laxity(const SMCat& a, const OverObject& u, const OverObject& v, int c, int d);

// The comma poset of a tree map against the pullback of envelopes over the slice.
struct EnvComparison {
  std::vector<int> comma_counts;     // nondegenerate cells of the comma nerve
  std::vector<int> pullback_counts;  // nondegenerate cells of the pullback nerve
  int comma_components = 0;
  int pullback_components = 0;
  int pullback_objects = 0;
  int pullback_iso_classes = 0;
  bool isomorphic = false;
  bool reflection_isomorphic = false;  // poset reflection of the pullback against the comma poset
  std::string finding;  // empty when the nerves agree cellwise
};
EnvComparison compare_with_envelope(const Operad& p, const Tree& t, const TreeMap& alpha, int c,
                                    int d);

int connected_components(const SSet& x);

}  // namespace dendro
