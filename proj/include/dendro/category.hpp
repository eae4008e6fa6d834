#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dendro {

struct Arrow {
  int src = 0;
  int tgt = 0;
  std::string name;
};

// A finite category. Composition is a callback so large generated categories
// need not tabulate every composable pair; compose(g, f) is g after f.
struct FinCategory {
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::vector<int> identity;
  std::function<int(int, int)> compose;

  int num_objects() const { return static_cast<int>(objects.size()); }
  int num_arrows() const { return static_cast<int>(arrows.size()); }
  bool is_identity(int f) const { return identity[arrows[f].src] == f; }
  const std::vector<int>& hom(int a, int b) const;
  const std::vector<int>& arrows_into(int b) const { return into_[b]; }
  const std::vector<int>& arrows_from(int a) const { return from_[a]; }
  void finalize();  // builds the hom index

 private:
  std::vector<std::vector<std::vector<int>>> homs_;
  std::vector<std::vector<int>> into_;
  std::vector<std::vector<int>> from_;
};

// Table-backed category: comps[{g,f}] = g after f for every composable pair.
FinCategory table_category(std::vector<std::string> objects, std::vector<Arrow> arrows,
                           std::vector<int> identity, std::map<std::pair<int, int>, int> comps);
std::optional<std::string> check_category(const FinCategory& c);

FinCategory total_order(int n);  // the poset [n] = {0 < 1 < ... < n}
FinCategory cyclic_group(int n);  // one object, Z/n

struct Functor {
  std::vector<int> obj;
  std::vector<int> arrow;
};
std::optional<std::string> check_functor(const FinCategory& a, const FinCategory& b,
                                         const Functor& f);

// Slice A/a: objects are arrows x -> a, morphisms commuting triangles.
struct Slice {
  FinCategory cat;
  std::vector<int> over;        // object -> arrow of A
  std::vector<int> underlying;  // arrow -> arrow of A
};
Slice slice(const FinCategory& a, int obj);

// Strict fiber product of categories over a common base.
struct CategoryPullback {
  FinCategory cat;
  std::vector<std::pair<int, int>> obj_pairs;
  std::vector<std::pair<int, int>> arrow_pairs;
};
CategoryPullback category_pullback(const FinCategory& a, const Functor& fa,
                                   const FinCategory& b, const Functor& fb,
                                   const FinCategory& base);

}  // namespace dendro
