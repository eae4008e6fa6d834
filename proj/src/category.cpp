#include "dendro/category.hpp"

#include <memory>
#include <stdexcept>

namespace dendro {

const std::vector<int>& FinCategory::hom(int a, int b) const {
  static const std::vector<int> empty;
  if (homs_.empty()) return empty;
  return homs_[a][b];
}

void FinCategory::finalize() {
  int n = num_objects();
  homs_.assign(n, std::vector<std::vector<int>>(n));
  into_.assign(n, {});
  from_.assign(n, {});
  for (int f = 0; f < num_arrows(); ++f) {
    homs_[arrows[f].src][arrows[f].tgt].push_back(f);
    into_[arrows[f].tgt].push_back(f);
    from_[arrows[f].src].push_back(f);
  }
}

FinCategory table_category(std::vector<std::string> objects, std::vector<Arrow> arrows,
                           std::vector<int> identity, std::map<std::pair<int, int>, int> comps) {
  FinCategory c;
  c.objects = std::move(objects);
  c.arrows = std::move(arrows);
  c.identity = std::move(identity);
  auto table = std::make_shared<std::map<std::pair<int, int>, int>>(std::move(comps));
  c.compose = [table](int g, int f) {
    auto it = table->find({g, f});
    if (it == table->end())
      throw std::runtime_error("composite of arrows " + std::to_string(g) + " and " +
                               std::to_string(f) + " is not tabulated");
    return it->second;
  };
  c.finalize();
  return c;
}

std::optional<std::string> check_category(const FinCategory& c) {
  if (static_cast<int>(c.identity.size()) != c.num_objects()) return "identity table size";
  for (int f = 0; f < c.num_arrows(); ++f) {
    const Arrow& a = c.arrows[f];
    if (a.src < 0 || a.src >= c.num_objects() || a.tgt < 0 || a.tgt >= c.num_objects())
      return "arrow " + a.name + " has an unknown endpoint";
  }
  for (int x = 0; x < c.num_objects(); ++x) {
    int i = c.identity[x];
    if (i < 0 || i >= c.num_arrows() || c.arrows[i].src != x || c.arrows[i].tgt != x)
      return "identity of " + c.objects[x] + " is not an endomorphism";
  }
  for (int f = 0; f < c.num_arrows(); ++f) {
    const Arrow& a = c.arrows[f];
    if (c.compose(c.identity[a.tgt], f) != f || c.compose(f, c.identity[a.src]) != f)
      return "unit law fails at " + a.name;
    for (int g : c.arrows_from(a.tgt)) {
      int gf = 0;
      try {
        gf = c.compose(g, f);
      } catch (const std::exception& e) {
        return std::string(e.what());
      }
      if (gf < 0 || gf >= c.num_arrows() || c.arrows[gf].src != a.src ||
          c.arrows[gf].tgt != c.arrows[g].tgt)
        return "composite " + c.arrows[g].name + " . " + a.name + " has the wrong endpoints";
      for (int h : c.arrows_from(c.arrows[g].tgt)) {
        if (c.compose(h, gf) != c.compose(c.compose(h, g), f))
          return "associativity fails at " + c.arrows[h].name + ", " + c.arrows[g].name + ", " +
                 a.name;
      }
    }
  }
  return std::nullopt;
}

FinCategory total_order(int n) {
  std::vector<std::string> objects;
  for (int i = 0; i <= n; ++i) objects.push_back(std::to_string(i));
  std::vector<Arrow> arrows;
  std::vector<std::vector<int>> id(n + 1, std::vector<int>(n + 1, -1));
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      id[i][j] = static_cast<int>(arrows.size());
      arrows.push_back({i, j, std::to_string(i) + "<=" + std::to_string(j)});
    }
  FinCategory c;
  c.objects = objects;
  c.arrows = arrows;
  for (int i = 0; i <= n; ++i) c.identity.push_back(id[i][i]);
  auto ids = std::make_shared<std::vector<std::vector<int>>>(id);
  auto ar = std::make_shared<std::vector<Arrow>>(arrows);
  c.compose = [ids, ar](int g, int f) { return (*ids)[(*ar)[f].src][(*ar)[g].tgt]; };
  c.finalize();
  return c;
}

FinCategory cyclic_group(int n) {
  FinCategory c;
  c.objects = {"*"};
  for (int k = 0; k < n; ++k) c.arrows.push_back({0, 0, "g^" + std::to_string(k)});
  c.identity = {0};
  c.compose = [n](int g, int f) { return (g + f) % n; };
  c.finalize();
  return c;
}

std::optional<std::string> check_functor(const FinCategory& a, const FinCategory& b,
                                         const Functor& f) {
  if (static_cast<int>(f.obj.size()) != a.num_objects() ||
      static_cast<int>(f.arrow.size()) != a.num_arrows())
    return "functor table sizes";
  for (int x = 0; x < a.num_objects(); ++x)
    if (f.arrow[a.identity[x]] != b.identity[f.obj[x]])
      return "identity of " + a.objects[x] + " not preserved";
  for (int g = 0; g < a.num_arrows(); ++g) {
    const Arrow& ar = a.arrows[g];
    const Arrow& im = b.arrows[f.arrow[g]];
    if (im.src != f.obj[ar.src] || im.tgt != f.obj[ar.tgt])
      return "endpoints of " + ar.name + " not preserved";
    for (int h : a.arrows_from(ar.tgt))
      if (f.arrow[a.compose(h, g)] != b.compose(f.arrow[h], f.arrow[g]))
        return "composite " + a.arrows[h].name + " . " + ar.name + " not preserved";
  }
  return std::nullopt;
}

Slice slice(const FinCategory& a, int obj) {
  Slice s;
  std::map<int, int> object_of;  // arrow of A -> slice object
  for (int g : a.arrows_into(obj)) {
    object_of[g] = s.cat.num_objects();
    s.cat.objects.push_back(a.arrows[g].name);
    s.over.push_back(g);
  }
  auto index = std::make_shared<std::map<std::pair<int, int>, int>>();
  for (int x = 0; x < s.cat.num_objects(); ++x) {
    int g = s.over[x];
    for (int m : a.arrows_into(a.arrows[g].src)) {
      int src = object_of.at(a.compose(g, m));
      (*index)[{m, x}] = s.cat.num_arrows();
      s.cat.arrows.push_back({src, x, a.arrows[m].name + "/" + a.arrows[g].name});
      s.underlying.push_back(m);
    }
  }
  for (int x = 0; x < s.cat.num_objects(); ++x)
    s.cat.identity.push_back(index->at({a.identity[a.arrows[s.over[x]].src], x}));
  auto under = std::make_shared<std::vector<int>>(s.underlying);
  auto tgts = std::make_shared<std::vector<Arrow>>(s.cat.arrows);
  auto base_compose = a.compose;
  s.cat.compose = [index, under, tgts, base_compose](int g, int f) {
    return index->at({base_compose((*under)[g], (*under)[f]), (*tgts)[g].tgt});
  };
  s.cat.finalize();
  return s;
}

CategoryPullback category_pullback(const FinCategory& a, const Functor& fa,
                                   const FinCategory& b, const Functor& fb,
                                   const FinCategory& base) {
  CategoryPullback p;
  std::map<std::pair<int, int>, int> obj_index;
  std::vector<std::vector<int>> b_over(base.num_objects());
  for (int y = 0; y < b.num_objects(); ++y) b_over[fb.obj[y]].push_back(y);
  for (int x = 0; x < a.num_objects(); ++x)
    for (int y : b_over[fa.obj[x]]) {
      obj_index[{x, y}] = static_cast<int>(p.obj_pairs.size());
      p.obj_pairs.push_back({x, y});
      p.cat.objects.push_back(a.objects[x] + "|" + b.objects[y]);
    }
  std::vector<std::vector<int>> b_arrows_over(base.num_arrows());
  for (int g = 0; g < b.num_arrows(); ++g) b_arrows_over[fb.arrow[g]].push_back(g);
  auto index = std::make_shared<std::map<std::pair<int, int>, int>>();
  for (int f = 0; f < a.num_arrows(); ++f)
    for (int g : b_arrows_over[fa.arrow[f]]) {
      int src = obj_index.at({a.arrows[f].src, b.arrows[g].src});
      int tgt = obj_index.at({a.arrows[f].tgt, b.arrows[g].tgt});
      (*index)[{f, g}] = static_cast<int>(p.arrow_pairs.size());
      p.arrow_pairs.push_back({f, g});
      p.cat.arrows.push_back({src, tgt, a.arrows[f].name + "|" + b.arrows[g].name});
    }
  for (auto [x, y] : p.obj_pairs) p.cat.identity.push_back(index->at({a.identity[x], b.identity[y]}));
  auto pairs = std::make_shared<std::vector<std::pair<int, int>>>(p.arrow_pairs);
  auto ca = a.compose;
  auto cb = b.compose;
  p.cat.compose = [index, pairs, ca, cb](int g, int f) {
    auto [g1, g2] = (*pairs)[g];
    auto [f1, f2] = (*pairs)[f];
    return index->at({ca(g1, f1), cb(g2, f2)});
  };
  p.cat.finalize();
  return p;
}

}  // namespace dendro
