#include "dendro/monoidal.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dendro {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

int arrow_between(const FinCategory& c, int a, int b) {
  const auto& h = c.hom(a, b);
  if (h.size() != 1) throw std::logic_error("expected a unique arrow");
  return h[0];
}

// Tensor on a thin category from a monotone operation on objects.
SMCat thin_smcat(std::string name, FinCategory cat, const std::function<int(int, int)>& op,
                 int unit) {
  SMCat m;
  m.name = std::move(name);
  int n = cat.num_objects(), k = cat.num_arrows();
  m.tensor_obj.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m.tensor_obj[a][b] = op(a, b);
  m.tensor_arrow.assign(k, std::vector<int>(k));
  for (int f = 0; f < k; ++f)
    for (int g = 0; g < k; ++g) {
      const Arrow &af = cat.arrows[f], &ag = cat.arrows[g];
      m.tensor_arrow[f][g] =
          arrow_between(cat, m.tensor_obj[af.src][ag.src], m.tensor_obj[af.tgt][ag.tgt]);
    }
  m.symmetry.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m.symmetry[a][b] = cat.identity[m.tensor_obj[a][b]];
  m.unit = unit;
  m.cat = std::move(cat);
  return m;
}

// Composable chain of arrows from start along a strict chain of vertices of [p].
std::vector<int> composites(const FinCategory& a, int start, const std::vector<int>& arrows,
                            const std::vector<int>& verts, int* first) {
  std::vector<int> objs{start};
  for (int f : arrows) objs.push_back(a.arrows[f].tgt);
  auto path = [&](int i, int j) {
    int g = a.identity[objs[i]];
    for (int k = i; k < j; ++k) g = a.compose(arrows[k], g);
    return g;
  };
  *first = objs[verts[0]];
  std::vector<int> out;
  for (std::size_t j = 1; j < verts.size(); ++j) out.push_back(path(verts[j - 1], verts[j]));
  return out;
}

OverObject over_chain(const FinCategory& a, const CatNerve& na, int start,
                      const std::vector<int>& arrows, const PosetNerve& shape) {
  OverObject u;
  u.x = shape.sset;
  u.h.image.resize(shape.chains.size());
  for (std::size_t m = 0; m < shape.chains.size(); ++m)
    for (const auto& verts : shape.chains[m]) {
      int first = 0;
      auto fs = composites(a, start, arrows, verts, &first);
      u.h.image[m].push_back(na.simplex_of(first, fs));
    }
  return u;
}

}  // namespace

std::optional<std::string> check_smcat(const SMCat& m) {
  const FinCategory& c = m.cat;
  if (auto e = check_category(c)) return "category: " + *e;
  int n = c.num_objects(), k = c.num_arrows();
  auto T = [&](int f, int g) { return m.tensor_arrow[f][g]; };
  for (int f = 0; f < k; ++f)
    for (int g = 0; g < k; ++g) {
      const Arrow &af = c.arrows[f], &ag = c.arrows[g], &t = c.arrows[T(f, g)];
      if (t.src != m.tensor_obj[af.src][ag.src] || t.tgt != m.tensor_obj[af.tgt][ag.tgt])
        return "tensor of " + af.name + ", " + ag.name + " has the wrong ends";
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (T(c.identity[a], c.identity[b]) != c.identity[m.tensor_obj[a][b]])
        return "tensor does not preserve identities";
  for (int f = 0; f < k; ++f)
    for (int g = 0; g < k; ++g)
      for (int f2 : c.arrows_from(c.arrows[f].tgt))
        for (int g2 : c.arrows_from(c.arrows[g].tgt))
          if (c.compose(T(f2, g2), T(f, g)) != T(c.compose(f2, f), c.compose(g2, g)))
            return "tensor is not functorial at " + c.arrows[f].name + ", " + c.arrows[g].name;
  for (int f = 0; f < k; ++f)
    for (int g = 0; g < k; ++g)
      for (int h = 0; h < k; ++h)
        if (T(T(f, g), h) != T(f, T(g, h))) return "tensor is not strictly associative";
  int iu = c.identity[m.unit];
  for (int f = 0; f < k; ++f)
    if (T(iu, f) != f || T(f, iu) != f) return "unit law fails at " + c.arrows[f].name;
  auto S = [&](int a, int b) { return m.symmetry[a][b]; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Arrow& s = c.arrows[S(a, b)];
      if (s.src != m.tensor_obj[a][b] || s.tgt != m.tensor_obj[b][a])
        return "symmetry has the wrong ends";
      if (c.compose(S(b, a), S(a, b)) != c.identity[m.tensor_obj[a][b]])
        return "symmetry is not involutive";
      for (int x = 0; x < n; ++x) {
        int lhs = S(a, m.tensor_obj[b][x]);
        int rhs = c.compose(T(c.identity[b], S(a, x)), T(S(a, b), c.identity[x]));
        if (lhs != rhs) return "hexagon fails";
      }
    }
  for (int a = 0; a < n; ++a)
    if (S(m.unit, a) != c.identity[a]) return "symmetry with the unit is not the identity";
  for (int f = 0; f < k; ++f)
    for (int g = 0; g < k; ++g) {
      const Arrow &af = c.arrows[f], &ag = c.arrows[g];
      if (c.compose(S(af.tgt, ag.tgt), T(f, g)) != c.compose(T(g, f), S(af.src, ag.src)))
        return "symmetry is not natural";
    }
  return std::nullopt;
}

SMCat terminal_smcat() {
  return thin_smcat("terminal", total_order(0), [](int, int) { return 0; }, 0);
}

SMCat discrete_z2_smcat() {
  FinCategory c = table_category({"0", "1"}, {{0, 0, "id0"}, {1, 1, "id1"}}, {0, 1},
                                 {{{0, 0}, 0}, {{1, 1}, 1}});
  return thin_smcat("discrete-z2", std::move(c), [](int a, int b) { return a ^ b; }, 0);
}

SMCat cyclic_z2_smcat() {
  SMCat m;
  m.name = "cyclic-z2";
  m.cat = cyclic_group(2);
  m.tensor_obj = {{0}};
  m.tensor_arrow = {{0, 1}, {1, 0}};
  m.unit = 0;
  m.symmetry = {{0}};
  return m;
}

SMCat max_order_smcat() {
  return thin_smcat("max", total_order(1), [](int a, int b) { return std::max(a, b); }, 0);
}

SMCat truncated_sum_smcat() {
  return thin_smcat("truncated-sum", total_order(2), [](int a, int b) { return std::min(a + b, 2); },
                    0);
}

std::vector<SMCat> sample_smcats() {
  return {terminal_smcat(), discrete_z2_smcat(), cyclic_z2_smcat(), max_order_smcat(),
          truncated_sum_smcat()};
}

std::optional<std::string> check_over(const OverObject& u, const CatNerve& na) {
  return check_map(u.x, na.sset, u.h);
}

OverObject simplex_over(const FinCategory& a, const CatNerve& na, int start,
                        const std::vector<int>& arrows) {
  return over_chain(a, na, start, arrows, simplex(static_cast<int>(arrows.size())));
}

OverObject point_over(const CatNerve& na, int obj) {
  OverObject u;
  u.x.faces = {{{}}};
  u.h.image = {{na.simplex_of(obj, {})}};
  return u;
}

OverObject random_over(std::mt19937& rng, const FinCategory& a, const CatNerve& na, int max_dim) {
  int p = std::uniform_int_distribution<int>(0, max_dim)(rng);
  int start = std::uniform_int_distribution<int>(0, a.num_objects() - 1)(rng);
  std::vector<int> arrows;
  int obj = start;
  for (int i = 0; i < p; ++i) {
    const auto& out = a.arrows_from(obj);
    int f = out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)];
    arrows.push_back(f);
    obj = a.arrows[f].tgt;
  }
  int shape = p == 0 ? 0 : std::uniform_int_distribution<int>(0, 2)(rng);
  if (shape == 1) return over_chain(a, na, start, arrows, boundary_sset(p));
  if (shape == 2)
    return over_chain(a, na, start, arrows,
                      horn_sset(p, std::uniform_int_distribution<int>(0, p)(rng)));
  return over_chain(a, na, start, arrows, simplex(p));
}

Boxed boxtimes(const SMCat& m, const CatNerve& na, const OverObject& u, const OverObject& v,
               int d) {
  Boxed b;
  b.product = product({&u.x, &v.x}, d);
  b.over.x = b.product.sset;
  const SSet& x = b.over.x;
  b.over.h.image.resize(x.faces.size());
  for (int k = 0; k < static_cast<int>(x.faces.size()); ++k)
    for (int cell = 0; cell < x.count(k); ++cell) {
      auto tuple = b.product.tuple_of(nondeg(cell, k));
      int sa = 0, sb = 0;
      auto fa = na.arrows_of(apply_map(na.sset, u.h, tuple[0]), &sa);
      auto fb = na.arrows_of(apply_map(na.sset, v.h, tuple[1]), &sb);
      std::vector<int> arrows;
      for (int i = 0; i < k; ++i) arrows.push_back(m.tensor_arrow[fa[i]][fb[i]]);
      b.over.h.image[k].push_back(na.simplex_of(m.tensor_obj[sa][sb], arrows));
    }
  return b;
}

int RectifiedOver::last_object(const Simplex& x) const {
  int start = 0;
  auto fs = na.arrows_of(apply_map(na.sset, over.h, x), &start);
  return fs.empty() ? start : cat.arrows[fs.back()].tgt;
}

std::pair<Simplex, int> RectifiedOver::split(int a, const Simplex& s) const {
  auto tuple = value[a].tuple_of(s);
  int start = 0;
  auto fs = nerves[a].arrows_of(tuple[1], &start);
  int last = fs.empty() ? start : slices[a].cat.arrows[fs.back()].tgt;
  return {tuple[0], slices[a].over[last]};
}

Simplex RectifiedOver::join(int a, const Simplex& x, int final_arrow) const {
  int start = 0;
  auto fs = na.arrows_of(apply_map(na.sset, over.h, x), &start);
  int n = static_cast<int>(fs.size());
  std::vector<int> objs(n + 1);
  int g = final_arrow;
  objs[n] = object_of[a].at(g);
  for (int j = n - 1; j >= 0; --j) {
    g = cat.compose(g, fs[j]);
    objs[j] = object_of[a].at(g);
  }
  std::vector<int> arrows;
  for (int j = 0; j < n; ++j) arrows.push_back(arrow_of[a].at({fs[j], objs[j + 1]}));
  return value[a].simplex_of({x, nerves[a].simplex_of(objs[0], arrows)});
}

Simplex RectifiedOver::act(int arrow, const Simplex& s) const {
  const Arrow& g = cat.arrows[arrow];
  auto [x, u] = split(g.src, s);
  return join(g.tgt, x, cat.compose(arrow, u));
}

RectifiedOver rectify_over_category(const FinCategory& a, const CatNerve& na, const OverObject& u,
                                    int d) {
  RectifiedOver r;
  r.cat = a;
  r.na = na;
  r.over = u;
  for (int obj = 0; obj < a.num_objects(); ++obj) {
    Slice s = slice(a, obj);
    std::map<int, int> objects;
    for (int x = 0; x < s.cat.num_objects(); ++x) objects[s.over[x]] = x;
    std::map<std::pair<int, int>, int> arrows;
    for (int f = 0; f < s.cat.num_arrows(); ++f) arrows[{s.underlying[f], s.cat.arrows[f].tgt}] = f;
    CatNerve nv = nerve_category(s.cat, d);
    SSetMap forget;
    forget.image.resize(nv.chains.size());
    for (std::size_t m = 0; m < nv.chains.size(); ++m)
      for (std::size_t cell = 0; cell < nv.chains[m].size(); ++cell) {
        int start = 0;
        auto fs = nv.arrows_of(nondeg(static_cast<int>(cell), static_cast<int>(m)), &start);
        std::vector<int> under;
        for (int f : fs) under.push_back(s.underlying[f]);
        forget.image[m].push_back(na.simplex_of(a.arrows[s.over[start]].src, under));
      }
    r.value.push_back(fiber_product(u.x, u.h, nv.sset, forget, na.sset, d));
    r.slices.push_back(std::move(s));
    r.object_of.push_back(std::move(objects));
    r.arrow_of.push_back(std::move(arrows));
    r.nerves.push_back(std::move(nv));
    r.forget.push_back(std::move(forget));
  }
  return r;
}

std::optional<std::string> check_sfunctor(const FinCategory& a, const SFunctor& f, int d) {
  for (int g = 0; g < a.num_arrows(); ++g) {
    const Arrow& ar = a.arrows[g];
    const SSet &src = f.value[ar.src], &tgt = f.value[ar.tgt];
    for (int k = 0; k <= d; ++k)
      for (const Simplex& s : simplices(src, k)) {
        Simplex t = f.act(g, s);
        if (t.dim() != k) return "arrow " + ar.name + " changes dimension";
        if (a.is_identity(g) && t != s) return "identity " + ar.name + " acts nontrivially";
        for (int i = 0; k > 0 && i <= k; ++i)
          if (face(tgt, t, i) != f.act(g, face(src, s, i)))
            return "arrow " + ar.name + " does not commute with faces";
        if (k < d)
          for (int i = 0; i <= k; ++i)
            if (degen(t, i) != f.act(g, degen(s, i)))
              return "arrow " + ar.name + " does not commute with degeneracies";
        for (int h : a.arrows_from(ar.tgt))
          if (f.act(h, t) != f.act(a.compose(h, g), s)) return "composition is not respected";
      }
  }
  return std::nullopt;
}

SFunctor representable(const FinCategory& a, int obj) {
  SFunctor f;
  for (int x = 0; x < a.num_objects(); ++x) {
    SSet s;
    s.faces = {std::vector<std::vector<Simplex>>(a.hom(obj, x).size())};
    f.value.push_back(std::move(s));
  }
  const FinCategory* cat = &a;
  f.act = [cat, obj](int g, const Simplex& s) {
    const Arrow& ar = cat->arrows[g];
    int h = cat->compose(g, cat->hom(obj, ar.src)[s.cell]);
    const auto& out = cat->hom(obj, ar.tgt);
    int cell = static_cast<int>(std::find(out.begin(), out.end(), h) - out.begin());
    return Simplex{cell, s.deg};
  };
  return f;
}

SFunctor functor_of(std::shared_ptr<const RectifiedOver> r) {
  SFunctor f;
  for (const Combined& c : r->value) f.value.push_back(c.sset);
  f.act = [r](int g, const Simplex& s) { return r->act(g, s); };
  return f;
}

DayValue day_convolution(const SMCat& m, const SFunctor& f, const SFunctor& g, int c, int d) {
  const FinCategory& cat = m.cat;
  int n_obj = cat.num_objects();
  DayValue out;
  out.rep.resize(d + 1);
  out.class_of.resize(d + 1);
  for (int k = 0; k <= d; ++k) {
    std::vector<std::vector<Simplex>> fs(n_obj), gs(n_obj);
    for (int a = 0; a < n_obj; ++a) {
      fs[a] = simplices(f.value[a], k);
      gs[a] = simplices(g.value[a], k);
    }
    std::map<DayElement, int> index;
    std::vector<DayElement> elems;
    for (int a = 0; a < n_obj; ++a)
      for (int b = 0; b < n_obj; ++b)
        for (int phi : cat.hom(m.tensor_obj[a][b], c))
          for (const Simplex& s : fs[a])
            for (const Simplex& t : gs[b]) {
              DayElement e{phi, a, b, s, t};
              index[e] = static_cast<int>(elems.size());
              elems.push_back(e);
            }
    UnionFind uf(static_cast<int>(elems.size()));
    for (int a = 0; a < n_obj; ++a)
      for (int b = 0; b < n_obj; ++b)
        for (int fa : cat.arrows_from(a))
          for (int gb : cat.arrows_from(b)) {
            int a2 = cat.arrows[fa].tgt, b2 = cat.arrows[gb].tgt;
            int fg = m.tensor_arrow[fa][gb];
            for (int phi : cat.hom(m.tensor_obj[a2][b2], c))
              for (const Simplex& s : fs[a])
                for (const Simplex& t : gs[b]) {
                  int lhs = index.at(DayElement{cat.compose(phi, fg), a, b, s, t});
                  int rhs = index.at(DayElement{phi, a2, b2, f.act(fa, s), g.act(gb, t)});
                  uf.unite(lhs, rhs);
                }
          }
    std::map<int, int> cls;
    for (int i = 0; i < static_cast<int>(elems.size()); ++i) {
      int root = uf.find(i);
      auto it = cls.find(root);
      if (it == cls.end()) {
        it = cls.emplace(root, static_cast<int>(out.rep[k].size())).first;
        out.rep[k].push_back(elems[i]);
      }
      out.class_of[k][elems[i]] = it->second;
    }
  }
  Presentation p;
  for (int k = 0; k <= d; ++k) p.size.push_back(static_cast<int>(out.rep[k].size()));
  const DayValue* dv = &out;
  p.face = [dv, &f, &g](int k, int x, int i) {
    const DayElement& e = dv->rep[k][x];
    DayElement r{e.phi, e.a, e.b, face(f.value[e.a], e.s, i), face(g.value[e.b], e.t, i)};
    return dv->cls(k - 1, r);
  };
  p.degen = [dv](int k, int x, int i) {
    const DayElement& e = dv->rep[k][x];
    return dv->cls(k + 1, DayElement{e.phi, e.a, e.b, degen(e.s, i), degen(e.t, i)});
  };
  out.presented = build_sset(p);
  return out;
}

std::optional<std::string> representable_day_failure(const SMCat& m, int a, int b, int c, int d) {
  const FinCategory& cat = m.cat;
  SFunctor ya = representable(cat, a), yb = representable(cat, b);
  DayValue day = day_convolution(m, ya, yb, c, d);
  const auto& target = cat.hom(m.tensor_obj[a][b], c);
  for (int k = 0; k <= d; ++k) {
    std::map<int, int> image;  // class -> arrow a (x) b -> c
    for (const auto& [e, cls] : day.class_of[k]) {
      int f = cat.hom(a, e.a)[e.s.cell], g = cat.hom(b, e.b)[e.t.cell];
      int h = cat.compose(e.phi, m.tensor_arrow[f][g]);
      auto [it, fresh] = image.emplace(cls, h);
      if (!fresh && it->second != h)
        return "degree " + std::to_string(k) + ": a class meets two arrows";
    }
    std::vector<int> hit;
    for (const auto& [cls, h] : image) hit.push_back(h);
    std::sort(hit.begin(), hit.end());
    std::vector<int> want = target;
    std::sort(want.begin(), want.end());
    if (hit != want)
      return "degree " + std::to_string(k) + ": " + std::to_string(hit.size()) +
             " classes against " + std::to_string(want.size()) + " arrows";
  }
  return std::nullopt;
}

LaxityReport check_laxity(const SMCat& m, const OverObject& u, const OverObject& v, int c, int d) {
  LaxityReport rep;
  const FinCategory& cat = m.cat;
  CatNerve na = nerve_category(cat, d);
  auto ru = std::make_shared<const RectifiedOver>(rectify_over_category(cat, na, u, d));
  auto rv = std::make_shared<const RectifiedOver>(rectify_over_category(cat, na, v, d));
  Boxed box = boxtimes(m, na, u, v, d);
  RectifiedOver rb = rectify_over_category(cat, na, box.over, d);
  SFunctor fu = functor_of(ru), fv = functor_of(rv);
  DayValue day = day_convolution(m, fu, fv, c, d);
  const SSet& target = rb.value[c].sset;

  auto laxity = [&](const DayElement& e) {
    auto [x, uu] = ru->split(e.a, e.s);
    auto [y, vv] = rv->split(e.b, e.t);
    Simplex xy = box.product.simplex_of({x, y});
    return rb.join(c, xy, cat.compose(e.phi, m.tensor_arrow[uu][vv]));
  };
  auto colaxity = [&](int k, const Simplex& s) {
    auto [xy, w] = rb.split(c, s);
    auto parts = box.product.tuple_of(xy);
    int a = ru->last_object(parts[0]), b = rv->last_object(parts[1]);
    DayElement e{w, a, b, ru->join(a, parts[0], cat.identity[a]),
                 rv->join(b, parts[1], cat.identity[b])};
    return day.cls(k, e);
  };

  for (int k = 0; k <= d; ++k) {
    std::map<int, Simplex> image;
    for (const auto& [e, cls] : day.class_of[k]) {
      Simplex s = laxity(e);
      auto [it, fresh] = image.emplace(cls, s);
      if (!fresh && it->second != s) {
        rep.failure = "laxity is not constant on a class in degree " + std::to_string(k);
        return rep;
      }
    }
    for (int cls = 0; cls < static_cast<int>(day.rep[k].size()); ++cls) {
      ++rep.checked_day;
      const Simplex& s = image.at(cls);
      if (colaxity(k, s) != cls) {
        rep.failure = "colaxity after laxity moves a class in degree " + std::to_string(k);
        return rep;
      }
      for (int i = 0; k > 0 && i <= k; ++i) {
        const DayElement& e = day.rep[k][cls];
        DayElement fe{e.phi, e.a, e.b, face(fu.value[e.a], e.s, i), face(fv.value[e.b], e.t, i)};
        if (face(target, s, i) != laxity(fe)) {
          rep.failure = "laxity does not commute with faces in degree " + std::to_string(k);
          return rep;
        }
      }
    }
    for (const Simplex& s : simplices(target, k)) {
      ++rep.checked_box;
      if (laxity(day.rep[k][colaxity(k, s)]) != s) {
        rep.failure = "laxity after colaxity moves a simplex in degree " + std::to_string(k);
        return rep;
      }
    }
  }
  return rep;
}

int connected_components(const SSet& x) {
  int n = x.count(0);
  UnionFind uf(n);
  for (int e = 0; e < x.count(1); ++e) uf.unite(x.faces[1][e][0].cell, x.faces[1][e][1].cell);
  int k = 0;
  for (int i = 0; i < n; ++i) k += uf.find(i) == i;
  return k;
}

EnvComparison compare_with_envelope(const Operad& p, const Tree& t, const TreeMap& alpha, int c,
                                    int d) {
  EnvComparison out;
  CommaPoset cp = comma_poset(p, t, alpha, c);
  if (cp.violation) {
    out.finding = "comma order is not a poset: " + *cp.violation;
    return out;
  }
  if (p.arity_bound >= 0) {
    out.finding = "arity-truncated operad: envelope composition is partial, comparison skipped";
    return out;
  }
  int bound = std::max(1, p.max_arity());
  Operad omega = free_operad_on_tree(t);
  EnvCategory et = envelope(omega, bound), ep = envelope(p, bound);
  Functor f = envelope_functor(et, ep, extend_tree_map(omega, t, p, alpha));
  Slice s = env_slice(ep, c);
  Functor forget;
  for (int x = 0; x < s.cat.num_objects(); ++x) forget.obj.push_back(ep.cat.arrows[s.over[x]].src);
  forget.arrow = s.underlying;
  CategoryPullback pb = category_pullback(et.cat, f, s.cat, forget, ep.cat);
  out.pullback_objects = pb.cat.num_objects();

  PosetNerve comma_nerve = nerve_poset(cp.poset);
  CatNerve pb_nerve = nerve_category(pb.cat, d);
  for (int k = 0; k <= d; ++k) {
    out.comma_counts.push_back(comma_nerve.sset.count(k));
    out.pullback_counts.push_back(pb_nerve.sset.count(k));
  }
  out.comma_components = connected_components(comma_nerve.sset);
  out.pullback_components = connected_components(pb_nerve.sset);
  out.isomorphic = out.comma_counts == out.pullback_counts &&
                   find_isomorphism(comma_nerve.sset, pb_nerve.sset, d).has_value();

  const FinCategory& q = pb.cat;
  int n = q.num_objects();
  UnionFind iso(n);
  for (int g = 0; g < q.num_arrows(); ++g) {
    const Arrow& ar = q.arrows[g];
    for (int h : q.hom(ar.tgt, ar.src))
      if (q.is_identity(q.compose(h, g)) && q.is_identity(q.compose(g, h))) iso.unite(ar.src, ar.tgt);
  }
  std::map<int, int> class_index;
  for (int x = 0; x < n; ++x) class_index.emplace(iso.find(x), static_cast<int>(class_index.size()));
  out.pullback_iso_classes = static_cast<int>(class_index.size());
  FinPoset refl;
  refl.n = out.pullback_iso_classes;
  refl.leq.assign(refl.n, std::vector<char>(refl.n, 0));
  for (int i = 0; i < refl.n; ++i) refl.leq[i][i] = 1;
  for (const Arrow& ar : q.arrows)
    refl.leq[class_index.at(iso.find(ar.src))][class_index.at(iso.find(ar.tgt))] = 1;
  bool reflection_poset = !check_poset(refl).has_value();
  if (reflection_poset && refl.n == cp.poset.n) {
    PosetNerve rn = nerve_poset(refl);
    out.reflection_isomorphic = find_isomorphism(rn.sset, comma_nerve.sset, d).has_value();
  }

  if (!out.isomorphic) {
    auto list = [](const std::vector<int>& v) {
      std::string s = "[";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s + "]";
    };
    out.finding = "comma nerve cells " + list(out.comma_counts) + " vs envelope pullback " +
                  list(out.pullback_counts) + "; " + std::to_string(cp.poset.n) +
                  " comma objects vs " + std::to_string(out.pullback_iso_classes) +
                  " isomorphism classes of " + std::to_string(out.pullback_objects) +
                  " pullback objects; components " + std::to_string(out.comma_components) + " vs " +
                  std::to_string(out.pullback_components) + "; reflection " +
                  (out.reflection_isomorphic ? "agrees" : "differs");
  }
  return out;
}

}  // namespace dendro
