#include "dendro/sset.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace dendro {

Monotone identity_map(int k) {
  Monotone m(k + 1);
  std::iota(m.begin(), m.end(), 0);
  return m;
}

Monotone coface(int k, int i) {
  Monotone m(k);
  for (int a = 0; a < k; ++a) m[a] = a + (a >= i ? 1 : 0);
  return m;
}

Monotone codegeneracy(int k, int i) {
  Monotone m(k + 2);
  for (int a = 0; a <= k + 1; ++a) m[a] = a - (a > i ? 1 : 0);
  return m;
}

Monotone compose_maps(const Monotone& g, const Monotone& f) {
  Monotone h(f.size());
  for (std::size_t a = 0; a < f.size(); ++a) h[a] = g[f[a]];
  return h;
}

std::vector<Monotone> surjections(int k, int m) {
  std::vector<Monotone> out;
  if (m > k || m < 0) return out;
  Monotone cur(k + 1, 0);
  std::function<void(int)> go = [&](int a) {
    if (a == k + 1) {
      if (cur[k] == m) out.push_back(cur);
      return;
    }
    int prev = cur[a - 1];
    for (int step = 0; step <= 1; ++step) {
      int v = prev + step;
      if (v > m || m - v > k - a) continue;
      cur[a] = v;
      go(a + 1);
    }
  };
  if (k == 0) return {Monotone{0}};
  go(1);
  return out;
}

std::vector<Monotone> injections(int k, int m) {
  std::vector<Monotone> out;
  Monotone cur;
  std::function<void(int)> go = [&](int lo) {
    if (static_cast<int>(cur.size()) == k + 1) {
      out.push_back(cur);
      return;
    }
    for (int v = lo; v <= m; ++v) {
      cur.push_back(v);
      go(v + 1);
      cur.pop_back();
    }
  };
  go(0);
  return out;
}

Simplex nondeg(int cell, int m) { return Simplex{cell, identity_map(m)}; }

int SSet::add_cell(int m, std::vector<Simplex> fs, std::string label) {
  if (static_cast<int>(faces.size()) <= m) {
    faces.resize(m + 1);
    labels.resize(m + 1);
  }
  faces[m].push_back(std::move(fs));
  labels[m].push_back(std::move(label));
  return static_cast<int>(faces[m].size()) - 1;
}

std::vector<int> SSet::counts() const {
  std::vector<int> c;
  for (const auto& f : faces) c.push_back(static_cast<int>(f.size()));
  return c;
}

Simplex apply_op(const SSet& x, const Simplex& s, const Monotone& theta) {
  Monotone phi = compose_maps(s.deg, theta);
  Monotone image = phi;
  image.erase(std::unique(image.begin(), image.end()), image.end());
  Monotone eps(phi.size());
  for (std::size_t a = 0, j = 0; a < phi.size(); ++a) {
    while (image[j] != phi[a]) ++j;
    eps[a] = static_cast<int>(j);
  }
  int m = s.base_dim();
  int p = static_cast<int>(image.size()) - 1;
  Simplex base;
  if (p == m) {
    base = nondeg(s.cell, m);
  } else {
    int j = 0;
    while (j < static_cast<int>(image.size()) && image[j] == j) ++j;
    if (m > x.top_dim() || s.cell >= x.count(m))
      throw std::out_of_range("cell outside the stored presentation");
    const Simplex& z = x.faces[m][s.cell][j];
    Monotone delta(image.size());
    for (std::size_t a = 0; a < image.size(); ++a) delta[a] = image[a] - (image[a] > j ? 1 : 0);
    base = apply_op(x, z, delta);
  }
  return Simplex{base.cell, compose_maps(base.deg, eps)};
}

Simplex face(const SSet& x, const Simplex& s, int i) { return apply_op(x, s, coface(s.dim(), i)); }

Simplex degen(const Simplex& s, int i) {
  return Simplex{s.cell, compose_maps(s.deg, codegeneracy(s.dim(), i))};
}

std::vector<Simplex> simplices(const SSet& x, int k) {
  std::vector<Simplex> out;
  for (int m = 0; m <= std::min(k, x.top_dim()); ++m)
    for (const Monotone& sigma : surjections(k, m))
      for (int c = 0; c < x.count(m); ++c) out.push_back(Simplex{c, sigma});
  return out;
}

std::optional<std::string> check_sset(const SSet& x) {
  for (int m = 1; m <= x.top_dim(); ++m)
    for (int c = 0; c < x.count(m); ++c) {
      const auto& fs = x.faces[m][c];
      if (static_cast<int>(fs.size()) != m + 1)
        return "cell " + std::to_string(c) + " of dimension " + std::to_string(m) +
               " has the wrong number of faces";
      for (const Simplex& f : fs)
        if (f.dim() != m - 1 || f.base_dim() < 0 || f.cell >= x.count(f.base_dim()))
          return "cell " + std::to_string(c) + " of dimension " + std::to_string(m) +
                 " has a malformed face";
    }
  for (int m = 2; m <= x.top_dim(); ++m)
    for (int c = 0; c < x.count(m); ++c) {
      Simplex s = nondeg(c, m);
      for (int j = 1; j <= m; ++j)
        for (int i = 0; i < j; ++i)
          if (face(x, face(x, s, j), i) != face(x, face(x, s, i), j - 1))
            return "face identity d" + std::to_string(i) + "d" + std::to_string(j) +
                   " fails on cell " + std::to_string(c) + " of dimension " + std::to_string(m);
    }
  return std::nullopt;
}

long long euler_characteristic(const SSet& x) {
  long long e = 0;
  for (int m = 0; m <= x.top_dim(); ++m) e += (m % 2 ? -1 : 1) * static_cast<long long>(x.count(m));
  return e;
}

Simplex apply_map(const SSet& target, const SSetMap& f, const Simplex& s) {
  return apply_op(target, f.image.at(s.base_dim()).at(s.cell), s.deg);
}

std::optional<std::string> check_map(const SSet& source, const SSet& target, const SSetMap& f) {
  for (int m = 0; m <= source.top_dim(); ++m) {
    if (m >= static_cast<int>(f.image.size()) ||
        static_cast<int>(f.image[m].size()) != source.count(m))
      return "map has no image for every cell of dimension " + std::to_string(m);
    for (int c = 0; c < source.count(m); ++c) {
      const Simplex& y = f.image[m][c];
      if (y.dim() != m || y.base_dim() > target.top_dim() || y.cell >= target.count(y.base_dim()))
        return "image of cell " + std::to_string(c) + " of dimension " + std::to_string(m) +
               " is malformed";
    }
  }
  for (int m = 1; m <= source.top_dim(); ++m)
    for (int c = 0; c < source.count(m); ++c)
      for (int i = 0; i <= m; ++i)
        if (apply_map(target, f, source.faces[m][c][i]) != face(target, f.image[m][c], i))
          return "map does not commute with d" + std::to_string(i) + " on cell " +
                 std::to_string(c) + " of dimension " + std::to_string(m);
  return std::nullopt;
}

SSetMap identity_sset_map(const SSet& x) {
  SSetMap f;
  for (int m = 0; m <= x.top_dim(); ++m) {
    f.image.emplace_back();
    for (int c = 0; c < x.count(m); ++c) f.image[m].push_back(nondeg(c, m));
  }
  return f;
}

SSetMap compose_sset_maps(const SSet& c, const SSetMap& g, const SSetMap& f) {
  SSetMap h;
  for (const auto& level : f.image) {
    h.image.emplace_back();
    for (const Simplex& s : level) h.image.back().push_back(apply_map(c, g, s));
  }
  return h;
}

Presented build_sset(const Presentation& p) {
  Presented out;
  int d = static_cast<int>(p.size.size()) - 1;
  out.sset.truncation = d;
  out.normal.resize(d + 1);
  out.element.resize(d + 1);
  out.sset.faces.resize(d + 1);
  out.sset.labels.resize(d + 1);
  for (int k = 0; k <= d; ++k) {
    for (int x = 0; x < p.size[k]; ++x) {
      std::optional<Simplex> normal;
      for (int i = 0; i < k && !normal; ++i) {
        int y = p.face(k, x, i);
        if (p.degen(k - 1, y, i) == x) {
          const Simplex& ny = out.normal[k - 1][y];
          normal = Simplex{ny.cell, compose_maps(ny.deg, codegeneracy(k - 1, i))};
        }
      }
      if (!normal) {
        std::vector<Simplex> fs;
        for (int i = 0; i <= k && k > 0; ++i) fs.push_back(out.normal[k - 1][p.face(k, x, i)]);
        int c = out.sset.add_cell(k, std::move(fs), std::to_string(x));
        out.element[k].push_back(x);
        normal = nondeg(c, k);
      }
      out.normal[k].push_back(*normal);
    }
  }
  while (out.sset.faces.size() > 1 && out.sset.faces.back().empty()) {
    out.sset.faces.pop_back();
    out.sset.labels.pop_back();
  }
  return out;
}

std::optional<std::string> check_poset(const FinPoset& p) {
  for (int a = 0; a < p.n; ++a) {
    if (!p.leq[a][a]) return "not reflexive at " + std::to_string(a);
    for (int b = 0; b < p.n; ++b) {
      if (a != b && p.leq[a][b] && p.leq[b][a])
        return "not antisymmetric at " + std::to_string(a) + "," + std::to_string(b);
      if (!p.leq[a][b]) continue;
      for (int c = 0; c < p.n; ++c)
        if (p.leq[b][c] && !p.leq[a][c])
          return "not transitive at " + std::to_string(a) + "," + std::to_string(b) + "," +
                 std::to_string(c);
    }
  }
  return std::nullopt;
}

FinPoset chain_poset(int n) {
  FinPoset p;
  p.n = n + 1;
  p.leq.assign(n + 1, std::vector<char>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    p.labels.push_back(std::to_string(i));
    for (int j = i; j <= n; ++j) p.leq[i][j] = 1;
  }
  return p;
}

Simplex PosetNerve::simplex_of(const std::vector<int>& weak) const {
  std::vector<int> strict;
  Monotone deg;
  for (int x : weak) {
    if (strict.empty() || strict.back() != x) strict.push_back(x);
    deg.push_back(static_cast<int>(strict.size()) - 1);
  }
  auto it = index.find(strict);
  if (it == index.end()) throw std::out_of_range("not a chain of the nerve");
  return Simplex{it->second, deg};
}

std::vector<int> PosetNerve::chain_of(const Simplex& s) const {
  const auto& base = chains[s.base_dim()][s.cell];
  std::vector<int> out;
  for (int j : s.deg) out.push_back(base[j]);
  return out;
}

PosetNerve nerve_subcomplex(const FinPoset& p,
                            const std::function<bool(const std::vector<int>&)>& keep) {
  PosetNerve nv;
  std::vector<std::vector<int>> level;
  for (int a = 0; a < p.n; ++a)
    if (keep({a})) level.push_back({a});
  for (int m = 0; !level.empty(); ++m) {
    nv.chains.emplace_back();
    for (const auto& ch : level) {
      std::vector<Simplex> fs;
      for (int i = 0; i <= m && m > 0; ++i) {
        std::vector<int> f = ch;
        f.erase(f.begin() + i);
        fs.push_back(nondeg(nv.index.at(f), m - 1));
      }
      std::string label;
      for (std::size_t i = 0; i < ch.size(); ++i)
        label += (i ? "<" : "") + (p.labels.empty() ? std::to_string(ch[i]) : p.labels[ch[i]]);
      nv.index[ch] = nv.sset.add_cell(m, std::move(fs), label);
      nv.chains[m].push_back(ch);
    }
    std::vector<std::vector<int>> next;
    for (const auto& ch : level)
      for (int b = 0; b < p.n; ++b)
        if (b != ch.back() && p.leq[ch.back()][b]) {
          auto ext = ch;
          ext.push_back(b);
          if (keep(ext)) next.push_back(ext);
        }
    level = std::move(next);
  }
  return nv;
}

PosetNerve nerve_poset(const FinPoset& p) {
  return nerve_subcomplex(p, [](const std::vector<int>&) { return true; });
}

PosetNerve simplex(int n) { return nerve_poset(chain_poset(n)); }

PosetNerve boundary_sset(int n) {
  return nerve_subcomplex(chain_poset(n),
                          [n](const std::vector<int>& ch) { return static_cast<int>(ch.size()) <= n; });
}

PosetNerve horn_sset(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("horn index out of range");
  return nerve_subcomplex(chain_poset(n), [n, k](const std::vector<int>& ch) {
    int len = static_cast<int>(ch.size());
    if (len == n + 1) return false;
    if (len == n && std::find(ch.begin(), ch.end(), k) == ch.end()) return false;
    return true;
  });
}

Simplex CatNerve::simplex_of(int start, const std::vector<int>& arrows) const {
  std::vector<int> key{start};
  Monotone deg{0};
  for (int f : arrows) {
    if (!is_identity[f]) key.push_back(f);
    deg.push_back(static_cast<int>(key.size()) - 1);
  }
  auto it = index.find(key);
  if (it == index.end()) throw std::out_of_range("chain beyond the nerve's truncation");
  return Simplex{it->second, deg};
}

std::vector<int> CatNerve::arrows_of(const Simplex& s, int* start) const {
  const auto& base = chains[s.base_dim()][s.cell];
  *start = base[0];
  std::vector<int> out;
  int obj = base[0];
  for (int j = 1; j <= s.dim(); ++j) {
    if (s.deg[j] == s.deg[j - 1]) {
      out.push_back(identity[obj]);
    } else {
      int f = base[s.deg[j]];
      out.push_back(f);
      obj = arrow_target[f];
    }
  }
  return out;
}

CatNerve nerve_category(const FinCategory& c, int d) {
  CatNerve nv;
  nv.identity = c.identity;
  for (const Arrow& a : c.arrows) nv.arrow_target.push_back(a.tgt);
  nv.is_identity.assign(c.num_arrows(), 0);
  for (int i : c.identity) nv.is_identity[i] = 1;
  nv.sset.truncation = d;
  std::vector<std::vector<int>> level;
  for (int x = 0; x < c.num_objects(); ++x) level.push_back({x});
  for (int m = 0; m <= d && !level.empty(); ++m) {
    nv.chains.emplace_back();
    for (const auto& ch : level) {
      std::vector<Simplex> fs;
      if (m > 0) {
        std::vector<int> arrows(ch.begin() + 1, ch.end());
        for (int i = 0; i <= m; ++i) {
          int start = ch[0];
          std::vector<int> f;
          if (i == 0) {
            start = c.arrows[arrows[0]].tgt;
            f.assign(arrows.begin() + 1, arrows.end());
          } else if (i == m) {
            f.assign(arrows.begin(), arrows.end() - 1);
          } else {
            f = arrows;
            f[i - 1] = c.compose(arrows[i], arrows[i - 1]);
            f.erase(f.begin() + i);
          }
          fs.push_back(nv.simplex_of(start, f));
        }
      }
      std::string label = c.objects[ch[0]];
      for (std::size_t i = 1; i < ch.size(); ++i) label += " " + c.arrows[ch[i]].name;
      nv.index[ch] = nv.sset.add_cell(m, std::move(fs), label);
      nv.chains[m].push_back(ch);
    }
    std::vector<std::vector<int>> next;
    for (const auto& ch : level) {
      int end = ch.size() == 1 ? ch[0] : c.arrows[ch.back()].tgt;
      for (int f : c.arrows_from(end))
        if (!nv.is_identity[f]) {
          auto ext = ch;
          ext.push_back(f);
          next.push_back(ext);
        }
    }
    level = std::move(next);
  }
  return nv;
}

namespace {

// Collapses the degeneracies shared by every component of a tuple of k-simplices.
std::pair<std::vector<Simplex>, Monotone> split_common(const std::vector<Simplex>& tuple) {
  int k = tuple.front().dim();
  Monotone rho(k + 1, 0);
  for (int j = 0; j < k; ++j) {
    bool shared = true;
    for (const Simplex& x : tuple)
      if (x.deg[j] != x.deg[j + 1]) shared = false;
    rho[j + 1] = rho[j] + (shared ? 0 : 1);
  }
  std::vector<Simplex> reduced;
  for (const Simplex& x : tuple) {
    Monotone d(rho.back() + 1);
    for (int j = 0; j <= k; ++j) d[rho[j]] = x.deg[j];
    reduced.push_back(Simplex{x.cell, d});
  }
  return {reduced, rho};
}

bool is_nondegenerate_tuple(const std::vector<Simplex>& tuple) {
  int k = tuple.front().dim();
  for (int j = 0; j < k; ++j) {
    bool shared = true;
    for (const Simplex& x : tuple)
      if (x.deg[j] != x.deg[j + 1]) shared = false;
    if (shared) return false;
  }
  return true;
}

void register_cell(Combined& c, int k, const std::vector<Simplex>& tuple,
                   const std::vector<const SSet*>& factors) {
  std::vector<Simplex> fs;
  for (int i = 0; i <= k && k > 0; ++i) {
    std::vector<Simplex> f;
    for (std::size_t a = 0; a < tuple.size(); ++a) f.push_back(face(*factors[a], tuple[a], i));
    fs.push_back(c.simplex_of(f));
  }
  if (static_cast<int>(c.parts.size()) <= k) c.parts.resize(k + 1);
  c.index[tuple] = c.sset.add_cell(k, std::move(fs));
  c.parts[k].push_back(tuple);
}

void check_truncation(const SSet& x, int d) {
  if (x.truncation >= 0 && d > x.truncation)
    throw std::out_of_range("requested dimension " + std::to_string(d) +
                            " exceeds the truncation " + std::to_string(x.truncation));
}

}  // namespace

Simplex Combined::simplex_of(const std::vector<Simplex>& tuple) const {
  auto [reduced, rho] = split_common(tuple);
  auto it = index.find(reduced);
  if (it == index.end()) throw std::out_of_range("tuple outside the combined presentation");
  return Simplex{it->second, rho};
}

std::vector<Simplex> Combined::tuple_of(const Simplex& s) const {
  std::vector<Simplex> out;
  for (const Simplex& x : parts[s.base_dim()][s.cell])
    out.push_back(Simplex{x.cell, compose_maps(x.deg, s.deg)});
  return out;
}

Combined product(const std::vector<const SSet*>& factors, int d) {
  if (factors.empty()) throw std::invalid_argument("product of no factors");
  for (const SSet* x : factors) check_truncation(*x, d);
  Combined c;
  c.sset.truncation = d;
  for (int k = 0; k <= d; ++k) {
    std::vector<std::vector<Simplex>> lists;
    for (const SSet* x : factors) lists.push_back(simplices(*x, k));
    bool any_empty = false;
    for (const auto& l : lists) any_empty |= l.empty();
    if (any_empty) break;
    std::vector<std::size_t> pos(lists.size(), 0);
    bool added = false;
    while (true) {
      std::vector<Simplex> tuple;
      for (std::size_t a = 0; a < lists.size(); ++a) tuple.push_back(lists[a][pos[a]]);
      if (is_nondegenerate_tuple(tuple)) {
        register_cell(c, k, tuple, factors);
        added = true;
      }
      int a = static_cast<int>(lists.size()) - 1;
      while (a >= 0 && ++pos[a] == lists[a].size()) pos[a--] = 0;
      if (a < 0) break;
    }
    if (!added) break;
  }
  return c;
}

Combined fiber_product(const SSet& x, const SSetMap& f, const SSet& y, const SSetMap& g,
                       const SSet& base, int d) {
  check_truncation(x, d);
  check_truncation(y, d);
  check_truncation(base, d);
  Combined c;
  c.sset.truncation = d;
  std::vector<const SSet*> factors{&x, &y};
  for (int k = 0; k <= d; ++k) {
    std::map<Simplex, std::vector<Simplex>> over;
    for (const Simplex& s : simplices(x, k)) over[apply_map(base, f, s)].push_back(s);
    bool added = false;
    for (const Simplex& t : simplices(y, k)) {
      auto it = over.find(apply_map(base, g, t));
      if (it == over.end()) continue;
      for (const Simplex& s : it->second) {
        std::vector<Simplex> tuple{s, t};
        if (is_nondegenerate_tuple(tuple)) {
          register_cell(c, k, tuple, factors);
          added = true;
        }
      }
    }
    if (!added) break;
  }
  return c;
}

namespace {

// Iterated refinement of cell classes by face and coface incidence, shared between
// both simplicial sets so that classes are comparable.
std::vector<std::vector<std::vector<int>>> refine_classes(const std::vector<const SSet*>& xs, int d) {
  std::vector<std::vector<std::vector<int>>> cls(xs.size());
  for (std::size_t s = 0; s < xs.size(); ++s) {
    cls[s].resize(d + 1);
    for (int m = 0; m <= d; ++m) cls[s][m].assign(xs[s]->count(m), m);
  }
  int classes = d + 1;
  while (true) {
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<std::vector<int>>> next(xs.size());
    std::vector<std::vector<std::vector<std::vector<std::vector<int>>>>> cof(xs.size());
    for (std::size_t s = 0; s < xs.size(); ++s) {
      cof[s].resize(d + 1);
      for (int m = 0; m <= d; ++m) cof[s][m].assign(xs[s]->count(m), {});
      for (int m = 1; m <= d; ++m)
        for (int c = 0; c < xs[s]->count(m); ++c)
          for (int i = 0; i <= m; ++i) {
            const Simplex& f = xs[s]->faces[m][c][i];
            std::vector<int> code{i, cls[s][m][c]};
            code.insert(code.end(), f.deg.begin(), f.deg.end());
            cof[s][f.base_dim()][f.cell].push_back(code);
          }
    }
    for (std::size_t s = 0; s < xs.size(); ++s) {
      next[s].resize(d + 1);
      for (int m = 0; m <= d; ++m)
        for (int c = 0; c < xs[s]->count(m); ++c) {
          std::vector<int> key{cls[s][m][c]};
          if (m > 0)
            for (const Simplex& f : xs[s]->faces[m][c]) {
              key.push_back(cls[s][f.base_dim()][f.cell]);
              key.insert(key.end(), f.deg.begin(), f.deg.end());
              key.push_back(-1);
            }
          auto co = cof[s][m][c];
          std::sort(co.begin(), co.end());
          for (const auto& t : co) {
            key.push_back(-2);
            key.insert(key.end(), t.begin(), t.end());
          }
          auto [it, fresh] = ids.emplace(key, static_cast<int>(ids.size()));
          (void)fresh;
          next[s][m].push_back(it->second);
        }
    }
    int now = static_cast<int>(ids.size());
    cls = std::move(next);
    if (now == classes) break;
    classes = now;
  }
  return cls;
}

}  // namespace

std::optional<std::vector<std::vector<int>>> find_isomorphism(const SSet& a, const SSet& b, int d) {
  d = std::min(d, std::max(a.top_dim(), b.top_dim()));
  for (int m = 0; m <= d + 1; ++m)
    if (m <= d && a.count(m) != b.count(m)) return std::nullopt;
  auto cls = refine_classes({&a, &b}, d);
  std::vector<std::vector<int>> map(d + 1), used(d + 1);
  for (int m = 0; m <= d; ++m) {
    map[m].assign(a.count(m), -1);
    used[m].assign(b.count(m), 0);
    std::vector<int> ca = cls[0][m], cb = cls[1][m];
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return std::nullopt;
  }
  std::vector<std::pair<int, int>> order;
  for (int m = 0; m <= d; ++m)
    for (int c = 0; c < a.count(m); ++c) order.push_back({m, c});
  std::vector<std::vector<std::vector<int>>> by_class(d + 1);
  std::function<bool(std::size_t)> go = [&](std::size_t k) {
    if (k == order.size()) return true;
    auto [m, c] = order[k];
    for (int y = 0; y < b.count(m); ++y) {
      if (used[m][y] || cls[1][m][y] != cls[0][m][c]) continue;
      bool ok = true;
      for (int i = 0; i <= m && m > 0 && ok; ++i) {
        const Simplex& fa = a.faces[m][c][i];
        const Simplex& fb = b.faces[m][y][i];
        ok = fa.deg == fb.deg && map[fa.base_dim()][fa.cell] == fb.cell;
      }
      if (!ok) continue;
      map[m][c] = y;
      used[m][y] = 1;
      if (go(k + 1)) return true;
      map[m][c] = -1;
      used[m][y] = 0;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return map;
}

}  // namespace dendro
