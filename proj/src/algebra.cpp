#include "dendro/algebra.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "dendro/omega.hpp"

namespace dendro {

namespace {

// Calls fn on every tuple drawn from the given lists.
template <class T, class Fn>
void for_each_tuple(const std::vector<std::vector<T>>& lists, Fn&& fn) {
  for (const auto& l : lists)
    if (l.empty()) return;
  std::vector<std::size_t> pos(lists.size(), 0);
  std::vector<T> cur;
  while (true) {
    cur.clear();
    for (std::size_t a = 0; a < lists.size(); ++a) cur.push_back(lists[a][pos[a]]);
    if (!fn(cur)) return;
    int a = static_cast<int>(lists.size()) - 1;
    while (a >= 0 && ++pos[a] == lists[a].size()) pos[a--] = 0;
    if (a < 0) return;
  }
}

std::vector<int> range(int n) {
  std::vector<int> r(n);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

bool nondegenerate_tuple(const std::vector<Simplex>& xs, int k) {
  if (xs.empty()) return k == 0;
  for (int j = 0; j < k; ++j) {
    bool shared = true;
    for (const Simplex& x : xs)
      if (x.deg[j] != x.deg[j + 1]) shared = false;
    if (shared) return false;
  }
  return true;
}

std::string op_name(const Operad& p, int op) { return p.ops[op].name; }

}  // namespace

std::optional<std::string> check_algebra(const SAlgebra& F, int d) {
  const Operad& P = *F.operad;
  auto inputs_of = [&](int p, int k) {
    std::vector<std::vector<Simplex>> lists;
    for (int c : P.ops[p].inputs) lists.push_back(simplices(F.value[c], k));
    return lists;
  };
  for (int k = 0; k <= d; ++k) {
    for (int p = 0; p < static_cast<int>(P.ops.size()); ++p) {
      std::optional<std::string> bad;
      const SSet& out = F.value[P.ops[p].output];
      for_each_tuple(inputs_of(p, k), [&](const std::vector<Simplex>& xs) {
        if (!nondegenerate_tuple(xs, k)) return true;
        Simplex y = F.act(p, xs, k);
        if (y.dim() != k) {
          bad = op_name(P, p) + " changes dimension";
          return false;
        }
        for (int j = 0; j <= k && k > 0; ++j) {
          std::vector<Simplex> fs;
          for (std::size_t i = 0; i < xs.size(); ++i)
            fs.push_back(face(F.value[P.ops[p].inputs[i]], xs[i], j));
          if (F.act(p, fs, k - 1) != face(out, y, j)) {
            bad = op_name(P, p) + " does not commute with d" + std::to_string(j);
            return false;
          }
        }
        for (int j = 0; j <= k && k < d; ++j) {
          std::vector<Simplex> ds;
          for (const Simplex& x : xs) ds.push_back(degen(x, j));
          if (F.act(p, ds, k + 1) != degen(y, j)) {
            bad = op_name(P, p) + " does not commute with s" + std::to_string(j);
            return false;
          }
        }
        if (p == P.units[P.ops[p].output] && y != xs[0]) {
          bad = "unit " + op_name(P, p) + " acts nontrivially";
          return false;
        }
        for (int i = 0; i + 1 < P.arity(p); ++i) {
          std::vector<Simplex> sw = xs;
          std::swap(sw[i], sw[i + 1]);
          if (F.act(P.swaps.at({p, i}), sw, k) != y) {
            bad = "equivariance fails for " + op_name(P, p) + " at slot " + std::to_string(i);
            return false;
          }
        }
        return true;
      });
      if (bad) return bad;
    }
    for (const auto& [key, r] : P.comp) {
      auto [p, i, q] = key;
      int m = P.arity(q);
      std::optional<std::string> bad;
      for_each_tuple(inputs_of(r, k), [&](const std::vector<Simplex>& xs) {
        if (!nondegenerate_tuple(xs, k)) return true;
        std::vector<Simplex> inner(xs.begin() + i, xs.begin() + i + m);
        std::vector<Simplex> outer(xs.begin(), xs.begin() + i);
        outer.push_back(F.act(q, inner, k));
        outer.insert(outer.end(), xs.begin() + i + m, xs.end());
        if (F.act(r, xs, k) != F.act(p, outer, k)) {
          bad = "associativity fails for " + op_name(P, p) + " o_" + std::to_string(i) + " " +
                op_name(P, q);
          return false;
        }
        return true;
      });
      if (bad) return bad;
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_poset_algebra(const PosetAlgebra& A) {
  const Operad& P = *A.operad;
  if (A.value.size() != P.colors.size()) return "one poset per color";
  for (std::size_t c = 0; c < A.value.size(); ++c)
    if (auto bad = check_poset(A.value[c])) return P.colors[c] + ": " + *bad;
  auto elements = [&](int p) {
    std::vector<std::vector<int>> lists;
    for (int c : P.ops[p].inputs) lists.push_back(range(A.value[c].n));
    return lists;
  };
  for (int p = 0; p < static_cast<int>(P.ops.size()); ++p) {
    const FinPoset& out = A.value[P.ops[p].output];
    std::optional<std::string> bad;
    for_each_tuple(elements(p), [&](const std::vector<int>& xs) {
      int y = A.act(p, xs);
      if (y < 0 || y >= out.n) {
        bad = op_name(P, p) + " leaves its target poset";
        return false;
      }
      if (p == P.units[P.ops[p].output] && y != xs[0]) {
        bad = "unit " + op_name(P, p) + " acts nontrivially";
        return false;
      }
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const FinPoset& in = A.value[P.ops[p].inputs[i]];
        for (int z = 0; z < in.n; ++z) {
          if (z == xs[i] || !in.leq[xs[i]][z]) continue;
          std::vector<int> ys = xs;
          ys[i] = z;
          if (!out.leq[y][A.act(p, ys)]) {
            bad = op_name(P, p) + " is not monotone in slot " + std::to_string(i);
            return false;
          }
        }
      }
      for (int i = 0; i + 1 < P.arity(p); ++i) {
        std::vector<int> sw = xs;
        std::swap(sw[i], sw[i + 1]);
        if (A.act(P.swaps.at({p, i}), sw) != y) {
          bad = "equivariance fails for " + op_name(P, p) + " at slot " + std::to_string(i);
          return false;
        }
      }
      return true;
    });
    if (bad) return bad;
  }
  for (const auto& [key, r] : P.comp) {
    auto [p, i, q] = key;
    int m = P.arity(q);
    std::optional<std::string> bad;
    for_each_tuple(elements(r), [&](const std::vector<int>& xs) {
      std::vector<int> inner(xs.begin() + i, xs.begin() + i + m);
      std::vector<int> outer(xs.begin(), xs.begin() + i);
      outer.push_back(A.act(q, inner));
      outer.insert(outer.end(), xs.begin() + i + m, xs.end());
      if (A.act(r, xs) != A.act(p, outer)) {
        bad = "associativity fails for " + op_name(P, p) + " o_" + std::to_string(i) + " " +
              op_name(P, q);
        return false;
      }
      return true;
    });
    if (bad) return bad;
  }
  return std::nullopt;
}

SAlgebra nerve_algebra(const PosetAlgebra& A) {
  auto nerves = std::make_shared<std::vector<PosetNerve>>();
  for (const FinPoset& p : A.value) nerves->push_back(nerve_poset(p));
  SAlgebra F;
  F.operad = A.operad;
  for (const PosetNerve& n : *nerves) F.value.push_back(n.sset);
  F.nerves = nerves;
  auto act = A.act;
  auto P = A.operad;
  F.act = [nerves, act, P](int p, const std::vector<Simplex>& xs, int k) {
    std::vector<std::vector<int>> chains;
    for (std::size_t i = 0; i < xs.size(); ++i)
      chains.push_back((*nerves)[P->ops[p].inputs[i]].chain_of(xs[i]));
    std::vector<int> out(k + 1);
    std::vector<int> elems(xs.size());
    for (int j = 0; j <= k; ++j) {
      for (std::size_t i = 0; i < xs.size(); ++i) elems[i] = chains[i][j];
      out[j] = act(p, elems);
    }
    return (*nerves)[P->ops[p].output].simplex_of(out);
  };
  return F;
}

std::optional<std::string> check_poset_algebra_map(const PosetAlgebra& a, const PosetAlgebra& b,
                                                   const PosetAlgebraMap& f) {
  const Operad& P = *a.operad;
  if (f.map.size() != a.value.size()) return "one map per color";
  for (std::size_t c = 0; c < a.value.size(); ++c) {
    if (static_cast<int>(f.map[c].size()) != a.value[c].n) return "map size at " + P.colors[c];
    for (int x = 0; x < a.value[c].n; ++x)
      for (int y = 0; y < a.value[c].n; ++y)
        if (a.value[c].leq[x][y] && !b.value[c].leq[f.map[c][x]][f.map[c][y]])
          return "map at " + P.colors[c] + " is not monotone";
  }
  for (int p = 0; p < static_cast<int>(P.ops.size()); ++p) {
    std::vector<std::vector<int>> lists;
    for (int c : P.ops[p].inputs) lists.push_back(range(a.value[c].n));
    std::optional<std::string> bad;
    for_each_tuple(lists, [&](const std::vector<int>& xs) {
      std::vector<int> ys;
      for (std::size_t i = 0; i < xs.size(); ++i) ys.push_back(f.map[P.ops[p].inputs[i]][xs[i]]);
      if (f.map[P.ops[p].output][a.act(p, xs)] != b.act(p, ys)) {
        bad = "map does not commute with " + op_name(P, p);
        return false;
      }
      return true;
    });
    if (bad) return bad;
  }
  return std::nullopt;
}

Simplex apply_algebra_map(const SAlgebra& src, const SAlgebra& tgt, const PosetAlgebraMap& f,
                          int color, const Simplex& s) {
  std::vector<int> chain = (*src.nerves)[color].chain_of(s);
  for (int& x : chain) x = f.map[color][x];
  return (*tgt.nerves)[color].simplex_of(chain);
}

PosetAlgebra terminal_algebra(std::shared_ptr<const Operad> p) {
  PosetAlgebra A;
  A.operad = p;
  for (std::size_t c = 0; c < p->colors.size(); ++c) A.value.push_back(chain_poset(0));
  A.act = [](int, const std::vector<int>&) { return 0; };
  return A;
}

PosetAlgebraMap terminal_map(const PosetAlgebra& a) {
  PosetAlgebraMap f;
  for (const FinPoset& p : a.value) f.map.push_back(std::vector<int>(p.n, 0));
  return f;
}

PosetAlgebra product_algebra(const PosetAlgebra& a, const PosetAlgebra& b) {
  PosetAlgebra A;
  A.operad = a.operad;
  std::vector<int> nb;
  for (std::size_t c = 0; c < a.value.size(); ++c) {
    const FinPoset& x = a.value[c];
    const FinPoset& y = b.value[c];
    FinPoset p;
    p.n = x.n * y.n;
    p.leq.assign(p.n, std::vector<char>(p.n, 0));
    for (int i = 0; i < p.n; ++i) {
      p.labels.push_back("(" + (x.labels.empty() ? std::to_string(i / y.n) : x.labels[i / y.n]) +
                         "," + (y.labels.empty() ? std::to_string(i % y.n) : y.labels[i % y.n]) +
                         ")");
      for (int j = 0; j < p.n; ++j)
        p.leq[i][j] = x.leq[i / y.n][j / y.n] && y.leq[i % y.n][j % y.n];
    }
    A.value.push_back(p);
    nb.push_back(y.n);
  }
  auto P = a.operad;
  auto act_a = a.act;
  auto act_b = b.act;
  A.act = [P, act_a, act_b, nb](int p, const std::vector<int>& xs) {
    std::vector<int> xa, xb;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      int n = nb[P->ops[p].inputs[i]];
      xa.push_back(xs[i] / n);
      xb.push_back(xs[i] % n);
    }
    return act_a(p, xa) * nb[P->ops[p].output] + act_b(p, xb);
  };
  return A;
}

PosetAlgebraMap product_projection(const PosetAlgebra& a, const PosetAlgebra& b, int which) {
  PosetAlgebraMap f;
  for (std::size_t c = 0; c < a.value.size(); ++c) {
    int n = b.value[c].n;
    std::vector<int> m;
    for (int i = 0; i < a.value[c].n * n; ++i) m.push_back(which == 0 ? i / n : i % n);
    f.map.push_back(m);
  }
  return f;
}

namespace {

std::uint32_t permute_bits(std::uint32_t x, const std::vector<int>& perm) {
  if (perm.empty()) return x;
  std::uint32_t y = 0;
  for (int i = 0; i < static_cast<int>(perm.size()); ++i)
    if (x >> i & 1) y |= 1u << perm[i];
  return y;
}

std::string set_label(std::uint32_t x) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i)
    if (x >> i & 1) {
      s += (first ? "" : ",") + std::to_string(i);
      first = false;
    }
  return s + "}";
}

}  // namespace

JoinAlgebra join_algebra(std::shared_ptr<const Operad> p, std::vector<std::uint32_t> family,
                         std::vector<std::uint32_t> grading,
                         std::vector<std::vector<int>> twists) {
  JoinAlgebra J;
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  J.family = family;
  J.grading = grading;
  if (twists.empty()) twists.assign(p->ops.size(), {});
  FinPoset poset;
  poset.n = static_cast<int>(family.size());
  poset.leq.assign(poset.n, std::vector<char>(poset.n, 0));
  for (int i = 0; i < poset.n; ++i) {
    poset.labels.push_back(set_label(family[i]));
    for (int j = 0; j < poset.n; ++j) poset.leq[i][j] = (family[i] & ~family[j]) == 0;
  }
  J.algebra.operad = p;
  J.algebra.value.assign(p->colors.size(), poset);
  auto index = std::make_shared<std::map<std::uint32_t, int>>();
  for (int i = 0; i < poset.n; ++i) (*index)[family[i]] = i;
  auto fam = std::make_shared<std::vector<std::uint32_t>>(family);
  auto grad = std::make_shared<std::vector<std::uint32_t>>(grading);
  auto tw = std::make_shared<std::vector<std::vector<int>>>(twists);
  J.algebra.act = [index, fam, grad, tw](int op, const std::vector<int>& xs) {
    std::uint32_t y = (*grad)[op];
    for (int x : xs) y |= permute_bits((*fam)[x], (*tw)[op]);
    auto it = index->find(y);
    return it == index->end() ? -1 : it->second;
  };
  for (const auto& t : twists)
    if (!t.empty()) J.twist = t;
  return J;
}

JoinAlgebra random_join_algebra(std::mt19937& rng, std::shared_ptr<const Operad> p, int ground) {
  const Operad& P = *p;
  int n = static_cast<int>(P.ops.size());
  std::vector<char> unit(n, 0), involution(n, 0);
  for (int u : P.units) unit[u] = 1;
  bool twisting = false, all_involutions = true;
  for (int q = 0; q < n; ++q) {
    if (unit[q] || P.arity(q) != 1) continue;
    auto qq = P.compose(q, 0, q);
    involution[q] = qq && unit[*qq];
    twisting |= involution[q];
    all_involutions &= involution[q] != 0;
  }
  std::vector<int> iota;
  if (twisting && all_involutions) {
    iota.resize(ground);
    std::iota(iota.begin(), iota.end(), 0);
    int a = std::uniform_int_distribution<int>(0, ground - 1)(rng);
    int b = std::uniform_int_distribution<int>(0, ground - 1)(rng);
    std::swap(iota[a], iota[b]);
  }
  std::uint32_t s = std::uniform_int_distribution<std::uint32_t>(0, (1u << ground) - 1)(rng);
  std::vector<std::uint32_t> grading(n, 0);
  std::vector<std::vector<int>> twists(n);
  for (int q = 0; q < n; ++q) {
    if (unit[q]) continue;
    if (twisting) {
      if (!iota.empty() && involution[q]) twists[q] = iota;
    } else {
      grading[q] = s;
    }
  }
  std::vector<std::uint32_t> fam = random_union_closed(rng, ground, 2, iota);
  if (!twisting) {
    std::vector<std::uint32_t> cur = fam;
    for (std::uint32_t x : cur) fam.push_back(x | s);
  }
  JoinAlgebra j = join_algebra(p, fam, grading, twists);
  if (check_poset_algebra(j.algebra)) return join_algebra(p, {0}, std::vector<std::uint32_t>(n, 0));
  return j;
}

std::vector<std::uint32_t> random_union_closed(std::mt19937& rng, int ground, int generators,
                                               const std::vector<int>& involution) {
  std::set<std::uint32_t> fam{0};
  std::uniform_int_distribution<std::uint32_t> pick(1, (1u << ground) - 1);
  std::vector<std::uint32_t> gens;
  for (int g = 0; g < generators; ++g) {
    std::uint32_t x = pick(rng);
    gens.push_back(x);
    if (!involution.empty()) gens.push_back(permute_bits(x, involution));
  }
  for (std::uint32_t g : gens) {
    std::vector<std::uint32_t> cur(fam.begin(), fam.end());
    for (std::uint32_t x : cur) fam.insert(x | g);
  }
  return {fam.begin(), fam.end()};
}

std::pair<JoinAlgebra, PosetAlgebraMap> restrict_join_algebra(const JoinAlgebra& a,
                                                              std::uint32_t w) {
  if (!a.twist.empty()) w |= permute_bits(w, a.twist);
  std::vector<std::uint32_t> fam;
  for (std::uint32_t x : a.family) fam.push_back(x & w);
  std::vector<std::uint32_t> grading;
  for (std::uint32_t g : a.grading) grading.push_back(g & w);
  std::vector<std::vector<int>> twists(a.grading.size());
  if (!a.twist.empty())
    for (std::size_t p = 0; p < twists.size(); ++p)
      if (a.algebra.operad->ops[p].inputs.size() == 1 &&
          a.algebra.operad->units[a.algebra.operad->ops[p].output] != static_cast<int>(p))
        twists[p] = a.twist;
  JoinAlgebra b = join_algebra(a.algebra.operad, fam, grading, twists);
  PosetAlgebraMap f;
  for (std::size_t c = 0; c < a.algebra.value.size(); ++c) {
    std::vector<int> m;
    for (std::uint32_t x : a.family)
      m.push_back(static_cast<int>(std::lower_bound(b.family.begin(), b.family.end(), x & w) -
                                   b.family.begin()));
    f.map.push_back(m);
  }
  return {b, f};
}

TreeAlgebra build_AT(const Tree& t) {
  TreeAlgebra A;
  A.tree = t;
  auto omega = std::make_shared<Operad>(free_operad_on_tree(t));
  A.omega = omega;
  A.subtrees.resize(t.num_edges());
  A.element_of.resize(t.num_edges());
  A.poset.operad = omega;
  for (int e = 0; e < t.num_edges(); ++e) {
    A.subtrees[e] = subtrees_rooted_at(t, e);
    FinPoset p;
    p.n = static_cast<int>(A.subtrees[e].size());
    p.leq.assign(p.n, std::vector<char>(p.n, 0));
    for (int i = 0; i < p.n; ++i) {
      const Subtree& s = A.subtrees[e][i];
      A.element_of[e][s.verts] = i;
      std::string label = "{";
      bool first = true;
      for (int v = 0; v < t.num_vertices(); ++v)
        if (s.verts >> v & 1) {
          label += (first ? "" : ",") + t.names[t.out[v]];
          first = false;
        }
      p.labels.push_back(label + "}");
      for (int j = 0; j < p.n; ++j)
        p.leq[i][j] = (A.subtrees[e][j].verts & ~s.verts) == 0;
    }
    A.poset.value.push_back(p);
  }
  auto base = std::make_shared<std::vector<VertexSet>>();
  for (const Operation& o : omega->ops)
    base->push_back(subtree_with_root_and_leaves(t, o.output, o.inputs)->verts);
  auto subs = std::make_shared<std::vector<std::vector<Subtree>>>(A.subtrees);
  auto elem = std::make_shared<std::vector<std::map<VertexSet, int>>>(A.element_of);
  A.poset.act = [omega, base, subs, elem](int p, const std::vector<int>& xs) {
    VertexSet v = (*base)[p];
    const Operation& o = omega->ops[p];
    for (std::size_t i = 0; i < xs.size(); ++i) v |= (*subs)[o.inputs[i]][xs[i]].verts;
    return (*elem)[o.output].at(v);
  };
  A.nerve = nerve_algebra(A.poset);
  return A;
}

std::vector<std::vector<int>> tree_morphism_action(const TreeMorphism& f, const TreeAlgebra& as,
                                                   const TreeAlgebra& at) {
  std::vector<std::vector<int>> maps;
  for (int e = 0; e < f.source.num_edges(); ++e) {
    std::vector<int> m;
    for (const Subtree& s : as.subtrees[e]) m.push_back(at.element(f.edge_map[e], image_of(f, s)));
    maps.push_back(m);
  }
  return maps;
}

std::optional<std::string> check_tree_morphism_action(const TreeMorphism& f, const TreeAlgebra& as,
                                                      const TreeAlgebra& at,
                                                      const std::vector<std::vector<int>>& maps) {
  for (int e = 0; e < f.source.num_edges(); ++e) {
    const FinPoset& src = as.poset.value[e];
    const FinPoset& tgt = at.poset.value[f.edge_map[e]];
    for (int x = 0; x < src.n; ++x)
      for (int y = 0; y < src.n; ++y)
        if (src.leq[x][y] && !tgt.leq[maps[e][x]][maps[e][y]])
          return "transport at " + f.source.names[e] + " is not monotone";
  }
  const Operad& os = *as.omega;
  for (int p = 0; p < static_cast<int>(os.ops.size()); ++p) {
    const Operation& o = os.ops[p];
    std::vector<int> ls;
    for (int e : o.inputs) ls.push_back(f.edge_map[e]);
    int q = at.omega->op(free_op_name(f.target, f.edge_map[o.output], ls));
    std::vector<std::vector<int>> lists;
    for (int e : o.inputs) lists.push_back(range(as.poset.value[e].n));
    std::optional<std::string> bad;
    for_each_tuple(lists, [&](const std::vector<int>& xs) {
      std::vector<int> ys;
      for (std::size_t i = 0; i < xs.size(); ++i) ys.push_back(maps[o.inputs[i]][xs[i]]);
      if (maps[o.output][as.poset.act(p, xs)] != at.poset.act(q, ys)) {
        bad = "transport does not commute with grafting along " + o.name;
        return false;
      }
      return true;
    });
    if (bad) return bad;
  }
  return std::nullopt;
}

namespace {

struct Canonical {
  std::vector<int> edges;
  int op;
};

// Sorts the edge tuple, moves the operation along, then picks the least
// operation in the orbit of the stabilizer of the sorted tuple.
Canonical canonicalize(const Operad& P, const std::vector<int>& edges, int op) {
  int m = static_cast<int>(edges.size());
  std::vector<int> sigma = range(m);
  std::stable_sort(sigma.begin(), sigma.end(), [&](int a, int b) { return edges[a] < edges[b]; });
  Canonical c;
  for (int k : sigma) c.edges.push_back(edges[k]);
  int base = P.act(op, sigma);
  c.op = base;
  std::vector<int> tau = range(m);
  while (std::next_permutation(tau.begin(), tau.end())) {
    bool stab = true;
    for (int k = 0; k < m; ++k)
      if (c.edges[tau[k]] != c.edges[k]) stab = false;
    if (stab) c.op = std::min(c.op, P.act(base, tau));
  }
  return c;
}

std::string comma_label(const Tree& t, const Operad& P, const CommaObject& o) {
  std::string s = "(";
  for (std::size_t i = 0; i < o.edges.size(); ++i) s += (i ? "," : "") + t.names[o.edges[i]];
  return s + ";" + P.ops[o.op].name + ")";
}

}  // namespace

CommaPoset comma_poset(const Operad& P, const Tree& t, const TreeMap& a, int c) {
  CommaPoset cp;
  int bound = P.arity_bound >= 0 ? P.arity_bound : P.max_arity();
  // Nondecreasing edge tuples of every length up to the arity bound.
  std::vector<std::vector<int>> tuples{{}};
  for (std::size_t at = 0; at < tuples.size(); ++at) {
    if (static_cast<int>(tuples[at].size()) == bound) continue;
    int from = tuples[at].empty() ? 0 : tuples[at].back();
    for (int e = from; e < t.num_edges(); ++e) {
      auto next = tuples[at];
      next.push_back(e);
      tuples.push_back(next);
    }
  }
  for (const auto& es : tuples) {
    std::vector<int> cols;
    for (int e : es) cols.push_back(a.color[e]);
    for (int op : P.with_profile(cols, c)) {
      Canonical k = canonicalize(P, es, op);
      CommaObject o{k.edges, k.op};
      if (!cp.index.count(o)) {
        cp.index[o] = static_cast<int>(cp.objects.size());
        cp.objects.push_back(o);
      }
    }
  }
  int n = static_cast<int>(cp.objects.size());
  cp.poset.n = n;
  cp.poset.leq.assign(n, std::vector<char>(n, 0));
  for (const CommaObject& o : cp.objects) cp.poset.labels.push_back(comma_label(t, P, o));
  for (int hi = 0; hi < n; ++hi) {
    const CommaObject& o = cp.objects[hi];
    std::vector<std::vector<Subtree>> choices;
    for (int e : o.edges) choices.push_back(subtrees_rooted_at(t, e));
    for_each_tuple(choices, [&](const std::vector<Subtree>& rs) {
      std::vector<int> leaves_all, inner;
      try {
        for (const Subtree& r : rs) {
          std::vector<int> ls = subtree_leaves(t, r);
          inner.push_back(eval_subtree(P, t, a, r, ls));
          leaves_all.insert(leaves_all.end(), ls.begin(), ls.end());
        }
        if (P.arity_bound >= 0 && static_cast<int>(leaves_all.size()) > P.arity_bound) return true;
        int op = P.compose_all(o.op, inner);
        Canonical k = canonicalize(P, leaves_all, op);
        auto it = cp.index.find(CommaObject{k.edges, k.op});
        if (it != cp.index.end()) cp.poset.leq[it->second][hi] = 1;
      } catch (const std::exception&) {
        // composite undefined in a truncated operad
      }
      return true;
    });
  }
  cp.violation = check_poset(cp.poset);
  return cp;
}

Rectified rectify_representable(std::shared_ptr<const Operad> p, const Tree& t, const TreeMap& a) {
  Rectified r;
  r.operad = p;
  r.tree = t;
  r.alpha = a;
  for (int c = 0; c < static_cast<int>(p->colors.size()); ++c) {
    r.comma.push_back(comma_poset(*p, t, a, c));
    if (r.comma.back().violation)
      throw std::runtime_error("comma order at " + p->colors[c] + ": " + *r.comma.back().violation);
  }
  r.poset.operad = p;
  for (const CommaPoset& cp : r.comma) r.poset.value.push_back(cp.poset);
  auto comma = std::make_shared<std::vector<CommaPoset>>(r.comma);
  r.poset.act = [p, comma](int q, const std::vector<int>& xs) {
    std::vector<int> edges, ops;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const CommaObject& o = (*comma)[p->ops[q].inputs[i]].objects[xs[i]];
      edges.insert(edges.end(), o.edges.begin(), o.edges.end());
      ops.push_back(o.op);
    }
    Canonical k = canonicalize(*p, edges, p->compose_all(q, ops));
    return (*comma)[p->ops[q].output].index.at(CommaObject{k.edges, k.op});
  };
  r.nerve = nerve_algebra(r.poset);
  return r;
}

namespace {

int edge_depth(const Tree& t, int e) {
  int d = 0;
  while (t.consumer[e] >= 0) {
    e = t.out[t.consumer[e]];
    ++d;
  }
  return d;
}

}  // namespace

int DendrexLayout::top_slot() const {
  const SSet& x = at->nerve_at(tree.root).sset;
  return slot_of[tree.root].at({x.top_dim(), 0});
}

DendrexLayout dendrex_layout(const Operad& P, const Tree& t, const TreeMap& a) {
  DendrexLayout l;
  l.tree = t;
  l.alpha = a;
  auto at = std::make_shared<TreeAlgebra>(build_AT(t));
  l.at = at;
  for (int e = 0; e < t.num_edges(); ++e) {
    const SSet& x = at->nerve_at(e).sset;
    for (int m = 0; m <= x.top_dim(); ++m)
      for (int cell = 0; cell < x.count(m); ++cell) l.slots.push_back({e, m, cell});
  }
  std::vector<int> depth;
  for (int e = 0; e < t.num_edges(); ++e) depth.push_back(edge_depth(t, e));
  std::sort(l.slots.begin(), l.slots.end(), [&](const auto& x, const auto& y) {
    return std::make_tuple(x.dim, -depth[x.edge], x.edge, x.cell) <
           std::make_tuple(y.dim, -depth[y.edge], y.edge, y.cell);
  });
  l.slot_of.resize(t.num_edges());
  for (int s = 0; s < static_cast<int>(l.slots.size()); ++s)
    l.slot_of[l.slots[s].edge][{l.slots[s].dim, l.slots[s].cell}] = s;
  l.grafts_at.resize(l.slots.size());
  for (const Subtree& r : all_subtrees(t)) {
    if (r.verts == 0) continue;
    std::vector<int> ls = subtree_leaves(t, r);
    int op = eval_subtree(P, t, a, r, ls);
    const PosetNerve& target = at->nerve_at(r.root);
    int top = target.sset.top_dim();
    for (int k = 0; k <= (ls.empty() ? 0 : top); ++k) {
      std::vector<std::vector<Simplex>> lists;
      for (int e : ls) lists.push_back(simplices(at->nerve_at(e).sset, k));
      for_each_tuple(lists, [&](const std::vector<Simplex>& us) {
        std::vector<std::vector<int>> chains;
        for (std::size_t i = 0; i < us.size(); ++i) chains.push_back(at->nerve_at(ls[i]).chain_of(us[i]));
        std::vector<int> w;
        for (int j = 0; j <= k; ++j) {
          VertexSet v = r.verts;
          for (std::size_t i = 0; i < us.size(); ++i)
            v |= at->subtrees[ls[i]][chains[i][j]].verts;
          w.push_back(at->element_of[r.root].at(v));
        }
        Simplex ws = target.simplex_of(w);
        if (!ws.nondegenerate()) return true;
        DendrexLayout::Graft g;
        g.target = l.slot(r.root, ws);
        g.op = op;
        g.k = k;
        for (std::size_t i = 0; i < us.size(); ++i) g.inputs.push_back({ls[i], us[i]});
        l.grafts_at[g.target].push_back(static_cast<int>(l.grafts.size()));
        l.grafts.push_back(std::move(g));
        return true;
      });
    }
  }
  return l;
}

Simplex derived_value(const SAlgebra& F, const DendrexLayout& l, const Dendrex& g, int e,
                      const Simplex& u) {
  const Simplex& s = g[l.slot_of[e].at({u.base_dim(), u.cell})];
  return apply_op(F.value[l.alpha.color[e]], s, u.deg);
}

namespace {

bool slot_active(const std::vector<char>* active, int s) {
  return !active || active->empty() || (*active)[s];
}

Simplex graft_value(const SAlgebra& F, const DendrexLayout& l, const Dendrex& g,
                    const DendrexLayout::Graft& gr) {
  std::vector<Simplex> xs;
  for (const auto& [e, u] : gr.inputs) xs.push_back(derived_value(F, l, g, e, u));
  return F.act(gr.op, xs, gr.k);
}

bool graft_inputs_active(const DendrexLayout& l, const DendrexLayout::Graft& gr,
                         const std::vector<char>* active) {
  for (const auto& [e, u] : gr.inputs)
    if (!slot_active(active, l.slot(e, u))) return false;
  return true;
}

// Checks slot s against its faces and grafts, assuming earlier slots are set.
std::optional<std::string> check_slot(const SAlgebra& F, const DendrexLayout& l, const Dendrex& g,
                                      int s, const std::vector<char>* active) {
  const auto& sl = l.slots[s];
  const SSet& value = F.value[l.alpha.color[sl.edge]];
  const SSet& nerve = l.at->nerve_at(sl.edge).sset;
  const Simplex& x = g[s];
  std::string where = "at " + l.tree.names[sl.edge] + " cell " + std::to_string(sl.dim) + ":" +
                      std::to_string(sl.cell);
  if (x.dim() != sl.dim) return "wrong dimension " + where;
  if (sl.dim > 0)
    for (int j = 0; j <= sl.dim; ++j) {
      const Simplex& fu = nerve.faces[sl.dim][sl.cell][j];
      if (!slot_active(active, l.slot(sl.edge, fu))) continue;
      if (face(value, x, j) != derived_value(F, l, g, sl.edge, fu))
        return "face " + std::to_string(j) + " mismatch " + where;
    }
  for (int gi : l.grafts_at[s]) {
    const auto& gr = l.grafts[gi];
    if (!graft_inputs_active(l, gr, active)) continue;
    if (graft_value(F, l, g, gr) != x)
      return "grafting along " + F.operad->ops[gr.op].name + " mismatch " + where;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_dendrex(const SAlgebra& F, const DendrexLayout& l,
                                         const Dendrex& g, const std::vector<char>* active) {
  if (g.size() != l.slots.size()) return "dendrex has the wrong number of slots";
  for (int s = 0; s < static_cast<int>(l.slots.size()); ++s) {
    if (!slot_active(active, s)) continue;
    if (auto bad = check_slot(F, l, g, s, active)) return bad;
  }
  return std::nullopt;
}

std::vector<Dendrex> relative_nerve_dendrices(const SAlgebra& F, const DendrexLayout& l,
                                              const DendrexSearch& opts) {
  std::vector<Dendrex> out;
  const std::vector<char>* active = &opts.active;
  int n = static_cast<int>(l.slots.size());
  Dendrex g(n);
  std::vector<std::vector<Simplex>> all_cache(n);
  std::function<bool(int)> rec = [&](int s) {
    while (s < n && !slot_active(active, s)) ++s;
    if (s == n) {
      out.push_back(g);
      return !(opts.limit && out.size() >= opts.limit);
    }
    const auto& sl = l.slots[s];
    std::vector<Simplex> candidates;
    if (!opts.fixed.empty() && opts.fixed[s]) {
      candidates.push_back(*opts.fixed[s]);
    } else {
      std::optional<Simplex> forced;
      for (int gi : l.grafts_at[s])
        if (graft_inputs_active(l, l.grafts[gi], active)) {
          forced = graft_value(F, l, g, l.grafts[gi]);
          break;
        }
      if (forced)
        candidates.push_back(*forced);
      else
        candidates = simplices(F.value[l.alpha.color[sl.edge]], sl.dim);
    }
    for (const Simplex& x : candidates) {
      g[s] = x;
      if (check_slot(F, l, g, s, active)) continue;
      if (!rec(s + 1)) return false;
    }
    g[s] = Simplex{};
    return true;
  };
  rec(0);
  return out;
}

Dendrex restrict_dendrex(const SAlgebra& F, const DendrexLayout& lt, const Dendrex& g,
                         const DendrexLayout& ls, const TreeMorphism& m) {
  auto transport = tree_morphism_action(m, *ls.at, *lt.at);
  Dendrex out(ls.slots.size());
  for (int s = 0; s < static_cast<int>(ls.slots.size()); ++s) {
    const auto& sl = ls.slots[s];
    std::vector<int> chain = ls.at->nerve_at(sl.edge).chains[sl.dim][sl.cell];
    for (int& x : chain) x = transport[sl.edge][x];
    int e = m.edge_map[sl.edge];
    out[s] = derived_value(F, lt, g, e, lt.at->nerve_at(e).simplex_of(chain));
  }
  return out;
}

namespace {

TreeMorphism linear_coface(int n, int i) {
  std::vector<int> map;
  for (int j = 0; j < n; ++j) map.push_back(j + (j >= i ? 1 : 0));
  return make_morphism(linear_tree(n - 1), linear_tree(n), map);
}

TreeMorphism linear_codegeneracy(int n, int i) {
  std::vector<int> map;
  for (int j = 0; j <= n + 1; ++j) map.push_back(j - (j > i ? 1 : 0));
  return make_morphism(linear_tree(n + 1), linear_tree(n), map);
}

}  // namespace

Fiber fiber_of_relative_nerve(const SAlgebra& F, int c, int d) {
  Fiber fib;
  const Operad& P = *F.operad;
  for (int n = 0; n <= d; ++n) {
    Tree t = linear_tree(n);
    fib.layouts.push_back(dendrex_layout(P, t, constant_tree_map(P, t, c)));
    auto ds = relative_nerve_dendrices(F, fib.layouts.back());
    std::sort(ds.begin(), ds.end());
    fib.index.emplace_back();
    for (int x = 0; x < static_cast<int>(ds.size()); ++x) fib.index.back()[ds[x]] = x;
    fib.dendrices.push_back(std::move(ds));
  }
  Presentation pr;
  for (const auto& ds : fib.dendrices) pr.size.push_back(static_cast<int>(ds.size()));
  std::map<std::tuple<int, int, int>, int> face_memo, degen_memo;
  pr.face = [&](int k, int x, int i) {
    auto key = std::make_tuple(k, x, i);
    auto it = face_memo.find(key);
    if (it != face_memo.end()) return it->second;
    Dendrex r = restrict_dendrex(F, fib.layouts[k], fib.dendrices[k][x], fib.layouts[k - 1],
                                 linear_coface(k, i));
    return face_memo[key] = fib.index[k - 1].at(r);
  };
  pr.degen = [&](int k, int x, int i) {
    auto key = std::make_tuple(k, x, i);
    auto it = degen_memo.find(key);
    if (it != degen_memo.end()) return it->second;
    Dendrex r = restrict_dendrex(F, fib.layouts[k], fib.dendrices[k][x], fib.layouts[k + 1],
                                 linear_codegeneracy(k, i));
    return degen_memo[key] = fib.index[k + 1].at(r);
  };
  fib.presented = build_sset(pr);
  const SSet& fs = fib.presented.sset;
  fib.comparison.image.resize(fs.top_dim() + 1);
  for (int m = 0; m <= fs.top_dim(); ++m)
    for (int x : fib.presented.element[m])
      fib.comparison.image[m].push_back(fib.dendrices[m][x][fib.layouts[m].top_slot()]);
  return fib;
}

std::optional<std::string> check_fiber_comparison(const SAlgebra& F, int c, const Fiber& fib) {
  const SSet& target = F.value[c];
  int d = static_cast<int>(fib.dendrices.size()) - 1;
  for (int k = 0; k <= d; ++k) {
    std::vector<Simplex> want = simplices(target, k);
    std::vector<Simplex> got;
    for (const Dendrex& g : fib.dendrices[k]) got.push_back(g[fib.layouts[k].top_slot()]);
    std::vector<Simplex> sorted = got;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      return "comparison is not injective in degree " + std::to_string(k);
    std::sort(want.begin(), want.end());
    if (sorted != want) return "comparison is not surjective in degree " + std::to_string(k);
    for (int x = 0; x < static_cast<int>(got.size()) && k > 0; ++x)
      for (int i = 0; i <= k; ++i) {
        Dendrex r = restrict_dendrex(F, fib.layouts[k], fib.dendrices[k][x], fib.layouts[k - 1],
                                     linear_coface(k, i));
        if (r[fib.layouts[k - 1].top_slot()] != face(target, got[x], i))
          return "comparison does not commute with d" + std::to_string(i) + " in degree " +
                 std::to_string(k);
      }
  }
  if (auto bad = check_map(fib.presented.sset, target, fib.comparison)) return bad;
  if (!find_isomorphism(fib.presented.sset, target, d))
    return "no isomorphism between the fiber and the value";
  return std::nullopt;
}

std::optional<std::string> check_fiber_naturality(const SAlgebra& f, const SAlgebra& g,
                                                  const PosetAlgebraMap& m, int c,
                                                  const Fiber& ff, const Fiber& fg) {
  int d = static_cast<int>(ff.dendrices.size()) - 1;
  for (int k = 0; k <= d; ++k)
    for (int x = 0; x < static_cast<int>(ff.dendrices[k].size()); ++x) {
      Dendrex image;
      for (const Simplex& s : ff.dendrices[k][x]) image.push_back(apply_algebra_map(f, g, m, c, s));
      auto it = fg.index[k].find(image);
      if (it == fg.index[k].end())
        return "degree " + std::to_string(k) + ": the image of dendrex " + std::to_string(x) +
               " is not a dendrex";
      Simplex top_f = apply_map(f.value[c], ff.comparison, ff.presented.normal[k][x]);
      Simplex top_g = apply_map(g.value[c], fg.comparison, fg.presented.normal[k][it->second]);
      if (apply_algebra_map(f, g, m, c, top_f) != top_g)
        return "degree " + std::to_string(k) + ": the square fails at dendrex " + std::to_string(x);
    }
  return std::nullopt;
}

}  // namespace dendro
