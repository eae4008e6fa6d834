#include "dendro/operad.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>

namespace dendro {

namespace {

std::string join_names(const Operad& p, const std::vector<int>& colors) {
  std::string s;
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (i) s += ",";
    s += p.colors[colors[i]];
  }
  return s;
}

std::string describe(const Operad& p, int op) {
  const Operation& o = p.ops[op];
  return o.name + "(" + join_names(p, o.inputs) + ";" + p.colors[o.output] + ")";
}

std::vector<int> splice(const std::vector<int>& outer, int slot, const std::vector<int>& inner) {
  std::vector<int> r(outer.begin(), outer.begin() + slot);
  r.insert(r.end(), inner.begin(), inner.end());
  r.insert(r.end(), outer.begin() + slot + 1, outer.end());
  return r;
}

std::vector<int> transposition(int n, int i) {
  std::vector<int> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::swap(pi[i], pi[i + 1]);
  return pi;
}

// Slot labels: (0, j) is slot j of the outer operation, (1, j) of the inner one.
using Label = std::pair<int, int>;

std::vector<Label> spliced_labels(int n, int slot, const std::vector<int>& outer_perm,
                                  int m, const std::vector<int>& inner_perm) {
  std::vector<Label> out;
  for (int k = 0; k < n; ++k) {
    if (k == slot)
      for (int j = 0; j < m; ++j) out.push_back({1, inner_perm[j]});
    else
      out.push_back({0, outer_perm[k]});
  }
  return out;
}

std::vector<int> relabel(const std::vector<Label>& want, const std::vector<Label>& have) {
  std::vector<int> pi;
  for (const Label& l : want)
    pi.push_back(static_cast<int>(std::find(have.begin(), have.end(), l) - have.begin()));
  return pi;
}

}  // namespace

int Operad::max_arity() const {
  int m = 0;
  for (std::size_t p = 0; p < ops.size(); ++p) m = std::max(m, arity(static_cast<int>(p)));
  return m;
}

int Operad::color(const std::string& name) const {
  auto it = std::find(colors.begin(), colors.end(), name);
  if (it == colors.end()) throw std::invalid_argument("unknown color " + name);
  return static_cast<int>(it - colors.begin());
}

std::optional<int> Operad::find_op(const std::string& name) const {
  if (by_name_.size() == ops.size()) {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }
  for (std::size_t p = 0; p < ops.size(); ++p)
    if (ops[p].name == name) return static_cast<int>(p);
  return std::nullopt;
}

int Operad::op(const std::string& name) const {
  auto p = find_op(name);
  if (!p) throw std::invalid_argument("unknown operation " + name);
  return *p;
}

const std::vector<int>& Operad::with_profile(const std::vector<int>& in, int out) const {
  static const std::vector<int> empty;
  auto it = by_profile_.find({in, out});
  return it == by_profile_.end() ? empty : it->second;
}

std::vector<int> Operad::with_output(int out) const {
  std::vector<int> r;
  for (std::size_t p = 0; p < ops.size(); ++p)
    if (ops[p].output == out) r.push_back(static_cast<int>(p));
  return r;
}

std::optional<int> Operad::compose(int p, int slot, int q) const {
  auto it = comp.find({p, slot, q});
  if (it == comp.end()) return std::nullopt;
  return it->second;
}

int Operad::compose_or_throw(int p, int slot, int q) const {
  auto r = compose(p, slot, q);
  if (!r)
    throw std::runtime_error("composite " + ops[p].name + " o_" + std::to_string(slot) + " " +
                             ops[q].name + " is undefined");
  return *r;
}

int Operad::act(int p, const std::vector<int>& pi) const {
  int n = arity(p);
  if (static_cast<int>(pi.size()) != n) throw std::invalid_argument("permutation size mismatch");
  std::vector<int> arr(n);
  std::iota(arr.begin(), arr.end(), 0);
  int cur = p;
  for (int k = 0; k < n; ++k) {
    int j = static_cast<int>(std::find(arr.begin() + k, arr.end(), pi[k]) - arr.begin());
    if (j == n) throw std::invalid_argument("not a permutation");
    for (; j > k; --j) {
      auto it = swaps.find({cur, j - 1});
      if (it == swaps.end())
        throw std::runtime_error("symmetry of " + ops[cur].name + " at slot " +
                                 std::to_string(j - 1) + " is undefined");
      cur = it->second;
      std::swap(arr[j - 1], arr[j]);
    }
  }
  return cur;
}

int Operad::compose_all(int w, const std::vector<int>& zs) const {
  if (static_cast<int>(zs.size()) != arity(w))
    throw std::invalid_argument("composite needs one operation per slot");
  for (int j = static_cast<int>(zs.size()) - 1; j >= 0; --j) w = compose_or_throw(w, j, zs[j]);
  return w;
}

void Operad::index() {
  by_profile_.clear();
  by_name_.clear();
  for (std::size_t p = 0; p < ops.size(); ++p) {
    by_profile_[{ops[p].inputs, ops[p].output}].push_back(static_cast<int>(p));
    by_name_.emplace(ops[p].name, static_cast<int>(p));
  }
}

std::optional<LawFailure> check_operad(const Operad& P) {
  int nc = static_cast<int>(P.colors.size());
  int no = static_cast<int>(P.ops.size());
  std::set<std::string> names;
  for (int p = 0; p < no; ++p) {
    const Operation& o = P.ops[p];
    if (!names.insert(o.name).second) return LawFailure{"profile", "duplicate operation " + o.name};
    if (o.output < 0 || o.output >= nc) return LawFailure{"profile", o.name + " has a bad output"};
    for (int c : o.inputs)
      if (c < 0 || c >= nc) return LawFailure{"profile", o.name + " has a bad input"};
    if (P.arity_bound >= 0 && P.arity(p) > P.arity_bound)
      return LawFailure{"profile", o.name + " exceeds the arity bound"};
  }
  if (static_cast<int>(P.units.size()) != nc) return LawFailure{"unit", "one unit per color"};
  for (int c = 0; c < nc; ++c) {
    int u = P.units[c];
    if (u < 0 || u >= no || P.ops[u].inputs != std::vector<int>{c} || P.ops[u].output != c)
      return LawFailure{"unit", "unit of " + P.colors[c] + " has the wrong profile"};
  }

  auto within_bound = [&](int arity) { return P.arity_bound < 0 || arity <= P.arity_bound; };
  for (const auto& [key, r] : P.comp) {
    auto [p, i, q] = key;
    if (p < 0 || p >= no || q < 0 || q >= no || r < 0 || r >= no || i < 0 || i >= P.arity(p))
      return LawFailure{"composition", "entry out of range"};
    if (P.ops[q].output != P.ops[p].inputs[i] || P.ops[r].output != P.ops[p].output ||
        P.ops[r].inputs != splice(P.ops[p].inputs, i, P.ops[q].inputs))
      return LawFailure{"composition", describe(P, p) + " o_" + std::to_string(i) + " " +
                                           describe(P, q) + " -> " + describe(P, r) +
                                           " has the wrong profile"};
  }
  for (int p = 0; p < no; ++p)
    for (int i = 0; i < P.arity(p); ++i)
      for (int q = 0; q < no; ++q) {
        if (P.ops[q].output != P.ops[p].inputs[i]) continue;
        bool has = P.comp.count({p, i, q}) > 0;
        if (!has && within_bound(P.arity(p) + P.arity(q) - 1))
          return LawFailure{"composition", describe(P, p) + " o_" + std::to_string(i) + " " +
                                               describe(P, q) + " is missing"};
      }

  for (const auto& [key, r] : P.swaps) {
    auto [p, i] = key;
    if (p < 0 || p >= no || i < 0 || i + 1 >= P.arity(p) || r < 0 || r >= no)
      return LawFailure{"symmetry", "entry out of range"};
    std::vector<int> in = P.ops[p].inputs;
    std::swap(in[i], in[i + 1]);
    if (P.ops[r].inputs != in || P.ops[r].output != P.ops[p].output)
      return LawFailure{"symmetry", describe(P, p) + " swapped at " + std::to_string(i) +
                                        " has the wrong profile"};
  }
  for (int p = 0; p < no; ++p) {
    int n = P.arity(p);
    for (int i = 0; i + 1 < n; ++i) {
      if (!P.swaps.count({p, i}))
        return LawFailure{"symmetry", describe(P, p) + " has no swap at " + std::to_string(i)};
    }
  }
  for (int p = 0; p < no; ++p) {
    int n = P.arity(p);
    auto s = [&](int q, int i) { return P.swaps.at({q, i}); };
    for (int i = 0; i + 1 < n; ++i) {
      if (s(s(p, i), i) != p)
        return LawFailure{"involution", describe(P, p) + " at " + std::to_string(i)};
      if (i + 2 < n && s(s(s(p, i), i + 1), i) != s(s(s(p, i + 1), i), i + 1))
        return LawFailure{"braid", describe(P, p) + " at " + std::to_string(i)};
      for (int j = i + 2; j + 1 < n; ++j)
        if (s(s(p, i), j) != s(s(p, j), i))
          return LawFailure{"commutation", describe(P, p) + " at " + std::to_string(i) + "," +
                                               std::to_string(j)};
    }
  }

  for (int p = 0; p < no; ++p) {
    if (P.compose(P.units[P.ops[p].output], 0, p) != p)
      return LawFailure{"unit", "left unit fails on " + describe(P, p)};
    for (int i = 0; i < P.arity(p); ++i)
      if (P.compose(p, i, P.units[P.ops[p].inputs[i]]) != p)
        return LawFailure{"unit", "right unit fails on " + describe(P, p) + " at slot " +
                                      std::to_string(i)};
  }

  // Associativity, sequential and parallel.
  for (const auto& [key, pq] : P.comp) {
    auto [p, i, q] = key;
    int m = P.arity(q);
    for (int j = 0; j < P.arity(pq); ++j)
      for (int r = 0; r < no; ++r) {
        if (P.ops[r].output != P.ops[pq].inputs[j]) continue;
        auto lhs = P.compose(pq, j, r);
        std::optional<int> rhs;
        std::string shape;
        if (j >= i && j < i + m) {
          auto qr = P.compose(q, j - i, r);
          if (qr) rhs = P.compose(p, i, *qr);
          shape = "sequential";
        } else {
          int jp = j < i ? j : j - m + 1;
          auto pr = P.compose(p, jp, r);
          int ip = j < i ? i + P.arity(r) - 1 : i;
          if (pr) rhs = P.compose(*pr, ip, q);
          shape = "parallel";
        }
        if (P.arity_bound >= 0 && (!lhs || !rhs)) continue;  // partial beyond the bound
        if (lhs != rhs)
          return LawFailure{"associativity", shape + ": (" + describe(P, p) + " o_" +
                                                 std::to_string(i) + " " + describe(P, q) +
                                                 ") o_" + std::to_string(j) + " " +
                                                 describe(P, r)};
      }
  }

  // Equivariance against adjacent transpositions on either factor.
  for (const auto& [key, pq] : P.comp) {
    auto [p, i, q] = key;
    int n = P.arity(p), m = P.arity(q);
    std::vector<int> id_n(n), id_m(m);
    std::iota(id_n.begin(), id_n.end(), 0);
    std::iota(id_m.begin(), id_m.end(), 0);
    auto base = spliced_labels(n, i, id_n, m, id_m);
    for (int t = 0; t + 1 < n; ++t) {
      // (p.tau) o_k q with k chosen so that slot k of p.tau is slot i of p.
      std::vector<int> tau = transposition(n, t);
      int k = static_cast<int>(std::find(tau.begin(), tau.end(), i) - tau.begin());
      int pt = P.swaps.at({p, t});
      auto lhs = P.compose(pt, k, q);
      auto want = spliced_labels(n, k, tau, m, id_m);
      int rhs = P.act(pq, relabel(want, base));
      if (lhs != rhs)
        return LawFailure{"equivariance", "outer swap " + std::to_string(t) + " on " +
                                              describe(P, p) + " o_" + std::to_string(i) + " " +
                                              describe(P, q)};
    }
    for (int t = 0; t + 1 < m; ++t) {
      int qt = P.swaps.at({q, t});
      auto lhs = P.compose(p, i, qt);
      auto want = spliced_labels(n, i, id_n, m, transposition(m, t));
      int rhs = P.act(pq, relabel(want, base));
      if (lhs != rhs)
        return LawFailure{"equivariance", "inner swap " + std::to_string(t) + " on " +
                                              describe(P, p) + " o_" + std::to_string(i) + " " +
                                              describe(P, q)};
    }
  }
  return std::nullopt;
}

Operad finalize_operad(Operad p) {
  p.index();
  if (auto f = check_operad(p)) throw std::runtime_error(f->law + " law fails: " + f->detail);
  return p;
}

Operad commutative_truncated(int max_arity) {
  Operad P;
  P.colors = {"*"};
  for (int k = 0; k <= max_arity; ++k)
    P.ops.push_back({"mu" + std::to_string(k), std::vector<int>(k, 0), 0});
  P.units = {1};
  P.arity_bound = max_arity;
  for (int a = 0; a <= max_arity; ++a) {
    for (int i = 0; i < a; ++i)
      for (int b = 0; b <= max_arity; ++b)
        if (a + b - 1 <= max_arity) P.comp[{a, i, b}] = a + b - 1;
    for (int i = 0; i + 1 < a; ++i) P.swaps[{a, i}] = a;
  }
  P.index();
  return P;
}

Operad operad_from_category(const FinCategory& c) {
  Operad P;
  P.colors = c.objects;
  for (const Arrow& a : c.arrows) P.ops.push_back({a.name, {a.src}, a.tgt});
  P.units = c.identity;
  for (int f = 0; f < c.num_arrows(); ++f)
    for (int g : c.arrows_from(c.arrows[f].tgt)) P.comp[{g, 0, f}] = c.compose(g, f);
  P.index();
  return P;
}

FinCategory category_of(const Operad& P) {
  for (const Operation& o : P.ops)
    if (o.inputs.size() != 1)
      throw std::invalid_argument("operation " + o.name + " is not unary");
  std::map<std::pair<int, int>, int> comps;
  for (const auto& [key, r] : P.comp) comps[{std::get<0>(key), std::get<2>(key)}] = r;
  std::vector<Arrow> arrows;
  for (const Operation& o : P.ops) arrows.push_back({o.inputs[0], o.output, o.name});
  return table_category(P.colors, arrows, P.units, comps);
}

std::string free_op_name(const Tree& t, int root, const std::vector<int>& leaves) {
  std::string s;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (i) s += ",";
    s += t.names[leaves[i]];
  }
  return s + "->" + t.names[root];
}

Operad free_operad_on_tree(const Tree& t) {
  Operad P;
  P.colors = t.names;
  std::vector<Subtree> subs = all_subtrees(t);
  std::map<std::pair<int, std::vector<int>>, int> by_leaves;
  std::vector<VertexSet> verts_of;
  for (const Subtree& s : subs) {
    std::vector<int> ls = subtree_leaves(t, s);
    std::sort(ls.begin(), ls.end());
    do {
      by_leaves[{s.root, ls}] = static_cast<int>(P.ops.size());
      P.ops.push_back({free_op_name(t, s.root, ls), ls, s.root});
      verts_of.push_back(s.verts);
    } while (std::next_permutation(ls.begin(), ls.end()));
  }
  P.units.resize(t.num_edges());
  for (int e = 0; e < t.num_edges(); ++e) P.units[e] = by_leaves.at({e, {e}});
  std::vector<std::vector<int>> rooted(t.num_edges());
  for (std::size_t q = 0; q < P.ops.size(); ++q) rooted[P.ops[q].output].push_back(static_cast<int>(q));
  for (std::size_t p = 0; p < P.ops.size(); ++p) {
    const std::vector<int>& in = P.ops[p].inputs;
    for (int i = 0; i < static_cast<int>(in.size()); ++i)
      for (int q : rooted[in[i]])
        P.comp[{static_cast<int>(p), i, q}] =
            by_leaves.at({P.ops[p].output, splice(in, i, P.ops[q].inputs)});
    for (int i = 0; i + 1 < static_cast<int>(in.size()); ++i) {
      std::vector<int> sw = in;
      std::swap(sw[i], sw[i + 1]);
      P.swaps[{static_cast<int>(p), i}] = by_leaves.at({P.ops[p].output, sw});
    }
  }
  P.index();
  return P;
}

std::optional<std::string> check_tree_map(const Operad& P, const Tree& t, const TreeMap& a) {
  int nc = static_cast<int>(P.colors.size());
  if (static_cast<int>(a.color.size()) != t.num_edges() ||
      static_cast<int>(a.vertex_op.size()) != t.num_vertices())
    return "tree map table sizes";
  for (int e = 0; e < t.num_edges(); ++e)
    if (a.color[e] < 0 || a.color[e] >= nc) return "edge " + t.names[e] + " has no color";
  for (int v = 0; v < t.num_vertices(); ++v) {
    int p = a.vertex_op[v];
    if (p < 0 || p >= static_cast<int>(P.ops.size()))
      return "vertex " + t.names[t.out[v]] + " has no operation";
    std::vector<int> in;
    for (int e : t.in[v]) in.push_back(a.color[e]);
    if (P.ops[p].inputs != in || P.ops[p].output != a.color[t.out[v]])
      return "vertex " + t.names[t.out[v]] + " carries " + P.ops[p].name +
             " of the wrong profile";
  }
  return std::nullopt;
}

namespace {

struct Evaluated {
  int op;
  std::vector<int> slots;  // edges feeding each slot
};

Evaluated eval_at(const Operad& P, const Tree& t, const TreeMap& a, VertexSet verts, int e) {
  int v = t.producer[e];
  if (v < 0 || !(verts >> v & 1)) return {P.units[a.color[e]], {e}};
  int op = a.vertex_op[v];
  std::vector<std::vector<int>> parts;
  int n = static_cast<int>(t.in[v].size());
  for (int j = n - 1; j >= 0; --j) {
    int c = t.in[v][j];
    int w = t.producer[c];
    if (w >= 0 && (verts >> w & 1)) {
      Evaluated sub = eval_at(P, t, a, verts, c);
      op = P.compose_or_throw(op, j, sub.op);
      parts.push_back(sub.slots);
    } else {
      parts.push_back({c});
    }
  }
  std::vector<int> slots;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it)
    slots.insert(slots.end(), it->begin(), it->end());
  return {op, slots};
}

}  // namespace

int eval_subtree(const Operad& P, const Tree& t, const TreeMap& a, const Subtree& r,
                 const std::vector<int>& leaf_order) {
  Evaluated ev = eval_at(P, t, a, r.verts, r.root);
  if (ev.slots.size() != leaf_order.size())
    throw std::invalid_argument("leaf order does not match the subtree");
  std::vector<int> pi;
  for (int l : leaf_order) {
    auto it = std::find(ev.slots.begin(), ev.slots.end(), l);
    if (it == ev.slots.end()) throw std::invalid_argument("leaf order does not match the subtree");
    pi.push_back(static_cast<int>(it - ev.slots.begin()));
  }
  return P.act(ev.op, pi);
}

TreeMap compose_tree_map(const Operad& P, const TreeMap& a, const TreeMorphism& g) {
  TreeMap r;
  const Tree& s = g.source;
  for (int e = 0; e < s.num_edges(); ++e) r.color.push_back(a.color[g.edge_map[e]]);
  for (int v = 0; v < s.num_vertices(); ++v) {
    std::vector<int> order;
    for (int e : s.in[v]) order.push_back(g.edge_map[e]);
    r.vertex_op.push_back(eval_subtree(P, g.target, a, vertex_image(g, v), order));
  }
  return r;
}

TreeMap constant_tree_map(const Operad& P, const Tree& t, int c) {
  TreeMap r;
  r.color.assign(t.num_edges(), c);
  for (int v = 0; v < t.num_vertices(); ++v) {
    if (t.in[v].size() != 1) throw std::invalid_argument("constant tree maps need a linear tree");
    r.vertex_op.push_back(P.units[c]);
  }
  return r;
}

TreeMap tree_map_from_morphism(const Operad& omega_t, const TreeMorphism& f) {
  TreeMap r;
  const Tree& s = f.source;
  for (int e = 0; e < s.num_edges(); ++e) r.color.push_back(f.edge_map[e]);
  for (int v = 0; v < s.num_vertices(); ++v) {
    std::vector<int> ls;
    for (int e : s.in[v]) ls.push_back(f.edge_map[e]);
    r.vertex_op.push_back(omega_t.op(free_op_name(f.target, f.edge_map[s.out[v]], ls)));
  }
  return r;
}

std::vector<TreeMap> dendroidal_nerve_at(const Operad& P, const Tree& t) {
  std::vector<int> order;  // vertices, parents first
  std::vector<int> stack{t.root};
  while (!stack.empty()) {
    int e = stack.back();
    stack.pop_back();
    int v = t.producer[e];
    if (v < 0) continue;
    order.push_back(v);
    for (auto it = t.in[v].rbegin(); it != t.in[v].rend(); ++it) stack.push_back(*it);
  }
  std::vector<TreeMap> out;
  TreeMap cur;
  cur.color.assign(t.num_edges(), -1);
  cur.vertex_op.assign(t.num_vertices(), -1);
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == order.size()) {
      out.push_back(cur);
      return;
    }
    int v = order[k];
    for (int p : P.with_output(cur.color[t.out[v]])) {
      if (P.ops[p].inputs.size() != t.in[v].size()) continue;
      cur.vertex_op[v] = p;
      for (std::size_t j = 0; j < t.in[v].size(); ++j) cur.color[t.in[v][j]] = P.ops[p].inputs[j];
      go(k + 1);
    }
    for (int e : t.in[v]) cur.color[e] = -1;
    cur.vertex_op[v] = -1;
  };
  for (int c = 0; c < static_cast<int>(P.colors.size()); ++c) {
    cur.color[t.root] = c;
    go(0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> check_operad_morphism(const Operad& src, const Operad& tgt,
                                                 const OperadMorphism& f) {
  if (f.color_map.size() != src.colors.size() || f.op_map.size() != src.ops.size())
    return "morphism table sizes";
  for (std::size_t p = 0; p < src.ops.size(); ++p) {
    int q = f.op_map[p];
    if (q < 0 || q >= static_cast<int>(tgt.ops.size())) return "operation out of range";
    std::vector<int> in;
    for (int c : src.ops[p].inputs) in.push_back(f.color_map[c]);
    if (tgt.ops[q].inputs != in || tgt.ops[q].output != f.color_map[src.ops[p].output])
      return "profile of " + src.ops[p].name + " not preserved";
  }
  for (std::size_t c = 0; c < src.colors.size(); ++c)
    if (f.op_map[src.units[c]] != tgt.units[f.color_map[c]])
      return "unit of " + src.colors[c] + " not preserved";
  for (const auto& [key, r] : src.comp) {
    auto [p, i, q] = key;
    if (tgt.compose(f.op_map[p], i, f.op_map[q]) != f.op_map[r])
      return "composite " + src.ops[p].name + " o_" + std::to_string(i) + " " + src.ops[q].name +
             " not preserved";
  }
  for (const auto& [key, r] : src.swaps) {
    auto [p, i] = key;
    auto it = tgt.swaps.find({f.op_map[p], i});
    if (it == tgt.swaps.end() || it->second != f.op_map[r])
      return "symmetry of " + src.ops[p].name + " not preserved";
  }
  return std::nullopt;
}

OperadMorphism induced_operad_map(const Operad& omega_s, const Operad& omega_t,
                                  const TreeMorphism& f) {
  OperadMorphism m;
  m.color_map = f.edge_map;
  for (const Operation& o : omega_s.ops) {
    std::vector<int> ls;
    for (int e : o.inputs) ls.push_back(f.edge_map[e]);
    m.op_map.push_back(omega_t.op(free_op_name(f.target, f.edge_map[o.output], ls)));
  }
  return m;
}

OperadMorphism extend_tree_map(const Operad& omega_t, const Tree& t, const Operad& P,
                               const TreeMap& a) {
  OperadMorphism m;
  m.color_map = a.color;
  for (const Operation& o : omega_t.ops) {
    auto r = subtree_with_root_and_leaves(t, o.output, o.inputs);
    if (!r) throw std::invalid_argument("operation " + o.name + " is not a subtree");
    m.op_map.push_back(eval_subtree(P, t, a, *r, o.inputs));
  }
  return m;
}

bool is_sigma_free(const Operad& P) {
  // The orbit of p under adjacent swaps has n!/|stabilizer| elements.
  std::vector<char> seen(P.ops.size(), 0);
  for (int p = 0; p < static_cast<int>(P.ops.size()); ++p) {
    int n = P.arity(p);
    if (n < 2 || seen[p]) continue;
    long long full = 1;
    for (int k = 2; k <= n; ++k) full *= k;
    std::vector<int> queue{p};
    seen[p] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (int j = 0; j + 1 < n; ++j) {
        std::vector<int> pi(n);
        std::iota(pi.begin(), pi.end(), 0);
        std::swap(pi[j], pi[j + 1]);
        int q = P.act(queue[i], pi);
        if (!seen[q]) {
          seen[q] = 1;
          queue.push_back(q);
        }
      }
    if (static_cast<long long>(queue.size()) != full) return false;
  }
  return true;
}

Operad underlying_category(const Operad& P) {
  Operad C;
  C.colors = P.colors;
  std::vector<int> new_id(P.ops.size(), -1);
  for (std::size_t p = 0; p < P.ops.size(); ++p)
    if (P.ops[p].inputs.size() == 1) {
      new_id[p] = static_cast<int>(C.ops.size());
      C.ops.push_back(P.ops[p]);
    }
  for (int u : P.units) C.units.push_back(new_id[u]);
  for (const auto& [key, r] : P.comp) {
    auto [p, i, q] = key;
    if (new_id[p] >= 0 && new_id[q] >= 0) C.comp[{new_id[p], i, new_id[q]}] = new_id[r];
  }
  C.index();
  return C;
}

EnvArrow env_compose(const Operad& P, const EnvArrow& g, const EnvArrow& f) {
  EnvArrow h;
  for (int j : f.f) h.f.push_back(g.f[j]);
  int m = static_cast<int>(g.ops.size());
  for (int k = 0; k < m; ++k) {
    std::vector<int> zs;
    std::vector<int> slots;
    for (int j = 0; j < static_cast<int>(g.f.size()); ++j) {
      if (g.f[j] != k) continue;
      zs.push_back(f.ops[j]);
      for (int i = 0; i < static_cast<int>(f.f.size()); ++i)
        if (f.f[i] == j) slots.push_back(i);
    }
    int composite = P.compose_all(g.ops[k], zs);
    std::vector<int> sorted = slots;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> pi;
    for (int i : sorted)
      pi.push_back(static_cast<int>(std::find(slots.begin(), slots.end(), i) - slots.begin()));
    h.ops.push_back(P.act(composite, pi));
  }
  return h;
}

int EnvCategory::object(const std::vector<int>& s) const {
  auto it = object_index.find(s);
  if (it == object_index.end()) throw std::out_of_range("string exceeds the envelope's length bound");
  return it->second;
}

int EnvCategory::arrow(int src, const EnvArrow& a) const {
  auto it = arrow_index.find({src, a});
  if (it == arrow_index.end()) throw std::out_of_range("arrow outside the envelope fragment");
  return it->second;
}

int EnvCategory::tensor_objects(int a, int b) const {
  std::vector<int> s = objects[a];
  s.insert(s.end(), objects[b].begin(), objects[b].end());
  if (static_cast<int>(s.size()) > length_bound)
    throw std::out_of_range("tensor of length " + std::to_string(s.size()) +
                            " exceeds the length bound " + std::to_string(length_bound));
  return object(s);
}

int EnvCategory::tensor_arrows(int f, int g) const {
  const Arrow& af = cat.arrows[f];
  const Arrow& ag = cat.arrows[g];
  int src = tensor_objects(af.src, ag.src);
  tensor_objects(af.tgt, ag.tgt);
  EnvArrow h = payload[f];
  int shift = static_cast<int>(objects[af.tgt].size());
  for (int j : payload[g].f) h.f.push_back(j + shift);
  h.ops.insert(h.ops.end(), payload[g].ops.begin(), payload[g].ops.end());
  return arrow(src, h);
}

EnvCategory envelope(const Operad& P, int L) {
  if (L < 1) throw std::invalid_argument("length bound must be at least 1");
  auto e = std::make_shared<EnvCategory>();
  e->operad = P;
  e->length_bound = L;
  int nc = static_cast<int>(P.colors.size());
  std::vector<std::vector<int>> level{{}};
  for (int len = 0; len <= L; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& s : level) {
      e->object_index[s] = static_cast<int>(e->objects.size());
      e->objects.push_back(s);
      for (int c = 0; c < nc; ++c) {
        auto t = s;
        t.push_back(c);
        next.push_back(t);
      }
    }
    level = std::move(next);
  }
  for (const auto& s : e->objects) {
    std::string name = "(";
    for (std::size_t i = 0; i < s.size(); ++i) name += (i ? "," : "") + P.colors[s[i]];
    e->cat.objects.push_back(name + ")");
  }
  std::vector<std::vector<int>> into(nc);
  for (int c = 0; c < nc; ++c) into[c] = P.with_output(c);
  for (int t = 0; t < static_cast<int>(e->objects.size()); ++t) {
    const auto& tgt = e->objects[t];
    int m = static_cast<int>(tgt.size());
    std::vector<int> choice(m, 0);
    bool empty_choice = false;
    for (int j = 0; j < m; ++j)
      if (into[tgt[j]].empty()) empty_choice = true;
    if (empty_choice) continue;
    while (true) {
      std::vector<int> ops(m);
      int n = 0;
      for (int j = 0; j < m; ++j) {
        ops[j] = into[tgt[j]][choice[j]];
        n += P.arity(ops[j]);
      }
      if (n <= L) {
        std::vector<int> f;
        for (int j = 0; j < m; ++j) f.insert(f.end(), P.arity(ops[j]), j);
        do {
          std::vector<int> src(n);
          std::vector<int> seen(m, 0);
          for (int i = 0; i < n; ++i) src[i] = P.ops[ops[f[i]]].inputs[seen[f[i]]++];
          int s = e->object_index.at(src);
          EnvArrow a{f, ops};
          std::string name = "[";
          for (int i = 0; i < n; ++i) name += (i ? "," : "") + std::to_string(f[i]);
          name += "]{";
          for (int j = 0; j < m; ++j) name += (j ? "," : "") + P.ops[ops[j]].name;
          e->arrow_index[{s, a}] = e->cat.num_arrows();
          e->cat.arrows.push_back({s, t, name + "}"});
          e->payload.push_back(a);
        } while (std::next_permutation(f.begin(), f.end()));
      }
      int j = m - 1;
      while (j >= 0 && ++choice[j] == static_cast<int>(into[tgt[j]].size())) choice[j--] = 0;
      if (j < 0) break;
    }
  }
  for (int s = 0; s < static_cast<int>(e->objects.size()); ++s) {
    EnvArrow id;
    for (int i = 0; i < static_cast<int>(e->objects[s].size()); ++i) {
      id.f.push_back(i);
      id.ops.push_back(P.units[e->objects[s][i]]);
    }
    e->cat.identity.push_back(e->arrow_index.at({s, id}));
  }
  // The callback shares ownership of the tables; copies of the category stay valid.
  auto tables = std::make_shared<std::pair<std::vector<EnvArrow>, std::map<std::pair<int, EnvArrow>, int>>>(
      e->payload, e->arrow_index);
  auto srcs = std::make_shared<std::vector<Arrow>>(e->cat.arrows);
  auto op = std::make_shared<Operad>(P);
  e->cat.compose = [tables, srcs, op](int g, int f) {
    EnvArrow h = env_compose(*op, tables->first[g], tables->first[f]);
    return tables->second.at({(*srcs)[f].src, h});
  };
  e->cat.finalize();
  return std::move(*e);
}

Functor envelope_functor(const EnvCategory& src, const EnvCategory& tgt, const OperadMorphism& f) {
  Functor F;
  for (const auto& s : src.objects) {
    std::vector<int> t;
    for (int c : s) t.push_back(f.color_map[c]);
    F.obj.push_back(tgt.object(t));
  }
  for (int a = 0; a < src.cat.num_arrows(); ++a) {
    EnvArrow img = src.payload[a];
    for (int& p : img.ops) p = f.op_map[p];
    F.arrow.push_back(tgt.arrow(F.obj[src.cat.arrows[a].src], img));
  }
  return F;
}

Slice env_slice(const EnvCategory& e, int c) { return slice(e.cat, e.object({c})); }

}  // namespace dendro
