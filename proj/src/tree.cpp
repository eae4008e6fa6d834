#include "dendro/tree.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace dendro {

VertexSet Tree::all_vertices() const {
  return num_vertices() == 64 ? ~VertexSet{0} : ((VertexSet{1} << num_vertices()) - 1);
}

std::optional<int> Tree::find_edge(const std::string& name) const {
  for (int e = 0; e < num_edges(); ++e)
    if (names[e] == name) return e;
  return std::nullopt;
}

int Tree::edge(const std::string& name) const {
  auto e = find_edge(name);
  if (!e) throw TreeError("unknown edge '" + name + "'");
  return *e;
}

Tree make_tree(std::vector<std::string> names, int root, std::vector<int> out,
               std::vector<std::vector<int>> in) {
  Tree t;
  t.names = std::move(names);
  t.root = root;
  t.out = std::move(out);
  t.in = std::move(in);
  const int ne = t.num_edges(), nv = t.num_vertices();
  if (ne == 0) throw TreeError("a tree needs at least one edge");
  if (static_cast<int>(t.in.size()) != nv) throw TreeError("inputs/outputs size mismatch");
  if (nv > 63) throw TreeError("trees are limited to 63 vertices");
  if (root < 0 || root >= ne) throw TreeError("root out of range");
  std::set<std::string> seen;
  for (const auto& n : t.names) {
    if (n.empty()) throw TreeError("empty edge name");
    if (!seen.insert(n).second) throw TreeError("duplicate edge name '" + n + "'");
  }
  t.producer.assign(ne, -1);
  t.consumer.assign(ne, -1);
  for (int v = 0; v < nv; ++v) {
    int o = t.out[v];
    if (o < 0 || o >= ne) throw TreeError("vertex output out of range");
    if (t.producer[o] != -1) throw TreeError("edge '" + t.names[o] + "' is the output of two vertices");
    t.producer[o] = v;
    for (int e : t.in[v]) {
      if (e < 0 || e >= ne) throw TreeError("vertex input out of range");
      if (t.consumer[e] != -1)
        throw TreeError("edge '" + t.names[e] + "' is the input of two vertices");
      t.consumer[e] = v;
    }
  }
  if (t.consumer[root] != -1) throw TreeError("the root cannot be an input");
  if (nv == 0 && ne != 1) throw TreeError("a tree without vertices has exactly one edge");
  std::vector<char> visited(ne, 0);
  std::vector<int> stack{root};
  int count = 0;
  while (!stack.empty()) {
    int e = stack.back();
    stack.pop_back();
    if (visited[e]) throw TreeError("cycle through edge '" + t.names[e] + "'");
    visited[e] = 1;
    ++count;
    if (int v = t.producer[e]; v >= 0)
      for (int c : t.in[v]) stack.push_back(c);
  }
  if (count != ne) throw TreeError("tree is not connected");
  return t;
}

namespace {

struct Parser {
  explicit Parser(const std::string& text) : s(text) {}
  const std::string& s;
  std::size_t i = 0;
  std::vector<std::string> names;
  std::vector<int> out;
  std::vector<std::vector<int>> in;
  std::map<std::string, std::size_t> where;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  std::string name() {
    skip();
    std::size_t start = i;
    if (i >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_'))
      throw ParseError("expected an edge name", i);
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    std::string n = s.substr(start, i - start);
    if (where.count(n)) throw ParseError("duplicate edge name '" + n + "'", start);
    where[n] = start;
    return n;
  }
  int tree() {
    std::string n = name();
    int e = static_cast<int>(names.size());
    names.push_back(n);
    skip();
    if (i < s.size() && s[i] == '(') {
      ++i;
      int v = static_cast<int>(out.size());
      out.push_back(e);
      in.emplace_back();
      skip();
      if (i < s.size() && s[i] == ')') {
        ++i;
        return e;
      }
      while (true) {
        int c = tree();
        in[v].push_back(c);
        skip();
        if (i >= s.size()) throw ParseError("unexpected end of input", i);
        if (s[i] == ',') {
          ++i;
          continue;
        }
        if (s[i] == ')') {
          ++i;
          break;
        }
        throw ParseError(std::string("unexpected character '") + s[i] + "'", i);
      }
    }
    return e;
  }
};

}  // namespace

Tree parse_tree(const std::string& text) {
  Parser p(text);
  p.skip();
  if (p.i >= text.size()) throw ParseError("empty input", 0);
  int root = p.tree();
  p.skip();
  if (p.i != text.size()) throw ParseError("trailing characters", p.i);
  return make_tree(std::move(p.names), root, std::move(p.out), std::move(p.in));
}

Tree eta(const std::string& name) { return make_tree({name}, 0, {}, {}); }

Tree corolla(int n, const std::string& root) {
  std::vector<std::string> names{root};
  std::vector<int> inputs;
  for (int k = 1; k <= n; ++k) {
    names.push_back("l" + std::to_string(k));
    inputs.push_back(k);
  }
  return make_tree(names, 0, {0}, {inputs});
}

Tree linear_tree(int n) {
  std::vector<std::string> names;
  for (int k = 0; k <= n; ++k) names.push_back("e" + std::to_string(k));
  std::vector<int> out;
  std::vector<std::vector<int>> in;
  for (int k = n; k >= 1; --k) {
    out.push_back(k);
    in.push_back({k - 1});
  }
  return make_tree(names, n, out, in);
}

namespace {

std::vector<std::string> encodings(const Tree& t) {
  std::vector<std::string> enc(t.num_edges());
  std::function<const std::string&(int)> go = [&](int e) -> const std::string& {
    int v = t.producer[e];
    if (v < 0) return enc[e] = "|";
    std::vector<std::string> kids;
    for (int c : t.in[v]) kids.push_back(go(c));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (auto& k : kids) s += k;
    return enc[e] = s + ")";
  };
  go(t.root);
  return enc;
}

std::vector<std::string> printed(const Tree& t, const std::vector<std::string>& enc) {
  std::vector<std::string> pr(t.num_edges());
  std::function<const std::string&(int)> go = [&](int e) -> const std::string& {
    int v = t.producer[e];
    if (v < 0) return pr[e] = t.names[e];
    std::vector<std::pair<std::string, std::string>> kids;
    for (int c : t.in[v]) kids.emplace_back(enc[c], go(c));
    std::sort(kids.begin(), kids.end());
    std::string s = t.names[e] + "(";
    for (std::size_t k = 0; k < kids.size(); ++k) s += (k ? "," : "") + kids[k].second;
    return pr[e] = s + ")";
  };
  go(t.root);
  return pr;
}

// Children of vertex v in canonical order.
std::vector<int> sorted_inputs(const Tree& t, int v, const std::vector<std::string>& enc,
                               const std::vector<std::string>& pr) {
  std::vector<int> kids = t.in[v];
  std::sort(kids.begin(), kids.end(), [&](int a, int b) {
    return std::tie(enc[a], pr[a]) < std::tie(enc[b], pr[b]);
  });
  return kids;
}

}  // namespace

std::string to_string(const Tree& t) { return printed(t, encodings(t))[t.root]; }

std::string canonical_form(const Tree& t) { return encodings(t)[t.root]; }

std::string canonical_form_at(const Tree& t, int e) { return encodings(t)[e]; }

std::vector<int> canonical_vertex_order(const Tree& t) {
  auto enc = encodings(t);
  auto pr = printed(t, enc);
  std::vector<int> order;
  std::function<void(int)> go = [&](int e) {
    int v = t.producer[e];
    if (v < 0) return;
    order.push_back(v);
    for (int c : sorted_inputs(t, v, enc, pr)) go(c);
  };
  go(t.root);
  return order;
}

std::string to_dot(const Tree& t) {
  std::ostringstream os;
  os << "digraph tree {\n  rankdir=BT;\n"
     << "  node [shape=circle, style=filled, fillcolor=black, label=\"\", width=0.15];\n";
  for (int v = 0; v < t.num_vertices(); ++v) os << "  v" << v << ";\n";
  for (int e = 0; e < t.num_edges(); ++e) {
    std::string lower = t.consumer[e] >= 0 ? "v" + std::to_string(t.consumer[e]) : "end" + std::to_string(e);
    std::string upper = t.producer[e] >= 0 ? "v" + std::to_string(t.producer[e]) : "end" + std::to_string(e);
    if (t.consumer[e] < 0) os << "  " << lower << " [shape=point, style=invis];\n";
    if (t.producer[e] < 0) {
      if (t.consumer[e] < 0) upper = "top" + std::to_string(e);
      os << "  " << upper << " [shape=point, style=invis];\n";
    }
    os << "  " << lower << " -> " << upper << " [label=\"" << t.names[e] << "\", arrowhead=none];\n";
  }
  os << "}\n";
  return os.str();
}

bool edge_leq(const Tree& t, int e, int f) {
  if (e < 0 || e >= t.num_edges() || f < 0 || f >= t.num_edges())
    throw TreeError("unknown edge identifier");
  while (true) {
    if (e == f) return true;
    int v = t.consumer[e];
    if (v < 0) return false;
    e = t.out[v];
  }
}

bool is_leaf(const Tree& t, int e) { return t.producer[e] < 0; }

bool is_inner(const Tree& t, int e) { return t.producer[e] >= 0 && t.consumer[e] >= 0; }

bool is_leaf_vertex(const Tree& t, int v) {
  return std::all_of(t.in[v].begin(), t.in[v].end(), [&](int e) { return is_leaf(t, e); });
}

std::vector<int> leaves(const Tree& t) {
  std::vector<int> ls;
  for (int e = 0; e < t.num_edges(); ++e)
    if (is_leaf(t, e)) ls.push_back(e);
  return ls;
}

EdgeClasses classify_edges(const Tree& t) {
  EdgeClasses c;
  c.root = t.root;
  c.leaves = leaves(t);
  for (int e = 0; e < t.num_edges(); ++e)
    if (is_inner(t, e)) c.inner.push_back(e);
  return c;
}

int vertex_count(const Subtree& s) { return std::popcount(s.verts); }

Subtree whole(const Tree& t) { return {t.root, t.all_vertices()}; }

Subtree eta_at(int e) { return {e, 0}; }

namespace {
bool has(VertexSet s, int v) { return (s >> v) & 1; }
VertexSet bit(int v) { return VertexSet{1} << v; }
}  // namespace

std::vector<int> subtree_leaves(const Tree& t, const Subtree& s) {
  std::vector<int> ls;
  std::function<void(int)> go = [&](int e) {
    int v = t.producer[e];
    if (v >= 0 && has(s.verts, v)) {
      for (int c : t.in[v]) go(c);
    } else {
      ls.push_back(e);
    }
  };
  go(s.root);
  return ls;
}

std::vector<int> subtree_edges(const Tree& t, const Subtree& s) {
  std::vector<int> es;
  std::function<void(int)> go = [&](int e) {
    es.push_back(e);
    int v = t.producer[e];
    if (v >= 0 && has(s.verts, v))
      for (int c : t.in[v]) go(c);
  };
  go(s.root);
  std::sort(es.begin(), es.end());
  return es;
}

bool contains_edge(const Tree& t, const Subtree& s, int e) {
  if (e == s.root) return true;
  int v = t.consumer[e];
  if (v >= 0 && has(s.verts, v)) return true;
  return false;
}

bool subtree_includes(const Subtree& big, const Subtree& small_, const Tree& t) {
  if ((small_.verts & ~big.verts) != 0) return false;
  return contains_edge(t, big, small_.root);
}

bool is_subtree(const Tree& t, const Subtree& s) {
  if (s.root < 0 || s.root >= t.num_edges()) return false;
  if ((s.verts & ~t.all_vertices()) != 0) return false;
  if (s.verts == 0) return true;
  int v = t.producer[s.root];
  if (v < 0 || !has(s.verts, v)) return false;
  VertexSet reached = 0;
  std::function<void(int)> go = [&](int e) {
    int w = t.producer[e];
    if (w >= 0 && has(s.verts, w)) {
      reached |= bit(w);
      for (int c : t.in[w]) go(c);
    }
  };
  go(s.root);
  return reached == s.verts;
}

Subtree t_up(const Tree& t, int e) {
  if (e < 0 || e >= t.num_edges()) throw TreeError("unknown edge identifier");
  VertexSet vs = 0;
  std::function<void(int)> go = [&](int f) {
    int v = t.producer[f];
    if (v < 0) return;
    vs |= bit(v);
    for (int c : t.in[v]) go(c);
  };
  go(e);
  return {e, vs};
}

std::optional<Subtree> subtree_with_root_and_leaves(const Tree& t, int e,
                                                     const std::vector<int>& ebar) {
  std::set<int> target(ebar.begin(), ebar.end());
  if (target.size() != ebar.size()) return std::nullopt;
  if (ebar.size() == 1 && ebar[0] == e) return Subtree{e, 0};
  VertexSet vs = 0;
  for (int l : ebar) {
    if (l == e || !edge_leq(t, l, e)) return std::nullopt;
    int f = l;
    while (f != e) {
      int v = t.consumer[f];
      vs |= bit(v);
      f = t.out[v];
    }
  }
  if (ebar.empty()) {
    if (t.producer[e] < 0) return std::nullopt;
    vs |= bit(t.producer[e]);
  }
  // Inputs outside the requested leaves must be capped by leafless branches.
  VertexSet extra = 0;
  for (int v = 0; v < t.num_vertices(); ++v) {
    if (!has(vs, v)) continue;
    for (int c : t.in[v]) {
      if (target.count(c)) continue;
      int w = t.producer[c];
      if (w >= 0 && has(vs, w)) continue;
      Subtree up = t_up(t, c);
      if (up.verts == 0 || !subtree_leaves(t, up).empty()) return std::nullopt;
      extra |= up.verts;
    }
  }
  Subtree s{e, vs | extra};
  auto ls = subtree_leaves(t, s);
  if (std::set<int>(ls.begin(), ls.end()) != target) return std::nullopt;
  return s;
}

Extracted extract(const Tree& t, const Subtree& s) {
  auto es = subtree_edges(t, s);
  std::map<int, int> idx;
  Extracted ex;
  std::vector<std::string> names;
  for (int e : es) {
    idx[e] = static_cast<int>(names.size());
    names.push_back(t.names[e]);
    ex.edge_of.push_back(e);
  }
  std::vector<int> out;
  std::vector<std::vector<int>> in;
  for (int v = 0; v < t.num_vertices(); ++v) {
    if (!has(s.verts, v)) continue;
    out.push_back(idx.at(t.out[v]));
    std::vector<int> ins;
    for (int c : t.in[v]) ins.push_back(idx.at(c));
    in.push_back(ins);
  }
  ex.tree = make_tree(names, idx.at(s.root), out, in);
  return ex;
}

namespace {
bool subtree_less(const Tree& t, const Subtree& a, const Subtree& b) {
  auto ka = canonical_form(extract(t, a).tree), kb = canonical_form(extract(t, b).tree);
  if (ka != kb) return ka < kb;
  auto ea = subtree_edges(t, a), eb = subtree_edges(t, b);
  std::vector<std::string> na, nb;
  for (int e : ea) na.push_back(t.names[e]);
  for (int e : eb) nb.push_back(t.names[e]);
  if (na != nb) return na < nb;
  return t.names[a.root] < t.names[b.root];
}
}  // namespace

std::vector<Subtree> subtrees_rooted_at(const Tree& t, int e) {
  if (e < 0 || e >= t.num_edges()) throw TreeError("unknown edge identifier");
  std::function<std::vector<VertexSet>(int)> gen = [&](int f) {
    std::vector<VertexSet> res{0};
    int v = t.producer[f];
    if (v < 0) return res;
    std::vector<VertexSet> acc{bit(v)};
    for (int c : t.in[v]) {
      auto sub = gen(c);
      std::vector<VertexSet> next;
      for (auto a : acc)
        for (auto b : sub) next.push_back(a | b);
      acc = std::move(next);
    }
    res.insert(res.end(), acc.begin(), acc.end());
    return res;
  };
  std::vector<Subtree> out;
  for (auto vs : gen(e)) out.push_back({e, vs});
  std::sort(out.begin(), out.end(),
            [&](const Subtree& a, const Subtree& b) { return subtree_less(t, a, b); });
  return out;
}

std::vector<Subtree> all_subtrees(const Tree& t) {
  std::vector<Subtree> out;
  for (int e = 0; e < t.num_edges(); ++e) {
    auto s = subtrees_rooted_at(t, e);
    out.insert(out.end(), s.begin(), s.end());
  }
  std::sort(out.begin(), out.end(),
            [&](const Subtree& a, const Subtree& b) { return subtree_less(t, a, b); });
  return out;
}

std::string fresh_name(const Tree& t, const std::string& base) {
  if (!t.find_edge(base)) return base;
  for (int k = 1;; ++k) {
    std::string n = base + "_" + std::to_string(k);
    if (!t.find_edge(n)) return n;
  }
}

GraftResult graft(const Tree& s, int leaf, const Tree& r) {
  if (leaf < 0 || leaf >= s.num_edges() || !is_leaf(s, leaf))
    throw TreeError("graft position is not a leaf");
  GraftResult res;
  std::set<std::string> used(s.names.begin(), s.names.end());
  std::vector<std::string> names = s.names;
  std::vector<int> map(r.num_edges());
  for (int e = 0; e < r.num_edges(); ++e) {
    if (e == r.root) {
      map[e] = leaf;
      continue;
    }
    std::string n = r.names[e];
    if (used.count(n)) {
      int k = 1;
      while (used.count(r.names[e] + "_" + std::to_string(k))) ++k;
      n = r.names[e] + "_" + std::to_string(k);
      res.renamed[r.names[e]] = n;
    }
    used.insert(n);
    map[e] = static_cast<int>(names.size());
    names.push_back(n);
  }
  std::vector<int> out = s.out;
  std::vector<std::vector<int>> in = s.in;
  for (int v = 0; v < r.num_vertices(); ++v) {
    out.push_back(map[r.out[v]]);
    std::vector<int> ins;
    for (int c : r.in[v]) ins.push_back(map[c]);
    in.push_back(ins);
  }
  res.tree = make_tree(names, s.root, out, in);
  return res;
}

std::vector<std::vector<int>> isomorphisms(const Tree& a, const Tree& b) {
  auto ea = encodings(a), eb = encodings(b);
  std::vector<std::vector<int>> result;
  if (ea[a.root] != eb[b.root]) return result;
  using Partial = std::vector<std::pair<int, int>>;
  std::function<std::vector<Partial>(int, int)> rec = [&](int x, int y) {
    std::vector<Partial> res;
    int va = a.producer[x], vb = b.producer[y];
    if (va < 0) {
      res.push_back({{x, y}});
      return res;
    }
    const auto& ka = a.in[va];
    const auto& kb = b.in[vb];
    std::vector<char> used(kb.size(), 0);
    Partial cur{{x, y}};
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
      if (i == ka.size()) {
        res.push_back(cur);
        return;
      }
      for (std::size_t j = 0; j < kb.size(); ++j) {
        if (used[j] || ea[ka[i]] != eb[kb[j]]) continue;
        used[j] = 1;
        for (const auto& sub : rec(ka[i], kb[j])) {
          std::size_t mark = cur.size();
          cur.insert(cur.end(), sub.begin(), sub.end());
          assign(i + 1);
          cur.resize(mark);
        }
        used[j] = 0;
      }
    };
    assign(0);
    return res;
  };
  for (const auto& p : rec(a.root, b.root)) {
    std::vector<int> m(a.num_edges(), -1);
    for (auto [x, y] : p) m[x] = y;
    result.push_back(m);
  }
  std::sort(result.begin(), result.end());
  return result;
}

bool is_isomorphic(const Tree& a, const Tree& b) { return canonical_form(a) == canonical_form(b); }

std::vector<std::vector<int>> automorphisms(const Tree& t) { return isomorphisms(t, t); }

std::vector<Tree> enumerate_trees(int max_vertices, int max_arity, bool with_leaves) {
  // Shapes are planted trees; kids index earlier shapes in nondecreasing order.
  struct Shape {
    int vertices;
    bool leaf;
    std::vector<int> kids;
  };
  std::vector<Shape> shapes{{0, true, {}}};
  for (int k = 1; k <= max_vertices; ++k) {
    std::size_t known = shapes.size();
    std::vector<int> kids;
    std::function<void(std::size_t, int)> pick = [&](std::size_t from, int left) {
      if (left == 0) shapes.push_back({k, false, kids});
      if (static_cast<int>(kids.size()) == max_arity) return;
      for (std::size_t i = std::max<std::size_t>(from, with_leaves ? 0 : 1); i < known; ++i)
        if (shapes[i].vertices <= left) {
          kids.push_back(static_cast<int>(i));
          pick(i, left - shapes[i].vertices);
          kids.pop_back();
        }
    };
    pick(0, k - 1);
  }
  std::vector<Tree> out;
  std::set<std::string> seen;
  for (const Shape& sh : shapes) {
    if (sh.leaf && !with_leaves) continue;
    int next = 0;
    std::function<std::string(const Shape&, bool)> text = [&](const Shape& x, bool root) {
      std::string name = root ? "r" : "e" + std::to_string(++next);
      if (x.leaf) return name;
      std::string body;
      for (std::size_t i = 0; i < x.kids.size(); ++i)
        body += (i ? "," : "") + text(shapes[x.kids[i]], false);
      return name + "(" + body + ")";
    };
    Tree t = parse_tree(text(sh, true));
    if (seen.insert(canonical_form(t)).second) out.push_back(std::move(t));
  }
  return out;
}

Tree random_tree(std::mt19937& rng, int max_vertices, int max_arity) {
  int n = std::uniform_int_distribution<int>(0, max_vertices)(rng);
  // kids[v] lists child vertices, or -1 for an open leaf.
  std::vector<std::vector<int>> kids;
  std::vector<std::pair<int, int>> open;  // (vertex, position) of leaf edges
  auto add_vertex = [&]() {
    int arity = std::uniform_int_distribution<int>(0, max_arity)(rng);
    kids.emplace_back(arity, -1);
    int v = static_cast<int>(kids.size()) - 1;
    for (int i = 0; i < arity; ++i) open.emplace_back(v, i);
    return v;
  };
  if (n > 0) add_vertex();
  for (int k = 1; k < n; ++k) {
    if (open.empty()) break;
    std::size_t pick = std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng);
    auto [v, i] = open[pick];
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    kids[v][i] = add_vertex();
  }
  if (kids.empty()) return eta("r");
  int next = 0;
  std::function<std::string(int, bool)> text = [&](int v, bool root) {
    std::string name = root ? "r" : "e" + std::to_string(++next);
    if (v < 0) return name;
    std::string body;
    for (std::size_t i = 0; i < kids[v].size(); ++i) body += (i ? "," : "") + text(kids[v][i], false);
    return name + "(" + body + ")";
  };
  return parse_tree(text(0, true));
}

}  // namespace dendro
