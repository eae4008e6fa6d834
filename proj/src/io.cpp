#include "dendro/io.hpp"

#include <fstream>

namespace dendro {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string str(const json& j, const char* what) {
  if (!j.is_string()) throw InputError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<int>();
}

int edge_named(const Tree& t, const json& j) {
  std::string name = str(j, "edge name");
  auto e = t.find_edge(name);
  if (!e) throw InputError("unknown edge '" + name + "'");
  return *e;
}

int vertex_named(const Tree& t, const json& j) {
  int e = edge_named(t, j);
  if (t.producer[e] < 0) throw InputError("edge '" + t.names[e] + "' has no vertex above it");
  return t.producer[e];
}

int color_named(const Operad& p, const json& j) {
  std::string name = str(j, "color");
  for (int c = 0; c < static_cast<int>(p.colors.size()); ++c)
    if (p.colors[c] == name) return c;
  throw InputError("unknown color '" + name + "'");
}

int op_named(const Operad& p, const json& j) {
  std::string name = str(j, "operation");
  auto op = p.find_op(name);
  if (!op) throw InputError("unknown operation '" + name + "'");
  return *op;
}

int object_named(const FinCategory& c, const json& j) {
  std::string name = str(j, "object");
  for (int x = 0; x < c.num_objects(); ++x)
    if (c.objects[x] == name) return x;
  throw InputError("unknown object '" + name + "'");
}

int arrow_named(const FinCategory& c, const json& j) {
  std::string name = str(j, "arrow");
  for (int f = 0; f < c.num_arrows(); ++f)
    if (c.arrows[f].name == name) return f;
  throw InputError("unknown arrow '" + name + "'");
}

json optional_simplex(const Simplex& s) { return s.deg.empty() ? json(nullptr) : simplex_to_json(s); }
Simplex optional_simplex_from(const json& j) { return j.is_null() ? Simplex{} : simplex_from_json(j); }

// Adds the unit laws to a composition table.
void add_unit_compositions(Operad& p) {
  for (int q = 0; q < static_cast<int>(p.ops.size()); ++q) {
    for (int i = 0; i < p.arity(q); ++i) p.comp[{q, i, p.units[p.ops[q].inputs[i]]}] = q;
    p.comp[{p.units[p.ops[q].output], 0, q}] = q;
  }
}

Operad from_category(std::vector<std::string> objects, std::vector<Arrow> arrows,
                     std::map<std::pair<int, int>, int> extra) {
  // The first arrows are the identities, in object order.
  std::vector<int> ids;
  for (std::size_t x = 0; x < objects.size(); ++x) ids.push_back(static_cast<int>(x));
  std::map<std::pair<int, int>, int> comps = std::move(extra);
  for (int f = 0; f < static_cast<int>(arrows.size()); ++f) {
    comps[{ids[arrows[f].tgt], f}] = f;
    comps[{f, ids[arrows[f].src]}] = f;
  }
  FinCategory c = table_category(objects, arrows, ids, comps);
  if (auto e = check_category(c)) throw std::logic_error("shipped category: " + *e);
  return finalize_operad(operad_from_category(c));
}

}  // namespace

std::string dump(const json& j) { return j.dump(2); }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

json tree_to_json(const Tree& t) {
  json vs = json::array();
  for (int v = 0; v < t.num_vertices(); ++v) {
    json in = json::array();
    for (int e : t.in[v]) in.push_back(t.names[e]);
    vs.push_back({{"out", t.names[t.out[v]]}, {"in", in}});
  }
  return {{"text", to_string(t)}, {"edges", t.names}, {"root", t.names[t.root]}, {"vertices", vs}};
}

Tree tree_from_json(const json& j) {
  try {
    if (j.is_string()) return parse_tree(j.get<std::string>());
    if (j.is_object() && !j.contains("edges")) return parse_tree(str(field(j, "text"), "text"));
    std::vector<std::string> names;
    for (const json& n : field(j, "edges")) names.push_back(str(n, "edge name"));
    auto index = [&](const json& n) {
      std::string s = str(n, "edge name");
      for (std::size_t e = 0; e < names.size(); ++e)
        if (names[e] == s) return static_cast<int>(e);
      throw InputError("unknown edge '" + s + "'");
    };
    std::vector<int> out;
    std::vector<std::vector<int>> in;
    for (const json& v : field(j, "vertices")) {
      out.push_back(index(field(v, "out")));
      in.emplace_back();
      for (const json& e : field(v, "in")) in.back().push_back(index(e));
    }
    return make_tree(names, index(field(j, "root")), out, in);
  } catch (const ParseError& e) {
    throw InputError(std::string("tree: ") + e.what());
  } catch (const TreeError& e) {
    throw InputError(std::string("tree: ") + e.what());
  }
}

json morphism_to_json(const TreeMorphism& f) {
  json m = json::object();
  for (int e = 0; e < f.source.num_edges(); ++e)
    m[f.source.names[e]] = f.target.names[f.edge_map[e]];
  return {{"source", tree_to_json(f.source)}, {"target", tree_to_json(f.target)}, {"edge_map", m}};
}

TreeMorphism morphism_from_json(const json& j) {
  Tree s = tree_from_json(field(j, "source")), t = tree_from_json(field(j, "target"));
  const json& m = field(j, "edge_map");
  std::vector<int> map(s.num_edges(), -1);
  for (int e = 0; e < s.num_edges(); ++e) {
    if (!m.contains(s.names[e])) throw InputError("edge_map misses '" + s.names[e] + "'");
    map[e] = edge_named(t, m.at(s.names[e]));
  }
  TreeMorphism f{s, t, map};
  if (auto err = check_morphism(f)) throw InputError("morphism: " + *err);
  return f;
}

json subtree_to_json(const Tree& t, const Subtree& s) {
  json vs = json::array();
  for (int v = 0; v < t.num_vertices(); ++v)
    if (s.verts >> v & 1) vs.push_back(t.names[t.out[v]]);
  return {{"root", t.names[s.root]}, {"vertices", vs}, {"text", to_string(extract(t, s).tree)}};
}

json chain_to_json(const Tree& t, const MaxChain& c) {
  json steps = json::array(), added = json::array();
  for (const Subtree& s : c.steps) steps.push_back(subtree_to_json(t, s));
  for (int v : c.added) added.push_back(t.names[t.out[v]]);
  return {{"steps", steps}, {"added", added}};
}

json triple_to_json(const Tree& t, const InitialTriple& tr) {
  json chain = json::array(), contracted = json::array();
  for (const Subtree& s : tr.chain) chain.push_back(subtree_to_json(tr.tree, s));
  for (int e : tr.contracted) contracted.push_back(t.names[e]);
  return {{"tree", to_string(tr.tree)},
          {"face", morphism_to_json(tr.face)},
          {"chain", chain},
          {"contracted", contracted}};
}

json operad_to_json(const Operad& p) {
  json ops = json::array();
  for (const Operation& o : p.ops) {
    json in = json::array();
    for (int c : o.inputs) in.push_back(p.colors[c]);
    ops.push_back({{"name", o.name}, {"inputs", in}, {"output", p.colors[o.output]}});
  }
  json units = json::object();
  for (std::size_t c = 0; c < p.colors.size(); ++c) units[p.colors[c]] = p.ops[p.units[c]].name;
  json comps = json::array();
  for (const auto& [key, r] : p.comp) {
    auto [outer, slot, inner] = key;
    comps.push_back({{"outer", p.ops[outer].name},
                     {"slot", slot},
                     {"inner", p.ops[inner].name},
                     {"result", p.ops[r].name}});
  }
  json sigma = json::array();
  for (const auto& [key, r] : p.swaps)
    sigma.push_back({{"op", p.ops[key.first].name},
                     {"transposition", {key.second, key.second + 1}},
                     {"result", p.ops[r].name}});
  json out = {{"colors", p.colors},
              {"operations", ops},
              {"units", units},
              {"compositions", comps},
              {"sigma", sigma}};
  if (p.arity_bound >= 0) out["arity_bound"] = p.arity_bound;
  return out;
}

Operad operad_from_json(const json& j) {
  try {
    if (j.is_object() && j.contains("free_on"))
      return finalize_operad(free_operad_on_tree(tree_from_json(j.at("free_on"))));
    Operad p;
    for (const json& c : field(j, "colors")) p.colors.push_back(str(c, "color"));
    std::map<std::string, int> by_name;
    for (const json& o : field(j, "operations")) {
      Operation op;
      op.name = str(field(o, "name"), "operation name");
      for (const json& c : field(o, "inputs")) op.inputs.push_back(color_named(p, c));
      op.output = color_named(p, field(o, "output"));
      if (!by_name.emplace(op.name, static_cast<int>(p.ops.size())).second)
        throw InputError("duplicate operation '" + op.name + "'");
      p.ops.push_back(op);
    }
    auto named = [&](const json& n) {
      std::string s = str(n, "operation");
      auto it = by_name.find(s);
      if (it == by_name.end()) throw InputError("unknown operation '" + s + "'");
      return it->second;
    };
    const json& units = field(j, "units");
    for (const std::string& c : p.colors) {
      if (!units.contains(c)) throw InputError("no unit for color '" + c + "'");
      p.units.push_back(named(units.at(c)));
    }
    for (const json& c : field(j, "compositions"))
      p.comp[{named(field(c, "outer")), integer(field(c, "slot"), "slot"), named(field(c, "inner"))}] =
          named(field(c, "result"));
    std::vector<std::tuple<int, int, int, int>> far;
    if (j.contains("sigma"))
      for (const json& s : j.at("sigma")) {
        const json& tr = field(s, "transposition");
        if (!tr.is_array() || tr.size() != 2) throw InputError("transposition needs two slots");
        int a = integer(tr[0], "slot"), b = integer(tr[1], "slot");
        if (a > b) std::swap(a, b);
        int op = named(field(s, "op")), r = named(field(s, "result"));
        if (b == a + 1)
          p.swaps[{op, a}] = r;
        else
          far.emplace_back(op, a, b, r);
      }
    if (j.contains("arity_bound")) p.arity_bound = integer(j.at("arity_bound"), "arity_bound");
    p = finalize_operad(std::move(p));
    for (auto [op, a, b, r] : far) {
      std::vector<int> pi(p.arity(op));
      for (int k = 0; k < p.arity(op); ++k) pi[k] = k;
      std::swap(pi[a], pi[b]);
      if (p.act(op, pi) != r)
        throw InputError("sigma: transposition of " + p.ops[op].name + " disagrees with the table");
    }
    return p;
  } catch (const InputError&) {
    throw;
  } catch (const json::exception& e) {
    throw InputError(std::string("operad: ") + e.what());
  } catch (const std::exception& e) {
    throw InputError(std::string("operad: ") + e.what());
  }
}

json tree_map_to_json(const Operad& p, const Tree& t, const TreeMap& a) {
  json colors = json::object(), ops = json::object();
  for (int e = 0; e < t.num_edges(); ++e) colors[t.names[e]] = p.colors[a.color[e]];
  for (int v = 0; v < t.num_vertices(); ++v) ops[t.names[t.out[v]]] = p.ops[a.vertex_op[v]].name;
  return {{"colors", colors}, {"operations", ops}};
}

TreeMap tree_map_from_json(const Operad& p, const Tree& t, const json& j) {
  TreeMap a;
  const json& colors = field(j, "colors");
  const json& ops = field(j, "operations");
  for (int e = 0; e < t.num_edges(); ++e) {
    if (!colors.contains(t.names[e])) throw InputError("no color for edge '" + t.names[e] + "'");
    a.color.push_back(color_named(p, colors.at(t.names[e])));
  }
  for (int v = 0; v < t.num_vertices(); ++v) {
    const std::string& n = t.names[t.out[v]];
    if (!ops.contains(n)) throw InputError("no operation for vertex '" + n + "'");
    a.vertex_op.push_back(op_named(p, ops.at(n)));
  }
  if (auto e = check_tree_map(p, t, a)) throw InputError("tree map: " + *e);
  return a;
}

json category_to_json(const FinCategory& c) {
  json arrows = json::array(), ids = json::object(), comps = json::array();
  for (const Arrow& a : c.arrows)
    arrows.push_back({{"name", a.name}, {"source", c.objects[a.src]}, {"target", c.objects[a.tgt]}});
  for (int x = 0; x < c.num_objects(); ++x) ids[c.objects[x]] = c.arrows[c.identity[x]].name;
  for (int f = 0; f < c.num_arrows(); ++f)
    for (int g : c.arrows_from(c.arrows[f].tgt))
      comps.push_back({{"after", c.arrows[g].name},
                       {"before", c.arrows[f].name},
                       {"result", c.arrows[c.compose(g, f)].name}});
  return {{"objects", c.objects}, {"arrows", arrows}, {"identities", ids}, {"compositions", comps}};
}

FinCategory category_from_json(const json& j) {
  try {
    FinCategory shape;
    for (const json& o : field(j, "objects")) shape.objects.push_back(str(o, "object"));
    for (const json& a : field(j, "arrows"))
      shape.arrows.push_back({object_named(shape, field(a, "source")),
                              object_named(shape, field(a, "target")), str(field(a, "name"), "arrow")});
    const json& ids = field(j, "identities");
    std::vector<int> identity;
    for (const std::string& o : shape.objects) {
      if (!ids.contains(o)) throw InputError("no identity for object '" + o + "'");
      identity.push_back(arrow_named(shape, ids.at(o)));
    }
    std::map<std::pair<int, int>, int> comps;
    for (const json& c : field(j, "compositions"))
      comps[{arrow_named(shape, field(c, "after")), arrow_named(shape, field(c, "before"))}] =
          arrow_named(shape, field(c, "result"));
    FinCategory c = table_category(shape.objects, shape.arrows, identity, comps);
    if (auto e = check_category(c)) throw InputError("category: " + *e);
    return c;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("category: ") + e.what());
  }
}

json smcat_to_json(const SMCat& m) {
  const FinCategory& c = m.cat;
  json to = json::array(), ta = json::array(), sym = json::array();
  for (int a = 0; a < c.num_objects(); ++a)
    for (int b = 0; b < c.num_objects(); ++b) {
      to.push_back({{"left", c.objects[a]}, {"right", c.objects[b]},
                    {"result", c.objects[m.tensor_obj[a][b]]}});
      sym.push_back({{"left", c.objects[a]}, {"right", c.objects[b]},
                     {"arrow", c.arrows[m.symmetry[a][b]].name}});
    }
  for (int f = 0; f < c.num_arrows(); ++f)
    for (int g = 0; g < c.num_arrows(); ++g)
      ta.push_back({{"left", c.arrows[f].name}, {"right", c.arrows[g].name},
                    {"result", c.arrows[m.tensor_arrow[f][g]].name}});
  return {{"name", m.name},          {"category", category_to_json(c)},
          {"unit", c.objects[m.unit]}, {"tensor_objects", to},
          {"tensor_arrows", ta},       {"symmetry", sym}};
}

SMCat smcat_from_json(const json& j) {
  SMCat m;
  m.name = j.contains("name") ? str(j.at("name"), "name") : "";
  m.cat = category_from_json(field(j, "category"));
  const FinCategory& c = m.cat;
  int n = c.num_objects(), k = c.num_arrows();
  m.unit = object_named(c, field(j, "unit"));
  m.tensor_obj.assign(n, std::vector<int>(n, -1));
  m.symmetry.assign(n, std::vector<int>(n, -1));
  m.tensor_arrow.assign(k, std::vector<int>(k, -1));
  for (const json& e : field(j, "tensor_objects"))
    m.tensor_obj[object_named(c, field(e, "left"))][object_named(c, field(e, "right"))] =
        object_named(c, field(e, "result"));
  for (const json& e : field(j, "symmetry"))
    m.symmetry[object_named(c, field(e, "left"))][object_named(c, field(e, "right"))] =
        arrow_named(c, field(e, "arrow"));
  for (const json& e : field(j, "tensor_arrows"))
    m.tensor_arrow[arrow_named(c, field(e, "left"))][arrow_named(c, field(e, "right"))] =
        arrow_named(c, field(e, "result"));
  for (const auto* table : {&m.tensor_obj, &m.symmetry, &m.tensor_arrow})
    for (const auto& row : *table)
      for (int x : row)
        if (x < 0) throw InputError("monoidal tables are incomplete");
  if (auto e = check_smcat(m)) throw InputError("monoidal structure: " + *e);
  return m;
}

json simplex_to_json(const Simplex& s) { return {{"cell", s.cell}, {"deg", s.deg}}; }

Simplex simplex_from_json(const json& j) {
  Simplex s;
  s.cell = integer(field(j, "cell"), "cell");
  for (const json& x : field(j, "deg")) s.deg.push_back(integer(x, "degeneracy entry"));
  if (s.deg.empty() || s.deg[0] != 0) throw InputError("degeneracy must start at 0");
  for (std::size_t i = 1; i < s.deg.size(); ++i)
    if (s.deg[i] != s.deg[i - 1] && s.deg[i] != s.deg[i - 1] + 1)
      throw InputError("degeneracy must be a surjection");
  return s;
}

json sset_to_json(const SSet& x) {
  json cells = json::array();
  for (int m = 0; m <= x.top_dim(); ++m) {
    json level = json::array();
    for (int c = 0; c < x.count(m); ++c) {
      json fs = json::array();
      for (const Simplex& f : x.faces[m][c]) fs.push_back(simplex_to_json(f));
      json cell = {{"faces", fs}};
      if (m < static_cast<int>(x.labels.size()) && c < static_cast<int>(x.labels[m].size()) &&
          !x.labels[m][c].empty())
        cell["label"] = x.labels[m][c];
      level.push_back(cell);
    }
    cells.push_back(level);
  }
  return {{"truncation", x.truncation < 0 ? json(nullptr) : json(x.truncation)},
          {"counts", x.counts()},
          {"cells", cells}};
}

json poset_to_json(const FinPoset& p) {
  json leq = json::array();
  for (int a = 0; a < p.n; ++a)
    for (int b = 0; b < p.n; ++b)
      if (a != b && p.leq[a][b]) leq.push_back({a, b});
  json labels = json::array();
  for (int a = 0; a < p.n; ++a)
    labels.push_back(a < static_cast<int>(p.labels.size()) ? p.labels[a] : std::to_string(a));
  return {{"elements", labels}, {"leq", leq}};
}

FinPoset poset_from_json(const json& j) {
  FinPoset p;
  for (const json& l : field(j, "elements")) p.labels.push_back(str(l, "element"));
  p.n = static_cast<int>(p.labels.size());
  p.leq.assign(p.n, std::vector<char>(p.n, 0));
  for (int a = 0; a < p.n; ++a) p.leq[a][a] = 1;
  for (const json& pr : field(j, "leq")) {
    if (!pr.is_array() || pr.size() != 2) throw InputError("leq entries are pairs");
    int a = integer(pr[0], "element"), b = integer(pr[1], "element");
    if (a < 0 || b < 0 || a >= p.n || b >= p.n) throw InputError("leq entry out of range");
    p.leq[a][b] = 1;
  }
  if (auto e = check_poset(p)) throw InputError("poset: " + *e);
  return p;
}

json poset_algebra_to_json(const PosetAlgebra& a) {
  const Operad& p = *a.operad;
  json values = json::object(), actions = json::object();
  for (std::size_t c = 0; c < p.colors.size(); ++c) values[p.colors[c]] = poset_to_json(a.value[c]);
  for (int q = 0; q < static_cast<int>(p.ops.size()); ++q) {
    json rows = json::array();
    std::vector<int> xs(p.arity(q), 0);
    while (true) {
      bool empty = false;
      for (int c : p.ops[q].inputs) empty |= a.value[c].n == 0;
      if (empty) break;
      json row = xs;
      row.push_back(a.act(q, xs));
      rows.push_back(row);
      int i = p.arity(q) - 1;
      while (i >= 0 && ++xs[i] == a.value[p.ops[q].inputs[i]].n) xs[i--] = 0;
      if (i < 0) break;
    }
    actions[p.ops[q].name] = rows;
  }
  return {{"values", values}, {"actions", actions}};
}

PosetAlgebra poset_algebra_from_json(std::shared_ptr<const Operad> p, const json& j) {
  PosetAlgebra a;
  a.operad = p;
  const json& values = field(j, "values");
  for (const std::string& c : p->colors) {
    if (!values.contains(c)) throw InputError("no value at color '" + c + "'");
    a.value.push_back(poset_from_json(values.at(c)));
  }
  auto table = std::make_shared<std::map<std::pair<int, std::vector<int>>, int>>();
  const json& actions = field(j, "actions");
  for (int q = 0; q < static_cast<int>(p->ops.size()); ++q) {
    if (!actions.contains(p->ops[q].name))
      throw InputError("no action table for '" + p->ops[q].name + "'");
    for (const json& row : actions.at(p->ops[q].name)) {
      if (!row.is_array() || static_cast<int>(row.size()) != p->arity(q) + 1)
        throw InputError("action row for '" + p->ops[q].name + "' has the wrong length");
      std::vector<int> xs;
      for (int i = 0; i < p->arity(q); ++i) xs.push_back(integer(row[i], "element"));
      (*table)[{q, xs}] = integer(row.back(), "element");
    }
  }
  a.act = [table, p](int q, const std::vector<int>& xs) {
    auto it = table->find({q, xs});
    if (it == table->end()) throw InputError("action table of '" + p->ops[q].name + "' is incomplete");
    return it->second;
  };
  if (auto e = check_poset_algebra(a)) throw InputError("algebra: " + *e);
  return a;
}

json poset_algebra_map_to_json(const Operad& p, const PosetAlgebraMap& m) {
  json out = json::object();
  for (std::size_t c = 0; c < p.colors.size(); ++c) out[p.colors[c]] = m.map[c];
  return out;
}

PosetAlgebraMap poset_algebra_map_from_json(const Operad& p, const json& j) {
  PosetAlgebraMap m;
  for (const std::string& c : p.colors) {
    if (!j.contains(c)) throw InputError("map misses color '" + c + "'");
    m.map.emplace_back();
    for (const json& x : j.at(c)) m.map.back().push_back(integer(x, "element"));
  }
  return m;
}

json horn_center_to_json(const Tree& t, const HornCenter& x) {
  switch (x.kind) {
    case HornCenter::Kind::InnerEdge:
      return {{"kind", "inner_edge"}, {"edge", t.names[x.index]}};
    case HornCenter::Kind::LeafVertex:
      return {{"kind", "leaf_vertex"}, {"vertex", t.names[t.out[x.index]]}};
    case HornCenter::Kind::CorollaLeaves:
      return {{"kind", "corolla_leaves"}};
  }
  return nullptr;
}

HornCenter horn_center_from_json(const Tree& t, const json& j) {
  std::string kind = str(field(j, "kind"), "kind");
  HornCenter x;
  if (kind == "inner_edge") {
    x.kind = HornCenter::Kind::InnerEdge;
    x.index = edge_named(t, field(j, "edge"));
    if (!is_inner(t, x.index)) throw InputError("horn edge is not inner");
  } else if (kind == "leaf_vertex") {
    x.kind = HornCenter::Kind::LeafVertex;
    x.index = vertex_named(t, field(j, "vertex"));
    if (!is_leaf_vertex(t, x.index)) throw InputError("horn vertex is not a leaf vertex");
  } else if (kind == "corolla_leaves") {
    x.kind = HornCenter::Kind::CorollaLeaves;
  } else {
    throw InputError("unknown horn kind '" + kind + "'");
  }
  return x;
}

json lift_problem_to_json(const LiftProblem& p) {
  json chi = json::array(), active = json::array(), xi = json::array(), lambdas = json::array();
  for (const Simplex& s : p.chi.values) chi.push_back(optional_simplex(s));
  for (char a : p.chi.active) active.push_back(a != 0);
  for (const Simplex& s : p.xi) xi.push_back(optional_simplex(s));
  for (const Simplex& s : p.lambdas) lambdas.push_back(simplex_to_json(s));
  Operad free = free_operad_on_tree(p.tree);
  bool is_free = free.ops.size() == p.operad->ops.size() && free.colors == p.operad->colors;
  for (std::size_t q = 0; is_free && q < free.ops.size(); ++q)
    is_free = free.ops[q].name == p.operad->ops[q].name;
  return {{"name", p.name},
          {"operad", is_free ? json{{"free_on", tree_to_json(p.tree)}} : operad_to_json(*p.operad)},
          {"tree", tree_to_json(p.tree)},
          {"alpha", tree_map_to_json(*p.operad, p.tree, p.alpha)},
          {"source", poset_algebra_to_json(p.source)},
          {"target", poset_algebra_to_json(p.target)},
          {"map", poset_algebra_map_to_json(*p.operad, p.map)},
          {"horn", p.horn ? horn_center_to_json(p.tree, *p.horn) : json(nullptr)},
          {"chi", {{"values", chi}, {"active", active}}},
          {"xi", xi},
          {"lambdas", lambdas}};
}

LiftProblem lift_problem_from_json(const json& j) {
  LiftProblem p;
  p.name = j.contains("name") ? str(j.at("name"), "name") : "";
  p.operad = std::make_shared<const Operad>(operad_from_json(field(j, "operad")));
  p.tree = tree_from_json(field(j, "tree"));
  p.alpha = tree_map_from_json(*p.operad, p.tree, field(j, "alpha"));
  p.source = poset_algebra_from_json(p.operad, field(j, "source"));
  p.target = poset_algebra_from_json(p.operad, field(j, "target"));
  p.map = poset_algebra_map_from_json(*p.operad, field(j, "map"));
  if (auto e = check_poset_algebra_map(p.source, p.target, p.map)) throw InputError("map: " + *e);
  if (j.contains("horn") && !j.at("horn").is_null()) p.horn = horn_center_from_json(p.tree, j.at("horn"));
  const json& chi = field(j, "chi");
  for (const json& s : field(chi, "values")) p.chi.values.push_back(optional_simplex_from(s));
  for (const json& a : field(chi, "active")) {
    if (!a.is_boolean()) throw InputError("active flags are booleans");
    p.chi.active.push_back(a.get<bool>() ? 1 : 0);
  }
  for (const json& s : field(j, "xi")) p.xi.push_back(optional_simplex_from(s));
  for (const json& s : field(j, "lambdas")) p.lambdas.push_back(simplex_from_json(s));
  std::size_t slots = dendrex_layout(*p.operad, p.tree, p.alpha).slots.size();
  if (p.chi.values.size() != slots || p.chi.active.size() != slots || p.xi.size() != slots)
    throw InputError("dendrex data does not match the slot layout (" + std::to_string(slots) +
                     " slots)");
  return p;
}

json lift_result_to_json(const LiftResult& r) {
  json lift = json::array(), ext = json::array();
  for (const Simplex& s : r.lift) lift.push_back(optional_simplex(s));
  for (const auto& [slot, d] : r.extensions) ext.push_back({{"slot", slot}, {"d", d}});
  return {{"ok", r.ok()},
          {"preconditions", r.preconditions},
          {"compatible", r.compatible},
          {"restricts", r.restricts},
          {"covers", r.covers},
          {"witness", r.witness ? json(*r.witness) : json(nullptr)},
          {"lift", lift},
          {"extensions", ext}};
}

Operad arrow_operad() {
  return from_category({"0", "1"}, {{0, 0, "id0"}, {1, 1, "id1"}, {0, 1, "f"}}, {});
}

Operad z2_operad() {
  return from_category({"*"}, {{0, 0, "e"}, {0, 0, "g"}}, {{{1, 1}, 0}});
}

Operad span_operad() {
  return from_category({"s", "x", "y"},
                       {{0, 0, "id_s"}, {1, 1, "id_x"}, {2, 2, "id_y"}, {0, 1, "f"}, {0, 2, "g"}}, {});
}

Operad idempotent_operad() {
  return from_category({"*"}, {{0, 0, "e"}, {0, 0, "p"}}, {{{1, 1}, 1}});
}

Operad pointed_pair_operad() {
  Operad p;
  p.colors = {"x", "y", "z"};
  p.ops = {{"id_x", {0}, 0}, {"id_y", {1}, 1}, {"id_z", {2}, 2}, {"mu", {0, 1}, 2},
           {"mu_t", {1, 0}, 2}, {"ex", {}, 0},   {"ey", {}, 1},   {"mu_ex", {1}, 2},
           {"mu_ey", {0}, 2},  {"mu_exy", {}, 2}};
  p.units = {0, 1, 2};
  add_unit_compositions(p);
  p.comp[{3, 0, 5}] = 7;
  p.comp[{3, 1, 6}] = 8;
  p.comp[{4, 0, 6}] = 8;
  p.comp[{4, 1, 5}] = 7;
  p.comp[{7, 0, 6}] = 9;
  p.comp[{8, 0, 5}] = 9;
  p.swaps[{3, 0}] = 4;
  p.swaps[{4, 0}] = 3;
  return finalize_operad(std::move(p));
}

std::map<std::string, Operad> shipped_operads() {
  return {{"arrow", arrow_operad()},
          {"z2", z2_operad()},
          {"span", span_operad()},
          {"idempotent", idempotent_operad()},
          {"pointed-pair", pointed_pair_operad()},
          {"comm3", finalize_operad(commutative_truncated(3))}};
}

}  // namespace dendro
