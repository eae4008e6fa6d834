#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>
#include <map>
#include <random>

#include "dendro/io.hpp"

namespace dendro {

namespace {

// A verification failure; the witness carries the arguments that reproduce it.
struct Failure : std::runtime_error {
  json witness;
  Failure(const std::string& what, json w) : std::runtime_error(what), witness(std::move(w)) {}
};

struct Options {
  std::string tree, source, target, leaf, with, root, edge, vertex, operad, alpha, algebra, color;
  std::string poset, category, smcat, problem, suite, map, name, a, b, c;
  int chain = 0, length = 2, trials = 5, max_vertices = 3, count = 100, limit = 20, d = -1;
  unsigned seed = 0;
  bool dot = false, corolla = false, generate = false, emit = false, oracle = false;
};

int truncation(const Options& o, int fallback) {
  if (o.d >= 0) return o.d;
  if (const char* env = std::getenv("DENDRO_TRUNCATION")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*env == '\0' || *end != '\0' || v < 0 || v > 64)
      throw InputError("DENDRO_TRUNCATION must be a small nonnegative integer");
    return static_cast<int>(v);
  }
  return fallback;
}

json load_json_arg(const std::string& arg) {
  if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) {
    try {
      return json::parse(arg);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("inline JSON: ") + e.what());
    }
  }
  return read_json_file(arg);
}

Tree need_tree(const std::string& text, const char* flag) {
  if (text.empty()) throw InputError(std::string(flag) + " is required");
  return tree_from_json(json(text));
}

std::shared_ptr<const Operad> load_operad(const std::string& arg, const Tree* t) {
  if (arg.empty()) {
    if (!t) throw InputError("--operad is required");
    return std::make_shared<const Operad>(finalize_operad(free_operad_on_tree(*t)));
  }
  auto shipped = shipped_operads();
  if (auto it = shipped.find(arg); it != shipped.end())
    return std::make_shared<const Operad>(it->second);
  return std::make_shared<const Operad>(operad_from_json(load_json_arg(arg)));
}

TreeMap load_alpha(const Operad& p, const Tree& t, const std::string& arg, bool free) {
  if (arg.empty()) {
    if (!free) throw InputError("--alpha is required with --operad");
    return tree_map_from_morphism(p, identity(t));
  }
  return tree_map_from_json(p, t, load_json_arg(arg));
}

int color_of(const Operad& p, const std::string& name) {
  for (int c = 0; c < static_cast<int>(p.colors.size()); ++c)
    if (p.colors[c] == name) return c;
  throw InputError("unknown color '" + name + "'");
}

int object_of(const FinCategory& c, const std::string& name) {
  for (int x = 0; x < c.num_objects(); ++x)
    if (c.objects[x] == name) return x;
  throw InputError("unknown object '" + name + "'");
}

std::vector<SMCat> load_smcats(const std::string& arg) {
  auto all = sample_smcats();
  if (arg.empty()) return all;
  for (const SMCat& m : all)
    if (m.name == arg) return {m};
  return {smcat_from_json(load_json_arg(arg))};
}

PosetAlgebra load_algebra(std::shared_ptr<const Operad> p, const std::string& arg) {
  if (arg.empty() || arg == "terminal") return terminal_algebra(p);
  return poset_algebra_from_json(p, load_json_arg(arg));
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = s.find(',', i);
    if (j == std::string::npos) j = s.size();
    std::string item = s.substr(i, j - i);
    char* end = nullptr;
    long v = std::strtol(item.c_str(), &end, 10);
    if (item.empty() || *end != '\0') throw InputError("expected a comma separated list of integers");
    out.push_back(static_cast<int>(v));
    i = j + 1;
  }
  return out;
}

json strings(std::initializer_list<std::string> xs) { return json(std::vector<std::string>(xs)); }

json counts_json(const SSet& x, int d) {
  json c = json::array();
  for (int k = 0; k <= d; ++k) c.push_back(x.count(k));
  return c;
}

// Commands.

json cmd_tree(const Options& o, std::ostream& out, bool* raw) {
  Tree t = need_tree(o.tree, "--parse");
  if (o.dot) {
    out << to_dot(t);
    *raw = true;
    return nullptr;
  }
  EdgeClasses ec = classify_edges(t);
  json leaves = json::array(), inner = json::array();
  for (int e : ec.leaves) leaves.push_back(t.names[e]);
  for (int e : ec.inner) inner.push_back(t.names[e]);
  return {{"text", to_string(t)},         {"canonical", canonical_form(t)},
          {"root", t.names[t.root]},      {"leaves", leaves},
          {"inner", inner},               {"vertices", t.num_vertices()},
          {"automorphisms", automorphisms(t).size()}};
}

json cmd_subtrees(const Options& o) {
  Tree t = need_tree(o.tree, "--tree");
  std::vector<Subtree> subs;
  if (o.root.empty()) {
    subs = all_subtrees(t);
  } else {
    auto e = t.find_edge(o.root);
    if (!e) throw InputError("unknown edge '" + o.root + "'");
    subs = subtrees_rooted_at(t, *e);
  }
  json list = json::array();
  for (const Subtree& s : subs) list.push_back(subtree_to_json(t, s));
  return {{"count", subs.size()}, {"subtrees", list}};
}

json cmd_graft(const Options& o) {
  Tree s = need_tree(o.tree, "--tree"), r = need_tree(o.with, "--with");
  auto leaf = s.find_edge(o.leaf);
  if (!leaf) throw InputError("unknown leaf '" + o.leaf + "'");
  if (!is_leaf(s, *leaf)) throw InputError("'" + o.leaf + "' is not a leaf");
  GraftResult g = graft(s, *leaf, r);
  return {{"tree", to_string(g.tree)}, {"renamed", g.renamed}};
}

json cmd_hom(const Options& o) {
  Tree s = need_tree(o.source, "--source"), t = need_tree(o.target, "--target");
  auto homs = hom_set(s, t);
  json list = json::array();
  for (const TreeMorphism& f : homs) list.push_back(morphism_to_json(f));
  json r = {{"count", homs.size()}, {"morphisms", list}};
  if (o.oracle) {
    auto maps = dendroidal_nerve_at(finalize_operad(free_operad_on_tree(t)), s);
    r["operad_morphisms"] = maps.size();
    if (maps.size() != homs.size())
      throw Failure("hom set and operad morphisms differ",
                    {{"source", to_string(s)},
                     {"target", to_string(t)},
                     {"hom_set", homs.size()},
                     {"operad_morphisms", maps.size()},
                     {"replay", strings({"hom", "--source", to_string(s), "--target", to_string(t),
                                         "--oracle"})}});
  }
  return r;
}

json family_json(const FaceFamily& fam) {
  json list = json::array();
  for (std::size_t i = 0; i < fam.faces.size(); ++i)
    list.push_back({{"label", fam.labels[i]}, {"morphism", morphism_to_json(fam.faces[i])}});
  return {{"target", to_string(fam.target)}, {"count", fam.faces.size()}, {"faces", list}};
}

json cmd_faces(const Options& o) { return family_json(boundary(need_tree(o.tree, "--tree"))); }

json cmd_horn(const Options& o) {
  Tree t = need_tree(o.tree, "--tree");
  HornCenter x;
  if (!o.edge.empty()) {
    auto e = t.find_edge(o.edge);
    if (!e) throw InputError("unknown edge '" + o.edge + "'");
    x.kind = HornCenter::Kind::InnerEdge;
    x.index = *e;
    if (!is_inner(t, x.index)) throw InputError("'" + o.edge + "' is not an inner edge");
  } else if (!o.vertex.empty()) {
    auto e = t.find_edge(o.vertex);
    if (!e || t.producer[*e] < 0) throw InputError("no vertex named '" + o.vertex + "'");
    x.kind = HornCenter::Kind::LeafVertex;
    x.index = t.producer[*e];
    if (!is_leaf_vertex(t, x.index)) throw InputError("'" + o.vertex + "' is not a leaf vertex");
  } else if (o.corolla) {
    x.kind = HornCenter::Kind::CorollaLeaves;
  } else {
    throw InputError("one of --edge, --vertex or --corolla is required");
  }
  json r = family_json(horn(t, x));
  r["center"] = horn_center_to_json(t, x);
  return r;
}

json cmd_chains(const Options& o) {
  Tree t = need_tree(o.tree, "--tree");
  auto chains = enumerate_max_chains(t);
  json list = json::array();
  for (const MaxChain& c : chains) list.push_back(chain_to_json(t, c));
  return {{"tree", to_string(t)},
          {"count", chains.size()},
          {"linear_extensions", count_linear_extensions(t)},
          {"chains", list}};
}

json cmd_triple(const Options& o) {
  Tree t = need_tree(o.tree, "--tree");
  auto chains = enumerate_max_chains(t);
  if (o.chain < 0 || o.chain >= static_cast<int>(chains.size()))
    throw InputError("--chain must be below " + std::to_string(chains.size()));
  const MaxChain& u = chains[o.chain];
  Monotone d = parse_int_list(o.map);
  int n = u.length();
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] < 0 || d[i] > n || (i && d[i] <= d[i - 1]))
      throw InputError("--map must be strictly increasing within [0, " + std::to_string(n) + "]");
  if (d.empty() || d.back() != n) throw InputError("--map must end at " + std::to_string(n));
  InitialTriple tr = induced_triple(t, u, d);
  json r = triple_to_json(t, tr);
  r["chain"] = chain_to_json(t, u);
  if (auto e = check_triple(t, u, d, tr))
    throw Failure(*e, {{"tree", to_string(t)},
                       {"chain", o.chain},
                       {"map", d},
                       {"replay", strings({"triple", "--tree", o.tree, "--chain",
                                           std::to_string(o.chain), "--map", o.map})}});
  return r;
}

json cmd_nerve(const Options& o) {
  int d = truncation(o, 3);
  if (!o.poset.empty()) {
    FinPoset p = poset_from_json(load_json_arg(o.poset));
    return sset_to_json(nerve_poset(p).sset);
  }
  if (!o.category.empty()) {
    FinCategory c = category_from_json(load_json_arg(o.category));
    return sset_to_json(nerve_category(c, d).sset);
  }
  Tree t = need_tree(o.tree, "--tree, --poset or --category");
  auto e = t.find_edge(o.edge.empty() ? t.names[t.root] : o.edge);
  if (!e) throw InputError("unknown edge '" + o.edge + "'");
  TreeAlgebra at = build_AT(t);
  return sset_to_json(at.nerve_at(*e).sset);
}

json cmd_rectify(const Options& o) {
  Tree t = need_tree(o.tree, "--tree");
  auto p = load_operad(o.operad, &t);
  TreeMap a = load_alpha(*p, t, o.alpha, o.operad.empty());
  json colors = json::object();
  for (int c = 0; c < static_cast<int>(p->colors.size()); ++c) {
    CommaPoset cp = comma_poset(*p, t, a, c);
    PosetNerve nv = nerve_poset(cp.poset);
    json order = json::array();
    for (int i = 0; i < cp.poset.n; ++i)
      for (int j = 0; j < cp.poset.n; ++j)
        if (i != j && cp.poset.leq[i][j]) order.push_back({i, j});
    colors[p->colors[c]] = {{"objects", cp.poset.labels},
                            {"order", order},
                            {"nerve_counts", nv.sset.counts()},
                            {"components", connected_components(nv.sset)}};
    if (cp.violation)
      throw Failure("comma order is not a poset at " + p->colors[c],
                    {{"color", p->colors[c]}, {"violation", *cp.violation},
                     {"replay", strings({"rectify", "--tree", o.tree, "--operad", o.operad,
                                         "--alpha", o.alpha})}});
  }
  Rectified r = rectify_representable(p, t, a);
  if (auto e = check_poset_algebra(r.poset))
    throw Failure("rectified representable is not an algebra: " + *e,
                  {{"replay", strings({"rectify", "--tree", o.tree, "--operad", o.operad,
                                       "--alpha", o.alpha})}});
  return {{"tree", to_string(t)}, {"colors", colors}};
}

json cmd_relnerve(const Options& o) {
  Tree t = need_tree(o.tree, "--tree");
  auto p = load_operad(o.operad, &t);
  TreeMap a = load_alpha(*p, t, o.alpha, o.operad.empty());
  SAlgebra f = nerve_algebra(load_algebra(p, o.algebra));
  DendrexLayout l = dendrex_layout(*p, t, a);
  auto ds = relative_nerve_dendrices(f, l);
  json slots = json::array();
  for (const auto& s : l.slots)
    slots.push_back({{"edge", t.names[s.edge]}, {"dim", s.dim}, {"cell", s.cell}});
  json list = json::array();
  for (std::size_t i = 0; i < ds.size() && static_cast<int>(i) < o.limit; ++i) {
    json g = json::array();
    for (const Simplex& s : ds[i]) g.push_back(simplex_to_json(s));
    list.push_back(g);
    if (auto e = check_dendrex(f, l, ds[i]))
      throw Failure("enumerated family is not a dendrex: " + *e, {{"index", i}});
  }
  return {{"count", ds.size()}, {"slots", slots}, {"dendrices", list}};
}

json cmd_fiber(const Options& o) {
  auto p = load_operad(o.operad, nullptr);
  SAlgebra f = nerve_algebra(load_algebra(p, o.algebra));
  int c = color_of(*p, o.color.empty() ? p->colors[0] : o.color);
  int d = truncation(o, 2);
  Fiber fib = fiber_of_relative_nerve(f, c, d);
  json r = {{"color", p->colors[c]},
            {"d", d},
            {"fiber_counts", counts_json(fib.presented.sset, d)},
            {"value_counts", counts_json(f.value[c], d)}};
  if (auto e = check_fiber_comparison(f, c, fib))
    throw Failure(*e, {{"color", p->colors[c]}, {"d", d},
                       {"replay", strings({"fiber", "--operad", o.operad, "--algebra", o.algebra,
                                           "--color", p->colors[c], "--d", std::to_string(d)})}});
  return r;
}

json comparison_json(const EnvComparison& r) {
  return {{"comma_counts", r.comma_counts},
          {"pullback_counts", r.pullback_counts},
          {"comma_components", r.comma_components},
          {"pullback_components", r.pullback_components},
          {"pullback_objects", r.pullback_objects},
          {"pullback_iso_classes", r.pullback_iso_classes},
          {"isomorphic", r.isomorphic},
          {"reflection_isomorphic", r.reflection_isomorphic},
          {"finding", r.finding.empty() ? json(nullptr) : json(r.finding)}};
}

json cmd_envelope(const Options& o) {
  if (!o.tree.empty()) {
    Tree t = need_tree(o.tree, "--tree");
    auto p = load_operad(o.operad, nullptr);
    TreeMap a = load_alpha(*p, t, o.alpha, false);
    int c = color_of(*p, o.color.empty() ? p->colors[0] : o.color);
    return comparison_json(compare_with_envelope(*p, t, a, c, truncation(o, t.num_vertices())));
  }
  auto p = load_operad(o.operad, nullptr);
  if (o.length < 1) throw InputError("--length must be at least 1");
  EnvCategory e = envelope(*p, o.length);
  json r = {{"objects", e.cat.num_objects()}, {"arrows", e.cat.num_arrows()}};
  if (auto err = check_category(e.cat))
    throw Failure("envelope is not a category: " + *err,
                  {{"replay", strings({"envelope", "--operad", o.operad, "--length",
                                       std::to_string(o.length)})}});
  return r;
}

json cmd_day(const Options& o) {
  auto ms = load_smcats(o.smcat.empty() ? "truncated-sum" : o.smcat);
  const SMCat& m = ms[0];
  int a = object_of(m.cat, o.a.empty() ? m.cat.objects[0] : o.a);
  int b = object_of(m.cat, o.b.empty() ? m.cat.objects[0] : o.b);
  int c = object_of(m.cat, o.c.empty() ? m.cat.objects[m.tensor_obj[a][b]] : o.c);
  int d = truncation(o, 2);
  DayValue day = day_convolution(m, representable(m.cat, a), representable(m.cat, b), c, d);
  json r = {{"smcat", m.name},
            {"d", d},
            {"classes", counts_json(day.presented.sset, d)},
            {"hom_tensor_to_c", m.cat.hom(m.tensor_obj[a][b], c).size()}};
  if (auto e = representable_day_failure(m, a, b, c, d))
    throw Failure(*e, {{"smcat", m.name}, {"a", m.cat.objects[a]}, {"b", m.cat.objects[b]},
                       {"c", m.cat.objects[c]},
                       {"replay", strings({"day", "--smcat", m.name, "--a", m.cat.objects[a], "--b",
                                           m.cat.objects[b], "--c", m.cat.objects[c]})}});
  return r;
}

json run_laxity(const std::vector<SMCat>& ms, const Options& o, const std::string& cmd) {
  int d = truncation(o, 3);
  json per = json::array();
  for (const SMCat& m : ms) {
    std::mt19937 rng(o.seed);
    CatNerve na = nerve_category(m.cat, d);
    int day = 0, box = 0;
    for (int trial = 0; trial < o.trials; ++trial) {
      OverObject u = random_over(rng, m.cat, na, std::min(2, d));
      OverObject v = random_over(rng, m.cat, na, std::min(1, d));
      int c = std::uniform_int_distribution<int>(0, m.cat.num_objects() - 1)(rng);
      LaxityReport rep = check_laxity(m, u, v, c, d);
      day += rep.checked_day;
      box += rep.checked_box;
      if (rep.failure) {
        std::vector<std::string> argv = {cmd, "--smcat", m.name, "--seed", std::to_string(o.seed),
                                         "--trials", std::to_string(trial + 1)};
        if (cmd == "check") argv.insert(argv.begin() + 1, {"--suite", "laxity"});
        throw Failure(*rep.failure, {{"smcat", m.name}, {"seed", o.seed}, {"trial", trial},
                                     {"replay", argv}});
      }
    }
    per.push_back({{"smcat", m.name}, {"day_simplices", day}, {"boxed_simplices", box}});
  }
  return {{"d", d}, {"trials", o.trials}, {"results", per}};
}

json solve_json(const LiftProblem& p, bool emit) {
  SolvedLift s = solve_lift_problem(p);
  json r = lift_result_to_json(s.result);
  r["name"] = p.name;
  if (emit) r["problem"] = lift_problem_to_json(p);
  if (!s.result.ok())
    throw Failure("lift certificates fail for " + p.name,
                  {{"result", r},
                   {"replay", strings({"lift", "--problem", lift_problem_to_json(p).dump()})}});
  return r;
}

json cmd_lift(const Options& o) {
  if (!o.problem.empty()) return solve_json(lift_problem_from_json(load_json_arg(o.problem)), o.emit);
  if (!o.generate) throw InputError("--problem or --generate is required");
  std::mt19937 rng(o.seed);
  json list = json::array();
  for (const LiftProblem& p : generate_lift_problems(rng, std::min(o.max_vertices, 3)))
    list.push_back(solve_json(p, o.emit));
  return {{"count", list.size()}, {"problems", list}};
}

// Certificate suites.

std::vector<Tree> suite_trees(const Options& o, int max_arity, bool leaves = true) {
  if (!o.tree.empty()) return {need_tree(o.tree, "--tree")};
  return enumerate_trees(o.max_vertices, max_arity, leaves);
}

std::vector<std::string> suite_replay(const Options& o, const Tree& t) {
  return {"check", "--suite", o.suite, "--tree", to_string(t)};
}

json suite_initiality(const Options& o) {
  int checked = 0;
  for (const Tree& t : suite_trees(o, 2)) {
    auto bad = initiality_failures(t);
    if (!bad.empty())
      throw Failure("triple is not initial",
                    {{"tree", to_string(t)}, {"failures", bad}, {"replay", suite_replay(o, t)}});
    ++checked;
  }
  return {{"trees", checked}};
}

json suite_chain_count(const Options& o) {
  int checked = 0;
  for (const Tree& t : suite_trees(o, o.max_vertices, false)) {
    auto n = enumerate_max_chains(t).size();
    long long want = count_linear_extensions(t);
    if (static_cast<long long>(n) != want)
      throw Failure("chain count differs from the linear extension count",
                    {{"tree", to_string(t)}, {"chains", n}, {"linear_extensions", want},
                     {"replay", suite_replay(o, t)}});
    ++checked;
  }
  return {{"trees", checked}};
}

json suite_hom(const Options& o) {
  std::vector<Tree> trees;
  for (const Tree& t : suite_trees(o, 3))
    if (t.num_edges() <= 5) trees.push_back(t);
  int pairs = 0;
  for (const Tree& s : trees)
    for (const Tree& t : trees) {
      auto homs = hom_set(s, t).size();
      auto maps = dendroidal_nerve_at(finalize_operad(free_operad_on_tree(t)), s).size();
      if (homs != maps)
        throw Failure("hom set and operad morphisms differ",
                      {{"source", to_string(s)}, {"target", to_string(t)}, {"hom_set", homs},
                       {"operad_morphisms", maps},
                       {"replay", strings({"hom", "--source", to_string(s), "--target",
                                           to_string(t), "--oracle"})}});
      ++pairs;
    }
  return {{"pairs", pairs}};
}

json suite_sigma_free(const Options& o) {
  std::mt19937 rng(o.seed);
  for (int i = 0; i < o.count; ++i) {
    Tree t = random_tree(rng, o.max_vertices, 3);
    while (leaves(t).size() > 7) t = random_tree(rng, o.max_vertices, 3);
    if (!is_sigma_free(free_operad_on_tree(t)))
      throw Failure("free operad has a fixed point",
                    {{"tree", to_string(t)}, {"replay", suite_replay(o, t)}});
  }
  return {{"trees", o.count}};
}

json suite_day(const Options& o) {
  int d = truncation(o, 2), checked = 0;
  for (const SMCat& m : load_smcats(o.smcat)) {
    int n = m.cat.num_objects();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          if (auto e = representable_day_failure(m, a, b, c, d))
            throw Failure(*e, {{"smcat", m.name},
                               {"replay", strings({"day", "--smcat", m.name, "--a", m.cat.objects[a],
                                                   "--b", m.cat.objects[b], "--c",
                                                   m.cat.objects[c]})}});
          ++checked;
        }
  }
  return {{"triples", checked}};
}

json suite_fiber(const Options& o) {
  int d = truncation(o, 2), algebras = 0, maps = 0;
  std::mt19937 rng(o.seed);
  for (const auto& [name, op] : shipped_operads()) {
    if (op.arity_bound >= 0) continue;
    auto p = std::make_shared<const Operad>(op);
    for (int trial = 0; trial < 2; ++trial) {
      JoinAlgebra j = random_join_algebra(rng, p);
      auto w = std::uniform_int_distribution<std::uint32_t>(0, 7)(rng);
      auto [g, m] = restrict_join_algebra(j, w);
      SAlgebra fa = nerve_algebra(j.algebra), ga = nerve_algebra(g.algebra);
      for (int c = 0; c < static_cast<int>(p->colors.size()); ++c) {
        Fiber ff = fiber_of_relative_nerve(fa, c, d), fg = fiber_of_relative_nerve(ga, c, d);
        auto e = check_fiber_comparison(fa, c, ff);
        if (!e) e = check_fiber_comparison(ga, c, fg);
        if (!e) e = check_fiber_naturality(fa, ga, m, c, ff, fg);
        if (e)
          throw Failure(*e, {{"operad", name}, {"color", p->colors[c]}, {"seed", o.seed},
                             {"algebra", poset_algebra_to_json(j.algebra)},
                             {"replay", strings({"check", "--suite", "fiber-lemma", "--seed",
                                                 std::to_string(o.seed)})}});
      }
      ++algebras;
      ++maps;
    }
  }
  return {{"algebras", algebras}, {"maps", maps}, {"d", d}};
}

json suite_envelope(const Options& o) {
  json findings = json::array();
  int cases = 0;
  for (const auto& [name, p] : shipped_operads()) {
    if (p.arity_bound >= 0) continue;
    for (const Tree& t : suite_trees(o, std::max(1, p.max_arity()))) {
      for (const TreeMap& a : dendroidal_nerve_at(p, t))
        for (int c = 0; c < static_cast<int>(p.colors.size()); ++c) {
          EnvComparison r = compare_with_envelope(p, t, a, c, truncation(o, t.num_vertices()));
          ++cases;
          if (!r.reflection_isomorphic)
            throw Failure("comma poset is not the poset reflection of the envelope pullback",
                          {{"operad", name}, {"tree", to_string(t)},
                           {"alpha", tree_map_to_json(p, t, a)}, {"color", p.colors[c]},
                           {"comparison", comparison_json(r)},
                           {"replay", strings({"envelope", "--operad", name, "--tree", to_string(t),
                                               "--alpha", tree_map_to_json(p, t, a).dump(),
                                               "--color", p.colors[c]})}});
          if (!r.finding.empty())
            findings.push_back({{"operad", name}, {"tree", to_string(t)},
                                {"alpha", tree_map_to_json(p, t, a)}, {"color", p.colors[c]},
                                {"finding", r.finding}});
        }
    }
  }
  return {{"cases", cases}, {"findings", findings}};
}

json suite_identities(const Options& o) {
  std::mt19937 rng(o.seed);
  int iso = 0, swapped = 0;
  for (int i = 0; i < o.count; ++i) {
    Tree t = random_tree(rng, o.max_vertices, 3);
    int e = std::uniform_int_distribution<int>(0, t.num_edges() - 1)(rng);
    TreeMorphism sigma = degeneracy(t, e);
    auto faces = elementary_faces(sigma.source);
    TreeMorphism delta = faces[std::uniform_int_distribution<std::size_t>(0, faces.size() - 1)(rng)];
    TreeMorphism g = compose(sigma, delta);
    auto fail = [&](const std::string& why) {
      return Failure(why, {{"tree", to_string(t)}, {"edge", t.names[e]},
                           {"face", morphism_to_json(delta)}, {"seed", o.seed}, {"index", i},
                           {"replay", strings({"check", "--suite", "identities", "--seed",
                                               std::to_string(o.seed), "--count",
                                               std::to_string(i + 1), "--max-vertices",
                                               std::to_string(o.max_vertices)})}});
    };
    bool member = false;
    for (const TreeMorphism& h : hom_set(g.source, g.target)) member |= h == g;
    if (!member) throw fail("composite is not a morphism of the hom set");
    Factorization f = factorize(g);
    if (!(compose(f.face, compose(f.iso, f.degeneracy)) == g))
      throw fail("factorization does not recompose");
    const Tree& mid = sigma.source;
    std::string en = t.names[e], dn = en + "_d";
    int u = -1;
    for (int v = 0; v < mid.num_vertices(); ++v) {
      if (mid.in[v].size() != 1) continue;
      std::string a = mid.names[mid.out[v]], b = mid.names[mid.in[v][0]];
      if ((a == en && b == dn) || (a == dn && b == en)) u = v;
    }
    bool kept = false;
    for (int v = 0; v < g.source.num_vertices(); ++v)
      kept |= vertex_image(delta, v).verts == (VertexSet{1} << u);
    if (is_isomorphism(g) != !kept)
      throw fail(kept ? "composite is invertible although the face keeps the collapsed vertex"
                      : "face removes the collapsed vertex but the composite is not invertible");
    if (!kept) {
      ++iso;
    } else {
      int collapsed = f.degeneracy.source.num_vertices() - f.degeneracy.target.num_vertices();
      if (collapsed != 1 || !is_elementary_face(f.face))
        throw fail("composite is not a face after a single degeneracy");
      ++swapped;
    }
  }
  return {{"pairs", o.count}, {"invertible", iso}, {"exchanged", swapped}};
}

json cmd_check(const Options& o) {
  static const std::map<std::string, std::function<json(const Options&)>> suites = {
      {"lemma-initiality", suite_initiality},
      {"chain-count", suite_chain_count},
      {"hom-oracle", suite_hom},
      {"sigma-free", suite_sigma_free},
      {"day-representable", suite_day},
      {"fiber-lemma", suite_fiber},
      {"envelope-comparison", suite_envelope},
      {"identities", suite_identities},
      {"laxity", [](const Options& x) { return run_laxity(load_smcats(x.smcat), x, "check"); }},
      {"lift-certificates",
       [](const Options& x) {
         Options y = x;
         y.generate = true;
         return cmd_lift(y);
       }},
  };
  auto it = suites.find(o.suite);
  if (it == suites.end()) {
    std::string names;
    for (const auto& [k, v] : suites) names += (names.empty() ? "" : ", ") + k;
    throw InputError("unknown suite '" + o.suite + "'; expected one of " + names);
  }
  json r = it->second(o);
  r["suite"] = o.suite;
  r["max_vertices"] = o.max_vertices;
  return r;
}

json cmd_operad(const Options& o) {
  auto p = load_operad(o.name, nullptr);
  return operad_to_json(*p);
}

json cmd_smcat(const Options& o) { return smcat_to_json(load_smcats(o.name)[0]); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (!args.empty() && args[0] == "--replay") {
    if (args.size() != 2) {
      err << "usage: dendro --replay WITNESS.json\n";
      return 2;
    }
    try {
      json w = read_json_file(args[1]);
      const json* r = nullptr;
      if (w.contains("replay")) r = &w.at("replay");
      else if (w.contains("witness") && w.at("witness").contains("replay"))
        r = &w.at("witness").at("replay");
      if (!r || !r->is_array()) throw InputError("witness has no replay arguments");
      return run_cli(r->get<std::vector<std::string>>(), out, err);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
  }

  Options o;
  CLI::App app{"Trees, operads, dendroidal rectification and lift certificates", "dendro"};
  app.require_subcommand(1);
  auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };
  auto add_d = [&](CLI::App* s) {
    s->add_option("--d", o.d, "working truncation (default from DENDRO_TRUNCATION)")
        ->check(CLI::NonNegativeNumber);
  };

  auto* tree = sub("tree", "parse and canonicalize a tree");
  tree->add_option("--parse", o.tree, "tree text")->required();
  tree->add_flag("--dot", o.dot, "emit DOT instead of JSON");

  auto* subtrees = sub("subtrees", "list subtrees");
  subtrees->add_option("--tree", o.tree)->required();
  subtrees->add_option("--root", o.root, "only subtrees with this root edge");

  auto* graft = sub("graft", "graft a tree onto a leaf");
  graft->add_option("--tree", o.tree)->required();
  graft->add_option("--leaf", o.leaf)->required();
  graft->add_option("--with", o.with)->required();

  auto* hom = sub("hom", "enumerate morphisms of trees");
  hom->add_option("--source", o.source)->required();
  hom->add_option("--target", o.target)->required();
  hom->add_flag("--oracle", o.oracle, "compare with operad morphism enumeration");

  auto* faces = sub("faces", "elementary faces of a tree");
  faces->add_option("--tree", o.tree)->required();

  auto* hornc = sub("horn", "a horn face family");
  hornc->add_option("--tree", o.tree)->required();
  hornc->add_option("--edge", o.edge, "inner edge");
  hornc->add_option("--vertex", o.vertex, "leaf vertex, by its output edge");
  hornc->add_flag("--corolla", o.corolla, "corolla horn on the leaves");

  auto* chains = sub("chains", "maximal chains of root subtrees");
  chains->add_option("--tree", o.tree)->required();

  auto* triple = sub("triple", "initial triple of a chain along a map");
  triple->add_option("--tree", o.tree)->required();
  triple->add_option("--chain", o.chain, "chain index");
  triple->add_option("--map", o.map, "values of d, e.g. 0,1,3")->required();

  auto* nerve = sub("nerve", "nerve of a poset, category, or subtree poset");
  nerve->add_option("--poset", o.poset);
  nerve->add_option("--category", o.category);
  nerve->add_option("--tree", o.tree);
  nerve->add_option("--edge", o.edge);
  add_d(nerve);

  auto* rectify = sub("rectify", "comma posets of a representable");
  rectify->add_option("--tree", o.tree)->required();
  rectify->add_option("--operad", o.operad, "shipped name or JSON file");
  rectify->add_option("--alpha", o.alpha, "tree map JSON");

  auto* relnerve = sub("relnerve", "dendrices of the relative nerve at a tree");
  relnerve->add_option("--tree", o.tree)->required();
  relnerve->add_option("--operad", o.operad);
  relnerve->add_option("--alpha", o.alpha);
  relnerve->add_option("--algebra", o.algebra, "poset algebra JSON or 'terminal'");
  relnerve->add_option("--limit", o.limit, "dendrices to print");

  auto* fiber = sub("fiber", "fiber of the relative nerve against the algebra");
  fiber->add_option("--operad", o.operad)->required();
  fiber->add_option("--algebra", o.algebra);
  fiber->add_option("--color", o.color);
  add_d(fiber);

  auto* env = sub("envelope", "monoidal envelope, or its comparison with a comma poset");
  env->add_option("--operad", o.operad)->required();
  env->add_option("--length", o.length, "object length bound");
  env->add_option("--tree", o.tree);
  env->add_option("--alpha", o.alpha);
  env->add_option("--color", o.color);
  add_d(env);

  auto* day = sub("day", "Day convolution of representables");
  day->add_option("--smcat", o.smcat, "sample name or JSON file");
  day->add_option("--a", o.a);
  day->add_option("--b", o.b);
  day->add_option("--c", o.c);
  add_d(day);

  auto* lax = sub("laxity-check", "laxity and colaxity are inverse");
  lax->add_option("--smcat", o.smcat, "sample name or JSON file (default: all samples)");
  lax->add_option("--trials", o.trials);
  lax->add_option("--seed", o.seed);
  add_d(lax);

  auto* lift = sub("lift", "assemble and certify lifts");
  lift->add_option("--problem", o.problem, "problem JSON");
  lift->add_flag("--generate", o.generate, "generate problems");
  lift->add_flag("--emit", o.emit, "include the problem JSON");
  lift->add_option("--seed", o.seed);
  lift->add_option("--max-vertices", o.max_vertices);

  auto* check = sub("check", "run a certificate suite");
  check->add_option("--suite", o.suite)->required();
  check->add_option("--max-vertices", o.max_vertices);
  check->add_option("--seed", o.seed);
  check->add_option("--tree", o.tree, "restrict to one tree");
  check->add_option("--count", o.count, "random instances");
  check->add_option("--trials", o.trials);
  check->add_option("--smcat", o.smcat);
  add_d(check);

  auto* operad = sub("operad", "print a shipped operad");
  operad->add_option("--name", o.name)->required();
  auto* smcat = sub("smcat", "print a sample symmetric monoidal category");
  smcat->add_option("--name", o.name)->required();

  std::vector<std::string> argv_store{"dendro"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  static const std::vector<std::pair<std::string, std::function<json(const Options&)>>> plain = {
      {"subtrees", cmd_subtrees}, {"graft", cmd_graft},       {"hom", cmd_hom},
      {"faces", cmd_faces},       {"horn", cmd_horn},         {"chains", cmd_chains},
      {"triple", cmd_triple},     {"nerve", cmd_nerve},       {"rectify", cmd_rectify},
      {"relnerve", cmd_relnerve}, {"fiber", cmd_fiber},       {"envelope", cmd_envelope},
      {"day", cmd_day},           {"lift", cmd_lift},         {"check", cmd_check},
      {"operad", cmd_operad},     {"smcat", cmd_smcat},
  };
  std::string command = app.get_subcommands().front()->get_name();
  json report = {{"command", command}, {"seed", o.seed}};
  try {
    bool raw = false;
    json result;
    if (command == "tree") {
      result = cmd_tree(o, out, &raw);
    } else if (command == "laxity-check") {
      result = run_laxity(load_smcats(o.smcat), o, "laxity-check");
    } else {
      for (const auto& [name, fn] : plain)
        if (name == command) result = fn(o);
    }
    if (raw) return 0;
    report["ok"] = true;
    report["result"] = result;
    out << dump(report) << "\n";
    return 0;
  } catch (const Failure& f) {
    report["ok"] = false;
    report["error"] = f.what();
    report["witness"] = f.witness;
    out << dump(report) << "\n";
    return 1;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const TreeError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace dendro
