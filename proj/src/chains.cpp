#include "dendro/chains.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <stdexcept>

namespace dendro {

namespace {

int popcount(VertexSet v) { return std::popcount(v); }

// Injective monotone maps into [n] as subsets of [n] in increasing size, then lexicographic.
std::vector<Monotone> proper_faces(int n) {
  std::vector<Monotone> out;
  for (int k = 0; k < n; ++k)
    for (const Monotone& d : injections(k, n)) out.push_back(d);
  return out;
}

Monotone drop(const Monotone& d, int j) {
  Monotone r;
  for (int a = 0; a < static_cast<int>(d.size()); ++a)
    if (a != j) r.push_back(d[a]);
  return r;
}

std::vector<Subtree> restrict_chain(const MaxChain& u, const Monotone& d) {
  std::vector<Subtree> w;
  for (int j : d) w.push_back(u.steps[j]);
  return w;
}

}  // namespace

std::vector<MaxChain> enumerate_max_chains(const Tree& t) {
  std::vector<int> pos(t.num_vertices());
  std::vector<int> order = canonical_vertex_order(t);
  for (int i = 0; i < static_cast<int>(order.size()); ++i) pos[order[i]] = i;
  std::vector<MaxChain> out;
  std::vector<int> seq;
  std::function<void(VertexSet)> rec = [&](VertexSet cur) {
    if (static_cast<int>(seq.size()) == t.num_vertices()) {
      MaxChain c;
      int n = t.num_vertices();
      c.steps.resize(n + 1);
      c.added.resize(n);
      VertexSet acc = 0;
      c.steps[n] = Subtree{t.root, 0};
      for (int m = 0; m < n; ++m) {
        acc |= VertexSet{1} << seq[m];
        c.steps[n - 1 - m] = Subtree{t.root, acc};
        c.added[n - 1 - m] = seq[m];
      }
      out.push_back(std::move(c));
      return;
    }
    std::vector<int> next;
    for (int v = 0; v < t.num_vertices(); ++v) {
      if (cur >> v & 1) continue;
      int e = t.out[v];
      bool addable = cur == 0 ? e == t.root
                              : (t.consumer[e] >= 0 && (cur >> t.consumer[e] & 1));
      if (addable) next.push_back(v);
    }
    std::sort(next.begin(), next.end(), [&](int a, int b) { return pos[a] < pos[b]; });
    for (int v : next) {
      seq.push_back(v);
      rec(cur | VertexSet{1} << v);
      seq.pop_back();
    }
  };
  rec(0);
  return out;
}

InitialTriple induced_triple(const Tree& t, const MaxChain& u, const Monotone& d) {
  int n = u.length();
  int i = static_cast<int>(d.size()) - 1;
  if (i < 0 || d.back() != n) throw std::invalid_argument("face is not root preserving");
  for (int j = 0; j < i; ++j)
    if (d[j] >= d[j + 1]) throw std::invalid_argument("face is not injective");
  InitialTriple tr;
  // Base: u_i is the root edge. Step k-1: every component added between u.steps[d(k)] and
  // u.steps[d(k-1)] is replaced by the corolla with the same leaves, i.e. its inner edges collapse.
  for (int k = i; k > 0; --k) {
    VertexSet block = u.steps[d[k - 1]].verts & ~u.steps[d[k]].verts;
    for (int e : classify_edges(t).inner) {
      int lo = t.consumer[e], hi = t.producer[e];
      if ((block >> lo & 1) && (block >> hi & 1)) tr.contracted.push_back(e);
    }
  }
  std::sort(tr.contracted.begin(), tr.contracted.end());
  const Subtree& top = u.steps[d[0]];
  Extracted ex = extract(t, top);
  std::vector<int> local;
  for (int e : tr.contracted)
    for (int a = 0; a < ex.tree.num_edges(); ++a)
      if (ex.edge_of[a] == e) local.push_back(a);
  Contracted c = contract(ex.tree, local);
  std::vector<int> map;
  for (int a = 0; a < c.tree.num_edges(); ++a) map.push_back(ex.edge_of[c.edge_of[a]]);
  tr.tree = c.tree;
  tr.face = make_morphism(c.tree, t, map);
  for (int j = 0; j <= i; ++j) {
    VertexSet v = 0;
    for (int w = 0; w < tr.tree.num_vertices(); ++w) {
      int bottom = t.producer[map[tr.tree.out[w]]];
      if (u.steps[d[j]].verts >> bottom & 1) v |= VertexSet{1} << w;
    }
    tr.chain.push_back(Subtree{tr.tree.root, v});
  }
  return tr;
}

std::optional<std::string> check_triple(const Tree& t, const MaxChain& u, const Monotone& d,
                                        const InitialTriple& tr) {
  if (auto bad = check_morphism(tr.face)) return "face: " + *bad;
  if (!is_face(tr.face)) return "the triple's map is not a face";
  if (!is_root_preserving(tr.face)) return "the triple's face is not root preserving";
  (void)t;
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (!is_subtree(tr.tree, tr.chain[j])) return "chain entry is not a subtree";
    if (image_of(tr.face, tr.chain[j]) != u.steps[d[j]])
      return "square does not commute at position " + std::to_string(j);
    if (j > 0 && popcount(tr.chain[j].verts) >= popcount(tr.chain[j - 1].verts))
      return "chain is degenerate at position " + std::to_string(j);
  }
  return std::nullopt;
}

bool is_boundary_contributor(const MaxChain& u, const Monotone& d) {
  int n = u.length();
  int i = static_cast<int>(d.size()) - 1;
  if (i < 1) return false;
  return d[i - 1] < n - 1 || (i == 1 && 1 < n);
}

namespace {

// Preimage of w along a face, as subtrees of the face's source, if it exists.
std::optional<std::vector<Subtree>> chain_preimage(const TreeMorphism& face,
                                                   const std::vector<Subtree>& w) {
  std::vector<Subtree> out;
  for (const Subtree& s : w) {
    auto p = preimage(face, s);
    if (!p) return std::nullopt;
    out.push_back(*p);
  }
  return out;
}

std::vector<std::vector<int>> subsets(const std::vector<int>& xs) {
  std::vector<std::vector<int>> out;
  for (unsigned m = 0; m < (1u << xs.size()); ++m) {
    std::vector<int> s;
    for (std::size_t a = 0; a < xs.size(); ++a)
      if (m >> a & 1) s.push_back(xs[a]);
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<std::string> initiality_failures(const Tree& t) {
  std::vector<std::string> fails;
  auto chains = enumerate_max_chains(t);
  int n = t.num_vertices();
  // Root preserving faces S -> T: a root subtree with some of its inner edges contracted.
  std::vector<TreeMorphism> faces;
  for (const Subtree& r : subtrees_rooted_at(t, t.root)) {
    Extracted ex = extract(t, r);
    for (const auto& cs : subsets(classify_edges(ex.tree).inner)) {
      Contracted c = contract(ex.tree, cs);
      std::vector<int> map;
      for (int a = 0; a < c.tree.num_edges(); ++a) map.push_back(ex.edge_of[c.edge_of[a]]);
      faces.push_back(make_morphism(c.tree, t, map));
    }
  }
  for (std::size_t ci = 0; ci < chains.size(); ++ci) {
    const MaxChain& u = chains[ci];
    for (int i = 0; i <= n; ++i) {
      for (Monotone d : injections(i, n)) {
        if (d.back() != n) continue;
        std::string where = "chain " + std::to_string(ci) + " face " + std::to_string(d.size());
        InitialTriple tr = induced_triple(t, u, d);
        if (auto bad = check_triple(t, u, d, tr)) {
          fails.push_back(where + ": " + *bad);
          continue;
        }
        if (is_boundary_contributor(u, d) && is_isomorphism(tr.face))
          fails.push_back(where + ": contributing face is invertible");
        std::vector<Subtree> w = restrict_chain(u, d);
        for (const TreeMorphism& g : faces) {
          auto pre = chain_preimage(g, w);
          if (!pre) continue;
          // The unique candidate is forced by injectivity of g on edges.
          std::vector<int> phi;
          bool ok = true;
          for (int e = 0; e < tr.tree.num_edges() && ok; ++e) {
            auto it = std::find(g.edge_map.begin(), g.edge_map.end(), tr.face.edge_map[e]);
            if (it == g.edge_map.end()) ok = false;
            else phi.push_back(static_cast<int>(it - g.edge_map.begin()));
          }
          if (ok) {
            TreeMorphism m{tr.tree, g.source, phi};
            ok = !check_morphism(m) && is_face(m);
            for (std::size_t j = 0; ok && j < d.size(); ++j)
              ok = image_of(m, tr.chain[j]) == (*pre)[j];
          }
          if (!ok) fails.push_back(where + ": no factorization through " + to_string(g.source));
        }
      }
    }
  }
  return fails;
}

MaximalExtension maximal_extension(const std::vector<MaxChain>& chains,
                                   const std::vector<Subtree>& w) {
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const MaxChain& u = chains[c];
    int n = u.length();
    Monotone d;
    bool fits = true;
    for (const Subtree& s : w) {
      int j = n - popcount(s.verts);
      if (j < 0 || u.steps[j] != s) {
        fits = false;
        break;
      }
      d.push_back(j);
    }
    if (!fits) continue;
    for (std::size_t a = 1; a < d.size(); ++a)
      if (d[a - 1] >= d[a]) throw std::invalid_argument("chain is degenerate");
    return {static_cast<int>(c), d};
  }
  throw std::invalid_argument("chain has no maximal extension");
}

int horn_index(const Tree& t, const MaxChain& u, const HornCenter& x) {
  // An inner edge occurs in a root subtree exactly when the vertex it feeds does.
  int v = x.kind == HornCenter::Kind::InnerEdge ? t.consumer[x.index]
          : x.kind == HornCenter::Kind::LeafVertex ? x.index
                                                   : 0;
  for (int k = 0; k < u.length(); ++k)
    if ((u.steps[k].verts >> v & 1) && !(u.steps[k + 1].verts >> v & 1)) return k;
  throw std::invalid_argument("horn center does not occur along the chain");
}

Simplex chain_simplex(const TreeAlgebra& at, int e, const std::vector<Subtree>& w) {
  std::vector<int> xs;
  for (const Subtree& s : w) xs.push_back(at.element(e, s));
  return at.nerve_at(e).simplex_of(xs);
}

std::vector<Subtree> simplex_chain(const TreeAlgebra& at, int e, const Simplex& s) {
  std::vector<Subtree> w;
  for (int x : at.nerve_at(e).chain_of(s)) w.push_back(at.subtrees[e][x]);
  return w;
}

std::vector<char> family_slots(const DendrexLayout& l, const FaceFamily& fam) {
  std::vector<char> active(l.slots.size(), 0);
  for (const TreeMorphism& g : fam.faces) {
    TreeAlgebra as = build_AT(g.source);
    auto transport = tree_morphism_action(g, as, *l.at);
    for (int e = 0; e < g.source.num_edges(); ++e) {
      const PosetNerve& nv = as.nerve_at(e);
      int te = g.edge_map[e];
      for (int m = 0; m <= nv.sset.top_dim(); ++m)
        for (const auto& ch : nv.chains[m]) {
          std::vector<int> img;
          for (int x : ch) img.push_back(transport[e][x]);
          Simplex s = l.at->nerve_at(te).simplex_of(img);
          if (!s.nondegenerate()) throw std::logic_error("face image of a chain is degenerate");
          active[l.slot(te, s)] = 1;
        }
    }
  }
  return active;
}

PartialDendrex restrict_to_family(const DendrexLayout& l, const Dendrex& g, const FaceFamily& fam) {
  PartialDendrex chi;
  chi.active = family_slots(l, fam);
  chi.values.assign(l.slots.size(), Simplex{});
  for (std::size_t s = 0; s < l.slots.size(); ++s)
    if (chi.active[s]) chi.values[s] = g[s];
  return chi;
}

std::optional<std::string> check_family_data(const SAlgebra& F, const DendrexLayout& l,
                                             const FaceFamily& fam, const PartialDendrex& chi) {
  const Operad& P = *F.operad;
  for (std::size_t a = 0; a < fam.faces.size(); ++a) {
    const TreeMorphism& g = fam.faces[a];
    DendrexLayout ls = dendrex_layout(P, g.source, compose_tree_map(P, l.alpha, g));
    Dendrex pulled = restrict_dendrex(F, l, chi.values, ls, g);
    std::string label = a < fam.labels.size() ? fam.labels[a] : std::to_string(a);
    if (auto bad = check_dendrex(F, ls, pulled)) return "face " + label + ": " + *bad;
  }
  return std::nullopt;
}

bool ChainProblem::complete() const {
  return std::all_of(faces.begin(), faces.end(), [](const FaceValue& f) { return f.value.has_value(); });
}

const FaceValue* ChainProblem::find(const Monotone& d) const {
  for (const FaceValue& f : faces)
    if (f.d == d) return &f;
  return nullptr;
}

ChainProblem chain_restriction(const SAlgebra& F, const DendrexLayout& l,
                               const std::vector<MaxChain>& chains, const PartialDendrex& chi,
                               int chain, const std::vector<std::optional<Simplex>>& prior,
                               const RestrictionOptions& opts) {
  const Tree& t = l.tree;
  const MaxChain& u = chains[chain];
  const Operad& P = *F.operad;
  const TreeAlgebra& at = *l.at;
  ChainProblem pr;
  pr.chain = chain;
  pr.n = u.length();
  int n = pr.n;
  int root_color = l.alpha.color[t.root];
  if (opts.horn) pr.horn_k = horn_index(t, u, *opts.horn);
  // Leaf chains below the bottom subtree r, acted on by r.
  auto graft_from_leaves = [&](const Subtree& r, const std::vector<Subtree>& w) {
    std::vector<int> ls = subtree_leaves(t, r);
    int k = static_cast<int>(w.size()) - 1;
    std::vector<Simplex> xs;
    VertexSet covered = r.verts;
    std::vector<std::vector<Subtree>> parts;
    for (int e : ls) {
      VertexSet above = t_up(t, e).verts;
      std::vector<Subtree> v;
      for (const Subtree& s : w) v.push_back(Subtree{e, s.verts & above});
      covered |= above;
      Simplex vs = chain_simplex(at, e, v);
      int base = l.slot_of[e].at({vs.base_dim(), vs.cell});
      if (!chi.active[base]) throw std::logic_error("leaf chain outside the face family");
      xs.push_back(derived_value(F, l, chi.values, e, vs));
      parts.push_back(v);
    }
    // The decomposition is unique: the leaf chains must regraft to w.
    for (int j = 0; j <= k; ++j) {
      VertexSet v = r.verts;
      for (const auto& p : parts) v |= p[j].verts;
      if (v != w[j].verts || (w[j].verts & ~covered) != 0)
        throw std::logic_error("chain does not decompose over the leaves of its bottom subtree");
    }
    int op = eval_subtree(P, t, l.alpha, r, ls);
    return F.act(op, xs, k);
  };
  for (const Monotone& d : proper_faces(n)) {
    if (pr.horn_k >= 0 && static_cast<int>(d.size()) == n) {
      bool omitted = true;
      for (int j = 0; j < n; ++j)
        if (d[j] != j + (j >= pr.horn_k ? 1 : 0)) omitted = false;
      if (omitted) continue;
    }
    FaceValue fv;
    fv.d = d;
    std::vector<Subtree> w = restrict_chain(u, d);
    if (d.back() != n) {
      fv.source = FaceSource::Graft;
      fv.value = graft_from_leaves(w.back(), w);
    } else {
      InitialTriple tr = induced_triple(t, u, d);
      int slot = l.slot(t.root, chain_simplex(at, t.root, w));
      bool through_face = !is_isomorphism(tr.face);
      if (through_face && chi.active[slot]) {
        fv.source = FaceSource::Chi;
        fv.value = chi.values[slot];
      } else if (opts.literal && !through_face && d.size() >= 2) {
        fv.source = FaceSource::Literal;
        std::vector<Subtree> shifted = w;
        shifted.back() = u.steps[n - 1];
        fv.value = graft_from_leaves(u.steps[n - 1], shifted);
      } else {
        MaximalExtension ext = maximal_extension(chains, w);
        if (ext.chain < chain && ext.chain < static_cast<int>(prior.size()) && prior[ext.chain]) {
          fv.source = FaceSource::Prior;
          fv.prior_chain = ext.chain;
          fv.value = apply_op(F.value[root_color], *prior[ext.chain], ext.d);
        } else {
          fv.source = FaceSource::Free;
        }
      }
    }
    pr.faces.push_back(std::move(fv));
  }
  const SSet& value = F.value[root_color];
  for (const FaceValue& fv : pr.faces) {
    if (!fv.value || fv.d.size() < 2) continue;
    for (int j = 0; j < static_cast<int>(fv.d.size()); ++j) {
      const FaceValue* sub = pr.find(drop(fv.d, j));
      if (!sub || !sub->value) continue;
      if (face(value, *fv.value, j) != *sub->value) {
        std::string s;
        for (int x : fv.d) s += std::to_string(x);
        pr.incoherence = "face " + std::to_string(j) + " of the face on {" + s + "} disagrees";
        return pr;
      }
    }
  }
  return pr;
}

ChainProblem boundary_restriction(const SAlgebra& F, const DendrexLayout& l,
                                  const std::vector<MaxChain>& chains, const PartialDendrex& chi,
                                  int chain, const std::vector<std::optional<Simplex>>& prior) {
  return chain_restriction(F, l, chains, chi, chain, prior);
}

ChainProblem horn_restriction(const SAlgebra& F, const DendrexLayout& l,
                              const std::vector<MaxChain>& chains, const PartialDendrex& chi,
                              int chain, const HornCenter& x,
                              const std::vector<std::optional<Simplex>>& prior) {
  RestrictionOptions o;
  o.horn = &x;
  return chain_restriction(F, l, chains, chi, chain, prior, o);
}

std::optional<SSetMap> problem_map(const ChainProblem& p) {
  if (!p.complete()) return std::nullopt;
  PosetNerve src = p.horn_k >= 0 ? horn_sset(p.n, p.horn_k) : boundary_sset(p.n);
  SSetMap m;
  m.image.resize(src.sset.top_dim() + 1);
  for (int dim = 0; dim <= src.sset.top_dim(); ++dim)
    for (const auto& ch : src.chains[dim]) m.image[dim].push_back(*p.find(ch)->value);
  return m;
}

bool lift_fits(const SAlgebra& F, int color, const ChainProblem& p, const Simplex& lambda) {
  if (lambda.dim() != p.n) return false;
  for (const FaceValue& fv : p.faces)
    if (fv.value && apply_op(F.value[color], lambda, fv.d) != *fv.value) return false;
  return true;
}

AlgebraMap poset_algebra_map(const SAlgebra& src, const SAlgebra& tgt, const PosetAlgebraMap& m) {
  return AlgebraMap{[&src, &tgt, m](int c, const Simplex& s) {
    return apply_algebra_map(src, tgt, m, c, s);
  }};
}

namespace {

bool is_max_chain(const Tree& t, const std::vector<Subtree>& w) {
  int n = t.num_vertices();
  if (static_cast<int>(w.size()) != n + 1) return false;
  for (int j = 0; j <= n; ++j)
    if (popcount(w[j].verts) != n - j) return false;
  return true;
}

LiftResult assemble(const SAlgebra& F, const SAlgebra& G, const AlgebraMap& f,
                    const DendrexLayout& l, const std::vector<MaxChain>& chains,
                    const PartialDendrex& chi, const Dendrex& xi,
                    const std::vector<Simplex>& lambdas, const HornCenter* horn) {
  const Tree& t = l.tree;
  const TreeAlgebra& at = *l.at;
  int rc = l.alpha.color[t.root];
  LiftResult res;
  if (lambdas.size() != chains.size()) {
    res.witness = "one lift per maximal chain is required";
    return res;
  }
  // Preconditions: each lambda solves its chain's problem and lies over xi.
  std::vector<std::optional<Simplex>> prior;
  res.preconditions = true;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    RestrictionOptions o;
    o.horn = horn;
    ChainProblem pr = chain_restriction(F, l, chains, chi, static_cast<int>(c), prior, o);
    int top = l.slot(t.root, chain_simplex(at, t.root, chains[c].steps));
    if (pr.incoherence) {
      res.preconditions = false;
      res.witness = "chain " + std::to_string(c) + ": " + *pr.incoherence;
    } else if (!lift_fits(F, rc, pr, lambdas[c])) {
      res.preconditions = false;
      res.witness = "lift for chain " + std::to_string(c) + " does not extend its face data";
    } else if (f.apply(rc, lambdas[c]) != xi[top]) {
      res.preconditions = false;
      res.witness = "lift for chain " + std::to_string(c) + " does not lie over the target";
    }
    if (!res.preconditions) return res;
    prior.push_back(lambdas[c]);
  }
  Dendrex lift(l.slots.size());
  for (int s = 0; s < static_cast<int>(l.slots.size()); ++s) {
    const auto& sl = l.slots[s];
    if (sl.edge != t.root) {
      if (!chi.active[s]) {
        res.witness = "slot above the root outside the face family";
        return res;
      }
      lift[s] = chi.values[s];
      continue;
    }
    std::vector<Subtree> w = simplex_chain(at, t.root, nondeg(sl.cell, sl.dim));
    if (is_max_chain(t, w)) {
      MaximalExtension ext = maximal_extension(chains, w);
      lift[s] = lambdas[ext.chain];
      continue;
    }
    MaximalExtension ext = maximal_extension(chains, w);
    res.extensions.push_back({ext.chain, ext.d});
    lift[s] = apply_op(F.value[rc], lambdas[ext.chain], ext.d);
  }
  res.lift = lift;
  auto bad = check_dendrex(F, l, lift);
  res.compatible = !bad;
  if (bad && !res.witness) res.witness = "compatibility: " + *bad;
  res.restricts = true;
  for (int s = 0; s < static_cast<int>(l.slots.size()); ++s)
    if (chi.active[s] && lift[s] != chi.values[s]) {
      res.restricts = false;
      if (!res.witness)
        res.witness = "restriction differs at " + t.names[l.slots[s].edge] + " cell " +
                      std::to_string(l.slots[s].dim) + ":" + std::to_string(l.slots[s].cell);
      break;
    }
  res.covers = true;
  for (int s = 0; s < static_cast<int>(l.slots.size()); ++s)
    if (f.apply(l.alpha.color[l.slots[s].edge], lift[s]) != xi[s]) {
      res.covers = false;
      if (!res.witness)
        res.witness = "image differs at " + t.names[l.slots[s].edge] + " cell " +
                      std::to_string(l.slots[s].dim) + ":" + std::to_string(l.slots[s].cell);
      break;
    }
  (void)G;
  return res;
}

}  // namespace

LiftResult assemble_boundary_lift(const SAlgebra& F, const SAlgebra& G, const AlgebraMap& f,
                                  const DendrexLayout& l, const std::vector<MaxChain>& chains,
                                  const PartialDendrex& chi, const Dendrex& xi,
                                  const std::vector<Simplex>& lambdas) {
  return assemble(F, G, f, l, chains, chi, xi, lambdas, nullptr);
}

LiftResult assemble_horn_lift(const SAlgebra& F, const SAlgebra& G, const AlgebraMap& f,
                              const DendrexLayout& l, const std::vector<MaxChain>& chains,
                              const PartialDendrex& chi, const Dendrex& xi,
                              const std::vector<Simplex>& lambdas, const HornCenter& x) {
  return assemble(F, G, f, l, chains, chi, xi, lambdas, &x);
}

std::optional<std::vector<Simplex>> search_lifts(const SAlgebra& F, const AlgebraMap& f,
                                                 const DendrexLayout& l,
                                                 const std::vector<MaxChain>& chains,
                                                 const PartialDendrex& chi, const Dendrex& xi,
                                                 const HornCenter* horn) {
  const Tree& t = l.tree;
  int rc = l.alpha.color[t.root];
  std::vector<std::optional<Simplex>> prior;
  std::vector<Simplex> chosen;
  std::function<bool(std::size_t)> rec = [&](std::size_t c) {
    if (c == chains.size()) return true;
    RestrictionOptions o;
    o.horn = horn;
    ChainProblem pr = chain_restriction(F, l, chains, chi, static_cast<int>(c), prior, o);
    if (pr.incoherence) return false;
    Simplex want = xi[l.slot(t.root, chain_simplex(*l.at, t.root, chains[c].steps))];
    for (const Simplex& x : simplices(F.value[rc], pr.n)) {
      if (!lift_fits(F, rc, pr, x) || f.apply(rc, x) != want) continue;
      prior.push_back(x);
      chosen.push_back(x);
      if (rec(c + 1)) return true;
      prior.pop_back();
      chosen.pop_back();
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return chosen;
}

SolvedLift solve_lift_problem(const LiftProblem& p) {
  SAlgebra F = nerve_algebra(p.source);
  SAlgebra G = nerve_algebra(p.target);
  DendrexLayout l = dendrex_layout(*p.operad, p.tree, p.alpha);
  auto chains = enumerate_max_chains(p.tree);
  AlgebraMap f = poset_algebra_map(F, G, p.map);
  SolvedLift out;
  std::vector<std::optional<Simplex>> prior;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    RestrictionOptions o;
    o.horn = p.horn ? &*p.horn : nullptr;
    out.problems.push_back(chain_restriction(F, l, chains, p.chi, static_cast<int>(c), prior, o));
    if (c < p.lambdas.size()) prior.push_back(p.lambdas[c]);
  }
  out.result = p.horn ? assemble_horn_lift(F, G, f, l, chains, p.chi, p.xi, p.lambdas, *p.horn)
                      : assemble_boundary_lift(F, G, f, l, chains, p.chi, p.xi, p.lambdas);
  return out;
}

JoinAlgebra random_tree_join_algebra(std::mt19937& rng, std::shared_ptr<const Operad> omega,
                                     const Tree& t, int ground) {
  std::uniform_int_distribution<std::uint32_t> pick(0, (1u << ground) - 1);
  std::vector<std::uint32_t> kappa;
  for (int v = 0; v < t.num_vertices(); ++v) kappa.push_back(pick(rng));
  std::vector<std::uint32_t> grading;
  for (const Operation& o : omega->ops) {
    auto r = subtree_with_root_and_leaves(t, o.output, o.inputs);
    std::uint32_t g = 0;
    for (int v = 0; v < t.num_vertices(); ++v)
      if (r->verts >> v & 1) g |= kappa[v];
    grading.push_back(g);
  }
  std::vector<std::uint32_t> fam = random_union_closed(rng, ground, 2);
  for (std::uint32_t k : kappa) {
    std::vector<std::uint32_t> cur = fam;
    for (std::uint32_t x : cur) fam.push_back(x | k);
    std::sort(fam.begin(), fam.end());
    fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
  }
  return join_algebra(omega, fam, grading);
}

std::vector<LiftProblem> generate_lift_problems(std::mt19937& rng, int max_vertices) {
  static const char* shapes[] = {"r(x)",          "r(x,y)",       "r(x,y,z)",      "r()",
                                 "r(a(x))",       "r(a(x,y),z)",  "r(a(),z)",      "r(a(b(x)))",
                                 "r(a(x),b(y))",  "r(a(x,y),b())", "r(a(b(x),y))", "r(a(x),b(),z)"};
  std::vector<LiftProblem> out;
  for (const char* s : shapes) {
    Tree t = parse_tree(s);
    if (t.num_vertices() > max_vertices) continue;
    auto omega = std::make_shared<Operad>(finalize_operad(free_operad_on_tree(t)));
    TreeMap alpha = tree_map_from_morphism(*omega, identity(t));
    DendrexLayout l = dendrex_layout(*omega, t, alpha);
    std::vector<std::optional<HornCenter>> centers{std::nullopt};
    for (int e : classify_edges(t).inner) centers.push_back(HornCenter{HornCenter::Kind::InnerEdge, e});
    for (int v = 0; v < t.num_vertices(); ++v)
      if (is_leaf_vertex(t, v)) centers.push_back(HornCenter{HornCenter::Kind::LeafVertex, v});
    for (const auto& x : centers) {
      JoinAlgebra J = random_tree_join_algebra(rng, omega, t);
      std::uint32_t w = std::uniform_int_distribution<std::uint32_t>(0, 7)(rng);
      auto [K, m] = restrict_join_algebra(J, w);
      SAlgebra F = nerve_algebra(J.algebra);
      SAlgebra G = nerve_algebra(K.algebra);
      DendrexSearch opts;
      opts.limit = 64;
      auto full = relative_nerve_dendrices(F, l, opts);
      if (full.empty()) continue;
      const Dendrex& gamma = full[std::uniform_int_distribution<std::size_t>(0, full.size() - 1)(rng)];
      LiftProblem p;
      p.name = std::string(s) + (x ? (x->kind == HornCenter::Kind::InnerEdge
                                          ? " horn at edge " + t.names[x->index]
                                          : " horn at vertex " + t.names[t.out[x->index]])
                                    : " boundary");
      p.operad = omega;
      p.tree = t;
      p.alpha = alpha;
      p.source = J.algebra;
      p.target = K.algebra;
      p.map = m;
      p.horn = x;
      FaceFamily fam = x ? horn(t, *x) : boundary(t);
      p.chi = restrict_to_family(l, gamma, fam);
      p.xi.resize(l.slots.size());
      AlgebraMap fm = poset_algebra_map(F, G, m);
      for (std::size_t a = 0; a < l.slots.size(); ++a)
        p.xi[a] = fm.apply(alpha.color[l.slots[a].edge], gamma[a]);
      auto chains = enumerate_max_chains(t);
      auto lambdas = search_lifts(F, fm, l, chains, p.chi, p.xi, x ? &*x : nullptr);
      if (!lambdas) throw std::logic_error("no lift found for " + p.name);
      p.lambdas = *lambdas;
      out.push_back(std::move(p));
    }
  }
  return out;
}

long long count_linear_extensions(const Tree& t) {
  int n = t.num_vertices();
  if (n > 20) throw std::invalid_argument("too many vertices for the subset recursion");
  std::vector<int> below(n, -1);
  for (int v = 0; v < n; ++v) below[v] = t.consumer[t.out[v]];
  std::vector<long long> ways(std::size_t{1} << n, 0);
  ways[0] = 1;
  for (std::size_t mask = 0; mask < ways.size(); ++mask) {
    if (!ways[mask]) continue;
    for (int v = 0; v < n; ++v)
      if (!(mask >> v & 1) && (below[v] < 0 || (mask >> below[v] & 1)))
        ways[mask | std::size_t{1} << v] += ways[mask];
  }
  return ways.back();
}

}  // namespace dendro
