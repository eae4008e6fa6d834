#include "dendro/omega.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace dendro {

bool same_tree(const Tree& a, const Tree& b) {
  return a.names == b.names && a.root == b.root && a.out == b.out && a.in == b.in;
}

bool operator==(const TreeMorphism& f, const TreeMorphism& g) {
  return same_tree(f.source, g.source) && same_tree(f.target, g.target) &&
         f.edge_map == g.edge_map;
}

std::optional<std::string> check_morphism(const TreeMorphism& f) {
  const Tree& s = f.source;
  const Tree& t = f.target;
  if (static_cast<int>(f.edge_map.size()) != s.num_edges()) return "edge map has the wrong size";
  for (int x : f.edge_map)
    if (x < 0 || x >= t.num_edges()) return "edge map points outside the target";
  for (int v = 0; v < s.num_vertices(); ++v) {
    std::vector<int> ebar;
    for (int c : s.in[v]) ebar.push_back(f.edge_map[c]);
    if (!subtree_with_root_and_leaves(t, f.edge_map[s.out[v]], ebar))
      return "vertex '" + s.names[s.out[v]] + "' has no image subtree";
  }
  return std::nullopt;
}

TreeMorphism make_morphism(Tree source, Tree target, std::vector<int> edge_map) {
  TreeMorphism f{std::move(source), std::move(target), std::move(edge_map)};
  if (auto err = check_morphism(f)) throw TreeError("invalid tree morphism: " + *err);
  return f;
}

TreeMorphism identity(const Tree& t) {
  std::vector<int> m(t.num_edges());
  for (int e = 0; e < t.num_edges(); ++e) m[e] = e;
  return {t, t, m};
}

TreeMorphism compose(const TreeMorphism& g, const TreeMorphism& f) {
  if (!same_tree(f.target, g.source)) throw TreeError("morphisms are not composable");
  std::vector<int> m(f.source.num_edges());
  for (int e = 0; e < f.source.num_edges(); ++e) m[e] = g.edge_map[f.edge_map[e]];
  return make_morphism(f.source, g.target, m);
}

Subtree vertex_image(const TreeMorphism& f, int v) {
  std::vector<int> ebar;
  for (int c : f.source.in[v]) ebar.push_back(f.edge_map[c]);
  auto s = subtree_with_root_and_leaves(f.target, f.edge_map[f.source.out[v]], ebar);
  if (!s) throw TreeError("vertex has no image subtree");
  return *s;
}

Subtree image_of(const TreeMorphism& f, const Subtree& s) {
  Subtree r{f.edge_map[s.root], 0};
  for (int v = 0; v < f.source.num_vertices(); ++v)
    if ((s.verts >> v) & 1) r.verts |= vertex_image(f, v).verts;
  return r;
}

std::optional<Subtree> preimage(const TreeMorphism& face, const Subtree& r) {
  auto find = [&](int e) -> int {
    for (int x = 0; x < face.source.num_edges(); ++x)
      if (face.edge_map[x] == e) return x;
    return -1;
  };
  int root = find(r.root);
  if (root < 0) return std::nullopt;
  std::vector<int> ls;
  for (int l : subtree_leaves(face.target, r)) {
    int x = find(l);
    if (x < 0) return std::nullopt;
    ls.push_back(x);
  }
  auto s = subtree_with_root_and_leaves(face.source, root, ls);
  if (!s || image_of(face, *s) != r) return std::nullopt;
  return s;
}

Contracted contract(const Tree& t, const std::vector<int>& inner_edges) {
  std::set<int> drop(inner_edges.begin(), inner_edges.end());
  for (int e : drop)
    if (e < 0 || e >= t.num_edges() || !is_inner(t, e))
      throw TreeError("cannot contract a non-inner edge");
  // Each surviving vertex absorbs the vertices above it across contracted edges.
  std::function<void(int, std::vector<int>&)> expand = [&](int v, std::vector<int>& ins) {
    for (int c : t.in[v]) {
      if (drop.count(c))
        expand(t.producer[c], ins);
      else
        ins.push_back(c);
    }
  };
  Contracted res;
  std::vector<int> idx(t.num_edges(), -1);
  std::vector<std::string> names;
  for (int e = 0; e < t.num_edges(); ++e) {
    if (drop.count(e)) continue;
    idx[e] = static_cast<int>(names.size());
    names.push_back(t.names[e]);
    res.edge_of.push_back(e);
  }
  std::vector<int> out;
  std::vector<std::vector<int>> in;
  for (int v = 0; v < t.num_vertices(); ++v) {
    if (drop.count(t.out[v])) continue;
    std::vector<int> ins;
    expand(v, ins);
    for (int& c : ins) c = idx[c];
    out.push_back(idx[t.out[v]]);
    in.push_back(ins);
  }
  res.tree = make_tree(names, idx[t.root], out, in);
  return res;
}

TreeMorphism inner_face(const Tree& t, const std::vector<int>& edges) {
  auto c = contract(t, edges);
  return make_morphism(c.tree, t, c.edge_of);
}

TreeMorphism inner_face(const Tree& t, int e) {
  if (e < 0 || e >= t.num_edges() || !is_inner(t, e))
    throw TreeError("inner face requires an inner edge");
  return inner_face(t, std::vector<int>{e});
}

TreeMorphism external_face(const Tree& t, const Subtree& s) {
  if (!is_subtree(t, s)) throw TreeError("not a subtree");
  auto ex = extract(t, s);
  return make_morphism(ex.tree, t, ex.edge_of);
}

TreeMorphism degeneracy(const Tree& t, int e) {
  if (e < 0 || e >= t.num_edges()) throw TreeError("unknown edge identifier");
  std::vector<std::string> names = t.names;
  int lower = static_cast<int>(names.size());
  names.push_back(fresh_name(t, t.names[e] + "_d"));
  std::vector<int> out = t.out;
  std::vector<std::vector<int>> in = t.in;
  if (int w = t.consumer[e]; w >= 0)
    for (int& c : in[w])
      if (c == e) c = lower;
  out.push_back(lower);
  in.push_back({e});
  int root = t.root == e ? lower : t.root;
  std::vector<int> m(names.size());
  for (int x = 0; x < t.num_edges(); ++x) m[x] = x;
  m[lower] = e;
  return make_morphism(make_tree(names, root, out, in), t, m);
}

std::vector<TreeMorphism> hom_set(const Tree& s, const Tree& t) {
  std::vector<TreeMorphism> result;
  std::vector<int> m(s.num_edges(), -1);
  // Source vertices top-down, so every vertex sees its output already mapped.
  std::vector<int> order;
  std::function<void(int)> walk = [&](int e) {
    int v = s.producer[e];
    if (v < 0) return;
    order.push_back(v);
    for (int c : s.in[v]) walk(c);
  };
  walk(s.root);
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == order.size()) {
      result.push_back(TreeMorphism{s, t, m});
      return;
    }
    int v = order[k];
    const auto& ins = s.in[v];
    for (const auto& r : subtrees_rooted_at(t, m[s.out[v]])) {
      auto ls = subtree_leaves(t, r);
      if (ls.size() != ins.size()) continue;
      std::sort(ls.begin(), ls.end());
      do {
        for (std::size_t j = 0; j < ins.size(); ++j) m[ins[j]] = ls[j];
        go(k + 1);
      } while (std::next_permutation(ls.begin(), ls.end()));
      for (int c : ins) m[c] = -1;
    }
  };
  for (int e = 0; e < t.num_edges(); ++e) {
    m[s.root] = e;
    go(0);
  }
  auto key = [&](const TreeMorphism& f) {
    std::vector<std::string> k;
    for (int x : f.edge_map) k.push_back(t.names[x]);
    return k;
  };
  std::sort(result.begin(), result.end(),
            [&](const TreeMorphism& a, const TreeMorphism& b) { return key(a) < key(b); });
  return result;
}

bool is_face(const TreeMorphism& f) {
  std::set<int> img(f.edge_map.begin(), f.edge_map.end());
  return static_cast<int>(img.size()) == f.source.num_edges();
}

bool is_elementary_face(const TreeMorphism& f) {
  return is_face(f) && f.target.num_vertices() - f.source.num_vertices() == 1;
}

bool is_inner_face(const TreeMorphism& f) {
  if (!is_face(f) || !is_root_preserving(f)) return false;
  std::set<int> img(f.edge_map.begin(), f.edge_map.end());
  for (int l : leaves(f.target))
    if (!img.count(l)) return false;
  return true;
}

bool is_root_preserving(const TreeMorphism& f) {
  return f.edge_map[f.source.root] == f.target.root;
}

bool is_isomorphism(const TreeMorphism& f) {
  return is_face(f) && f.source.num_edges() == f.target.num_edges() &&
         f.source.num_vertices() == f.target.num_vertices();
}

std::vector<TreeMorphism> elementary_faces(const Tree& t) {
  return boundary(t).faces;
}

FaceFamily boundary(const Tree& t) {
  FaceFamily fam;
  fam.target = t;
  for (int e : classify_edges(t).inner) {
    fam.faces.push_back(inner_face(t, e));
    fam.labels.push_back("inner:" + t.names[e]);
  }
  const int nv = t.num_vertices();
  if (nv == 0) return fam;
  for (const auto& s : all_subtrees(t)) {
    if (vertex_count(s) != nv - 1) continue;
    fam.faces.push_back(external_face(t, s));
    std::string label;
    if (nv == 1) {
      label = "edge:" + t.names[s.root];
    } else if (s.root != t.root) {
      label = "root";
    } else {
      for (int v = 0; v < nv; ++v)
        if (!((s.verts >> v) & 1)) label = "top:" + t.names[t.out[v]];
    }
    fam.labels.push_back("external:" + label);
  }
  return fam;
}

FaceFamily horn(const Tree& t, const HornCenter& x) {
  using K = HornCenter::Kind;
  FaceFamily b = boundary(t);
  FaceFamily fam;
  fam.target = t;
  auto keep_except = [&](const std::string& omit) {
    bool found = false;
    for (std::size_t i = 0; i < b.faces.size(); ++i) {
      if (b.labels[i] == omit) {
        found = true;
        continue;
      }
      fam.faces.push_back(b.faces[i]);
      fam.labels.push_back(b.labels[i]);
    }
    if (!found) throw TreeError("horn center does not name an elementary face");
  };
  bool is_corolla = t.num_vertices() == 1;
  switch (x.kind) {
    case K::InnerEdge:
      if (x.index < 0 || x.index >= t.num_edges() || !is_inner(t, x.index))
        throw TreeError("horn center is not an inner edge");
      keep_except("inner:" + t.names[x.index]);
      break;
    case K::LeafVertex:
      if (x.index < 0 || x.index >= t.num_vertices() || !is_leaf_vertex(t, x.index))
        throw TreeError("horn center is not a leaf vertex");
      if (!is_corolla) {
        keep_except("external:top:" + t.names[t.out[x.index]]);
        break;
      }
      [[fallthrough]];
    case K::CorollaLeaves:
      if (!is_corolla) throw TreeError("leaf-set horn requires a corolla");
      for (std::size_t i = 0; i < b.faces.size(); ++i) {
        if (b.labels[i] == "external:edge:" + t.names[t.root]) continue;
        fam.faces.push_back(b.faces[i]);
        fam.labels.push_back(b.labels[i]);
      }
      break;
  }
  return fam;
}

Factorization factorize(const TreeMorphism& f) {
  const Tree& s = f.source;
  const Tree& t = f.target;
  std::vector<char> collapsed(s.num_vertices(), 0);
  for (int v = 0; v < s.num_vertices(); ++v)
    collapsed[v] = s.in[v].size() == 1 && f.edge_map[s.in[v][0]] == f.edge_map[s.out[v]];
  auto rep = [&](int e) {
    while (s.consumer[e] >= 0 && collapsed[s.consumer[e]]) e = s.out[s.consumer[e]];
    return e;
  };
  std::vector<int> idx(s.num_edges(), -1);
  std::vector<std::string> names;
  std::vector<int> kept;
  for (int e = 0; e < s.num_edges(); ++e) {
    if (rep(e) != e) continue;
    idx[e] = static_cast<int>(names.size());
    names.push_back(s.names[e]);
    kept.push_back(e);
  }
  std::vector<int> out;
  std::vector<std::vector<int>> in;
  for (int v = 0; v < s.num_vertices(); ++v) {
    if (collapsed[v]) continue;
    out.push_back(idx[rep(s.out[v])]);
    std::vector<int> ins;
    for (int c : s.in[v]) ins.push_back(idx[rep(c)]);
    in.push_back(ins);
  }
  Tree s1 = make_tree(names, idx[rep(s.root)], out, in);
  std::vector<int> dmap(s.num_edges());
  for (int e = 0; e < s.num_edges(); ++e) dmap[e] = idx[rep(e)];
  TreeMorphism deg = make_morphism(s, s1, dmap);

  Subtree image{f.edge_map[s.root], 0};
  for (int v = 0; v < s.num_vertices(); ++v) image.verts |= vertex_image(f, v).verts;
  auto ex = extract(t, image);
  std::set<int> used;
  for (int e : kept) used.insert(f.edge_map[e]);
  std::vector<int> unused;
  for (int x = 0; x < ex.tree.num_edges(); ++x)
    if (!used.count(ex.edge_of[x])) unused.push_back(x);
  auto c = contract(ex.tree, unused);
  std::vector<int> fmap;
  for (int x : c.edge_of) fmap.push_back(ex.edge_of[x]);
  TreeMorphism face = make_morphism(c.tree, t, fmap);

  std::vector<int> imap(s1.num_edges(), -1);
  for (int e : kept)
    for (int x = 0; x < c.tree.num_edges(); ++x)
      if (fmap[x] == f.edge_map[e]) imap[idx[e]] = x;
  TreeMorphism iso = make_morphism(s1, c.tree, imap);
  if (!is_isomorphism(iso)) throw TreeError("factorization produced a non-isomorphism");
  return {deg, iso, face};
}

bool equal_over_target(const TreeMorphism& f, const TreeMorphism& g) {
  if (!same_tree(f.target, g.target)) return false;
  for (const auto& h : isomorphisms(f.source, g.source)) {
    bool ok = true;
    for (int e = 0; e < f.source.num_edges() && ok; ++e)
      ok = g.edge_map[h[e]] == f.edge_map[e];
    if (ok) return true;
  }
  return false;
}

}  // namespace dendro
