#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dendro/tree.hpp"

namespace dendro {

// A morphism of the dendroidal category, given by its edge map.
struct TreeMorphism {
  Tree source;
  Tree target;
  std::vector<int> edge_map;
};

bool same_tree(const Tree& a, const Tree& b);
bool operator==(const TreeMorphism& f, const TreeMorphism& g);

// Empty when f is a valid morphism, otherwise a description of the first offending vertex.
std::optional<std::string> check_morphism(const TreeMorphism& f);
TreeMorphism make_morphism(Tree source, Tree target, std::vector<int> edge_map);
TreeMorphism identity(const Tree& t);
TreeMorphism compose(const TreeMorphism& g, const TreeMorphism& f);

Subtree vertex_image(const TreeMorphism& f, int v);
Subtree image_of(const TreeMorphism& f, const Subtree& s);
// For a face, the subtree of the source mapping onto r, if there is one.
std::optional<Subtree> preimage(const TreeMorphism& face, const Subtree& r);

struct Contracted {
  Tree tree;
  std::vector<int> edge_of;  // new edge -> old edge
};
Contracted contract(const Tree& t, const std::vector<int>& inner_edges);

TreeMorphism inner_face(const Tree& t, int e);
TreeMorphism inner_face(const Tree& t, const std::vector<int>& edges);
TreeMorphism external_face(const Tree& t, const Subtree& s);
TreeMorphism degeneracy(const Tree& t, int e);

std::vector<TreeMorphism> hom_set(const Tree& s, const Tree& t);

bool is_face(const TreeMorphism& f);
bool is_elementary_face(const TreeMorphism& f);
bool is_inner_face(const TreeMorphism& f);
bool is_root_preserving(const TreeMorphism& f);
bool is_isomorphism(const TreeMorphism& f);

struct FaceFamily {
  Tree target;
  std::vector<TreeMorphism> faces;
  std::vector<std::string> labels;
};

struct HornCenter {
  enum class Kind { InnerEdge, LeafVertex, CorollaLeaves };
  Kind kind = Kind::InnerEdge;
  int index = -1;  // edge for inner horns, vertex for leaf horns
};

FaceFamily boundary(const Tree& t);
FaceFamily horn(const Tree& t, const HornCenter& x);
std::vector<TreeMorphism> elementary_faces(const Tree& t);

// Normal form f = face . iso . degeneracy, where the face is the inclusion of
// the image subtree precomposed with the contraction of unused inner edges.
struct Factorization {
  TreeMorphism degeneracy;
  TreeMorphism iso;
  TreeMorphism face;
};
Factorization factorize(const TreeMorphism& f);

// f and g agree after an isomorphism of their sources.
bool equal_over_target(const TreeMorphism& f, const TreeMorphism& g);

}  // namespace dendro
