#pragma once

#include <string>
#include <vector>

#include "pfm/complex.hpp"

namespace pfm {

struct NotConnected : GeometryError {
  using GeometryError::GeometryError;
};

// Dual graph of a complex: one node per cell, one edge per gluing.
// The spanning tree is grown breadth-first from the lowest cell id of each
// connected component, ties broken by gluing id; transport[c] develops cell
// c's coordinates into the coordinates of its component's root cell.
struct DualGraph {
  int root = 0;
  std::vector<int> tree;        // gluing ids in the spanning tree
  std::vector<int> generators;  // non-tree gluing ids, each closing one loop
  std::vector<Isometry> transport;
  int components = 1;
};

struct HolonomyElement {
  Mat ortho;
  int loop = -1;  // generating gluing id
};

// A union of projectivized linear subspaces of ambient space: the set of
// foliation normal directions preserved (up to sign) by some holonomy.
// all_plus marks components preserved with eigenvalue +1 on every generator
// used to build the set (needed for globally consistent transverse
// orientation).
struct DirectionSet {
  struct Component {
    Mat basis;  // dim x k, orthonormal columns
    bool all_plus = true;
  };
  int dim = 3;
  std::vector<Component> components;

  static DirectionSet full(int dim);
  static DirectionSet empty(int dim);

  bool is_empty() const { return components.empty(); }
  bool contains(const Vec& d, double tol = kEigTol) const;
  // e.g. "Empty", "Points(2)", "Circle", "Circle+Points(1)",
  // "FullProjectiveLine", "FullProjectivePlane"
  std::string label() const;
};

DirectionSet intersect(const DirectionSet& a, const DirectionSet& b,
                       double tol = kEigTol);

DualGraph dual_graph(const Complex& cx);
HolonomyElement loop_holonomy(const Complex& cx, const DualGraph& dg,
                              int generator);
HolonomyElement loop_holonomy(const Complex& cx, int generator);
DirectionSet fixed_direction_set(const HolonomyElement& h,
                                 double tol = kEigTol);
// Intersection of the fixed direction sets of all dual-graph generators.
DirectionSet admissible_directions(const Complex& cx);

}  // namespace pfm
