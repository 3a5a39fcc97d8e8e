#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pfm/geometry.hpp"

namespace pfm {

struct OpenCorner : GeometryError {
  using GeometryError::GeometryError;
};
struct HasBoundary : GeometryError {
  using GeometryError::GeometryError;
};

// A flat convex cell: polygon (dim 2) or convex polyhedron (dim 3).
// Facets are ordered vertex-index cycles: 2 indices per edge in dim 2,
// a planar polygon cycle in dim 3.
struct FlatCell {
  int dim = 3;
  std::vector<Vec> vertices;
  std::vector<std::vector<int>> facets;

  std::vector<Vec> facet_points(int f) const;
  Vec centroid() const;
  // Supporting hyperplane of facet f with outward unit normal; returns
  // (normal, offset) with normal . p = offset on the facet.
  std::pair<Vec, double> facet_plane(int f) const;
  double diameter() const;
  double inradius() const;  // distance from centroid to nearest facet plane
  double measure() const;   // area (dim 2) or volume (dim 3)
};

// Combinatorial facet identification. For position i in the src facet's
// vertex cycle, dst_vertices[i] is the matching dst-cell vertex index.
// The realizing isometry is always derived from this correspondence.
struct FacetGluing {
  int src_cell = 0, src_facet = 0;
  int dst_cell = 0, dst_facet = 0;
  std::vector<int> dst_vertices;
};

struct Diagnostic {
  std::string code;     // e.g. NonIsometricGluing, DoublyGluedFacet
  std::string detail;
};

struct VertexClass {
  std::vector<std::pair<int, int>> members;  // (cell, vertex)
  bool boundary = false;
  double cone_angle = 0.0;  // dim 2 only
  double deficit = 0.0;     // 2*pi - cone_angle
};

struct EdgeClass {
  // (cell, v_lo, v_hi) with v_lo < v_hi
  std::vector<std::tuple<int, int, int>> members;
  bool boundary = false;
  double dihedral_sum = 0.0;  // dim 3 only: total interior dihedral angle
};

struct LinkSurface {
  int vertices = 0, edges = 0, faces = 0;
  int euler_char = 0;
  bool closed = false;
};

class Complex {
 public:
  std::string name;
  int dim = 3;
  std::vector<FlatCell> cells;
  std::vector<FacetGluing> gluings;

  // Derived isometry realizing gluing g (src facet -> dst facet, interiors
  // exchanged). Computed on first use and cached.
  const Isometry& gluing_isometry(int g) const;

  // (gluing id, true if (cell,facet) is the src side) or nullopt if boundary.
  std::optional<std::pair<int, bool>> glued_partner(int cell, int facet) const;

  std::vector<Diagnostic> validate() const;
  std::vector<VertexClass> vertex_classes() const;
  std::vector<EdgeClass> edge_classes() const;

  LinkSurface link_surface(const VertexClass& vc) const;

  // V - E + F (- C in dim 3) with identified counts.
  int euler_characteristic() const;

  // Sum of deficits - 2*pi*chi for a closed 2-complex.
  double gauss_bonnet_residual() const;

  bool has_boundary() const;

 private:
  void build_partner_index() const;
  mutable std::map<std::pair<int, int>, std::pair<int, bool>> partner_;
  mutable bool partner_built_ = false;
  mutable std::vector<std::optional<Isometry>> iso_cache_;
};

// Construction helpers.
// Axis-aligned rectangle (dim 2) or box (dim 3) from opposite corners.
FlatCell make_box(const Vec& lo, const Vec& hi);
// Convex polygon cell (dim 2) from vertices in cyclic boundary order.
FlatCell make_polygon(const std::vector<Vec>& pts);
// Index of the cell vertex at p (within tol), or throws.
int find_vertex(const FlatCell& cell, const Vec& p, double tol = kTol);
// Gluing whose vertex correspondence realizes the ambient map `map`
// carrying facet f1 of cell c1 onto facet f2 of cell c2.
FacetGluing glue_by_map(const Complex& cx, int c1, int f1, int c2, int f2,
                        const std::function<Vec(const Vec&)>& map);

// Simple union-find over 0..n-1.
class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) {
    for (size_t i = 0; i < n; ++i) parent_[i] = i;
  }
  size_t find(size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(size_t a, size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<size_t> parent_;
};

}  // namespace pfm
