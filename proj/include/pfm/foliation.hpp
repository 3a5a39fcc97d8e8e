#pragma once

#include <optional>
#include <vector>

#include "pfm/complex.hpp"

namespace pfm {

struct DirectionNotAdmissible : GeometryError {
  using GeometryError::GeometryError;
};
struct NonGeodesicCone : GeometryError {
  using GeometryError::GeometryError;
};

// Direction field of a piecewise-planar foliation: one unit normal per cell,
// consistent (up to sign) across every gluing.
struct FoliationSpec {
  int seed_cell = 0;
  Vec seed_normal;
  std::vector<Vec> normals;   // one per cell
  bool coorientable = true;   // all gluings preserve the sign
  std::vector<double> levels; // optional level values at the seed cell
};

// Transport the seed normal over a spanning tree of the dual graph and check
// consistency (up to sign) on every remaining gluing.
FoliationSpec propagate_direction(const Complex& cx, int seed_cell,
                                  const Vec& seed_normal);

// One convex piece of a leaf: cell ∩ {normal·x = offset}. In dimension 3 the
// polygon is a convex cycle and edge i (polygon[i] -> polygon[i+1]) lies on
// cell facet edge_facet[i]; in dimension 2 the piece is a segment and
// edge_facet[i] is the cell facet containing endpoint polygon[i].
struct LeafPiece {
  int cell;
  Vec normal;
  double offset;
  std::vector<Vec> polygon;
  std::vector<int> edge_facet;
  double measure() const;  // area (dim 3) or length (dim 2)
};

// Edge edge_a of piece_a is identified with edge edge_b of piece_b across
// gluing `gluing` (applied forward when a_is_src).
struct LeafAdjacency {
  int piece_a, edge_a, piece_b, edge_b;
  int gluing;
  bool a_is_src;
};

struct Leaf {
  int dim = 0;
  double level = 0;  // offset in the cell the trace started from
  std::vector<LeafPiece> pieces;
  std::vector<LeafAdjacency> adjacency;
  bool singular = false;         // passes through a vertex class
  bool budget_exceeded = false;  // halted before closing up
  double area() const;
};

// Index of the cell containing p (closed cells; lowest index wins).
std::optional<int> find_cell(const Complex& cx, const Vec& p);

// Convex section of a single cell by the plane {normal·x = offset}; empty
// when the intersection has no (dim-1)-dimensional interior.
std::optional<LeafPiece> plane_section(const Complex& cx, int cell,
                                       const Vec& normal, double offset);

// Trace the maximal leaf through the given point by breadth-first expansion
// across gluings. Always halts: at most `budget` pieces are produced.
Leaf leaf_through(const Complex& cx, const FoliationSpec& spec, int cell,
                  const Vec& point, std::size_t budget = 1'000'000);

// V - E + F of the identified leaf complex.
int leaf_euler_characteristic(const Complex& cx, const Leaf& leaf);

// Singular points of a straight-line foliation on a closed flat surface.
struct BranchPoint {
  int vertex_class;
  int order;       // number of leaf prongs; 2 would be a regular point
  double index() const { return (2.0 - order) / 2.0; }
};

// dim-2 complexes only; throws NonGeodesicCone when an interior cone angle is
// not an integer multiple of pi.
std::vector<BranchPoint> branch_points(const Complex& cx,
                                       const FoliationSpec& spec);

// Cross-check of the Euler characteristic against curvature and branch data.
struct IndexSumReport {
  double chi;               // combinatorial V - E + F
  double deficit_sum;       // sum of angle deficits / 2 pi
  double branch_index_sum;  // sum of (2 - n) / 2 over branch points
  int order_sum;            // literal sum of (2 - n); reported, not asserted
  bool consistent;          // first three agree within 1e-9
  bool order_sum_matches;   // whether order_sum also equals chi (it is 2 chi)
};
IndexSumReport index_sum_report(const Complex& cx, const FoliationSpec& spec);

// Sampled check of the pseudo-foliation conditions: every sampled interior
// point lies on a leaf, sampled leaves are pairwise disjoint, and nearby
// parallel leaves exist. Deterministic in (samples, seed); the parallel and
// serial paths produce identical diagnostics.
std::vector<Diagnostic> validate_pseudofoliation(
    const Complex& cx, const std::vector<FoliationSpec>& specs, int samples,
    unsigned seed, bool parallel = true);
std::vector<Diagnostic> validate_pseudofoliation(const Complex& cx,
                                                 const FoliationSpec& spec,
                                                 int samples, unsigned seed,
                                                 bool parallel = true);

}  // namespace pfm
