#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pfm/foliation.hpp"

namespace pfm {

struct MagnitudeTooLarge : GeometryError {
  using GeometryError::GeometryError;
};
struct HypothesisViolated : GeometryError {
  using GeometryError::GeometryError;
};
struct DeformationEscapesDomain : GeometryError {
  using GeometryError::GeometryError;
};

// Constant calibration form, represented by its flux vector: the integral of
// the form over an oriented surface is the flux of `coeffs` through it. For
// the plane family a·y + b·z = k the flux vector is (0, a, b) normalized, so
// the form restricts to the area form on the planes of the family.
struct CalibrationForm {
  Vec coeffs;
  double a = 0, b = 0, k = 0;
  static CalibrationForm plane_family(double a, double b, double k);
  // dim-2 analogue: leaves of the line family a·x + b·y = k
  static CalibrationForm line_family(double a, double b, double k);
};

struct CalibrationReport {
  std::string status;  // "global", "up-to-sign" or "fails"
  bool parallel_to_normals = false;
};

// Transport the form's flux vector (given in the chart of spec.seed_cell)
// over the dual spanning tree and test every loop holonomy on it.
CalibrationReport calibration_consistency(const Complex& cx,
                                          const FoliationSpec& spec,
                                          const CalibrationForm& form);

enum class BoundaryMode { Fixed, Free };

struct PerturbationReport {
  int trials = 0;
  double base_area = 0;
  double max_area_decrease = 0;  // max over trials of base - perturbed
  double min_area_ratio = 1;     // min over trials of perturbed / base
  unsigned seed = 0;
  BoundaryMode mode = BoundaryMode::Fixed;
};

// Monte-Carlo evidence for local area minimality: mesh the leaf (fan
// triangulation, edges subdivided to at most max_edge), displace vertices by
// uniform random vectors of norm <= magnitude and record the area change.
// Identified vertices move together through the gluing isometries. Boundary
// vertices are pinned, except that in Free mode vertices on the listed
// (cell, facet) boundary facets slide within that facet. Deterministic in
// seed; the parallel and serial paths give identical reports.
PerturbationReport perturb_leaf(const Complex& cx, const Leaf& leaf,
                                int trials, double magnitude,
                                BoundaryMode mode,
                                const std::vector<std::pair<int, int>>& free_facets,
                                unsigned seed, bool parallel = true,
                                double max_edge = 0.1);

struct TransferVerdict {
  bool transfers = false;
  std::string detail;
};

// If Y is X with some interior identifications cut open (same cells, a
// subset of the gluings), minimality evidence gathered in Y applies to X:
// every X-admissible perturbation is Y-admissible with equal area.
TransferVerdict shortcut_transfer(const PerturbationReport& evidence,
                                  const Complex& x, const Complex& y);

struct StokesReport {
  double integral_T = 0, integral_S = 0, integral_d1 = 0, integral_d2 = 0;
  double area_T = 0, area_S = 0;
  double relative_error = 0;
  bool caps_cancel = false;
  bool identity_ok = false;
  bool area_ok = false;
};

// Flux identity for the plane family a·y + b·z = k in the unit cube with the
// slit in the plane y = 1/2: T is the plane section, S deviates from T by a
// mirrored pair of detours whose caps d1, d2 lie in the slit plane with
// opposite orientations. Checks that the caps cancel exactly, that the flux
// of S plus caps equals the flux of T, and that Area(S) >= Area(T).
// `amplitude` is the cap radius; placement is drawn deterministically from
// `seed`. Throws DeformationEscapesDomain if a detour leaves the cube.
StokesReport stokes_identity_check(const Complex& cx, double a, double b,
                                   double k, double amplitude, unsigned seed);

struct OrthogonalTripleReport {
  bool x_ok = false, y_ok = false, z_ok = false;
  bool pairwise_orthogonal = false;
  std::string notes;
};

// The three axis directions each propagate over a cone-of-surface complex
// and stay mutually orthogonal in every cell.
OrthogonalTripleReport orthogonal_triple_check(const Complex& cx);

// Closed polygonal leaf around the apex of a sector cone built by
// trivial_cone: one chord per sector at the given radius. Used as the
// negative control: when the total angle is not 2 pi this loop is not a
// geodesic, so a perturbation reducing length exists.
Leaf ring_leaf(const Complex& cone, double radius);

}  // namespace pfm
