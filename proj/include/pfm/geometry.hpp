#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Absolute geometric tolerance. Builders emit coordinates of magnitude O(1).
inline constexpr double kTol = 1e-9;
// Eigen-solver tolerance, looser because matrix products amplify error.
inline constexpr double kEigTol = 1e-7;

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonCongruent : GeometryError {
  using GeometryError::GeometryError;
};
struct Degenerate : GeometryError {
  using GeometryError::GeometryError;
};

// Rigid motion of ambient space: p -> ortho * p + trans.
struct Isometry {
  int dim = 3;
  Mat ortho;
  Vec trans;

  static Isometry identity(int dim);

  Vec apply(const Vec& p) const { return ortho * p + trans; }
  Vec apply_dir(const Vec& d) const { return ortho * d; }
  Isometry inverse() const;
  // (a.compose(b))(p) = a(b(p))
  Isometry compose(const Isometry& other) const;

  bool is_orthogonal(double tol = kTol) const;
  double det() const { return ortho.determinant(); }
};

// Least-squares rigid fit mapping src_pts[i] onto dst_pts[i].
//
// When the point sets span only a hyperplane the reflective ambiguity is
// resolved with the side hints: the returned isometry sends src_side to the
// half-space opposite dst_side (the gluing convention, so that two cell
// interiors end up on opposite sides of the identified facet).
//
// Throws NonCongruent if no rigid motion fits within tol, Degenerate if the
// points affinely span less than dim-1 dimensions.
Isometry derive_isometry(const std::vector<Vec>& src_pts,
                         const std::vector<Vec>& dst_pts,
                         std::optional<Vec> src_side = std::nullopt,
                         std::optional<Vec> dst_side = std::nullopt,
                         double tol = kTol);

// Unit normal of the plane through a (coplanar) polygon, by Newell's method.
Vec polygon_normal(const std::vector<Vec>& pts);

// Area of a flat convex polygon embedded in R^2 or R^3.
double polygon_area(const std::vector<Vec>& pts);

double triangle_area(const Vec& a, const Vec& b, const Vec& c);

// Angle at b between rays b->a and b->c, in [0, pi].
double interior_angle(const Vec& a, const Vec& b, const Vec& c);

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}
inline Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

}  // namespace pfm
