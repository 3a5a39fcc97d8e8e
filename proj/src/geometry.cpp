#include "pfm/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace pfm {

Isometry Isometry::identity(int dim) {
  Isometry iso;
  iso.dim = dim;
  iso.ortho = Mat::Identity(dim, dim);
  iso.trans = Vec::Zero(dim);
  return iso;
}

Isometry Isometry::inverse() const {
  Isometry inv;
  inv.dim = dim;
  inv.ortho = ortho.transpose();
  inv.trans = -(ortho.transpose() * trans);
  return inv;
}

Isometry Isometry::compose(const Isometry& other) const {
  Isometry out;
  out.dim = dim;
  out.ortho = ortho * other.ortho;
  out.trans = ortho * other.trans + trans;
  return out;
}

bool Isometry::is_orthogonal(double tol) const {
  Mat err = ortho.transpose() * ortho - Mat::Identity(dim, dim);
  if (err.cwiseAbs().maxCoeff() > tol) return false;
  double d = ortho.determinant();
  return std::abs(std::abs(d) - 1.0) <= tol;
}

namespace {

Vec centroid(const std::vector<Vec>& pts) {
  Vec c = Vec::Zero(pts[0].size());
  for (const auto& p : pts) c += p;
  return c / double(pts.size());
}

}  // namespace

Isometry derive_isometry(const std::vector<Vec>& src_pts,
                         const std::vector<Vec>& dst_pts,
                         std::optional<Vec> src_side, std::optional<Vec> dst_side,
                         double tol) {
  if (src_pts.empty() || src_pts.size() != dst_pts.size())
    throw Degenerate("derive_isometry: point lists empty or of unequal length");
  const int dim = int(src_pts[0].size());

  Vec cs = centroid(src_pts);
  Vec cd = centroid(dst_pts);

  Mat cov = Mat::Zero(dim, dim);
  for (size_t i = 0; i < src_pts.size(); ++i)
    cov += (dst_pts[i] - cd) * (src_pts[i] - cs).transpose();

  Eigen::JacobiSVD<Mat> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  int rank = 0;
  for (int i = 0; i < dim; ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  if (rank < dim - 1)
    throw Degenerate("derive_isometry: points span less than a hyperplane");

  Mat U = svd.matrixU();
  Mat V = svd.matrixV();
  Mat O = U * V.transpose();

  if (rank == dim - 1) {
    // Hyperplane case: the component normal to the point span is free up to
    // sign. O maps the src-span normal ns to +-nd; pick the sign from the
    // side hints (gluing convention: the two interiors land on opposite
    // sides of the identified facet), defaulting to the proper rotation.
    Vec ns = V.col(dim - 1);
    Vec nd = U.col(dim - 1);
    if (src_side && dst_side) {
      double side_src = (*src_side - cs).dot(ns);
      double side_dst = (*dst_side - cd).dot(nd);
      double eps = (O * ns).dot(nd);  // +-1
      if (eps * side_src * side_dst > 0)
        O -= 2.0 * (O * ns) * ns.transpose();
    } else if (O.determinant() < 0) {
      O -= 2.0 * (O * ns) * ns.transpose();
    }
  }

  Isometry iso;
  iso.dim = dim;
  iso.ortho = O;
  iso.trans = cd - O * cs;

  for (size_t i = 0; i < src_pts.size(); ++i) {
    if ((iso.apply(src_pts[i]) - dst_pts[i]).cwiseAbs().maxCoeff() > tol)
      throw NonCongruent("derive_isometry: no rigid motion fits the correspondence");
  }
  return iso;
}

Vec polygon_normal(const std::vector<Vec>& pts) {
  Vec n = Vec::Zero(3);
  const int m = int(pts.size());
  for (int i = 0; i < m; ++i) {
    const Vec& a = pts[i];
    const Vec& b = pts[(i + 1) % m];
    n(0) += (a(1) - b(1)) * (a(2) + b(2));
    n(1) += (a(2) - b(2)) * (a(0) + b(0));
    n(2) += (a(0) - b(0)) * (a(1) + b(1));
  }
  double len = n.norm();
  if (len < kTol) throw Degenerate("polygon_normal: degenerate polygon");
  return n / len;
}

double triangle_area(const Vec& a, const Vec& b, const Vec& c) {
  if (a.size() == 2) {
    double cr = (b(0) - a(0)) * (c(1) - a(1)) - (b(1) - a(1)) * (c(0) - a(0));
    return 0.5 * std::abs(cr);
  }
  Eigen::Vector3d u = (b - a).head<3>();
  Eigen::Vector3d v = (c - a).head<3>();
  return 0.5 * u.cross(v).norm();
}

double polygon_area(const std::vector<Vec>& pts) {
  double area = 0.0;
  for (size_t i = 1; i + 1 < pts.size(); ++i)
    area += triangle_area(pts[0], pts[i], pts[i + 1]);
  return area;
}

double interior_angle(const Vec& a, const Vec& b, const Vec& c0) {
  Vec u = a - b;
  Vec v = c0 - b;
  double c = u.dot(v) / (u.norm() * v.norm());
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace pfm
