#include "pfm/holonomy.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace pfm {

namespace {

// Kernel of m (columns orthonormal), singular values <= tol.
Mat null_space(const Mat& m, double tol) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  Eigen::Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()[r] > tol) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

bool subspace_le(const Mat& a, const Mat& b, double tol) {
  // a <= b iff every column of a lies in span(b)
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    if ((a.col(i) - b * (b.transpose() * a.col(i))).norm() > tol) return false;
  return true;
}

Mat subspace_intersection(const Mat& a, const Mat& b, double tol) {
  if (a.cols() == 0 || b.cols() == 0) return Mat(a.rows(), 0);
  Mat p = a * a.transpose() + b * b.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(p);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] >= 2.0 - tol) keep.push_back(i);
  Mat out(a.rows(), Eigen::Index(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) out.col(i) = es.eigenvectors().col(keep[i]);
  return out;
}

// Keep only maximal subspaces, merging all_plus conservatively: a component
// swallowed by a larger one keeps the larger one's flag.
void normalize(DirectionSet& s, double tol) {
  std::vector<DirectionSet::Component> kept;
  std::sort(s.components.begin(), s.components.end(),
            [](const auto& x, const auto& y) { return x.basis.cols() > y.basis.cols(); });
  for (const auto& c : s.components) {
    if (c.basis.cols() == 0) continue;
    bool nested = false;
    for (const auto& k : kept)
      if (subspace_le(c.basis, k.basis, tol)) {
        nested = true;
        break;
      }
    if (!nested) kept.push_back(c);
  }
  s.components = std::move(kept);
}

}  // namespace

DirectionSet DirectionSet::full(int dim) {
  DirectionSet s;
  s.dim = dim;
  s.components.push_back({Mat::Identity(dim, dim), true});
  return s;
}

DirectionSet DirectionSet::empty(int dim) {
  DirectionSet s;
  s.dim = dim;
  return s;
}

bool DirectionSet::contains(const Vec& d, double tol) const {
  Vec u = d.normalized();
  for (const auto& c : components)
    if ((u - c.basis * (c.basis.transpose() * u)).norm() <= tol) return true;
  return false;
}

std::string DirectionSet::label() const {
  if (components.empty()) return "Empty";
  int points = 0, circles = 0;
  for (const auto& c : components) {
    if (c.basis.cols() == dim) {
      return dim == 2 ? "FullProjectiveLine" : "FullProjectivePlane";
    }
    if (c.basis.cols() == 1) ++points;
    if (c.basis.cols() == 2) ++circles;
  }
  std::ostringstream os;
  if (circles == 1) os << "Circle";
  if (circles > 1) os << "Circles(" << circles << ")";
  if (points > 0) {
    if (circles > 0) os << "+";
    os << "Points(" << points << ")";
  }
  return os.str();
}

DirectionSet intersect(const DirectionSet& a, const DirectionSet& b,
                       double tol) {
  DirectionSet out;
  out.dim = a.dim;
  for (const auto& ca : a.components)
    for (const auto& cb : b.components) {
      Mat m = subspace_intersection(ca.basis, cb.basis, tol);
      if (m.cols() > 0)
        out.components.push_back({m, ca.all_plus && cb.all_plus});
    }
  normalize(out, tol);
  return out;
}

DualGraph dual_graph(const Complex& cx) {
  int n = int(cx.cells.size());
  DualGraph dg;
  dg.transport.assign(n, Isometry::identity(cx.dim));
  std::vector<bool> visited(n, false);
  std::vector<bool> in_tree(cx.gluings.size(), false);
  // adjacency: cell -> gluing ids, sorted
  std::vector<std::vector<int>> adj(n);
  for (size_t g = 0; g < cx.gluings.size(); ++g) {
    adj[cx.gluings[g].src_cell].push_back(int(g));
    if (cx.gluings[g].dst_cell != cx.gluings[g].src_cell)
      adj[cx.gluings[g].dst_cell].push_back(int(g));
  }
  dg.components = 0;
  for (int start = 0; start < n; ++start) {
    if (visited[start]) continue;
    if (dg.components == 0) dg.root = start;
    ++dg.components;
    visited[start] = true;
    std::deque<int> queue = {start};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int g : adj[u]) {
        const FacetGluing& fg = cx.gluings[g];
        int w = (fg.src_cell == u) ? fg.dst_cell : fg.src_cell;
        if (visited[w]) continue;
        visited[w] = true;
        const Isometry& phi = cx.gluing_isometry(g);
        // chart transition: phi maps src-facet coordinates to dst-facet
        // coordinates, so src develops through dst as T(dst) . phi.
        dg.transport[w] = (w == fg.dst_cell)
                              ? dg.transport[u].compose(phi.inverse())
                              : dg.transport[u].compose(phi);
        in_tree[g] = true;
        dg.tree.push_back(g);
        queue.push_back(w);
      }
    }
  }
  for (size_t g = 0; g < cx.gluings.size(); ++g)
    if (!in_tree[g]) dg.generators.push_back(int(g));
  return dg;
}

HolonomyElement loop_holonomy(const Complex& cx, const DualGraph& dg,
                              int generator) {
  const FacetGluing& fg = cx.gluings[generator];
  Isometry h = dg.transport[fg.dst_cell]
                   .compose(cx.gluing_isometry(generator))
                   .compose(dg.transport[fg.src_cell].inverse());
  return {h.ortho, generator};
}

HolonomyElement loop_holonomy(const Complex& cx, int generator) {
  return loop_holonomy(cx, dual_graph(cx), generator);
}

DirectionSet fixed_direction_set(const HolonomyElement& h, double tol) {
  int dim = int(h.ortho.rows());
  Mat id = Mat::Identity(dim, dim);
  DirectionSet s;
  s.dim = dim;
  Mat plus = null_space(h.ortho - id, tol);
  Mat minus = null_space(h.ortho + id, tol);
  if (plus.cols() > 0) s.components.push_back({plus, true});
  if (minus.cols() > 0) s.components.push_back({minus, false});
  normalize(s, tol);
  return s;
}

DirectionSet admissible_directions(const Complex& cx) {
  DualGraph dg = dual_graph(cx);
  if (dg.components != 1)
    throw NotConnected("admissible_directions requires a connected complex");
  DirectionSet s = DirectionSet::full(cx.dim);
  for (int g : dg.generators)
    s = intersect(s, fixed_direction_set(loop_holonomy(cx, dg, g)));
  return s;
}

}  // namespace pfm
