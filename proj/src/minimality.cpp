#include "pfm/minimality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "pfm/builders.hpp"
#include "pfm/holonomy.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pfm {

namespace {

Vec cross3(const Vec& a, const Vec& b) {
  return vec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
              a[0] * b[1] - a[1] * b[0]);
}

}  // namespace

CalibrationForm CalibrationForm::plane_family(double a, double b, double k) {
  CalibrationForm f;
  f.a = a;
  f.b = b;
  f.k = k;
  f.coeffs = vec3(0, a, b).normalized();
  return f;
}

CalibrationForm CalibrationForm::line_family(double a, double b, double k) {
  CalibrationForm f;
  f.a = a;
  f.b = b;
  f.k = k;
  f.coeffs = vec2(a, b).normalized();
  return f;
}

CalibrationReport calibration_consistency(const Complex& cx,
                                          const FoliationSpec& spec,
                                          const CalibrationForm& form) {
  CalibrationReport rep;
  DualGraph dg = dual_graph(cx);
  Vec w_root = dg.transport[spec.seed_cell].ortho * form.coeffs.normalized();
  rep.status = "global";
  for (int g : dg.generators) {
    Vec image = loop_holonomy(cx, dg, g).ortho * w_root;
    if ((image - w_root).norm() <= kEigTol) continue;
    if ((image + w_root).norm() <= kEigTol) {
      if (rep.status == "global") rep.status = "up-to-sign";
      continue;
    }
    rep.status = "fails";
  }
  rep.parallel_to_normals = true;
  for (size_t c = 0; c < cx.cells.size(); ++c) {
    Vec w_c = dg.transport[c].ortho.transpose() * w_root;
    if (std::abs(w_c.dot(spec.normals[c])) < 1 - kEigTol)
      rep.parallel_to_normals = false;
  }
  return rep;
}

namespace {

// Union-find over mesh vertices carrying the isometry that maps each
// vertex's position to its root's position frame: pos(v) = rel(v)(pos(root)).
struct XformUnionFind {
  std::vector<int> parent;
  std::vector<Isometry> rel;

  explicit XformUnionFind(int n, int dim) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
    rel.assign(n, Isometry::identity(dim));
  }
  int find(int v) {
    if (parent[v] == v) return v;
    int r = find(parent[v]);
    if (parent[v] != r) rel[v] = rel[v].compose(rel[parent[v]]);
    parent[v] = r;
    return r;
  }
  // pos(a) = phi(pos(b))
  void unite(int a, int b, const Isometry& phi) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return;
    Isometry rel_a = a == ra ? Isometry::identity(int(phi.ortho.rows())) : rel[a];
    Isometry rel_b = b == rb ? Isometry::identity(int(phi.ortho.rows())) : rel[b];
    parent[ra] = rb;
    rel[ra] = rel_a.inverse().compose(phi).compose(rel_b);
  }
};

struct LeafMesh {
  int dim;
  std::vector<Vec> base;                       // one position per mesh vertex
  std::vector<int> piece_of;                   // owning leaf piece
  std::vector<std::array<int, 3>> elements;    // triangles, or segments ([2])
  std::vector<int> root;                       // canonical vertex per vertex
  std::vector<Isometry> to_root;               // pos(v) = to_root[v](pos(root))
  std::vector<int> roots;                      // canonical ids, ascending
  // per canonical vertex: 0 interior, 1 free (slides in a facet), 2 pinned
  std::map<int, int> kind;
  std::map<int, std::pair<int, int>> free_facet;  // canonical id -> (cell, f)
  double base_area = 0;

  double area(const std::vector<Vec>& root_pos,
              std::vector<Vec>& scratch) const {
    for (size_t v = 0; v < base.size(); ++v)
      scratch[v] = to_root[v].apply(root_pos[root[v]]);
    double a = 0;
    if (dim == 2) {
      for (const auto& e : elements) a += (scratch[e[1]] - scratch[e[0]]).norm();
    } else {
      for (const auto& e : elements)
        a += 0.5 * cross3(scratch[e[1]] - scratch[e[0]],
                          scratch[e[2]] - scratch[e[0]])
                       .norm();
    }
    return a;
  }
};

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
  Vec d = b - a;
  double t = std::clamp(d.dot(p - a) / d.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

LeafMesh build_mesh(const Complex& cx, const Leaf& leaf, BoundaryMode mode,
                    const std::vector<std::pair<int, int>>& free_facets,
                    double max_edge) {
  LeafMesh mesh;
  mesh.dim = cx.dim;
  double longest = 0;
  for (const auto& piece : leaf.pieces) {
    int n = int(piece.polygon.size());
    for (int i = 0; i < n; ++i)
      longest = std::max(longest, (piece.polygon[(i + 1) % n] -
                                   piece.polygon[i])
                                      .norm());
  }
  int levels = 0;
  while (longest / std::pow(2.0, levels) > max_edge && levels < 8) ++levels;

  std::vector<int> piece_base;  // first vertex id of each piece
  for (size_t pi = 0; pi < leaf.pieces.size(); ++pi) {
    const LeafPiece& piece = leaf.pieces[pi];
    piece_base.push_back(int(mesh.base.size()));
    std::vector<Vec> pos;
    std::vector<std::array<int, 3>> elems;
    auto add_vertex = [&](const Vec& p) {
      for (size_t v = 0; v < pos.size(); ++v)
        if ((pos[v] - p).norm() <= kTol) return int(v);
      pos.push_back(p);
      return int(pos.size()) - 1;
    };
    if (cx.dim == 2) {
      int a = add_vertex(piece.polygon[0]);
      int b = add_vertex(piece.polygon[1]);
      elems.push_back({a, b, -1});
      for (int l = 0; l < levels; ++l) {
        std::vector<std::array<int, 3>> next;
        for (auto& e : elems) {
          int m = add_vertex(0.5 * (pos[e[0]] + pos[e[1]]));
          next.push_back({e[0], m, -1});
          next.push_back({m, e[1], -1});
        }
        elems = next;
      }
    } else {
      Vec centroid = Vec::Zero(3);
      for (const Vec& p : piece.polygon) centroid += p;
      centroid /= double(piece.polygon.size());
      int c = add_vertex(centroid);
      int n = int(piece.polygon.size());
      for (int i = 0; i < n; ++i)
        elems.push_back({c, add_vertex(piece.polygon[i]),
                         add_vertex(piece.polygon[(i + 1) % n])});
      for (int l = 0; l < levels; ++l) {
        std::vector<std::array<int, 3>> next;
        for (auto& e : elems) {
          int ab = add_vertex(0.5 * (pos[e[0]] + pos[e[1]]));
          int bc = add_vertex(0.5 * (pos[e[1]] + pos[e[2]]));
          int ca = add_vertex(0.5 * (pos[e[2]] + pos[e[0]]));
          next.push_back({e[0], ab, ca});
          next.push_back({ab, e[1], bc});
          next.push_back({ca, bc, e[2]});
          next.push_back({ab, bc, ca});
        }
        elems = next;
      }
    }
    for (const Vec& p : pos) {
      mesh.base.push_back(p);
      mesh.piece_of.push_back(int(pi));
    }
    int off = piece_base.back();
    for (auto& e : elems)
      mesh.elements.push_back({e[0] + off, e[1] + off,
                               e[2] >= 0 ? e[2] + off : -1});
  }

  // identify vertices across leaf adjacencies
  XformUnionFind uf(int(mesh.base.size()), cx.dim);
  std::set<std::pair<int, int>> glued_edges;  // (piece, edge) interior to leaf
  for (const auto& adj : leaf.adjacency) {
    glued_edges.insert({adj.piece_a, adj.edge_a});
    glued_edges.insert({adj.piece_b, adj.edge_b});
    Isometry phi = cx.gluing_isometry(adj.gluing);
    if (!adj.a_is_src) phi = phi.inverse();
    const LeafPiece& pa = leaf.pieces[adj.piece_a];
    int na = int(pa.polygon.size());
    Vec a0 = pa.polygon[adj.edge_a];
    Vec a1 = cx.dim == 3 ? pa.polygon[(adj.edge_a + 1) % na] : a0;
    for (int va = piece_base[adj.piece_a];
         va < (adj.piece_a + 1 < int(piece_base.size())
                   ? piece_base[adj.piece_a + 1]
                   : int(mesh.base.size()));
         ++va) {
      if (point_segment_distance(mesh.base[va], a0, a1) > 10 * kTol) continue;
      Vec q = phi.apply(mesh.base[va]);
      int vb_end = adj.piece_b + 1 < int(piece_base.size())
                       ? piece_base[adj.piece_b + 1]
                       : int(mesh.base.size());
      for (int vb = piece_base[adj.piece_b]; vb < vb_end; ++vb)
        if ((mesh.base[vb] - q).norm() <= 1e-7) {
          uf.unite(vb, va, phi);  // pos(vb) = phi(pos(va))
          break;
        }
    }
  }
  mesh.root.resize(mesh.base.size());
  mesh.to_root.assign(mesh.base.size(), Isometry::identity(cx.dim));
  for (size_t v = 0; v < mesh.base.size(); ++v) {
    mesh.root[v] = uf.find(int(v));
    if (int(v) != mesh.root[v]) mesh.to_root[v] = uf.rel[v];
  }
  std::set<int> root_set(mesh.root.begin(), mesh.root.end());
  mesh.roots.assign(root_set.begin(), root_set.end());
  for (int r : mesh.roots) mesh.kind[r] = 0;

  // boundary classification: vertices on unglued piece edges
  std::set<std::pair<int, int>> free_set(free_facets.begin(), free_facets.end());
  for (size_t pi = 0; pi < leaf.pieces.size(); ++pi) {
    const LeafPiece& piece = leaf.pieces[pi];
    int n = int(piece.polygon.size());
    int edges = cx.dim == 3 ? n : 2;
    for (int e = 0; e < edges; ++e) {
      if (glued_edges.count({int(pi), e})) continue;
      bool is_free = mode == BoundaryMode::Free && piece.edge_facet[e] >= 0 &&
                     free_set.count({piece.cell, piece.edge_facet[e]});
      Vec b0 = piece.polygon[e];
      Vec b1 = cx.dim == 3 ? piece.polygon[(e + 1) % n] : b0;
      int v_end = pi + 1 < piece_base.size() ? piece_base[pi + 1]
                                             : int(mesh.base.size());
      for (int v = piece_base[pi]; v < v_end; ++v) {
        if (point_segment_distance(mesh.base[v], b0, b1) > 10 * kTol) continue;
        int r = mesh.root[v];
        if (is_free) {
          if (mesh.kind[r] == 0) {
            mesh.kind[r] = 1;
            mesh.free_facet[r] = {piece.cell, piece.edge_facet[e]};
          }
        } else {
          mesh.kind[r] = 2;
        }
      }
    }
  }
  std::vector<Vec> scratch(mesh.base.size());
  std::vector<Vec> root_pos(mesh.base.size());
  for (int r : mesh.roots) root_pos[r] = mesh.base[r];
  mesh.base_area = mesh.area(root_pos, scratch);
  return mesh;
}

// closest point of a convex facet polygon to p, staying in the facet plane
Vec project_to_facet(const Complex& cx, int cell, int facet, const Vec& p) {
  auto [n, off] = cx.cells[cell].facet_plane(facet);
  Vec q = p - n * (n.dot(p) - off);
  auto pts = cx.cells[cell].facet_points(facet);
  if (cx.dim == 2) {
    Vec d = pts[1] - pts[0];
    double t = std::clamp(d.dot(q - pts[0]) / d.squaredNorm(), 0.0, 1.0);
    return pts[0] + t * d;
  }
  Vec centroid = Vec::Zero(3);
  for (const Vec& v : pts) centroid += v;
  centroid /= double(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    Vec e = pts[(i + 1) % pts.size()] - pts[i];
    Vec m = cross3(e, n).normalized();
    if (m.dot(centroid - pts[i]) > 0) m = -m;
    double s = m.dot(q - pts[i]);
    if (s > 0) q -= s * m;
  }
  return q;
}

}  // namespace

PerturbationReport perturb_leaf(const Complex& cx, const Leaf& leaf,
                                int trials, double magnitude,
                                BoundaryMode mode,
                                const std::vector<std::pair<int, int>>& free_facets,
                                unsigned seed, bool parallel, double max_edge) {
  double inradius = 1e18;
  for (const auto& cell : cx.cells)
    inradius = std::min(inradius, cell.inradius());
  if (magnitude > 0.1 * inradius)
    throw MagnitudeTooLarge("magnitude exceeds a tenth of the cell inradius");
  LeafMesh mesh = build_mesh(cx, leaf, mode, free_facets, max_edge);

  std::vector<double> deltas(trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int t = 0; t < trials; ++t) {
    std::seed_seq sq{seed, unsigned(t)};
    std::mt19937_64 rng(sq);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    std::vector<Vec> root_pos(mesh.base.size());
    for (int r : mesh.roots) {
      root_pos[r] = mesh.base[r];
      int kind = mesh.kind.at(r);
      if (kind == 2) continue;
      Vec d(cx.dim);
      do {
        for (int i = 0; i < cx.dim; ++i) d[i] = sym(rng);
      } while (d.norm() > 1);
      d *= magnitude;
      Vec moved = mesh.base[r] + d;
      if (kind == 1) {
        auto [cell, facet] = mesh.free_facet.at(r);
        moved = project_to_facet(cx, cell, facet, moved);
      }
      root_pos[r] = moved;
    }
    std::vector<Vec> scratch(mesh.base.size());
    deltas[t] = mesh.area(root_pos, scratch) - mesh.base_area;
  }

  PerturbationReport rep;
  rep.trials = trials;
  rep.base_area = mesh.base_area;
  rep.seed = seed;
  rep.mode = mode;
  rep.max_area_decrease = -1e300;
  rep.min_area_ratio = 1e300;
  for (double d : deltas) {
    rep.max_area_decrease = std::max(rep.max_area_decrease, -d);
    rep.min_area_ratio =
        std::min(rep.min_area_ratio, (mesh.base_area + d) / mesh.base_area);
  }
  return rep;
}

TransferVerdict shortcut_transfer(const PerturbationReport& evidence,
                                  const Complex& x, const Complex& y) {
  if (x.dim != y.dim || x.cells.size() != y.cells.size())
    throw HypothesisViolated("spaces do not share the same cells");
  for (size_t c = 0; c < x.cells.size(); ++c) {
    const FlatCell& a = x.cells[c];
    const FlatCell& b = y.cells[c];
    if (a.vertices.size() != b.vertices.size() || a.facets != b.facets)
      throw HypothesisViolated("cell " + std::to_string(c) +
                               " differs between the spaces");
    for (size_t v = 0; v < a.vertices.size(); ++v)
      if ((a.vertices[v] - b.vertices[v]).norm() > kTol)
        throw HypothesisViolated("cell " + std::to_string(c) +
                                 " has displaced vertices");
  }
  auto same = [](const FacetGluing& g, const FacetGluing& h) {
    return g.src_cell == h.src_cell && g.src_facet == h.src_facet &&
           g.dst_cell == h.dst_cell && g.dst_facet == h.dst_facet &&
           g.dst_vertices == h.dst_vertices;
  };
  int freed = 0;
  for (const FacetGluing& g : y.gluings) {
    bool found = false;
    for (const FacetGluing& h : x.gluings)
      if (same(g, h)) found = true;
    if (!found)
      throw HypothesisViolated(
          "the freer space re-identifies facets differently");
  }
  freed = int(x.gluings.size() - y.gluings.size());
  TransferVerdict v;
  v.transfers = evidence.max_area_decrease <= 1e-12;
  v.detail = "area forms agree; " + std::to_string(freed) +
             " identification(s) freed; evidence of " +
             std::to_string(evidence.trials) + " trials " +
             (v.transfers ? "transfers" : "shows a decrease, nothing to transfer");
  return v;
}

namespace {

double flux(const Vec& w, const std::vector<std::array<Vec, 3>>& tris) {
  double total = 0;
  for (const auto& t : tris)
    total += 0.5 * w.dot(cross3(t[1] - t[0], t[2] - t[0]));
  return total;
}

double tri_area(const std::vector<std::array<Vec, 3>>& tris) {
  double total = 0;
  for (const auto& t : tris)
    total += 0.5 * cross3(t[1] - t[0], t[2] - t[0]).norm();
  return total;
}

// boundary hit of the ray c -> through q inside a convex planar polygon
Vec ray_exit(const std::vector<Vec>& poly, const Vec& n, const Vec& c,
             const Vec& q) {
  Vec d = (q - c).normalized();
  double best = 1e18;
  for (size_t i = 0; i < poly.size(); ++i) {
    Vec m = cross3(poly[(i + 1) % poly.size()] - poly[i], n).normalized();
    double den = m.dot(d);
    if (den <= kTol) continue;
    double t = m.dot(poly[i] - c) / den;
    if (t > kTol) best = std::min(best, t);
  }
  if (best > 1e17) throw GeometryError("ray does not leave the polygon");
  return c + best * d;
}

}  // namespace

StokesReport stokes_identity_check(const Complex& cx, double a, double b,
                                   double k, double amplitude, unsigned seed) {
  if (cx.dim != 3) throw GeometryError("flux identity needs a 3-dimensional space");
  if (a == 0 || b == 0)
    throw GeometryError("the plane family needs a != 0 and b != 0");
  Vec w = vec3(0, a, b).normalized();
  double r = 0.1;
  double rho = std::min(amplitude, r);

  // section of the unit cube by the plane a y + b z = k
  Complex box;
  box.dim = 3;
  box.cells.push_back(make_box(Vec::Zero(3), Vec::Ones(3)));
  auto section = plane_section(box, 0, vec3(0, a, b), k);
  if (!section) throw DeformationEscapesDomain("plane misses the unit cube");
  std::vector<Vec> T = section->polygon;
  Vec n = w;
  {
    // orient T counterclockwise with respect to the flux vector
    Vec twice_area = Vec::Zero(3);
    for (size_t i = 0; i < T.size(); ++i)
      twice_area += cross3(T[i], T[(i + 1) % T.size()]);
    if (twice_area.dot(w) < 0) std::reverse(T.begin(), T.end());
  }

  std::seed_seq sq{seed};
  std::mt19937_64 rng(sq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double x0 = 0.25 + 0.08 * unit(rng);
  double z0 = (k - 0.5 * a) / b;
  Vec c1 = vec3(x0, 0.5, z0);
  Vec c2 = vec3(1 - x0, 0.5, z0);

  // split T at x = 1/2 so each half hosts one detour
  auto clip_half = [&](bool left) {
    std::vector<Vec> out;
    int m = int(T.size());
    for (int i = 0; i < m; ++i) {
      Vec p = T[i], q = T[(i + 1) % m];
      double sp = left ? 0.5 - p[0] : p[0] - 0.5;
      double sq_ = left ? 0.5 - q[0] : q[0] - 0.5;
      if (sp >= -kTol) out.push_back(p);
      if (sp * sq_ < -kTol * kTol && std::abs(sp) > kTol && std::abs(sq_) > kTol)
        out.push_back(p + sp / (sp - sq_) * (q - p));
    }
    return out;
  };
  std::vector<Vec> halves[2] = {clip_half(true), clip_half(false)};
  for (int h = 0; h < 2; ++h) {
    const Vec& c = h == 0 ? c1 : c2;
    if (halves[h].size() < 3)
      throw DeformationEscapesDomain("plane section does not straddle the slit");
    for (size_t i = 0; i < halves[h].size(); ++i) {
      const Vec& p = halves[h][i];
      const Vec& q = halves[h][(i + 1) % halves[h].size()];
      if (point_segment_distance(c, p, q) < r + 0.02)
        throw DeformationEscapesDomain("detour disc leaves the plane section");
    }
    for (double s : {-1.0, 1.0}) {
      Vec edge = c + s * rho * vec3(1, 0, 0);
      Vec edge2 = c + s * rho * vec3(0, 0, 1);
      for (const Vec& e : {edge, edge2})
        if (e[0] < kTol || e[0] > 1 - kTol || e[2] < kTol || e[2] > 1 - kTol)
          throw DeformationEscapesDomain("slit cap leaves the cube");
    }
  }

  const int N = 64;
  Vec u = vec3(1, 0, 0);                  // in-plane: x has no normal component
  Vec v = cross3(n, u);                   // completes the plane basis
  std::vector<std::array<Vec, 3>> mesh_T, mesh_S, mesh_d1, mesh_d2;
  {
    Vec ct = Vec::Zero(3);
    for (const Vec& p : T) ct += p;
    ct /= double(T.size());
    for (size_t i = 0; i < T.size(); ++i)
      mesh_T.push_back({ct, T[i], T[(i + 1) % T.size()]});
  }
  for (int h = 0; h < 2; ++h) {
    const Vec& c = h == 0 ? c1 : c2;
    double mirror = h == 0 ? 1.0 : -1.0;  // reverses the cap orientation
    // circle samples plus the polygon corners as angular events, so the
    // annulus boundary follows the section boundary exactly
    std::vector<double> angles;
    for (int i = 0; i < N; ++i) angles.push_back(2 * std::numbers::pi * i / N);
    for (const Vec& corner : halves[h]) {
      double phi = std::atan2(v.dot(corner - c), u.dot(corner - c));
      if (phi < 0) phi += 2 * std::numbers::pi;
      angles.push_back(phi);
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end(),
                             [](double x, double y) { return y - x < 1e-12; }),
                 angles.end());
    int M = int(angles.size());
    std::vector<Vec> q(M), p(M), bnd(M);
    for (int i = 0; i < M; ++i) {
      double phi = angles[i];
      q[i] = c + r * (std::cos(phi) * u + std::sin(phi) * v);
      p[i] = c + rho * (mirror * std::cos(phi) * vec3(1, 0, 0) +
                        std::sin(phi) * vec3(0, 0, 1));
      bnd[i] = ray_exit(halves[h], n, c, q[i]);
    }
    for (int i = 0; i < M; ++i) {
      int j = (i + 1) % M;
      // annular region between the circle and the half-polygon boundary,
      // wound so the inner circle is traversed clockwise
      mesh_S.push_back({q[i], bnd[i], bnd[j]});
      mesh_S.push_back({q[i], bnd[j], q[j]});
      // detour strip from the plane circle down to the slit-plane cap
      mesh_S.push_back({q[i], q[j], p[j]});
      mesh_S.push_back({q[i], p[j], p[i]});
      auto& cap = h == 0 ? mesh_d1 : mesh_d2;
      cap.push_back({c, p[i], p[j]});
    }
  }

  StokesReport rep;
  rep.integral_T = flux(w, mesh_T);
  rep.integral_S = flux(w, mesh_S);
  rep.integral_d1 = flux(w, mesh_d1);
  rep.integral_d2 = flux(w, mesh_d2);
  rep.area_T = tri_area(mesh_T);
  rep.area_S = tri_area(mesh_S);
  double lhs = rep.integral_S + rep.integral_d1 + rep.integral_d2;
  rep.relative_error = std::abs(lhs - rep.integral_T) /
                       std::max(1e-30, std::abs(rep.integral_T));
  rep.caps_cancel = std::abs(rep.integral_d1 + rep.integral_d2) <= 1e-9;
  rep.identity_ok = rep.relative_error <= 1e-6;
  rep.area_ok = rep.area_S + 1e-9 >= rep.area_T &&
                rep.area_S + 1e-9 >= rep.integral_S;
  return rep;
}

OrthogonalTripleReport orthogonal_triple_check(const Complex& cx) {
  OrthogonalTripleReport rep;
  std::vector<FoliationSpec> specs;
  auto try_axis = [&](int axis, bool& flag) {
    Vec d = Vec::Zero(3);
    d[axis] = 1;
    try {
      specs.push_back(propagate_direction(cx, 0, d));
      flag = true;
    } catch (const DirectionNotAdmissible& e) {
      rep.notes += std::string(rep.notes.empty() ? "" : "; ") + e.what();
    }
  };
  try_axis(0, rep.x_ok);
  try_axis(1, rep.y_ok);
  try_axis(2, rep.z_ok);
  rep.pairwise_orthogonal = specs.size() == 3;
  for (size_t i = 0; i < specs.size() && rep.pairwise_orthogonal; ++i)
    for (size_t j = i + 1; j < specs.size(); ++j)
      for (size_t c = 0; c < cx.cells.size(); ++c)
        if (std::abs(specs[i].normals[c].dot(specs[j].normals[c])) > 1e-12)
          rep.pairwise_orthogonal = false;
  return rep;
}

Leaf ring_leaf(const Complex& cone, double radius) {
  if (cone.dim != 2) throw GeometryError("ring leaves live on 2d cones");
  Leaf leaf;
  leaf.dim = 2;
  int kcells = int(cone.cells.size());
  for (int i = 0; i < kcells; ++i) {
    const FlatCell& cell = cone.cells[i];
    Vec apex_dir = cell.vertices[2].normalized();
    LeafPiece piece{i, {}, 0, {}, {}};
    piece.polygon = {radius * cell.vertices[1].normalized(),
                     radius * apex_dir};
    piece.edge_facet = {0, 2};
    Vec mid = 0.5 * (piece.polygon[0] + piece.polygon[1]);
    piece.normal = mid.normalized();
    piece.offset = mid.norm();
    leaf.pieces.push_back(piece);
  }
  leaf.level = leaf.pieces[0].offset;
  for (int i = 0; i < kcells; ++i)
    leaf.adjacency.push_back({i, 1, (i + 1) % kcells, 0, i, true});
  return leaf;
}

}  // namespace pfm
