#include "pfm/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "pfm/holonomy.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pfm {

namespace {

constexpr int kNoFacet = -1;
constexpr int kSingularEnd = -2;  // dim-2 endpoint sitting on a cell vertex
constexpr double kPlaneTol = 1e-7;

// fix the sign of (n, c) so planes can be compared componentwise
void canonicalize(Vec& n, double& c) {
  int lead = 0;
  for (int i = 1; i < n.size(); ++i)
    if (std::abs(n[i]) > std::abs(n[lead])) lead = i;
  if (n[lead] < 0) {
    n = -n;
    c = -c;
  }
}

bool same_plane(const Vec& n1, double c1, const Vec& n2, double c2) {
  return (n1 - n2).norm() <= kPlaneTol && std::abs(c1 - c2) <= kPlaneTol;
}

Vec plane_perp(const Vec& n) {
  if (n.size() == 2) return vec2(-n[1], n[0]);
  Vec u = std::abs(n[0]) < 0.9 ? vec3(1, 0, 0) : vec3(0, 1, 0);
  u -= n * n.dot(u);
  return u.normalized();
}

// intersection of a cell with the plane {n·x = c}; empty when the
// intersection has no (dim-1)-dimensional interior
std::optional<LeafPiece> clip_cell(const Complex& cx, int cell, const Vec& n,
                                   double c, bool& touches_vertex) {
  const FlatCell& cc = cx.cells[cell];
  std::vector<double> s(cc.vertices.size());
  for (size_t v = 0; v < cc.vertices.size(); ++v) {
    s[v] = n.dot(cc.vertices[v]) - c;
    if (std::abs(s[v]) <= kTol) touches_vertex = true;
  }
  LeafPiece piece{cell, n, c, {}, {}};
  if (cx.dim == 2) {
    // line through a convex polygon: take the extreme boundary hits
    Vec d = plane_perp(n);
    struct Hit {
      double t;
      Vec p;
      int facet;
      bool on_vertex;
    };
    std::vector<Hit> hits;
    for (size_t f = 0; f < cc.facets.size(); ++f) {
      int a = cc.facets[f][0], b = cc.facets[f][1];
      auto add = [&](const Vec& p, bool on_vertex) {
        hits.push_back({d.dot(p), p, int(f), on_vertex});
      };
      if (std::abs(s[a]) <= kTol) add(cc.vertices[a], true);
      if (std::abs(s[b]) <= kTol) add(cc.vertices[b], true);
      if (s[a] * s[b] < 0 && std::abs(s[a]) > kTol && std::abs(s[b]) > kTol) {
        double t = s[a] / (s[a] - s[b]);
        add(cc.vertices[a] + t * (cc.vertices[b] - cc.vertices[a]), false);
      }
    }
    if (hits.empty()) return std::nullopt;
    auto lo = std::min_element(hits.begin(), hits.end(),
                               [](auto& x, auto& y) { return x.t < y.t; });
    auto hi = std::max_element(hits.begin(), hits.end(),
                               [](auto& x, auto& y) { return x.t < y.t; });
    if (hi->t - lo->t <= kTol) return std::nullopt;
    for (auto* h : {&*lo, &*hi}) {
      piece.polygon.push_back(h->p);
      piece.edge_facet.push_back(h->on_vertex ? kSingularEnd : h->facet);
    }
    return piece;
  }

  // dim 3: collect boundary crossings facet by facet
  std::vector<Vec> pts;
  auto add = [&](const Vec& p) {
    for (const Vec& q : pts)
      if ((p - q).norm() <= kTol) return;
    pts.push_back(p);
  };
  for (const auto& facet : cc.facets)
    for (size_t i = 0; i < facet.size(); ++i) {
      int a = facet[i], b = facet[(i + 1) % facet.size()];
      if (std::abs(s[a]) <= kTol) add(cc.vertices[a]);
      if (s[a] * s[b] < 0 && std::abs(s[a]) > kTol && std::abs(s[b]) > kTol) {
        double t = s[a] / (s[a] - s[b]);
        add(cc.vertices[a] + t * (cc.vertices[b] - cc.vertices[a]));
      }
    }
  if (pts.size() < 3) return std::nullopt;
  Vec u = plane_perp(n);
  Vec v = Vec(3);
  v << n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2],
      n[0] * u[1] - n[1] * u[0];
  Vec centroid = Vec::Zero(3);
  for (const Vec& p : pts) centroid += p;
  centroid /= double(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const Vec& p, const Vec& q) {
    return std::atan2(v.dot(p - centroid), u.dot(p - centroid)) <
           std::atan2(v.dot(q - centroid), u.dot(q - centroid));
  });
  double area = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const Vec& p = pts[i];
    const Vec& q = pts[(i + 1) % pts.size()];
    area += 0.5 * (u.dot(p) * v.dot(q) - u.dot(q) * v.dot(p));
  }
  if (std::abs(area) <= kTol * kTol) return std::nullopt;
  piece.polygon = pts;
  for (size_t i = 0; i < pts.size(); ++i) {
    Vec mid = 0.5 * (pts[i] + pts[(i + 1) % pts.size()]);
    int on = kNoFacet;
    for (size_t f = 0; f < cc.facets.size(); ++f) {
      auto [fn, off] = cc.facet_plane(int(f));
      if (std::abs(fn.dot(mid) - off) <= 10 * kTol) {
        on = int(f);
        break;
      }
    }
    piece.edge_facet.push_back(on);
  }
  return piece;
}

}  // namespace

double LeafPiece::measure() const {
  if (polygon.size() == 2) return (polygon[1] - polygon[0]).norm();
  return polygon_area(polygon);
}

double Leaf::area() const {
  double a = 0;
  for (const auto& p : pieces) a += p.measure();
  return a;
}

std::optional<LeafPiece> plane_section(const Complex& cx, int cell,
                                       const Vec& normal, double offset) {
  Vec n = normal.normalized();
  double c = offset / normal.norm();
  canonicalize(n, c);
  bool touches = false;
  return clip_cell(cx, cell, n, c, touches);
}

std::optional<int> find_cell(const Complex& cx, const Vec& p) {
  for (size_t c = 0; c < cx.cells.size(); ++c) {
    bool inside = true;
    for (size_t f = 0; f < cx.cells[c].facets.size() && inside; ++f) {
      auto [n, off] = cx.cells[c].facet_plane(int(f));
      if (n.dot(p) - off > kTol) inside = false;
    }
    if (inside) return int(c);
  }
  return std::nullopt;
}

FoliationSpec propagate_direction(const Complex& cx, int seed_cell,
                                  const Vec& seed_normal) {
  DualGraph dg = dual_graph(cx);
  if (dg.components != 1)
    throw NotConnected("direction propagation needs a connected complex");
  FoliationSpec spec;
  spec.seed_cell = seed_cell;
  spec.seed_normal = seed_normal.normalized();
  Vec n_root = dg.transport[seed_cell].ortho * spec.seed_normal;
  for (size_t c = 0; c < cx.cells.size(); ++c)
    spec.normals.push_back(dg.transport[c].ortho.transpose() * n_root);
  for (int g : dg.generators) {
    Vec image = loop_holonomy(cx, dg, g).ortho * n_root;
    if ((image - n_root).norm() <= kEigTol) continue;
    if ((image + n_root).norm() <= kEigTol) {
      spec.coorientable = false;
      continue;
    }
    throw DirectionNotAdmissible(
        "holonomy of gluing " + std::to_string(g) +
        " does not preserve the seed direction even up to sign");
  }
  return spec;
}

Leaf leaf_through(const Complex& cx, const FoliationSpec& spec, int cell,
                  const Vec& point, std::size_t budget) {
  Leaf leaf;
  leaf.dim = cx.dim;
  Vec n0 = spec.normals.at(cell);
  double c0 = n0.dot(point);
  canonicalize(n0, c0);
  leaf.level = c0;
  bool touches = false;
  auto first = clip_cell(cx, cell, n0, c0, touches);
  leaf.singular = touches;
  if (!first) return leaf;
  leaf.pieces.push_back(*first);

  std::set<std::pair<int, int>> matched;  // (piece, edge) already identified
  std::deque<int> queue = {0};
  while (!queue.empty()) {
    if (leaf.pieces.size() >= budget) {
      leaf.budget_exceeded = true;
      break;
    }
    int pi = queue.front();
    queue.pop_front();
    // edge list of the piece is fixed; iterate by index
    for (int e = 0; e < int(leaf.pieces[pi].edge_facet.size()); ++e) {
      const LeafPiece piece = leaf.pieces[pi];
      int facet = piece.edge_facet[e];
      if (facet < 0 || matched.count({pi, e})) continue;
      if (cx.dim == 3) {
        int e2 = (e + 1) % int(piece.polygon.size());
        if ((piece.polygon[e2] - piece.polygon[e]).norm() <= kTol) continue;
      }
      auto partner = cx.glued_partner(piece.cell, facet);
      if (!partner) continue;  // boundary of the complex
      auto [gid, is_src] = *partner;
      const FacetGluing& g = cx.gluings[gid];
      Isometry phi = cx.gluing_isometry(gid);
      if (!is_src) phi = phi.inverse();
      int dst_cell = is_src ? g.dst_cell : g.src_cell;
      int dst_facet = is_src ? g.dst_facet : g.src_facet;
      Vec ref = cx.dim == 3 ? Vec(0.5 * (piece.polygon[e] +
                                         piece.polygon[(e + 1) %
                                                       piece.polygon.size()]))
                            : piece.polygon[e];
      Vec n2 = phi.ortho * piece.normal;
      double c2 = n2.dot(phi.apply(ref));
      canonicalize(n2, c2);
      int target = -1;
      for (size_t q = 0; q < leaf.pieces.size(); ++q)
        if (leaf.pieces[q].cell == dst_cell &&
            same_plane(leaf.pieces[q].normal, leaf.pieces[q].offset, n2, c2)) {
          target = int(q);
          break;
        }
      if (target < 0) {
        bool t2 = false;
        auto next = clip_cell(cx, dst_cell, n2, c2, t2);
        leaf.singular = leaf.singular || t2;
        if (!next) {
          // the plane only grazes the next cell along this edge
          leaf.singular = true;
          continue;
        }
        target = int(leaf.pieces.size());
        leaf.pieces.push_back(*next);
        queue.push_back(target);
      }
      int e_dst = -1;
      for (int j = 0; j < int(leaf.pieces[target].edge_facet.size()); ++j)
        if (leaf.pieces[target].edge_facet[j] == dst_facet &&
            !matched.count({target, j}))
          e_dst = j;
      if (e_dst < 0) continue;
      leaf.adjacency.push_back({pi, e, target, e_dst, gid, is_src});
      matched.insert({pi, e});
      matched.insert({target, e_dst});
    }
  }
  return leaf;
}

int leaf_euler_characteristic(const Complex& cx, const Leaf& leaf) {
  std::vector<int> corner_base(leaf.pieces.size() + 1, 0);
  for (size_t p = 0; p < leaf.pieces.size(); ++p)
    corner_base[p + 1] = corner_base[p] + int(leaf.pieces[p].polygon.size());
  UnionFind corners(corner_base.back());
  int edges = 0;
  if (cx.dim == 2) {
    edges = int(leaf.pieces.size());
    for (const auto& adj : leaf.adjacency)
      corners.unite(corner_base[adj.piece_a] + adj.edge_a,
                    corner_base[adj.piece_b] + adj.edge_b);
  } else {
    UnionFind edge_uf(corner_base.back());  // edge slot = its start corner
    for (const auto& adj : leaf.adjacency) {
      const LeafPiece& a = leaf.pieces[adj.piece_a];
      const LeafPiece& b = leaf.pieces[adj.piece_b];
      Isometry phi = cx.gluing_isometry(adj.gluing);
      if (!adj.a_is_src) phi = phi.inverse();
      int na = int(a.polygon.size()), nb = int(b.polygon.size());
      int a0 = adj.edge_a, a1 = (adj.edge_a + 1) % na;
      int b0 = adj.edge_b, b1 = (adj.edge_b + 1) % nb;
      Vec qa0 = phi.apply(a.polygon[a0]);
      bool straight = (qa0 - b.polygon[b0]).norm() <= 1e-6;
      corners.unite(corner_base[adj.piece_a] + a0,
                    corner_base[adj.piece_b] + (straight ? b0 : b1));
      corners.unite(corner_base[adj.piece_a] + a1,
                    corner_base[adj.piece_b] + (straight ? b1 : b0));
      edge_uf.unite(corner_base[adj.piece_a] + a0,
                    corner_base[adj.piece_b] + b0);
    }
    std::set<int> edge_classes;
    for (size_t p = 0; p < leaf.pieces.size(); ++p)
      for (int e = 0; e < int(leaf.pieces[p].polygon.size()); ++e)
        edge_classes.insert(edge_uf.find(corner_base[p] + e));
    edges = int(edge_classes.size());
  }
  std::set<int> vertex_classes;
  for (int i = 0; i < corner_base.back(); ++i)
    vertex_classes.insert(corners.find(i));
  int V = int(vertex_classes.size());
  int F = cx.dim == 3 ? int(leaf.pieces.size()) : 0;
  return V - edges + F;
}

std::vector<BranchPoint> branch_points(const Complex& cx,
                                       const FoliationSpec&) {
  if (cx.dim != 2)
    throw GeometryError("branch points are defined for flat surfaces");
  std::vector<BranchPoint> out;
  auto vcs = cx.vertex_classes();
  for (size_t i = 0; i < vcs.size(); ++i) {
    if (vcs[i].boundary) continue;
    double ratio = vcs[i].cone_angle / std::numbers::pi;
    int order = int(std::lround(ratio));
    if (std::abs(ratio - order) > kEigTol)
      throw NonGeodesicCone("cone angle " + std::to_string(vcs[i].cone_angle) +
                            " is not an integer multiple of pi");
    if (order != 2) out.push_back({int(i), order});
  }
  return out;
}

IndexSumReport index_sum_report(const Complex& cx, const FoliationSpec& spec) {
  IndexSumReport r{};
  r.chi = cx.euler_characteristic();
  r.deficit_sum = 0;
  for (const auto& vc : cx.vertex_classes())
    if (!vc.boundary) r.deficit_sum += vc.deficit;
  r.deficit_sum /= 2 * std::numbers::pi;
  r.branch_index_sum = 0;
  r.order_sum = 0;
  for (const auto& bp : branch_points(cx, spec)) {
    r.branch_index_sum += bp.index();
    r.order_sum += 2 - bp.order;
  }
  r.consistent = std::abs(r.chi - r.deficit_sum) <= 1e-9 &&
                 std::abs(r.chi - r.branch_index_sum) <= 1e-9;
  r.order_sum_matches = std::abs(r.chi - r.order_sum) <= 1e-9;
  return r;
}

namespace {

struct SampledLeaf {
  int sample;
  int spec;
  Leaf leaf;
};

// does the line {x: n1·x=c1, n2·x=c2} meet the cell in a segment?
bool line_meets_cell(const Complex& cx, int cell, const Vec& n1, double c1,
                     const Vec& n2, double c2) {
  const FlatCell& cc = cx.cells[cell];
  if (cx.dim == 2) {
    Mat a(2, 2);
    a.row(0) = n1.transpose();
    a.row(1) = n2.transpose();
    if (std::abs(a.determinant()) < kEigTol) return false;
    Vec p = a.colPivHouseholderQr().solve(vec2(c1, c2));
    for (size_t f = 0; f < cc.facets.size(); ++f) {
      auto [n, off] = cc.facet_plane(int(f));
      if (n.dot(p) - off > -kTol) return false;  // want strict interior
    }
    return true;
  }
  Vec w = vec3(n1[1] * n2[2] - n1[2] * n2[1], n1[2] * n2[0] - n1[0] * n2[2],
               n1[0] * n2[1] - n1[1] * n2[0]);
  if (w.norm() < kEigTol) return false;
  w.normalize();
  Mat a(2, 3);
  a.row(0) = n1.transpose();
  a.row(1) = n2.transpose();
  Vec p = a.colPivHouseholderQr().solve(vec2(c1, c2));
  double tlo = -1e18, thi = 1e18;
  for (size_t f = 0; f < cc.facets.size(); ++f) {
    auto [n, off] = cc.facet_plane(int(f));
    double num = off - n.dot(p), den = n.dot(w);
    if (std::abs(den) < kTol) {
      if (num < kTol) return false;
    } else if (den > 0) {
      thi = std::min(thi, num / den);
    } else {
      tlo = std::max(tlo, num / den);
    }
  }
  return thi - tlo > 10 * kTol;
}

}  // namespace

std::vector<Diagnostic> validate_pseudofoliation(
    const Complex& cx, const std::vector<FoliationSpec>& specs, int samples,
    unsigned seed, bool parallel) {
  std::vector<double> cum;
  double total = 0;
  for (const auto& cell : cx.cells) cum.push_back(total += cell.measure());
  double diameter = 0;
  for (const auto& cell : cx.cells) diameter = std::max(diameter, cell.diameter());

  std::vector<std::vector<SampledLeaf>> per_sample(samples);
  std::vector<std::vector<Diagnostic>> per_diag(samples);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int i = 0; i < samples; ++i) {
    std::seed_seq sq{seed, unsigned(i)};
    std::mt19937_64 rng(sq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double pick = unit(rng) * total;
    int cell = int(std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin());
    cell = std::min(cell, int(cx.cells.size()) - 1);
    const FlatCell& cc = cx.cells[cell];
    Vec lo = cc.vertices[0], hi = cc.vertices[0];
    for (const Vec& v : cc.vertices) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    Vec p;
    bool ok = false;
    for (int tries = 0; tries < 1000 && !ok; ++tries) {
      p = lo;
      for (int d = 0; d < cx.dim; ++d) p[d] += unit(rng) * (hi[d] - lo[d]);
      ok = find_cell(cx, p).has_value();
      if (ok) {
        // want a point interior to this specific cell
        ok = true;
        for (size_t f = 0; f < cc.facets.size() && ok; ++f) {
          auto [n, off] = cc.facet_plane(int(f));
          if (n.dot(p) - off > -10 * kTol) ok = false;
        }
      }
    }
    if (!ok) {
      per_diag[i].push_back({"CoverFailure",
                             "sample " + std::to_string(i) +
                                 ": no interior point found in cell " +
                                 std::to_string(cell)});
      continue;
    }
    for (size_t s = 0; s < specs.size(); ++s) {
      Leaf leaf = leaf_through(cx, specs[s], cell, p, 10'000);
      if (leaf.pieces.empty())
        per_diag[i].push_back({"CoverFailure",
                               "sample " + std::to_string(i) +
                                   ": no leaf through the sampled point"});
      if (leaf.singular)
        per_diag[i].push_back(
            {"SingularLeaf", "sample " + std::to_string(i) +
                                 " lies on a leaf through a vertex class"});
      // local product structure: parallel leaves at level +- eps exist
      double eps = 1e-3 * diameter;
      for (double sign : {1.0, -1.0}) {
        Vec q = p + sign * eps * specs[s].normals[cell];
        auto qc = find_cell(cx, q);
        if (!qc) continue;
        Leaf nearby = leaf_through(cx, specs[s], *qc, q, 10'000);
        if (nearby.pieces.empty())
          per_diag[i].push_back(
              {"ParallelLeafMissing",
               "sample " + std::to_string(i) + ": no leaf at level offset " +
                   std::to_string(sign * eps)});
      }
      per_sample[i].push_back({i, int(s), std::move(leaf)});
    }
  }

  std::vector<Diagnostic> out;
  for (int i = 0; i < samples; ++i)
    out.insert(out.end(), per_diag[i].begin(), per_diag[i].end());

  // pairwise disjointness of sampled leaves, grouped by cell
  std::vector<SampledLeaf*> all;
  for (auto& v : per_sample)
    for (auto& sl : v) all.push_back(&sl);
  struct Entry {
    int owner;
    const LeafPiece* piece;
  };
  std::map<int, std::vector<Entry>> by_cell;
  for (size_t k = 0; k < all.size(); ++k)
    for (const auto& piece : all[k]->leaf.pieces)
      by_cell[piece.cell].push_back({int(k), &piece});
  std::set<std::pair<int, int>> reported;
  for (auto& [cell, entries] : by_cell)
    for (size_t a = 0; a < entries.size(); ++a)
      for (size_t b = a + 1; b < entries.size(); ++b) {
        int ka = entries[a].owner, kb = entries[b].owner;
        if (ka == kb || reported.count({std::min(ka, kb), std::max(ka, kb)}))
          continue;
        const LeafPiece& pa = *entries[a].piece;
        const LeafPiece& pb = *entries[b].piece;
        if (same_plane(pa.normal, pa.offset, pb.normal, pb.offset))
          continue;  // the same geometric leaf, sampled twice
        if (std::abs(pa.normal.dot(pb.normal)) > 1 - kEigTol)
          continue;  // parallel distinct levels never meet
        if (line_meets_cell(cx, cell, pa.normal, pa.offset, pb.normal,
                            pb.offset)) {
          reported.insert({std::min(ka, kb), std::max(ka, kb)});
          out.push_back({"LeafIntersection",
                         "leaves of samples " +
                             std::to_string(all[ka]->sample) + " and " +
                             std::to_string(all[kb]->sample) +
                             " cross in cell " + std::to_string(cell)});
        }
      }
  return out;
}

std::vector<Diagnostic> validate_pseudofoliation(const Complex& cx,
                                                 const FoliationSpec& spec,
                                                 int samples, unsigned seed,
                                                 bool parallel) {
  return validate_pseudofoliation(cx, std::vector<FoliationSpec>{spec}, samples,
                                  seed, parallel);
}

}  // namespace pfm
