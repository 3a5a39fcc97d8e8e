#include "pfm/complex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pfm {

namespace {

std::string fmt_place(int cell, int facet) {
  std::ostringstream os;
  os << "cell " << cell << " facet " << facet;
  return os.str();
}

}  // namespace

std::vector<Vec> FlatCell::facet_points(int f) const {
  std::vector<Vec> pts;
  pts.reserve(facets[f].size());
  for (int v : facets[f]) pts.push_back(vertices[v]);
  return pts;
}

Vec FlatCell::centroid() const {
  Vec c = Vec::Zero(dim);
  for (const Vec& p : vertices) c += p;
  return c / double(vertices.size());
}

std::pair<Vec, double> FlatCell::facet_plane(int f) const {
  auto pts = facet_points(f);
  Vec n;
  if (dim == 2) {
    Vec d = pts[1] - pts[0];
    n = Vec(2);
    n << d[1], -d[0];
  } else {
    n = polygon_normal(pts);
  }
  double len = n.norm();
  if (len < kTol) throw Degenerate("degenerate facet " + fmt_place(-1, f));
  n /= len;
  Vec fc = Vec::Zero(dim);
  for (const Vec& p : pts) fc += p;
  fc /= double(pts.size());
  if (n.dot(fc - centroid()) < 0) n = -n;
  return {n, n.dot(pts[0])};
}

double FlatCell::diameter() const {
  double d = 0;
  for (size_t i = 0; i < vertices.size(); ++i)
    for (size_t j = i + 1; j < vertices.size(); ++j)
      d = std::max(d, (vertices[i] - vertices[j]).norm());
  return d;
}

double FlatCell::inradius() const {
  Vec c = centroid();
  double r = std::numeric_limits<double>::infinity();
  for (size_t f = 0; f < facets.size(); ++f) {
    auto [n, off] = facet_plane(int(f));
    r = std::min(r, off - n.dot(c));
  }
  return r;
}

double FlatCell::measure() const {
  // Divergence theorem: measure = (1/dim) * sum_f offset_f * |facet f|,
  // valid for any cell whose facet planes are oriented outward.
  double m = 0;
  for (size_t f = 0; f < facets.size(); ++f) {
    auto [n, off] = facet_plane(int(f));
    auto pts = facet_points(int(f));
    double fm = (dim == 2) ? (pts[1] - pts[0]).norm() : polygon_area(pts);
    m += off * fm;
  }
  return m / double(dim);
}

void Complex::build_partner_index() const {
  if (partner_built_) return;
  for (size_t g = 0; g < gluings.size(); ++g) {
    const FacetGluing& fg = gluings[g];
    partner_[{fg.src_cell, fg.src_facet}] = {int(g), true};
    partner_[{fg.dst_cell, fg.dst_facet}] = {int(g), false};
  }
  partner_built_ = true;
}

std::optional<std::pair<int, bool>> Complex::glued_partner(int cell,
                                                           int facet) const {
  build_partner_index();
  auto it = partner_.find({cell, facet});
  if (it == partner_.end()) return std::nullopt;
  return it->second;
}

const Isometry& Complex::gluing_isometry(int g) const {
  if (iso_cache_.size() != gluings.size())
    iso_cache_.assign(gluings.size(), std::nullopt);
  if (!iso_cache_[g]) {
    const FacetGluing& fg = gluings[g];
    const FlatCell& src = cells[fg.src_cell];
    const FlatCell& dst = cells[fg.dst_cell];
    std::vector<Vec> sp = src.facet_points(fg.src_facet);
    std::vector<Vec> dp;
    dp.reserve(fg.dst_vertices.size());
    for (int v : fg.dst_vertices) dp.push_back(dst.vertices[v]);
    iso_cache_[g] = derive_isometry(sp, dp, src.centroid(), dst.centroid());
  }
  return *iso_cache_[g];
}

bool Complex::has_boundary() const {
  for (size_t c = 0; c < cells.size(); ++c)
    for (size_t f = 0; f < cells[c].facets.size(); ++f)
      if (!glued_partner(int(c), int(f))) return true;
  return false;
}

std::vector<Diagnostic> Complex::validate() const {
  std::vector<Diagnostic> out;
  auto add = [&](const std::string& code, const std::string& detail) {
    out.push_back({code, detail});
  };

  for (size_t c = 0; c < cells.size(); ++c) {
    const FlatCell& cell = cells[c];
    if (cell.dim != dim) {
      add("DimensionMismatch", "cell " + std::to_string(c));
      continue;
    }
    if (int(cell.vertices.size()) < dim + 1) {
      add("DegenerateCell", "cell " + std::to_string(c) + " has too few vertices");
      continue;
    }
    double scale = std::max(1.0, cell.diameter());
    bool planes_ok = true;
    for (size_t f = 0; f < cell.facets.size(); ++f) {
      const auto& cyc = cell.facets[f];
      size_t need = (dim == 2) ? 2 : 3;
      if (cyc.size() < need) {
        add("BadFacet", fmt_place(int(c), int(f)) + " has too few vertices");
        planes_ok = false;
        continue;
      }
      for (int v : cyc)
        if (v < 0 || v >= int(cell.vertices.size())) {
          add("IndexOutOfRange", fmt_place(int(c), int(f)));
          planes_ok = false;
        }
      if (!planes_ok) continue;
      std::pair<Vec, double> pl;
      try {
        pl = cell.facet_plane(int(f));
      } catch (const GeometryError&) {
        add("DegenerateFacet", fmt_place(int(c), int(f)));
        planes_ok = false;
        continue;
      }
      if (dim == 3) {
        for (int v : cyc)
          if (std::abs(pl.first.dot(cell.vertices[v]) - pl.second) >
              kTol * scale) {
            add("NonPlanarFacet", fmt_place(int(c), int(f)));
            break;
          }
      }
      for (size_t v = 0; v < cell.vertices.size(); ++v)
        if (pl.first.dot(cell.vertices[v]) > pl.second + kTol * scale) {
          add("NonConvexCell", fmt_place(int(c), int(f)) + " has vertex " +
                                   std::to_string(v) + " outside");
          break;
        }
    }
    if (dim == 3 && planes_ok) {
      // every edge of a closed polyhedral boundary lies in exactly 2 facets
      std::map<std::pair<int, int>, int> edge_use;
      for (const auto& cyc : cell.facets)
        for (size_t i = 0; i < cyc.size(); ++i) {
          int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
          edge_use[{std::min(a, b), std::max(a, b)}]++;
        }
      for (const auto& [e, cnt] : edge_use)
        if (cnt != 2)
          add("OpenCellBoundary",
              "cell " + std::to_string(c) + " edge (" + std::to_string(e.first) +
                  "," + std::to_string(e.second) + ") lies in " +
                  std::to_string(cnt) + " facets");
    }
  }

  std::set<std::pair<int, int>> seen;
  for (size_t g = 0; g < gluings.size(); ++g) {
    const FacetGluing& fg = gluings[g];
    auto bad_index = [&](int cell, int facet) {
      return cell < 0 || cell >= int(cells.size()) || facet < 0 ||
             facet >= int(cells[cell].facets.size());
    };
    if (bad_index(fg.src_cell, fg.src_facet) ||
        bad_index(fg.dst_cell, fg.dst_facet)) {
      add("IndexOutOfRange", "gluing " + std::to_string(g));
      continue;
    }
    for (auto side : {std::pair{fg.src_cell, fg.src_facet},
                      std::pair{fg.dst_cell, fg.dst_facet}}) {
      if (!seen.insert(side).second)
        add("DoublyGluedFacet", fmt_place(side.first, side.second));
    }
    const auto& src_cyc = cells[fg.src_cell].facets[fg.src_facet];
    const auto& dst_cyc = cells[fg.dst_cell].facets[fg.dst_facet];
    if (fg.dst_vertices.size() != src_cyc.size()) {
      add("BadCorrespondence",
          "gluing " + std::to_string(g) + " correspondence size mismatch");
      continue;
    }
    std::set<int> want(dst_cyc.begin(), dst_cyc.end());
    std::set<int> got(fg.dst_vertices.begin(), fg.dst_vertices.end());
    if (want != got) {
      add("BadCorrespondence", "gluing " + std::to_string(g) +
                                   " does not map onto the dst facet");
      continue;
    }
    try {
      gluing_isometry(int(g));
    } catch (const GeometryError& e) {
      add("NonIsometricGluing",
          "gluing " + std::to_string(g) + ": " + e.what());
    }
  }
  return out;
}

std::vector<VertexClass> Complex::vertex_classes() const {
  std::vector<std::pair<int, int>> slots;
  std::map<std::pair<int, int>, size_t> index;
  for (size_t c = 0; c < cells.size(); ++c)
    for (size_t v = 0; v < cells[c].vertices.size(); ++v) {
      index[{int(c), int(v)}] = slots.size();
      slots.push_back({int(c), int(v)});
    }
  UnionFind uf(slots.size());
  for (const FacetGluing& fg : gluings) {
    const auto& cyc = cells[fg.src_cell].facets[fg.src_facet];
    for (size_t i = 0; i < cyc.size(); ++i)
      uf.unite(index.at({fg.src_cell, cyc[i]}),
               index.at({fg.dst_cell, fg.dst_vertices[i]}));
  }
  std::map<size_t, size_t> root_to_class;
  std::vector<VertexClass> out;
  for (size_t s = 0; s < slots.size(); ++s) {
    size_t r = uf.find(s);
    auto [it, fresh] = root_to_class.try_emplace(r, out.size());
    if (fresh) out.emplace_back();
    out[it->second].members.push_back(slots[s]);
  }
  for (VertexClass& vc : out) {
    for (auto [c, v] : vc.members) {
      const FlatCell& cell = cells[c];
      std::vector<int> at;  // facets containing v
      for (size_t f = 0; f < cell.facets.size(); ++f) {
        const auto& cyc = cell.facets[f];
        if (std::find(cyc.begin(), cyc.end(), v) != cyc.end()) {
          at.push_back(int(f));
          if (!glued_partner(c, int(f))) vc.boundary = true;
        }
      }
      if (dim == 2 && at.size() == 2) {
        auto other = [&](int f) {
          const auto& cyc = cell.facets[f];
          return cyc[0] == v ? cyc[1] : cyc[0];
        };
        vc.cone_angle += interior_angle(cell.vertices[other(at[0])],
                                        cell.vertices[v],
                                        cell.vertices[other(at[1])]);
      }
    }
    vc.deficit = 2 * std::numbers::pi - vc.cone_angle;
  }
  return out;
}

std::vector<EdgeClass> Complex::edge_classes() const {
  std::vector<std::tuple<int, int, int>> slots;
  std::map<std::tuple<int, int, int>, size_t> index;
  auto key = [](int c, int a, int b) {
    return std::tuple{c, std::min(a, b), std::max(a, b)};
  };
  for (size_t c = 0; c < cells.size(); ++c)
    for (const auto& cyc : cells[c].facets)
      for (size_t i = 0; i < cyc.size(); ++i) {
        if (cyc.size() == 2 && i == 1) break;
        auto k = key(int(c), cyc[i], cyc[(i + 1) % cyc.size()]);
        if (index.emplace(k, slots.size()).second) slots.push_back(k);
      }
  UnionFind uf(slots.size());
  for (const FacetGluing& fg : gluings) {
    const auto& cyc = cells[fg.src_cell].facets[fg.src_facet];
    size_t n = cyc.size();
    size_t steps = (n == 2) ? 1 : n;
    for (size_t i = 0; i < steps; ++i) {
      size_t j = (i + 1) % n;
      uf.unite(index.at(key(fg.src_cell, cyc[i], cyc[j])),
               index.at(key(fg.dst_cell, fg.dst_vertices[i],
                            fg.dst_vertices[j])));
    }
  }
  std::map<size_t, size_t> root_to_class;
  std::vector<EdgeClass> out;
  for (size_t s = 0; s < slots.size(); ++s) {
    size_t r = uf.find(s);
    auto [it, fresh] = root_to_class.try_emplace(r, out.size());
    if (fresh) out.emplace_back();
    out[it->second].members.push_back(slots[s]);
  }
  for (EdgeClass& ec : out) {
    for (auto [c, a, b] : ec.members) {
      const FlatCell& cell = cells[c];
      std::vector<int> at;
      for (size_t f = 0; f < cell.facets.size(); ++f) {
        const auto& cyc = cell.facets[f];
        bool has = false;
        for (size_t i = 0; i < cyc.size(); ++i) {
          int p = cyc[i], q = cyc[(i + 1) % cyc.size()];
          if ((p == a && q == b) || (p == b && q == a)) has = true;
        }
        if (has) {
          at.push_back(int(f));
          if (!glued_partner(c, int(f))) ec.boundary = true;
        }
      }
      if (dim == 3 && at.size() == 2) {
        auto [n1, o1] = cell.facet_plane(at[0]);
        auto [n2, o2] = cell.facet_plane(at[1]);
        double d = std::clamp(n1.dot(n2), -1.0, 1.0);
        ec.dihedral_sum += std::numbers::pi - std::acos(d);
      }
    }
  }
  return out;
}

LinkSurface Complex::link_surface(const VertexClass& vc) const {
  std::set<std::pair<int, int>> in_class(vc.members.begin(), vc.members.end());
  // link-edge slots: (cell, v, facet); link-vertex slots: (cell, v, other end)
  std::map<std::tuple<int, int, int>, size_t> eidx, vidx;
  std::vector<std::tuple<int, int, int>> eslots, vslots;
  for (auto [c, v] : vc.members) {
    const FlatCell& cell = cells[c];
    for (size_t f = 0; f < cell.facets.size(); ++f) {
      const auto& cyc = cell.facets[f];
      auto pos = std::find(cyc.begin(), cyc.end(), v);
      if (pos == cyc.end()) continue;
      eidx[{c, v, int(f)}] = eslots.size();
      eslots.push_back({c, v, int(f)});
      size_t i = size_t(pos - cyc.begin());
      for (int u : {cyc[(i + 1) % cyc.size()],
                    cyc[(i + cyc.size() - 1) % cyc.size()]}) {
        if (vidx.emplace(std::tuple{c, v, u}, vslots.size()).second)
          vslots.push_back({c, v, u});
      }
    }
  }
  UnionFind ue(eslots.size()), uv(vslots.size());
  std::vector<int> e_touch(eslots.size(), 1);
  for (const FacetGluing& fg : gluings) {
    const auto& cyc = cells[fg.src_cell].facets[fg.src_facet];
    for (size_t i = 0; i < cyc.size(); ++i) {
      int v = cyc[i], w = fg.dst_vertices[i];
      if (!in_class.count({fg.src_cell, v})) continue;
      size_t a = eidx.at({fg.src_cell, v, fg.src_facet});
      size_t b = eidx.at({fg.dst_cell, w, fg.dst_facet});
      ue.unite(a, b);
      e_touch[a]++;
      // neighbours of v in the src cycle map to neighbours of w
      size_t n = cyc.size();
      for (size_t d : {(i + 1) % n, (i + n - 1) % n}) {
        if (n == 2 && d == i) continue;
        uv.unite(vidx.at({fg.src_cell, v, cyc[d]}),
                 vidx.at({fg.dst_cell, w, fg.dst_vertices[d]}));
      }
    }
  }
  LinkSurface ls;
  if (dim == 3) {
    ls.faces = int(vc.members.size());
  } else {
    // dim 2: the link is a 1-complex (circle or arc); report V and E only.
    ls.faces = 0;
  }
  std::set<size_t> eroots, vroots;
  for (size_t s = 0; s < eslots.size(); ++s) eroots.insert(ue.find(s));
  for (size_t s = 0; s < vslots.size(); ++s) vroots.insert(uv.find(s));
  if (dim == 3) {
    ls.edges = int(eroots.size());
    ls.vertices = int(vroots.size());
  } else {
    ls.edges = int(vc.members.size());
    ls.vertices = int(eroots.size());
  }
  ls.euler_char = ls.vertices - ls.edges + ls.faces;
  // closed iff every link edge (dim 3) / link vertex (dim 2) is shared by two
  // corners, i.e. no member corner sits on an unglued facet
  ls.closed = !vc.boundary;
  return ls;
}

int Complex::euler_characteristic() const {
  int nv = int(vertex_classes().size());
  int nfacets = 0;
  for (const FlatCell& c : cells) nfacets += int(c.facets.size());
  int facet_classes = nfacets - int(gluings.size());
  if (dim == 2) return nv - facet_classes + int(cells.size());
  int ne = int(edge_classes().size());
  return nv - ne + facet_classes - int(cells.size());
}

FlatCell make_box(const Vec& lo, const Vec& hi) {
  FlatCell cell;
  cell.dim = int(lo.size());
  if (cell.dim == 2) {
    return make_polygon({vec2(lo[0], lo[1]), vec2(hi[0], lo[1]),
                         vec2(hi[0], hi[1]), vec2(lo[0], hi[1])});
  }
  for (int i = 0; i < 8; ++i)
    cell.vertices.push_back(vec3(i & 1 ? hi[0] : lo[0], i & 2 ? hi[1] : lo[1],
                                 i & 4 ? hi[2] : lo[2]));
  cell.facets = {{0, 2, 6, 4}, {1, 5, 7, 3},   // x-, x+
                 {0, 4, 5, 1}, {2, 3, 7, 6},   // y-, y+
                 {0, 1, 3, 2}, {4, 6, 7, 5}};  // z-, z+
  return cell;
}

FlatCell make_polygon(const std::vector<Vec>& pts) {
  FlatCell cell;
  cell.dim = 2;
  cell.vertices = pts;
  int n = int(pts.size());
  for (int i = 0; i < n; ++i) cell.facets.push_back({i, (i + 1) % n});
  return cell;
}

int find_vertex(const FlatCell& cell, const Vec& p, double tol) {
  for (size_t v = 0; v < cell.vertices.size(); ++v)
    if ((cell.vertices[v] - p).norm() <= tol) return int(v);
  throw GeometryError("no cell vertex at the requested point");
}

FacetGluing glue_by_map(const Complex& cx, int c1, int f1, int c2, int f2,
                        const std::function<Vec(const Vec&)>& map) {
  FacetGluing g{c1, f1, c2, f2, {}};
  const FlatCell& src = cx.cells[c1];
  const FlatCell& dst = cx.cells[c2];
  double tol = kTol * std::max(1.0, dst.diameter());
  std::set<int> allowed(dst.facets[f2].begin(), dst.facets[f2].end());
  for (int v : src.facets[f1]) {
    int w = find_vertex(dst, map(src.vertices[v]), tol);
    if (!allowed.count(w))
      throw GeometryError("map does not carry the facet onto its target");
    g.dst_vertices.push_back(w);
  }
  return g;
}

double Complex::gauss_bonnet_residual() const {
  if (dim != 2)
    throw GeometryError("gauss_bonnet_residual requires a 2-complex");
  if (has_boundary())
    throw HasBoundary("gauss_bonnet_residual requires a closed complex");
  double total = 0;
  for (const VertexClass& vc : vertex_classes()) total += vc.deficit;
  return total - 2 * std::numbers::pi * euler_characteristic();
}

}  // namespace pfm
