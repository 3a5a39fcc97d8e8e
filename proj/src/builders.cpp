#include "pfm/builders.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace pfm {

using std::numbers::pi;

namespace {

// Vertex cycle of a planar facet given its corner points, inserting any
// other cell vertices that lie on the boundary segments (needed when a
// neighbouring facet's corner subdivides an edge).
std::vector<int> facet_cycle(const FlatCell& cell,
                             const std::vector<Vec>& corners) {
  std::vector<int> cyc;
  size_t n = corners.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec& a = corners[i];
    const Vec& b = corners[(i + 1) % n];
    cyc.push_back(find_vertex(cell, a));
    std::vector<std::pair<double, int>> between;
    for (size_t v = 0; v < cell.vertices.size(); ++v) {
      Vec d = b - a, e = cell.vertices[v] - a;
      double t = e.dot(d) / d.squaredNorm();
      if (t > kTol && t < 1 - kTol && (e - t * d).norm() < kTol)
        between.push_back({t, int(v)});
    }
    std::sort(between.begin(), between.end());
    for (auto& [t, v] : between) cyc.push_back(v);
  }
  return cyc;
}

FlatCell prism_y(const std::array<Vec, 3>& tri2, double ylo, double yhi) {
  // triangle given in (x, z); extrude along y
  FlatCell cell;
  cell.dim = 3;
  for (double y : {ylo, yhi})
    for (const Vec& q : tri2) cell.vertices.push_back(vec3(q[0], y, q[1]));
  cell.facets = {{0, 1, 2},       {3, 4, 5},       {0, 1, 4, 3},
                 {1, 2, 5, 4},    {2, 0, 3, 5}};
  return cell;
}

Vec identity_map(const Vec& p) { return p; }

}  // namespace

SurfaceWord SurfaceWord::parse(const std::string& text) {
  SurfaceWord w;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c < 'a' || c > 'z')
      throw InvalidWord("unexpected character in word: " + text);
    int exp = 1;
    ++i;
    if (i < text.size()) {
      if (text[i] == '\'') {
        exp = -1;
        ++i;
      } else if (text.compare(i, 2, "-1") == 0) {
        exp = -1;
        i += 2;
      } else if (text.compare(i, 3, "^-1") == 0) {
        exp = -1;
        i += 3;
      } else if (text.compare(i, 5, "⁻¹") == 0) {
        exp = -1;
        i += 5;
      }
    }
    w.letters.push_back({c, exp});
  }
  return w;
}

std::string SurfaceWord::str() const {
  std::string s;
  for (const Letter& l : letters) {
    s += l.sym;
    if (l.exp < 0) s += '\'';
  }
  return s;
}

void SurfaceWord::check() const {
  if (letters.empty() || letters.size() % 2 != 0)
    throw InvalidWord("word length must be even and positive");
  std::map<char, int> count;
  for (const Letter& l : letters) count[l.sym]++;
  for (auto [sym, c] : count)
    if (c != 2)
      throw InvalidWord(std::string("letter '") + sym + "' appears " +
                        std::to_string(c) + " times, expected 2");
}

Complex polygon_surface(const SurfaceWord& word) {
  word.check();
  int n2 = word.size();
  if (n2 < 4) throw InvalidWord("polygon_surface needs word length >= 4");
  Complex cx;
  cx.dim = 2;
  cx.name = "polygon_surface(" + word.str() + ")";
  std::vector<Vec> pts;
  for (int j = 0; j < n2; ++j) {
    double a = 2 * pi * j / n2 + pi / n2;
    pts.push_back(vec2(std::cos(a), std::sin(a)));
  }
  cx.cells.push_back(make_polygon(pts));
  std::map<char, std::vector<int>> occ;
  for (int p = 0; p < n2; ++p) occ[word.letters[p].sym].push_back(p);
  for (auto& [sym, ps] : occ) {
    int p = ps[0], q = ps[1];
    int ep = word.letters[p].exp, eq = word.letters[q].exp;
    // glue edge p to edge q, arrow start to arrow start
    int qs = (eq > 0) ? q : (q + 1) % n2;          // arrow start on q
    int qe = (eq > 0) ? (q + 1) % n2 : q;          // arrow end on q
    FacetGluing g{0, p, 0, q, {0, 0}};
    g.dst_vertices[(ep > 0) ? 0 : 1] = qs;
    g.dst_vertices[(ep > 0) ? 1 : 0] = qe;
    cx.gluings.push_back(g);
  }
  return cx;
}

Complex band(const std::array<Vec, 4>& trapezoid, BandPattern pattern) {
  const Vec &A = trapezoid[0], &B = trapezoid[1], &C = trapezoid[2],
            &D = trapezoid[3];
  if (std::abs((B - A).norm() - (D - C).norm()) > kTol)
    throw NonCongruentSides("sides AB and CD have different lengths");
  Complex cx;
  cx.dim = 2;
  cx.name = pattern == BandPattern::Annulus ? "band(annulus)" : "band(moebius)";
  cx.cells.push_back(make_polygon({A, B, C, D}));
  // facet 0 = AB (cycle [0,1]), facet 2 = CD (cycle [2,3])
  FacetGluing g{0, 0, 0, 2, {}};
  g.dst_vertices = pattern == BandPattern::Annulus ? std::vector<int>{3, 2}
                                                   : std::vector<int>{2, 3};
  cx.gluings.push_back(g);
  return cx;
}

Complex trivial_cone(double total_angle, int sectors) {
  if (total_angle <= 0) throw GeometryError("total_angle must be positive");
  int k = sectors > 0 ? sectors
                      : std::max(3, int(std::ceil(total_angle / (pi / 3))));
  double th = total_angle / k;
  if (th >= pi) throw GeometryError("sector angle must be below pi");
  Complex cx;
  cx.dim = 2;
  {
    std::ostringstream os;
    os << "trivial_cone(" << total_angle << ")";
    cx.name = os.str();
  }
  for (int i = 0; i < k; ++i)
    cx.cells.push_back(
        make_polygon({vec2(0, 0), vec2(1, 0), vec2(std::cos(th), std::sin(th))}));
  Mat rot(2, 2);
  rot << std::cos(th), std::sin(th), -std::sin(th), std::cos(th);  // by -th
  for (int i = 0; i < k; ++i)
    cx.gluings.push_back(glue_by_map(cx, i, 2, (i + 1) % k, 0,
                                     [rot](const Vec& p) { return Vec(rot * p); }));
  return cx;
}

Complex cube_cycle(int n) {
  if (n < 1) throw GeometryError("cube_cycle needs n >= 1");
  Complex cx;
  cx.dim = 3;
  cx.name = "cube_cycle(" + std::to_string(n) + ")";
  // quadrant boxes per cube: 0 SW, 1 SE, 2 NW, 3 NE (in x,y); z vertical
  const double h = 0.5;
  auto box = [&](double x0, double y0) {
    return make_box(vec3(x0, y0, 0), vec3(x0 + h, y0 + h, 1));
  };
  for (int j = 0; j < n; ++j) {
    cx.cells.push_back(box(0, 0));
    cx.cells.push_back(box(h, 0));
    cx.cells.push_back(box(0, h));
    cx.cells.push_back(box(h, h));
  }
  auto id = [](const Vec& p) { return p; };
  for (int j = 0; j < n; ++j) {
    int sw = 4 * j, se = 4 * j + 1, nw = 4 * j + 2, ne = 4 * j + 3;
    cx.gluings.push_back(glue_by_map(cx, sw, 1, se, 0, id));  // x=1/2, y<1/2
    cx.gluings.push_back(glue_by_map(cx, sw, 3, nw, 2, id));  // y=1/2, x<1/2
    cx.gluings.push_back(glue_by_map(cx, se, 3, ne, 2, id));  // y=1/2, x>1/2
    // the cut half-plane {x=1/2, y>1/2}: crossing advances the cycle
    int nw_next = 4 * ((j + 1) % n) + 2;
    cx.gluings.push_back(glue_by_map(cx, ne, 0, nw_next, 1, id));
  }
  return cx;
}

Complex borromean_cube() {
  Complex cx;
  cx.dim = 3;
  cx.name = "borromean_cube";
  FlatCell cell;
  cell.dim = 3;
  for (int i = 0; i < 8; ++i)
    cell.vertices.push_back(
        vec3(i & 1 ? 1 : 0, i & 2 ? 1 : 0, i & 4 ? 1 : 0));
  // bisector endpoints: z-faces split along y, x-faces along z, y-faces
  // along x (cyclic, so the three rings interlock)
  for (double z : {0.0, 1.0})
    for (double x : {0.0, 1.0}) cell.vertices.push_back(vec3(x, 0.5, z));
  for (double x : {0.0, 1.0})
    for (double y : {0.0, 1.0}) cell.vertices.push_back(vec3(x, y, 0.5));
  for (double y : {0.0, 1.0})
    for (double z : {0.0, 1.0}) cell.vertices.push_back(vec3(0.5, y, z));

  struct Face {
    std::vector<Vec> half_a, half_b;
    std::function<Vec(const Vec&)> mirror;
  };
  std::vector<Face> faces;
  for (double z : {0.0, 1.0})
    faces.push_back({{vec3(0, 0, z), vec3(1, 0, z), vec3(1, .5, z), vec3(0, .5, z)},
                     {vec3(0, .5, z), vec3(1, .5, z), vec3(1, 1, z), vec3(0, 1, z)},
                     [](const Vec& p) { return Vec(vec3(p[0], 1 - p[1], p[2])); }});
  for (double x : {0.0, 1.0})
    faces.push_back({{vec3(x, 0, 0), vec3(x, 1, 0), vec3(x, 1, .5), vec3(x, 0, .5)},
                     {vec3(x, 0, .5), vec3(x, 1, .5), vec3(x, 1, 1), vec3(x, 0, 1)},
                     [](const Vec& p) { return Vec(vec3(p[0], p[1], 1 - p[2])); }});
  for (double y : {0.0, 1.0})
    faces.push_back({{vec3(0, y, 0), vec3(.5, y, 0), vec3(.5, y, 1), vec3(0, y, 1)},
                     {vec3(.5, y, 0), vec3(1, y, 0), vec3(1, y, 1), vec3(.5, y, 1)},
                     [](const Vec& p) { return Vec(vec3(1 - p[0], p[1], p[2])); }});
  for (const Face& f : faces) {
    cell.facets.push_back(facet_cycle(cell, f.half_a));
    cell.facets.push_back(facet_cycle(cell, f.half_b));
  }
  cx.cells.push_back(cell);
  for (size_t f = 0; f < faces.size(); ++f)
    cx.gluings.push_back(
        glue_by_map(cx, 0, int(2 * f), 0, int(2 * f + 1), faces[f].mirror));
  return cx;
}

Complex four_cube_knot_neighborhood() {
  Complex cx;
  cx.dim = 3;
  cx.name = "four_cube_knot_neighborhood";
  // quadrants of (x, z), all in y <= 0; cube 0: x,z >= 0, then ccw
  cx.cells.push_back(make_box(vec3(0, -1, 0), vec3(1, 0, 1)));
  cx.cells.push_back(make_box(vec3(-1, -1, 0), vec3(0, 0, 1)));
  cx.cells.push_back(make_box(vec3(-1, -1, -1), vec3(0, 0, 0)));
  cx.cells.push_back(make_box(vec3(0, -1, -1), vec3(1, 0, 0)));
  auto id = [](const Vec& p) { return p; };
  // touching faces (make_box facet order: x-,x+,y-,y+,z-,z+)
  cx.gluings.push_back(glue_by_map(cx, 1, 1, 0, 0, id));  // x=0, z>0
  cx.gluings.push_back(glue_by_map(cx, 2, 1, 3, 0, id));  // x=0, z<0
  cx.gluings.push_back(glue_by_map(cx, 2, 5, 1, 4, id));  // z=0, x<0
  cx.gluings.push_back(glue_by_map(cx, 3, 5, 0, 4, id));  // z=0, x>0
  // y=0 faces: half-turns about {y=0, z=-x} and {y=0, z=x}
  cx.gluings.push_back(glue_by_map(cx, 0, 3, 2, 3, [](const Vec& p) {
    return Vec(vec3(-p[2], -p[1], -p[0]));
  }));
  cx.gluings.push_back(glue_by_map(cx, 1, 3, 3, 3, [](const Vec& p) {
    return Vec(vec3(p[2], -p[1], p[0]));
  }));
  return cx;
}

Complex eight_cube_vertex() {
  Complex cx;
  cx.dim = 3;
  cx.name = "eight_cube_vertex";
  for (int i = 0; i < 8; ++i) {
    Vec lo = vec3(i & 1 ? 0 : -1, i & 2 ? 0 : -1, i & 4 ? 0 : -1);
    cx.cells.push_back(make_box(lo, lo + Vec::Ones(3)));
  }
  auto id = [](const Vec& p) { return p; };
  for (int i = 0; i < 8; ++i)
    for (int axis = 0; axis < 3; ++axis) {
      int bit = 1 << axis;
      if (i & bit) continue;  // glue the minus-side cube to the plus side
      cx.gluings.push_back(
          glue_by_map(cx, i, 2 * axis + 1, i | bit, 2 * axis, id));
    }
  return cx;
}

Complex cone_of_surface(const SurfaceWord& word, const Vec& L, const Vec& M,
                        const Vec& N) {
  word.check();
  int k = word.size() / 2;
  double lx = L[0], sy = L[1], lz = L[2], mx = M[0], nx = N[0];
  if (!(lx > 0 && lx < 1 && lz > 0 && lz < 1 && sy > 0 && sy < 1))
    throw GeometryError("apex must be interior to the cube");
  if (!(mx < nx && mx > 0 && nx < 1) || std::abs(M[1] - sy) > kTol ||
      std::abs(N[1] - sy) > kTol || std::abs(M[2]) > kTol ||
      std::abs(N[2]) > kTol)
    throw GeometryError("slit base must lie on the bottom edge of the slit plane");
  bool mirror_ok = std::abs(lx - 0.5 * (mx + nx)) < kTol;

  Complex cx;
  cx.dim = 3;
  cx.name = "cone_of_surface(" + word.str() + ")";
  // fan of the (x, z) unit square from the apex shadow, bottom edge refined
  // at the slit base subdivision points
  Vec apex2 = vec2(lx, lz);
  std::vector<Vec> ring = {vec2(0, 0)};
  for (int m = 0; m <= k; ++m) ring.push_back(vec2(mx + (nx - mx) * m / k, 0));
  ring.push_back(vec2(1, 0));
  ring.push_back(vec2(1, 1));
  ring.push_back(vec2(0, 1));
  int nt = int(ring.size());  // k + 5 fan triangles
  // cell(t, layer): layer 0 is y in [0, sy], layer 1 is y in [sy, 1]
  auto cell_id = [&](int t, int layer) { return 2 * t + layer; };
  for (int t = 0; t < nt; ++t) {
    std::array<Vec, 3> tri = {apex2, ring[t], ring[(t + 1) % nt]};
    cx.cells.push_back(prism_y(tri, 0, sy));
    cx.cells.push_back(prism_y(tri, sy, 1));
  }
  // facet order in prism_y: 0 lower tri, 1 upper tri, 2 quad(apex,ring[t]),
  // 3 quad(ring[t],ring[t+1]), 4 quad(ring[t+1],apex)
  for (int layer = 0; layer < 2; ++layer)
    for (int t = 0; t < nt; ++t)
      cx.gluings.push_back(glue_by_map(cx, cell_id(t, layer), 4,
                                       cell_id((t + 1) % nt, layer), 2,
                                       identity_map));
  // horizontal interface at y = sy away from the slit (slit triangles are
  // the fan triangles over the k base segments, t = 1..k)
  for (int t = 0; t < nt; ++t)
    if (t < 1 || t > k)
      cx.gluings.push_back(
          glue_by_map(cx, cell_id(t, 0), 1, cell_id(t, 1), 0, identity_map));

  // slit identifications per the word (positions 1..2k around the level
  // circle: lower copy left-to-right, then upper copy right-to-left)
  auto side = [&](int p) { return p <= k ? 0 : 1; };
  auto tri_of = [&](int p) { return p <= k ? p : 2 * k + 1 - p; };
  auto dir = [&](int p) {
    return (side(p) == 0 ? 1 : -1) * word.letters[p - 1].exp;
  };
  auto slit_facet = [&](int p) {
    return std::pair{cell_id(tri_of(p), side(p)), side(p) == 0 ? 1 : 0};
  };
  std::map<char, std::vector<int>> occ;
  for (int p = 1; p <= 2 * k; ++p) occ[word.letters[p - 1].sym].push_back(p);
  for (auto& [sym, ps] : occ) {
    int p = ps[0], q = ps[1];
    auto [cp, fp] = slit_facet(p);
    auto [cq, fq] = slit_facet(q);
    if (side(p) != side(q) && tri_of(p) == tri_of(q) && dir(p) == dir(q)) {
      cx.gluings.push_back(glue_by_map(cx, cp, fp, cq, fq, identity_map));
    } else if (tri_of(q) == k + 1 - tri_of(p) && dir(q) == -dir(p)) {
      if (!mirror_ok)
        throw WordNotRealizable(
            "mirror identification needs the apex above the slit midpoint");
      cx.gluings.push_back(glue_by_map(cx, cp, fp, cq, fq, [lx](const Vec& p3) {
        return Vec(vec3(2 * lx - p3[0], p3[1], p3[2]));
      }));
    } else {
      throw WordNotRealizable(
          std::string("letter '") + sym +
          "': the level-by-level identification is a shear, which is not an "
          "isometry of the slit pieces");
    }
  }
  return cx;
}

Complex circle_product(const Complex& surface, const Isometry& monodromy) {
  if (surface.dim != 2 || surface.cells.size() != 1)
    throw MonodromyNotSymmetry("circle_product expects a single-polygon surface");
  if (monodromy.dim != 2)
    throw MonodromyNotSymmetry("monodromy must be a plane isometry");
  const FlatCell& poly = surface.cells[0];
  int n = int(poly.vertices.size());
  Complex cx;
  cx.dim = 3;
  cx.name = "circle_product(" + surface.name + ")";
  FlatCell prism;
  prism.dim = 3;
  for (double z : {0.0, 1.0})
    for (const Vec& q : poly.vertices)
      prism.vertices.push_back(vec3(q[0], q[1], z));
  std::vector<int> bottom(n), top(n);
  for (int i = 0; i < n; ++i) bottom[i] = i, top[i] = n + i;
  prism.facets.push_back(bottom);
  prism.facets.push_back(top);
  for (size_t f = 0; f < poly.facets.size(); ++f) {
    int a = poly.facets[f][0], b = poly.facets[f][1];
    prism.facets.push_back({a, b, n + b, n + a});
  }
  cx.cells.push_back(prism);
  // lift the surface gluings to the side quads
  for (const FacetGluing& g : surface.gluings) {
    FacetGluing h{0, 2 + g.src_facet, 0, 2 + g.dst_facet, {}};
    int a = g.dst_vertices[0], b = g.dst_vertices[1];
    h.dst_vertices = {a, b, n + b, n + a};
    cx.gluings.push_back(h);
  }
  // close the bundle: top to bottom through the monodromy
  try {
    cx.gluings.push_back(glue_by_map(cx, 0, 1, 0, 0, [&](const Vec& p) {
      Vec q = monodromy.apply(vec2(p[0], p[1]));
      return Vec(vec3(q[0], q[1], p[2] - 1));
    }));
  } catch (const GeometryError&) {
    throw MonodromyNotSymmetry("monodromy does not map the polygon to itself");
  }
  return cx;
}

Complex surgery(const Complex& host, const SurgerySpec& spec) {
  Complex cx = host;
  std::vector<bool> cut(host.gluings.size(), false);
  for (int g : spec.cut) {
    if (g < 0 || g >= int(host.gluings.size()) || cut[g])
      throw SlitNotEmbeddable("invalid or repeated gluing id in slit");
    cut[g] = true;
  }
  cx.gluings.clear();
  for (size_t g = 0; g < host.gluings.size(); ++g)
    if (!cut[g]) cx.gluings.push_back(host.gluings[g]);
  for (const FacetGluing& g : spec.reglue) cx.gluings.push_back(g);
  auto diag = cx.validate();
  if (!diag.empty())
    throw SlitNotEmbeddable("re-identified complex is invalid: " +
                            diag[0].code + " (" + diag[0].detail + ")");
  return cx;
}

Complex connect_sum(const Complex& m, const Complex& n, const DiscSpec& disc_m,
                    const DiscSpec& disc_n, const Isometry& pairing) {
  auto gm = m.glued_partner(disc_m.cell, disc_m.facet);
  auto gn = n.glued_partner(disc_n.cell, disc_n.facet);
  if (!gm || !gn)
    throw DiscsNotCongruent("both discs must be interior (glued) facets");
  const FacetGluing& fm = m.gluings[gm->first];
  const FacetGluing& fn = n.gluings[gn->first];
  int off = int(m.cells.size());
  Complex cx;
  cx.dim = m.dim;
  cx.name = "connect_sum(" + m.name + ", " + n.name + ")";
  cx.cells = m.cells;
  cx.cells.insert(cx.cells.end(), n.cells.begin(), n.cells.end());
  for (size_t g = 0; g < m.gluings.size(); ++g)
    if (int(g) != gm->first) cx.gluings.push_back(m.gluings[g]);
  for (size_t g = 0; g < n.gluings.size(); ++g)
    if (int(g) != gn->first) {
      FacetGluing h = n.gluings[g];
      h.src_cell += off;
      h.dst_cell += off;
      cx.gluings.push_back(h);
    }
  // the named facet of each disc, its glued partner facet, and the isometry
  // carrying the named side onto the partner side
  Isometry phi_m = m.gluing_isometry(gm->first);
  Isometry phi_n = n.gluing_isometry(gn->first);
  if (!gm->second) phi_m = phi_m.inverse();
  if (!gn->second) phi_n = phi_n.inverse();
  auto partner_m = gm->second ? std::pair{fm.dst_cell, fm.dst_facet}
                              : std::pair{fm.src_cell, fm.src_facet};
  auto partner_n = gn->second ? std::pair{fn.dst_cell, fn.dst_facet}
                              : std::pair{fn.src_cell, fn.src_facet};
  Isometry conj = phi_n.compose(pairing.compose(phi_m.inverse()));
  try {
    cx.gluings.push_back(glue_by_map(
        cx, disc_m.cell, disc_m.facet, off + disc_n.cell, disc_n.facet,
        [&](const Vec& p) { return pairing.apply(p); }));
    cx.gluings.push_back(glue_by_map(
        cx, partner_m.first, partner_m.second, off + partner_n.first,
        partner_n.second, [&](const Vec& p) { return conj.apply(p); }));
  } catch (const GeometryError&) {
    throw DiscsNotCongruent("pairing does not carry one disc onto the other");
  }
  return cx;
}

}  // namespace pfm
