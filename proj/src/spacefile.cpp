#include "pfm/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace pfm {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string space_to_string(const Complex& cx) {
  std::ostringstream out;
  out << "space 1\n";
  out << "name " << cx.name << "\n";
  out << "dim " << cx.dim << "\n";
  for (const FlatCell& cell : cx.cells) {
    out << "cell\n";
    for (const Vec& v : cell.vertices) {
      out << "v";
      for (int i = 0; i < cx.dim; ++i) out << " " << fmt_double(v[i]);
      out << "\n";
    }
    for (const auto& facet : cell.facets) {
      out << "f";
      for (int i : facet) out << " " << i;
      out << "\n";
    }
  }
  for (const FacetGluing& g : cx.gluings) {
    out << "glue " << g.src_cell << " " << g.src_facet << " " << g.dst_cell
        << " " << g.dst_facet;
    for (int i : g.dst_vertices) out << " " << i;
    out << "\n";
  }
  return out.str();
}

Complex space_from_string(const std::string& text) {
  Complex cx;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "space") {
      int version = 0;
      ls >> version;
      if (version != 1) throw IoFailure("unsupported space file version");
      header = true;
    } else if (!header) {
      throw IoFailure("space file must start with a 'space <version>' line");
    } else if (key == "name") {
      std::getline(ls >> std::ws, cx.name);
    } else if (key == "dim") {
      ls >> cx.dim;
      if (cx.dim != 2 && cx.dim != 3)
        throw IoFailure("dimension must be 2 or 3");
    } else if (key == "cell") {
      cx.cells.push_back(FlatCell{cx.dim, {}, {}});
    } else if (key == "v") {
      if (cx.cells.empty()) throw IoFailure("vertex before any cell");
      Vec v(cx.dim);
      for (int i = 0; i < cx.dim; ++i)
        if (!(ls >> v[i])) throw IoFailure("bad vertex line");
      cx.cells.back().vertices.push_back(v);
    } else if (key == "f") {
      if (cx.cells.empty()) throw IoFailure("facet before any cell");
      std::vector<int> facet;
      int i;
      while (ls >> i) facet.push_back(i);
      if (facet.size() < 2) throw IoFailure("facet needs at least 2 vertices");
      cx.cells.back().facets.push_back(facet);
    } else if (key == "glue") {
      FacetGluing g;
      if (!(ls >> g.src_cell >> g.src_facet >> g.dst_cell >> g.dst_facet))
        throw IoFailure("bad gluing line");
      int i;
      while (ls >> i) g.dst_vertices.push_back(i);
      cx.gluings.push_back(g);
    } else {
      throw IoFailure("unknown space file key: " + key);
    }
  }
  if (!header) throw IoFailure("empty space file");
  return cx;
}

void save_space(const Complex& cx, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  out << space_to_string(cx);
  if (!out) throw IoFailure("write to " + path + " failed");
}

Complex load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return space_from_string(buf.str());
}

namespace {

Vec cross3(const Vec& a, const Vec& b) {
  return vec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
              a[0] * b[1] - a[1] * b[0]);
}

std::string group_name(const Leaf& leaf) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "leaf_%.9g", leaf.level);
  return buf;
}

}  // namespace

std::string obj_from_leaves(const std::vector<Leaf>& leaves) {
  std::ostringstream out;
  out << "# piecewise-flat foliation leaves\n";
  std::map<std::array<long long, 3>, int> index;  // quantized -> 1-based id
  std::ostringstream vblock, fblock;
  int next = 1;
  auto vertex_id = [&](const Vec& p) {
    std::array<long long, 3> key = {0, 0, 0};
    for (int i = 0; i < int(p.size()); ++i)
      key[i] = llround(p[i] * 1e9);
    auto [it, fresh] = index.insert({key, next});
    if (fresh) {
      ++next;
      vblock << "v";
      for (int i = 0; i < 3; ++i)
        vblock << " " << fmt_double(i < int(p.size()) ? p[i] : 0.0);
      vblock << "\n";
    }
    return it->second;
  };
  for (const Leaf& leaf : leaves) {
    fblock << "g " << group_name(leaf) << "\n";
    for (const LeafPiece& piece : leaf.pieces) {
      std::vector<Vec> poly = piece.polygon;
      if (leaf.dim == 3 && poly.size() >= 3) {
        // wind counterclockwise around the piece normal
        Vec twice_area = Vec::Zero(3);
        for (size_t i = 0; i < poly.size(); ++i)
          twice_area += cross3(poly[i], poly[(i + 1) % poly.size()]);
        if (twice_area.dot(piece.normal) < 0)
          std::reverse(poly.begin(), poly.end());
      }
      std::vector<int> ids;
      for (const Vec& p : poly) ids.push_back(vertex_id(p));
      fblock << (leaf.dim == 3 ? "f" : "l");
      for (int id : ids) fblock << " " << id;
      fblock << "\n";
    }
  }
  out << vblock.str() << fblock.str();
  return out.str();
}

void export_obj(const std::vector<Leaf>& leaves, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  out << obj_from_leaves(leaves);
  if (!out) throw IoFailure("write to " + path + " failed");
}

}  // namespace pfm
