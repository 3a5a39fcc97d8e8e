#include "pfm/io.hpp"

#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "pfm/builders.hpp"
#include "pfm/report.hpp"

using namespace pfm;

TEST_CASE("space files round-trip losslessly") {
  for (const char* word : {"aa'", "abab"}) {
    Complex cx = cone_of_surface(SurfaceWord::parse(word));
    std::string text = space_to_string(cx);
    Complex back = space_from_string(text);
    CHECK(space_to_string(back) == text);
    CHECK(back.name == cx.name);
    CHECK(back.dim == cx.dim);
    CHECK(back.cells.size() == cx.cells.size());
    CHECK(back.gluings.size() == cx.gluings.size());
    // identical analysis results on the reloaded space
    CHECK(back.validate().empty());
    CHECK(back.euler_characteristic() == cx.euler_characteristic());
    CHECK(admissible_directions(back).label() ==
          admissible_directions(cx).label());
  }
  SUBCASE("dimension 2 as well") {
    Complex cx = polygon_surface(SurfaceWord::parse("aba'b'"));
    Complex back = space_from_string(space_to_string(cx));
    CHECK(space_to_string(back) == space_to_string(cx));
    CHECK(back.gauss_bonnet_residual() == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("malformed space files are rejected") {
  CHECK_THROWS_AS(space_from_string(""), IoFailure);
  CHECK_THROWS_AS(space_from_string("dim 3\n"), IoFailure);
  CHECK_THROWS_AS(space_from_string("space 2\n"), IoFailure);
  CHECK_THROWS_AS(space_from_string("space 1\nwibble 3\n"), IoFailure);
  CHECK_THROWS_AS(space_from_string("space 1\ndim 3\nv 0 0 0\n"), IoFailure);
}

namespace {

// recompute V - E + F from the OBJ text itself
int obj_euler_characteristic(const std::string& obj) {
  std::istringstream in(obj);
  std::string line;
  int v = 0, f = 0;
  std::set<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "v") ++v;
    if (key == "f") {
      ++f;
      std::vector<int> ids;
      int i;
      while (ls >> i) ids.push_back(i);
      for (size_t a = 0; a < ids.size(); ++a) {
        int p = ids[a], q = ids[(a + 1) % ids.size()];
        edges.insert({std::min(p, q), std::max(p, q)});
      }
    }
  }
  return v - int(edges.size()) + f;
}

}  // namespace

TEST_CASE("obj export") {
  SUBCASE("empty leaf list gives a valid empty file") {
    std::string obj = obj_from_leaves({});
    CHECK(obj.find("v ") == std::string::npos);
    CHECK(obj.find("f ") == std::string::npos);
  }
  SUBCASE("single square leaf has 4 vertices and 1 face") {
    Leaf leaf;
    leaf.dim = 3;
    leaf.level = 0.5;
    LeafPiece piece;
    piece.cell = 0;
    piece.normal = vec3(0, 0, 1);
    piece.offset = 0.5;
    piece.polygon = {vec3(0, 0, 0.5), vec3(1, 0, 0.5), vec3(1, 1, 0.5),
                     vec3(0, 1, 0.5)};
    piece.edge_facet = {0, 1, 2, 3};
    leaf.pieces.push_back(piece);
    std::string obj = obj_from_leaves({leaf});
    CHECK(obj_euler_characteristic(obj) == 4 - 4 + 1);
    CHECK(obj.find("g leaf_0.5\n") != std::string::npos);
    CHECK(obj.find("f 1 2 3 4") != std::string::npos);
  }
  SUBCASE("traced leaf mesh matches the leaf Euler characteristic") {
    Complex cx = cone_of_surface(SurfaceWord::parse("aa'"));
    FoliationSpec spec = propagate_direction(cx, 0, vec3(0, 0, 1));
    Vec p = vec3(0.5, 0.25, 0.3);
    Leaf leaf = leaf_through(cx, spec, *find_cell(cx, p), p);
    int chi = leaf_euler_characteristic(cx, leaf);
    CHECK(chi == 1);
    CHECK(obj_euler_characteristic(obj_from_leaves({leaf})) == chi);
  }
}

TEST_CASE("json report helpers are deterministic") {
  Complex cx = cone_of_surface(SurfaceWord::parse("abab"));
  Json j = report_skeleton(Json{{"space", cx.name}, {"seed", 7}});
  j["space"] = space_summary_json(cx);
  j["links"] = links_json(cx);
  j["holonomy"] = holonomy_json(cx);
  j["directions"] = direction_set_json(admissible_directions(cx));
  std::string once = j.dump(2);

  Complex again = cone_of_surface(SurfaceWord::parse("abab"));
  Json j2 = report_skeleton(Json{{"space", again.name}, {"seed", 7}});
  j2["space"] = space_summary_json(again);
  j2["links"] = links_json(again);
  j2["holonomy"] = holonomy_json(again);
  j2["directions"] = direction_set_json(admissible_directions(again));
  CHECK(j2.dump(2) == once);

  CHECK(j["version"] == kReportSchemaVersion);
  CHECK(j["directions"]["label"] == "Circle+Points(1)");
}
