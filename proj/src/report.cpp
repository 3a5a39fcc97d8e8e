#include "pfm/report.hpp"

#include <fstream>

#include "pfm/io.hpp"

namespace pfm {

Json space_summary_json(const Complex& cx) {
  auto classes = cx.vertex_classes();
  int boundary_classes = 0;
  for (const auto& vc : classes) boundary_classes += vc.boundary;
  Json j;
  j["name"] = cx.name;
  j["dim"] = cx.dim;
  j["cells"] = cx.cells.size();
  j["gluings"] = cx.gluings.size();
  j["vertex_classes"] = classes.size();
  j["boundary_vertex_classes"] = boundary_classes;
  j["has_boundary"] = cx.has_boundary();
  return j;
}

Json diagnostics_json(const std::vector<Diagnostic>& diags) {
  Json j = Json::array();
  for (const auto& d : diags) j.push_back({{"code", d.code}, {"detail", d.detail}});
  return j;
}

Json links_json(const Complex& cx) {
  Json j;
  j["euler_characteristic"] = cx.euler_characteristic();
  if (cx.dim == 2 && !cx.has_boundary())
    j["gauss_bonnet_residual"] = cx.gauss_bonnet_residual();
  Json classes = Json::array();
  auto vcs = cx.vertex_classes();
  for (size_t i = 0; i < vcs.size(); ++i) {
    Json c;
    c["class"] = i;
    c["members"] = vcs[i].members.size();
    c["boundary"] = vcs[i].boundary;
    if (cx.dim == 2) {
      c["cone_angle"] = vcs[i].cone_angle;
      c["deficit"] = vcs[i].deficit;
    } else if (!vcs[i].boundary) {
      LinkSurface link = cx.link_surface(vcs[i]);
      c["link"] = {{"vertices", link.vertices},
                   {"edges", link.edges},
                   {"faces", link.faces},
                   {"euler_characteristic", link.euler_char},
                   {"closed", link.closed}};
    }
    classes.push_back(c);
  }
  j["vertex_classes"] = classes;
  return j;
}

Json holonomy_json(const Complex& cx) {
  DualGraph dg = dual_graph(cx);
  Json j;
  j["components"] = dg.components;
  j["spanning_tree_gluings"] = dg.tree.size();
  Json gens = Json::array();
  for (int g : dg.generators) {
    HolonomyElement h = loop_holonomy(cx, dg, g);
    gens.push_back({{"gluing", g},
                    {"determinant", h.ortho.determinant()},
                    {"trace", h.ortho.trace()}});
  }
  j["generators"] = gens;
  return j;
}

Json direction_set_json(const DirectionSet& set) {
  Json j;
  j["label"] = set.label();
  Json comps = Json::array();
  for (const auto& c : set.components) {
    Json basis = Json::array();
    for (int col = 0; col < c.basis.cols(); ++col) {
      Json row = Json::array();
      for (int r = 0; r < c.basis.rows(); ++r) row.push_back(c.basis(r, col));
      basis.push_back(row);
    }
    const char* type = c.basis.cols() == 1   ? "point"
                       : c.basis.cols() == 2 ? "circle"
                                             : "full";
    comps.push_back(
        {{"type", type}, {"basis", basis}, {"all_plus", c.all_plus}});
  }
  j["components"] = comps;
  return j;
}

Json leaf_json(const Complex& cx, const Leaf& leaf) {
  Json j;
  j["level"] = leaf.level;
  j["pieces"] = leaf.pieces.size();
  j["adjacencies"] = leaf.adjacency.size();
  j["area"] = leaf.area();
  j["singular"] = leaf.singular;
  j["budget_exceeded"] = leaf.budget_exceeded;
  if (!leaf.singular && !leaf.budget_exceeded)
    j["euler_characteristic"] = leaf_euler_characteristic(cx, leaf);
  return j;
}

Json index_sum_json(const IndexSumReport& rep) {
  return Json{{"chi", rep.chi},
              {"deficit_sum_over_2pi", rep.deficit_sum},
              {"branch_index_sum", rep.branch_index_sum},
              {"literal_order_sum", rep.order_sum},
              {"consistent", rep.consistent},
              {"literal_order_sum_matches_chi", rep.order_sum_matches}};
}

Json branch_points_json(const std::vector<BranchPoint>& pts) {
  Json j = Json::array();
  for (const auto& p : pts)
    j.push_back({{"vertex_class", p.vertex_class},
                 {"order", p.order},
                 {"index", p.index()}});
  return j;
}

Json perturbation_json(const PerturbationReport& rep) {
  return Json{{"trials", rep.trials},
              {"base_area", rep.base_area},
              {"max_area_decrease", rep.max_area_decrease},
              {"min_area_ratio", rep.min_area_ratio},
              {"seed", rep.seed},
              {"mode", rep.mode == BoundaryMode::Fixed ? "fixed" : "free"}};
}

Json calibration_json(const CalibrationReport& rep) {
  return Json{{"status", rep.status},
              {"parallel_to_normals", rep.parallel_to_normals}};
}

Json stokes_json(const StokesReport& rep) {
  return Json{{"integral_T", rep.integral_T},
              {"integral_S", rep.integral_S},
              {"integral_d1", rep.integral_d1},
              {"integral_d2", rep.integral_d2},
              {"area_T", rep.area_T},
              {"area_S", rep.area_S},
              {"relative_error", rep.relative_error},
              {"caps_cancel", rep.caps_cancel},
              {"identity_ok", rep.identity_ok},
              {"area_ok", rep.area_ok}};
}

Json report_skeleton(const Json& config) {
  Json j;
  j["version"] = kReportSchemaVersion;
  j["tool"] = "pfm";
  j["config"] = config;
  return j;
}

void write_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoFailure("write to " + path + " failed");
}

}  // namespace pfm
