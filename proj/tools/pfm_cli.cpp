#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pfm/builders.hpp"
#include "pfm/io.hpp"
#include "pfm/report.hpp"

using namespace pfm;

namespace {

struct RunConfig {
  std::string space;       // builder expression, e.g. cone_of_surface(aa')
  std::string file;        // or a space definition file
  std::vector<std::string> analyses;
  std::vector<double> direction;
  std::vector<double> levels;
  unsigned seed = 0;
  std::string output_dir;
  bool obj = false;
  bool save_space = false;
  bool timings = false;
  int samples = 0;
  int trials = 100;
  double magnitude = 0.0;  // 0: pick from the smallest cell inradius
  double stokes_a = 1.0, stokes_b = 2.0, stokes_k = 1.7;
  double stokes_amplitude = 0.05;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  for (std::string& a : out) {
    while (!a.empty() && (a.front() == ' ' || a.front() == '"')) a.erase(0, 1);
    while (!a.empty() && (a.back() == ' ' || a.back() == '"')) a.pop_back();
  }
  return out;
}

double parse_angle(const std::string& s) {
  // accepts plain numbers and "<x>pi"
  auto pos = s.find("pi");
  if (pos == std::string::npos) return std::stod(s);
  std::string factor = s.substr(0, pos);
  return (factor.empty() ? 1.0 : std::stod(factor)) * std::numbers::pi;
}

Complex build_space(const RunConfig& cfg) {
  if (!cfg.file.empty()) return load_space(cfg.file);
  if (cfg.space.empty()) throw ConfigError("no space given (--space or --file)");
  std::string expr = cfg.space;
  std::string name = expr;
  std::vector<std::string> args;
  auto open = expr.find('(');
  if (open != std::string::npos) {
    if (expr.back() != ')') throw ConfigError("unbalanced parentheses in " + expr);
    name = expr.substr(0, open);
    args = split_args(expr.substr(open + 1, expr.size() - open - 2));
  }
  auto want = [&](size_t lo, size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw ConfigError("wrong number of parameters for " + name);
  };
  try {
    if (name == "polygon_surface") {
      want(1, 1);
      return polygon_surface(SurfaceWord::parse(args[0]));
    }
    if (name == "band") {
      want(1, 1);
      std::array<Vec, 4> square = {vec2(0, 0), vec2(1, 0), vec2(1, 1),
                                   vec2(0, 1)};
      if (args[0] == "annulus") return band(square, BandPattern::Annulus);
      if (args[0] == "moebius") return band(square, BandPattern::Moebius);
      throw ConfigError("band pattern must be annulus or moebius");
    }
    if (name == "trivial_cone") {
      want(1, 2);
      return trivial_cone(parse_angle(args[0]),
                          args.size() > 1 ? std::stoi(args[1]) : 0);
    }
    if (name == "cube_cycle") {
      want(1, 1);
      return cube_cycle(std::stoi(args[0]));
    }
    if (name == "borromean_cube") {
      want(0, 0);
      return borromean_cube();
    }
    if (name == "four_cube_knot_neighborhood") {
      want(0, 0);
      return four_cube_knot_neighborhood();
    }
    if (name == "eight_cube_vertex") {
      want(0, 0);
      return eight_cube_vertex();
    }
    if (name == "cone_of_surface") {
      want(1, 1);
      return cone_of_surface(SurfaceWord::parse(args[0]));
    }
    if (name == "circle_product") {
      want(2, 2);
      double theta = parse_angle(args[1]);
      Mat rot(2, 2);
      rot << std::cos(theta), -std::sin(theta), std::sin(theta),
          std::cos(theta);
      return circle_product(polygon_surface(SurfaceWord::parse(args[0])),
                            Isometry{2, rot, Vec::Zero(2)});
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidWord& e) {
    throw ConfigError(std::string("invalid word: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ConfigError("malformed numeric parameter in " + expr);
  }
  throw ConfigError("unknown builder: " + name);
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum((unsigned char)c) ? c : '_';
  return out;
}

Vec config_direction(const RunConfig& cfg, int dim) {
  if (cfg.direction.empty()) {
    Vec d = Vec::Zero(dim);
    d[dim - 1] = 1;
    return d;
  }
  if (int(cfg.direction.size()) != dim)
    throw ConfigError("direction must have one entry per dimension");
  Vec d(dim);
  for (int i = 0; i < dim; ++i) d[i] = cfg.direction[i];
  if (d.norm() < kTol) throw ConfigError("direction must be nonzero");
  return d.normalized();
}

// first cell meeting {n·x = level} (level measured in the root chart),
// with the section centroid as the trace point
std::optional<std::pair<int, Vec>> level_point(const Complex& cx,
                                               const FoliationSpec& spec,
                                               double level) {
  DualGraph dg = dual_graph(cx);
  Vec n_root = dg.transport[spec.seed_cell].ortho * spec.normals[spec.seed_cell];
  for (size_t c = 0; c < cx.cells.size(); ++c) {
    double offset = level - n_root.dot(dg.transport[c].trans);
    auto piece = plane_section(cx, int(c), spec.normals[c], offset);
    if (!piece) continue;
    Vec centroid = Vec::Zero(cx.dim);
    for (const Vec& p : piece->polygon) centroid += p;
    centroid /= double(piece->polygon.size());
    return std::make_pair(int(c), centroid);
  }
  return std::nullopt;
}

int run(const RunConfig& cfg, const std::string& command) {
  Json config_echo;
  config_echo["command"] = command;
  config_echo["space"] = cfg.file.empty() ? cfg.space : ("file:" + cfg.file);
  config_echo["analyses"] = cfg.analyses;
  config_echo["direction"] = cfg.direction;
  config_echo["levels"] = cfg.levels;
  config_echo["seed"] = cfg.seed;
  config_echo["samples"] = cfg.samples;
  config_echo["trials"] = cfg.trials;
  config_echo["magnitude"] = cfg.magnitude;

  Json report = report_skeleton(config_echo);
  Json stages = Json::array();
  Json errors = Json::array();
  Json timings = Json::array();

  Complex cx = build_space(cfg);
  report["space"] = space_summary_json(cx);

  FoliationSpec spec;
  bool have_spec = false;
  std::vector<Leaf> leaves;

  for (const std::string& analysis : cfg.analyses) {
    Json stage;
    stage["name"] = analysis;
    auto started = std::chrono::steady_clock::now();
    try {
      if (analysis == "validate") {
        auto diags = cx.validate();
        stage["ok"] = diags.empty();
        stage["diagnostics"] = diagnostics_json(diags);
      } else if (analysis == "links") {
        stage["result"] = links_json(cx);
      } else if (analysis == "holonomy") {
        stage["result"] = holonomy_json(cx);
      } else if (analysis == "directions") {
        stage["result"] = direction_set_json(admissible_directions(cx));
      } else if (analysis == "foliate") {
        spec = propagate_direction(cx, 0, config_direction(cfg, cx.dim));
        have_spec = true;
        std::vector<double> levels = cfg.levels;
        if (levels.empty()) {
          DualGraph dg = dual_graph(cx);
          Vec n_root = dg.transport[0].ortho * spec.normals[0];
          levels.push_back(n_root.dot(dg.transport[0].apply(
              cx.cells[0].centroid())));
        }
        spec.levels = levels;
        Json traced = Json::array();
        for (double level : levels) {
          auto at = level_point(cx, spec, level);
          if (!at) {
            traced.push_back({{"level", level}, {"empty", true}});
            continue;
          }
          leaves.push_back(leaf_through(cx, spec, at->first, at->second));
          traced.push_back(leaf_json(cx, leaves.back()));
        }
        stage["coorientable"] = spec.coorientable;
        stage["leaves"] = traced;
        if (cx.dim == 2) {
          stage["branch_points"] = branch_points_json(branch_points(cx, spec));
          stage["index_sum"] = index_sum_json(index_sum_report(cx, spec));
        }
        if (cfg.samples > 0)
          stage["validator"] = diagnostics_json(
              validate_pseudofoliation(cx, spec, cfg.samples, cfg.seed));
      } else if (analysis == "verify-minimality") {
        if (!have_spec)
          throw ConfigError("verify-minimality requires the foliate stage first");
        CalibrationForm form;
        form.coeffs = spec.seed_normal.normalized();
        stage["calibration"] = calibration_json(
            calibration_consistency(cx, spec, form));
        double inradius = 1e18;
        for (const auto& cell : cx.cells)
          inradius = std::min(inradius, cell.inradius());
        double magnitude =
            cfg.magnitude > 0 ? cfg.magnitude : std::min(0.02, 0.09 * inradius);
        Json perturbed = Json::array();
        for (const Leaf& leaf : leaves) {
          Json entry;
          entry["level"] = leaf.level;
          entry["perturbation"] = perturbation_json(
              perturb_leaf(cx, leaf, cfg.trials, magnitude,
                           BoundaryMode::Fixed, {}, cfg.seed));
          perturbed.push_back(entry);
        }
        stage["leaves"] = perturbed;
      } else if (analysis == "stokes") {
        stage["result"] = stokes_json(
            stokes_identity_check(cx, cfg.stokes_a, cfg.stokes_b, cfg.stokes_k,
                                  cfg.stokes_amplitude, cfg.seed));
      } else {
        throw ConfigError("unknown analysis: " + analysis);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      stage["error"] = e.what();
      errors.push_back({{"stage", analysis}, {"error", e.what()}});
    }
    if (cfg.timings) {
      auto elapsed = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - started)
                         .count();
      timings.push_back({{"stage", analysis}, {"seconds", elapsed}});
    }
    stages.push_back(stage);
  }

  report["stages"] = stages;
  report["errors"] = errors;
  if (cfg.timings) report["timings"] = timings;

  std::string dir = cfg.output_dir;
  if (dir.empty()) {
    const char* env = std::getenv("PFM_OUTPUT_DIR");
    dir = env ? env : ".";
  }
  write_json(report, dir + "/report.json");
  if (cfg.save_space) save_space(cx, dir + "/" + sanitize(cx.name) + ".space");
  if (cfg.obj) export_obj(leaves, dir + "/leaves.obj");
  std::cout << report.dump(2) << "\n";
  return errors.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piecewise-flat manifold construction and foliation analysis"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--space", cfg.space, "builder expression, e.g. cone_of_surface(aa')");
    sub->add_option("--file", cfg.file, "space definition file to load");
    sub->add_option("--seed", cfg.seed, "seed for all randomized stages");
    sub->add_option("--output-dir", cfg.output_dir,
                    "output directory (default $PFM_OUTPUT_DIR or .)");
    sub->add_flag("--timings", cfg.timings,
                  "add wall-clock timings (breaks byte-identical reports)");
    sub->add_flag("--save-space", cfg.save_space, "write the space definition file");
    return sub;
  };
  auto add_foliate = [&](CLI::App* sub) {
    sub->add_option("--direction", cfg.direction, "seed normal components");
    sub->add_option("--levels", cfg.levels, "leaf levels in the root chart");
    sub->add_option("--samples", cfg.samples, "pseudo-foliation validator samples");
    sub->add_flag("--obj", cfg.obj, "export traced leaves to leaves.obj");
    return sub;
  };

  CLI::App* build = add_common(app.add_subcommand("build", "construct and validate a space"));
  build->callback([&] { cfg.save_space = true; });
  CLI::App* analyze = add_common(
      app.add_subcommand("analyze", "links, holonomy and admissible directions"));
  CLI::App* foliate = add_foliate(add_common(
      app.add_subcommand("foliate", "propagate a direction and trace leaves")));
  CLI::App* verify = add_foliate(add_common(
      app.add_subcommand("verify", "minimality, calibration and flux checks")));
  verify->add_option("--trials", cfg.trials, "perturbation trials per leaf");
  verify->add_option("--magnitude", cfg.magnitude, "perturbation magnitude");
  verify->add_option("--stokes-a", cfg.stokes_a, "plane family coefficient a");
  verify->add_option("--stokes-b", cfg.stokes_b, "plane family coefficient b");
  verify->add_option("--stokes-k", cfg.stokes_k, "plane family level k");
  verify->add_option("--stokes-amplitude", cfg.stokes_amplitude, "cap radius");
  CLI::App* export_cmd = add_foliate(add_common(
      app.add_subcommand("export", "trace leaves and write the OBJ mesh")));
  export_cmd->callback([&] { cfg.obj = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string command;
  if (build->parsed()) {
    command = "build";
    cfg.analyses = {"validate"};
  } else if (analyze->parsed()) {
    command = "analyze";
    cfg.analyses = {"validate", "links", "holonomy", "directions"};
  } else if (foliate->parsed()) {
    command = "foliate";
    cfg.analyses = {"validate", "foliate"};
  } else if (verify->parsed()) {
    command = "verify";
    cfg.analyses = {"validate", "foliate", "verify-minimality", "stokes"};
  } else if (export_cmd->parsed()) {
    command = "export";
    cfg.analyses = {"validate", "foliate"};
  }

  try {
    return run(cfg, command);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoFailure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
