#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pfm/complex.hpp"
#include "pfm/foliation.hpp"
#include "pfm/holonomy.hpp"
#include "pfm/minimality.hpp"

namespace pfm {

// Reports use insertion-ordered JSON so serialization is byte-stable.
using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchemaVersion = "1.0";

Json space_summary_json(const Complex& cx);
Json diagnostics_json(const std::vector<Diagnostic>& diags);
Json links_json(const Complex& cx);
Json holonomy_json(const Complex& cx);
Json direction_set_json(const DirectionSet& set);
Json leaf_json(const Complex& cx, const Leaf& leaf);
Json index_sum_json(const IndexSumReport& rep);
Json branch_points_json(const std::vector<BranchPoint>& pts);
Json perturbation_json(const PerturbationReport& rep);
Json calibration_json(const CalibrationReport& rep);
Json stokes_json(const StokesReport& rep);

// Report skeleton: {version, tool, config, ...}. Timings are added by the
// caller only when explicitly requested, since they break byte-identity.
Json report_skeleton(const Json& config);
void write_json(const Json& j, const std::string& path);

}  // namespace pfm
