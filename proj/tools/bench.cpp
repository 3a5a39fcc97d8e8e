#include <chrono>
#include <cstdio>

#include "pfm/builders.hpp"
#include "pfm/foliation.hpp"
#include "pfm/minimality.hpp"

using namespace pfm;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

template <class F>
double timed(F&& f) {
  auto start = std::chrono::steady_clock::now();
  f();
  return seconds_since(start);
}

}  // namespace

int main() {
  Complex cx = cone_of_surface(SurfaceWord::parse("abab"));
  FoliationSpec spec = propagate_direction(cx, 0, vec3(0, 0, 1));
  Vec p = vec3(0.5, 0.25, 0.3);
  Leaf leaf = leaf_through(cx, spec, *find_cell(cx, p), p);

  double inradius = 1e18;
  for (const auto& cell : cx.cells)
    inradius = std::min(inradius, cell.inradius());
  double magnitude = 0.09 * inradius;

  std::printf("%-34s %10s %10s %8s\n", "kernel", "serial(s)", "openmp(s)",
              "speedup");

  PerturbationReport serial_rep, parallel_rep;
  double t_serial = timed([&] {
    serial_rep = perturb_leaf(cx, leaf, 400, magnitude, BoundaryMode::Fixed,
                              {}, 7, false, 0.05);
  });
  double t_parallel = timed([&] {
    parallel_rep = perturb_leaf(cx, leaf, 400, magnitude, BoundaryMode::Fixed,
                                {}, 7, true, 0.05);
  });
  bool same = serial_rep.max_area_decrease == parallel_rep.max_area_decrease &&
              serial_rep.min_area_ratio == parallel_rep.min_area_ratio;
  std::printf("%-34s %10.3f %10.3f %7.2fx   results %s\n",
              "leaf perturbation (400 trials)", t_serial, t_parallel,
              t_serial / t_parallel, same ? "identical" : "DIFFER");

  std::vector<Diagnostic> serial_diag, parallel_diag;
  double v_serial = timed([&] {
    serial_diag = validate_pseudofoliation(cx, spec, 600, 7, false);
  });
  double v_parallel = timed([&] {
    parallel_diag = validate_pseudofoliation(cx, spec, 600, 7, true);
  });
  bool vsame = serial_diag.size() == parallel_diag.size();
  for (size_t i = 0; vsame && i < serial_diag.size(); ++i)
    vsame = serial_diag[i].code == parallel_diag[i].code &&
            serial_diag[i].detail == parallel_diag[i].detail;
  std::printf("%-34s %10.3f %10.3f %7.2fx   results %s\n",
              "foliation validator (600 samples)", v_serial, v_parallel,
              v_serial / v_parallel, vsame ? "identical" : "DIFFER");

  return same && vsame ? 0 : 1;
}
