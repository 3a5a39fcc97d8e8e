#pragma once

#include <array>
#include <string>
#include <vector>

#include "pfm/complex.hpp"

namespace pfm {

struct InvalidWord : GeometryError {
  using GeometryError::GeometryError;
};
// the word demands a slit identification that is not a rigid motion
struct WordNotRealizable : GeometryError {
  using GeometryError::GeometryError;
};
struct NonCongruentSides : GeometryError {
  using GeometryError::GeometryError;
};
struct SlitNotEmbeddable : GeometryError {
  using GeometryError::GeometryError;
};
struct DiscsNotCongruent : GeometryError {
  using GeometryError::GeometryError;
};
struct MonodromyNotSymmetry : GeometryError {
  using GeometryError::GeometryError;
};

// Edge word over letters a..z with exponents +-1; each letter twice.
struct SurfaceWord {
  struct Letter {
    char sym;
    int exp;  // +1 or -1
  };
  std::vector<Letter> letters;

  // Accepts "aba⁻¹b⁻¹", "aba'b'", "aba-1b-1" or "aba^-1b^-1".
  static SurfaceWord parse(const std::string& text);
  std::string str() const;  // canonical form using trailing '
  int size() const { return int(letters.size()); }
  void check() const;  // throws InvalidWord
};

// One regular 2n-gon with edges identified per the word.
Complex polygon_surface(const SurfaceWord& word);

enum class BandPattern { Annulus, Moebius };
// Trapezoid A,B,C,D in cyclic order; side AB is glued to side CD:
// annulus A=D B=C, moebius A=C B=D.
Complex band(const std::array<Vec, 4>& trapezoid, BandPattern pattern);

// Flat cone: congruent sectors glued in a cycle around an apex.
Complex trivial_cone(double total_angle, int sectors = 0);

// n unit cubes cut along the half-plane {x=1/2, y>=1/2} and re-joined in a
// cycle across the cut; the vertical axis edge carries total angle 2*pi*n.
Complex cube_cycle(int n);

// Unit cube, each face split along its bisector and each half-face glued to
// the other half by the half-turn about the bisector line.
Complex borromean_cube();

// Four unit cubes around the origin in y <= 0; touching faces identified,
// y = 0 faces glued by half-turns about {y=0, z=-x} and {y=0, z=x}.
Complex four_cube_knot_neighborhood();

// Eight unit cubes around the origin, all touching faces identified;
// the origin is a manifold point (control case).
Complex eight_cube_vertex();

// Unit cube slit along the cone with apex L over segment MN; the doubled
// slit is divided into |word| arcs per horizontal level and re-identified
// per the word. Throws WordNotRealizable when a letter pair would need a
// non-rigid (shear) identification. Gluing order: interface gluings first,
// then the word's slit identifications as the last word.size()/2 gluings.
Complex cone_of_surface(const SurfaceWord& word, const Vec& L = vec3(0.5, 0.5, 0.5),
                        const Vec& M = vec3(0.25, 0.5, 0),
                        const Vec& N = vec3(0.75, 0.5, 0));

// surface x [0,1] with top glued to bottom through the monodromy, which must
// map the (single-cell) surface polygon onto itself.
Complex circle_product(const Complex& surface, const Isometry& monodromy);

// Cut the named interior gluings open and re-identify the freed facets.
struct SurgerySpec {
  std::vector<int> cut;             // gluing ids of the host to remove
  std::vector<FacetGluing> reglue;  // replacement identifications
};
Complex surgery(const Complex& host, const SurgerySpec& spec);

// An interior facet (already glued pair) acting as the planar disc.
struct DiscSpec {
  int cell = 0;
  int facet = 0;
};
// Cut both discs open and cross-identify the copies through the pairing,
// which must carry disc_m's plane onto disc_n's plane.
Complex connect_sum(const Complex& m, const Complex& n, const DiscSpec& disc_m,
                    const DiscSpec& disc_n, const Isometry& pairing);

}  // namespace pfm
