#include <numbers>
#include <random>

#include "doctest.h"
#include "pfm/geometry.hpp"

using namespace pfm;

namespace {

Mat random_rotation(int dim, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = nd(rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

}  // namespace

TEST_CASE("isometry compose/inverse round trip") {
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  for (int dim : {2, 3}) {
    Isometry a{dim, random_rotation(dim, rng), Vec::Random(dim)};
    Isometry b{dim, random_rotation(dim, rng), Vec::Random(dim)};
    Vec p(dim);
    for (int i = 0; i < dim; ++i) p[i] = nd(rng);
    CHECK((a.compose(b).apply(p) - a.apply(b.apply(p))).norm() < kTol);
    CHECK((a.inverse().apply(a.apply(p)) - p).norm() < kTol);
    CHECK(a.is_orthogonal());
  }
}

TEST_CASE("derive_isometry recovers a known rigid motion") {
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  for (int dim : {2, 3}) {
    Mat o = random_rotation(dim, rng);
    Vec t = Vec::Random(dim);
    std::vector<Vec> src, dst;
    for (int k = 0; k < dim + 2; ++k) {
      Vec p(dim);
      for (int i = 0; i < dim; ++i) p[i] = nd(rng);
      src.push_back(p);
      dst.push_back(o * p + t);
    }
    Isometry got = derive_isometry(src, dst);
    CHECK((got.ortho - o).norm() < 1e-8);
    CHECK((got.trans - t).norm() < 1e-8);
  }
}

TEST_CASE("derive_isometry side hints resolve the reflection ambiguity") {
  // Both point sets lie in the plane z = 0; the side hints force the map to
  // exchange half-spaces (src interior -> side opposite dst interior).
  std::vector<Vec> tri = {vec3(0, 0, 0), vec3(1, 0, 0), vec3(0, 1, 0)};
  SUBCASE("hints on the same side give a reflection") {
    Isometry iso = derive_isometry(tri, tri, vec3(0.2, 0.2, 1), vec3(0.2, 0.2, 1));
    CHECK((iso.apply(vec3(0.2, 0.2, 1)) - vec3(0.2, 0.2, -1)).norm() < kTol);
    CHECK(iso.det() == doctest::Approx(-1.0));
  }
  SUBCASE("hints on opposite sides give the identity") {
    Isometry iso =
        derive_isometry(tri, tri, vec3(0.2, 0.2, 1), vec3(0.2, 0.2, -1));
    CHECK((iso.ortho - Mat::Identity(3, 3)).norm() < kTol);
  }
}

TEST_CASE("derive_isometry rejects bad input") {
  std::vector<Vec> line = {vec3(0, 0, 0), vec3(1, 0, 0), vec3(2, 0, 0)};
  CHECK_THROWS_AS(derive_isometry(line, line), Degenerate);
  std::vector<Vec> a = {vec2(0, 0), vec2(1, 0), vec2(0, 1)};
  std::vector<Vec> b = {vec2(0, 0), vec2(2, 0), vec2(0, 1)};
  CHECK_THROWS_AS(derive_isometry(a, b), NonCongruent);
}

TEST_CASE("polygon area and normal") {
  std::vector<Vec> sq = {vec3(0, 0, 1), vec3(2, 0, 1), vec3(2, 3, 1),
                         vec3(0, 3, 1)};
  CHECK(polygon_area(sq) == doctest::Approx(6.0));
  Vec n = polygon_normal(sq).normalized();
  CHECK(std::abs(n[2]) == doctest::Approx(1.0));
  std::vector<Vec> tri2d = {vec2(0, 0), vec2(1, 0), vec2(0, 1)};
  CHECK(polygon_area(tri2d) == doctest::Approx(0.5));
  CHECK(interior_angle(vec2(1, 0), vec2(0, 0), vec2(0, 1)) ==
        doctest::Approx(std::numbers::pi / 2));
}
