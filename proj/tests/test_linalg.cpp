#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bkg/linalg.hpp"
#include "oracles.hpp"

using bkg::Mat;
using bkg::Vec;

namespace {

Mat random_spd(bkg::Index d, unsigned seed) {
  std::srand(seed);
  const Mat a = Mat::Random(d, d);
  return a * a.transpose() + Mat::Identity(d, d);
}

}  // namespace

TEST_CASE("Gram-Schmidt is orthonormal in a non-Euclidean metric") {
  const Mat g = random_spd(5, 2);
  std::vector<Vec> vs;
  for (int k = 0; k < 3; ++k) vs.push_back(Vec::Random(5));
  const auto e = bkg::gram_schmidt(vs, g);
  REQUIRE(e.size() == 3);
  const Mat E = bkg::stack_columns(e, 5);
  CHECK((E.transpose() * g * E - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-13);
  // first vector keeps its direction
  CHECK(std::abs(bkg::inner(e[0], vs[0], g) - std::sqrt(bkg::inner(vs[0], vs[0], g))) < 1e-12);
}

TEST_CASE("dependent input is a degeneracy") {
  const Mat g = Mat::Identity(3, 3);
  std::vector<Vec> vs = {Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 0) * 2.0 + Vec::Unit(3, 1)};
  CHECK_THROWS_AS(bkg::gram_schmidt(vs, g), bkg::DegeneracyError);
}

TEST_CASE("extension completes a frame") {
  const Mat g = oracle::space_form_metric((Vec(4) << 0.2, -0.1, 0.3, 0.05).finished(), 4.0);
  std::vector<Vec> start = {Vec::Unit(4, 0) / std::sqrt(g(0, 0))};
  const auto cand = bkg::columns(Mat::Identity(4, 4));
  const auto e = bkg::extend_orthonormal(start, cand, g, 4);
  REQUIRE(e.size() == 4);
  const Mat E = bkg::stack_columns(e, 4);
  CHECK((E.transpose() * g * E - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((E.col(0) - start[0]).norm() < 1e-15);
}

TEST_CASE("standard complex structure") {
  for (bkg::Index m = 1; m <= 4; ++m) {
    const Mat j = bkg::standard_complex_structure(m);
    CHECK((j * j + Mat::Identity(2 * m, 2 * m)).norm() == 0.0);
    CHECK((j - oracle::complex_structure(m)).norm() == 0.0);
  }
  const Mat j = bkg::standard_complex_structure(2);
  CHECK((j * Vec::Unit(4, 0) - Vec::Unit(4, 1)).norm() == 0.0);
}

TEST_CASE("non-SPD metrics are rejected") {
  Mat g = Mat::Identity(2, 2);
  g(1, 1) = -1.0;
  CHECK_THROWS(bkg::require_spd(g, "test"));
}
