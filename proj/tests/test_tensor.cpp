#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bkg/tensor.hpp"
#include "oracles.hpp"

using bkg::AxisPair;
using bkg::Tensor;

TEST_CASE("entries are addressable by index and span") {
  Tensor t({2, 3, 4});
  t(1, 2, 3) = 5.0;
  const std::vector<bkg::Index> idx = {1, 2, 3};
  CHECK(t.at(idx) == 5.0);
  CHECK(t.size() == 24);
  CHECK(t.rank() == 3);
  CHECK(t.max_abs() == 5.0);
}

TEST_CASE("matrix round trip") {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  const Tensor t = Tensor::from_matrix(m);
  CHECK(t(1, 0) == 4.0);
  CHECK(t(0, 2) == 3.0);
  CHECK(t.as_matrix() == m);
}

TEST_CASE("wrong entry count is rejected") {
  CHECK_THROWS_AS(Tensor({2, 2}, Eigen::VectorXd::Zero(3)), bkg::DimensionError);
}

TEST_CASE("contraction matches a brute-force sum") {
  std::mt19937_64 rng(17);
  struct Case {
    std::vector<bkg::Index> a, b;
    std::vector<std::pair<int, int>> pairs;
  };
  const std::vector<Case> cases = {
      {{3, 4}, {4, 2}, {{1, 0}}},
      {{2, 3, 4}, {4, 3}, {{1, 1}, {2, 0}}},
      {{3, 3, 3, 3}, {3, 2}, {{2, 0}}},
      {{2, 5}, {5, 2}, {{0, 1}, {1, 0}}},
      {{4}, {4}, {{0, 0}}},
      {{2, 3}, {3, 4, 2}, {{1, 0}}},
  };
  for (const auto& c : cases) {
    const Tensor a = oracle::random_tensor(c.a, rng);
    const Tensor b = oracle::random_tensor(c.b, rng);
    std::vector<AxisPair> pairs;
    for (auto [x, y] : c.pairs) pairs.push_back({x, y});
    const Tensor got = bkg::contract(a, b, std::span<const AxisPair>(pairs));
    const Tensor want = oracle::brute_contract(a, b, c.pairs);
    REQUIRE(got.shape() == want.shape());
    CHECK(oracle::max_diff(got, want) < 1e-13);
  }
}

TEST_CASE("contraction of matrices is the matrix product") {
  std::mt19937_64 rng(3);
  const Tensor a = oracle::random_tensor({3, 5}, rng);
  const Tensor b = oracle::random_tensor({5, 2}, rng);
  const Tensor c = bkg::contract(a, b, {AxisPair{1, 0}});
  CHECK((c.as_matrix() - a.as_matrix() * b.as_matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("mismatched axes name the offending pair") {
  const Tensor a({2, 3});
  const Tensor b({4, 2});
  try {
    bkg::contract(a, b, {AxisPair{1, 0}});
    FAIL("expected DimensionError");
  } catch (const bkg::DimensionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("axis 1") != std::string::npos);
    CHECK(msg.find("axis 0") != std::string::npos);
  }
  CHECK_THROWS_AS(bkg::contract(a, b, {AxisPair{5, 0}}), bkg::DimensionError);
  CHECK_THROWS_AS(bkg::contract(a, Tensor({3, 3}), {AxisPair{1, 0}, AxisPair{1, 1}}), bkg::DimensionError);
}

TEST_CASE("change of basis by the identity is a no-op and evaluate4 agrees with contraction") {
  std::mt19937_64 rng(5);
  const Tensor r = oracle::random_tensor({3, 3, 3, 3}, rng);
  CHECK(oracle::max_diff(bkg::change_basis4(r, Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3))), r) == 0.0);

  const Eigen::MatrixXd f = Eigen::MatrixXd::Random(3, 3);
  const Tensor rf = bkg::change_basis4(r, f);
  const Eigen::VectorXd x = f.col(0), y = f.col(1), z = f.col(2), w = f.col(0);
  CHECK(std::abs(rf(0, 1, 2, 0) - bkg::evaluate4(r, x, y, z, w)) < 1e-13);
}

TEST_CASE("arithmetic") {
  Tensor a({2, 2});
  a(0, 1) = 2.0;
  Tensor b = a * 3.0 - a;
  CHECK(b(0, 1) == 4.0);
  CHECK((b / 2.0)(0, 1) == 2.0);
  CHECK_THROWS_AS(a + Tensor({2, 3}), bkg::DimensionError);
}
