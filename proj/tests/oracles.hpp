#pragma once

// Test-side closed forms, written independently of the library code paths they check.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bkg/tensor.hpp"

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Kaehler potential (4/c) log(1 + c|z|^2/4), coordinates (x1, y1, x2, y2, ...).
inline Mat space_form_metric(const Vec& p, double c) {
  const Eigen::Index m = p.size() / 2;
  Eigen::VectorXcd z(m);
  for (Eigen::Index k = 0; k < m; ++k) z[k] = {p[2 * k], p[2 * k + 1]};
  const double s = c / 4.0;
  const double w = 1.0 + s * z.squaredNorm();
  Mat g = Mat::Zero(2 * m, 2 * m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) {
      const std::complex<double> h = (a == b ? 1.0 : 0.0) / w - s * std::conj(z[a]) * z[b] / (w * w);
      g(2 * a, 2 * b) = h.real();
      g(2 * a + 1, 2 * b + 1) = h.real();
      g(2 * a, 2 * b + 1) = h.imag();
      g(2 * a + 1, 2 * b) = -h.imag();
    }
  return g;
}

inline Mat complex_structure(Eigen::Index m) {
  Mat j = Mat::Zero(2 * m, 2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    j(2 * k + 1, 2 * k) = 1.0;
    j(2 * k, 2 * k + 1) = -1.0;
  }
  return j;
}

// Constant holomorphic sectional curvature c, as a function of four vectors:
// R(X,Y,Z,W) = (c/4)[g(Y,Z)g(X,W) - g(X,Z)g(Y,W) + g(JY,Z)g(JX,W) - g(JX,Z)g(JY,W) + 2g(X,JY)g(JZ,W)].
inline bkg::Tensor space_form_tensor(const Mat& g, const Mat& j, double c) {
  const Eigen::Index d = g.rows();
  bkg::Tensor t({d, d, d, d});
  const auto e = [&](Eigen::Index a) { return Vec::Unit(d, a); };
  const auto ip = [&](const Vec& x, const Vec& y) { return x.dot(g * y); };
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index cc = 0; cc < d; ++cc)
        for (Eigen::Index dd = 0; dd < d; ++dd) {
          const Vec x = e(a), y = e(b), z = e(cc), w = e(dd);
          t(a, b, cc, dd) = c / 4.0 *
                            (ip(y, z) * ip(x, w) - ip(x, z) * ip(y, w) + ip(j * y, z) * ip(j * x, w) -
                             ip(j * x, z) * ip(j * y, w) + 2.0 * ip(x, j * y) * ip(j * z, w));
        }
  return t;
}

// Brute-force contraction over the listed axis pairs by explicit multi-index enumeration.
inline bkg::Tensor brute_contract(const bkg::Tensor& a, const bkg::Tensor& b,
                                  const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> a_free, b_free;
  for (int k = 0; k < a.rank(); ++k) {
    bool used = false;
    for (auto [x, y] : pairs) used = used || x == k;
    if (!used) a_free.push_back(k);
  }
  for (int k = 0; k < b.rank(); ++k) {
    bool used = false;
    for (auto [x, y] : pairs) used = used || y == k;
    if (!used) b_free.push_back(k);
  }
  std::vector<Eigen::Index> shape;
  for (int k : a_free) shape.push_back(a.dim(k));
  for (int k : b_free) shape.push_back(b.dim(k));
  bkg::Tensor out(shape);

  std::vector<Eigen::Index> ia(a.rank()), ib(b.rank());
  const auto next = [](std::vector<Eigen::Index>& idx, const std::vector<Eigen::Index>& dims) {
    for (int k = static_cast<int>(idx.size()) - 1; k >= 0; --k) {
      if (++idx[k] < dims[k]) return true;
      idx[k] = 0;
    }
    return false;
  };
  std::vector<Eigen::Index> out_idx(shape.size(), 0);
  std::vector<Eigen::Index> sum_dims;
  for (auto [x, y] : pairs) sum_dims.push_back(a.dim(x));
  do {
    double acc = 0.0;
    std::vector<Eigen::Index> s(sum_dims.size(), 0);
    do {
      std::size_t f = 0;
      for (int k : a_free) ia[k] = out_idx[f++];
      for (int k : b_free) ib[k] = out_idx[f++];
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        ia[pairs[q].first] = s[q];
        ib[pairs[q].second] = s[q];
      }
      acc += a.at(ia) * b.at(ib);
    } while (!sum_dims.empty() && next(s, sum_dims));
    if (shape.empty())
      out.entries()[0] = acc;
    else
      out.at(out_idx) = acc;
  } while (!shape.empty() && next(out_idx, shape));
  return out;
}

inline bkg::Tensor random_tensor(std::vector<Eigen::Index> shape, std::mt19937_64& rng) {
  bkg::Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (Eigen::Index k = 0; k < t.size(); ++k) t.entries()[k] = dist(rng);
  return t;
}

inline double max_diff(const bkg::Tensor& a, const bkg::Tensor& b) { return (a.entries() - b.entries()).cwiseAbs().maxCoeff(); }

}  // namespace oracle
