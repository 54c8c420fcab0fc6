#include "bkg/invariants.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>

namespace bkg {

Mat p_operator(const FramedPoint& fp) {
  return (fp.complex_structure * fp.tangent).transpose() * fp.metric * fp.tangent;
}

double p_norm_sq(const FramedPoint& fp) { return p_operator(fp).squaredNorm(); }

namespace {

// angle between J X and T_pM for X = sum c_i e_i, via atan2(|QX|, |PX|)
double wirtinger_angle(const FramedPoint& fp, const Vec& c) {
  const Vec x = fp.tangent * c;
  const Vec jx = fp.complex_structure * x;
  const Vec gjx = fp.metric * jx;
  const double tangential = (fp.tangent.transpose() * gjx).norm();
  const double normal = (fp.normal.transpose() * gjx).norm();
  return std::atan2(normal, tangential);
}

}  // namespace

SlantResult slant_angle(const FramedPoint& fp, double tol) {
  const Index n = fp.n();
  SlantResult res;
  std::vector<double> angles;
  for (Index i = 0; i < n; ++i) {
    const double a = wirtinger_angle(fp, Vec::Unit(n, i));
    res.frame_angles.push_back(a);
    angles.push_back(a);
  }
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < 16; ++k) {
    Vec c(n);
    for (Index i = 0; i < n; ++i) c[i] = normal(rng);
    angles.push_back(wirtinger_angle(fp, c.normalized()));
  }
  const auto [lo, hi] = std::minmax_element(angles.begin(), angles.end());
  res.spread = *hi - *lo;
  if (res.spread < tol) {
    double mean = 0.0;
    for (double a : angles) mean += a;
    res.angle = mean / static_cast<double>(angles.size());
  }
  return res;
}

namespace {

InducedCurvatures from_tensor(Tensor r) {
  const Index n = r.dim(0);
  InducedCurvatures out;
  out.sectional = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) out.sectional(i, j) = r(i, j, j, i);
  out.ricci = out.sectional.rowwise().sum();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) out.rho += out.sectional(i, j);
  out.riemann = std::move(r);
  return out;
}

}  // namespace

InducedCurvatures gauss_curvatures(const FramedPoint& fp, const Tensor& ambient_frame) {
  const Index n = fp.n();
  Tensor r({n, n, n, n});
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z)
        for (Index w = 0; w < n; ++w) {
          double v = ambient_frame(x, y, z, w);
          for (const auto& hr : fp.h) v += hr(x, w) * hr(y, z) - hr(x, z) * hr(y, w);
          r(x, y, z, w) = v;
        }
  return from_tensor(std::move(r));
}

InducedCurvatures induced_curvatures(const FramedPoint& fp, const Immersion& imm, const AmbientManifold& amb,
                                     CurvatureRoute route, const FdPolicy& policy) {
  if (route == CurvatureRoute::IntrinsicFd) return from_tensor(intrinsic_riemann(fp, imm, amb, policy));
  const CurvatureBundle bundle = riemann_at(amb, fp.p, CurvatureSource::Automatic, policy);
  return gauss_curvatures(fp, ambient_riemann_in_frame(fp, bundle));
}

namespace {

Mat stacked_h(const FramedPoint& fp) {
  const Index n = fp.n();
  Mat s(fp.codim() * n, n);
  for (Index r = 0; r < fp.codim(); ++r) s.middleRows(r * n, n) = fp.h[r];
  return s;
}

}  // namespace

std::vector<Vec> relative_null_space(const FramedPoint& fp, double tol) {
  const Index n = fp.n();
  const Mat s = stacked_h(fp);
  std::vector<Vec> basis;
  if (s.rows() == 0) {
    for (Index i = 0; i < n; ++i) basis.emplace_back(fp.tangent.col(i));
    return basis;
  }
  Eigen::JacobiSVD<Mat> svd(s, Eigen::ComputeFullV);
  const Vec sv = svd.singularValues();
  const Mat& v = svd.matrixV();
  for (Index k = 0; k < n; ++k) {
    const double sigma = k < sv.size() ? sv[k] : 0.0;
    if (sigma <= tol) basis.emplace_back(fp.tangent * v.col(k));
  }
  return basis;
}

Index h_map_rank(const FramedPoint& fp, double tol) {
  const Mat s = stacked_h(fp);
  if (s.rows() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(s);
  Index rank = 0;
  for (Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()[k] > tol) ++rank;
  return rank;
}

double null_space_residual(const std::vector<Vec>& basis, const Vec& x, const Mat& g) {
  Vec rest = x;
  for (const auto& b : basis) rest -= inner(b, rest, g) * b;
  return std::sqrt(std::max(0.0, inner(rest, rest, g)));
}

InvariantReport compute_invariants(const FramedPoint& fp, const Immersion& imm, const AmbientManifold& amb,
                                   const Tensor& ambient_frame, CurvatureRoute route, const FdPolicy& policy) {
  InvariantReport rep;
  rep.p_matrix = p_operator(fp);
  rep.p_norm_sq = rep.p_matrix.squaredNorm();
  rep.slant = slant_angle(fp);
  rep.curvatures = route == CurvatureRoute::GaussDerived ? gauss_curvatures(fp, ambient_frame)
                                                         : induced_curvatures(fp, imm, amb, route, policy);
  rep.null_space_basis = relative_null_space(fp);
  rep.mean = mean_curvature(fp);
  rep.h_norm_sq = h_norm_sq(fp);
  return rep;
}

}  // namespace bkg
