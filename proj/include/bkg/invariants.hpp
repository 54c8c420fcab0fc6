#pragma once

#include <optional>
#include <vector>

#include "bkg/immersion.hpp"

namespace bkg {

/// P_ij = g(J e_i, e_j), the tangential part of J in the tangent frame.
Mat p_operator(const FramedPoint& fp);

/// Sum of g(P e_i, e_j)^2.
double p_norm_sq(const FramedPoint& fp);

struct SlantResult {
  std::optional<double> angle;  ///< empty when the point is not slant
  double spread = 0.0;          ///< max - min of the sampled Wirtinger angles
  std::vector<double> frame_angles;
};

/// Wirtinger angle between JX and the tangent space, sampled at the frame
/// directions and 16 seeded random unit directions. Slant when the spread is below `tol`.
SlantResult slant_angle(const FramedPoint& fp, double tol = 1e-6);

enum class CurvatureRoute { IntrinsicFd, GaussDerived };

struct InducedCurvatures {
  Mat sectional;    ///< K(e_i, e_j), symmetric with zero diagonal
  Vec ricci;        ///< Ric(e_k) = sum_{j != k} K_kj
  double rho = 0.0; ///< sum_{i<j} K_ij
  Tensor riemann;   ///< full tensor in the tangent frame
};

/// Either differentiates the induced metric in the parameter chart, or applies the
/// Gauss equation K_ij = Kbar_ij + sum_r (h_ii h_jj - h_ij^2) to ambient data.
InducedCurvatures induced_curvatures(const FramedPoint& fp, const Immersion& imm, const AmbientManifold& amb,
                                     CurvatureRoute route, const FdPolicy& policy = {});

/// Same as the gauss-derived route with a precomputed ambient tensor in the joint frame.
InducedCurvatures gauss_curvatures(const FramedPoint& fp, const Tensor& ambient_frame);

/// Basis (ambient vectors) of { X : h(X, Y) = 0 for all tangent Y }, by SVD of the stacked h-slices.
std::vector<Vec> relative_null_space(const FramedPoint& fp, double tol = 1e-8);

/// Rank of the stacked map X -> (h(X, e_j))_{j,r} at the same threshold.
Index h_map_rank(const FramedPoint& fp, double tol = 1e-8);

/// |X - proj_{N_p} X| for a unit tangent X.
double null_space_residual(const std::vector<Vec>& basis, const Vec& x, const Mat& g);

struct InvariantReport {
  Mat p_matrix;
  double p_norm_sq = 0.0;
  SlantResult slant;
  InducedCurvatures curvatures;
  std::vector<Vec> null_space_basis;
  MeanCurvature mean;
  double h_norm_sq = 0.0;
};

InvariantReport compute_invariants(const FramedPoint& fp, const Immersion& imm, const AmbientManifold& amb,
                                   const Tensor& ambient_frame, CurvatureRoute route = CurvatureRoute::GaussDerived,
                                   const FdPolicy& policy = {});

}  // namespace bkg
