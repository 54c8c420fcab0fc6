#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "bkg/finite_difference.hpp"
#include "bkg/linalg.hpp"
#include "bkg/tensor.hpp"

namespace bkg {

using MatrixField = std::function<Mat(const Vec&)>;

enum class AmbientKind { Flat, ComplexSpaceForm, Custom };

/// Curvature data at one point, in ambient coordinates.
///
/// riemann(a,b,c,d) = g(R(d_a, d_b) d_c, d_d) with R(X,Y) = [D_X, D_Y] - D_[X,Y],
/// so the sectional curvature of an orthonormal pair is R(X,Y,Y,X) and is +1 on
/// the unit sphere. ricci(b,c) = g^{ad} riemann(a,b,c,d); scalar is its metric trace.
struct CurvatureBundle {
  Tensor riemann;
  Mat ricci;
  double scalar = 0.0;
  Vec at_point;
};

/// A Kaehler manifold on a single chart of R^{2m}, coordinates ordered (x1, y1, x2, y2, ...).
struct AmbientManifold {
  Index complex_dim = 0;
  MatrixField metric_at;
  MatrixField j_at;
  AmbientKind kind = AmbientKind::Custom;
  /// Holomorphic sectional curvature for complex space forms.
  double c = 0.0;
  /// Closed-form Levi-Civita symbols, shape {k, i, j} for Gamma^k_ij.
  std::function<Tensor(const Vec&)> christoffel_oracle;
  std::function<CurvatureBundle(const Vec&)> curvature_oracle;
  std::string label;

  Index real_dim() const noexcept { return 2 * complex_dim; }
};

/// C^m with the Euclidean metric.
AmbientManifold flat_ambient(Index m);

/// Constant holomorphic sectional curvature c on the affine chart with Kaehler
/// potential (4/c) log(1 + c|z|^2/4). c > 0 is Fubini-Study, c < 0 the ball model.
AmbientManifold complex_space_form(Index m, double c);

/// Product of Riemann surfaces CP^1(c_k) (flat for c_k = 0, hyperbolic for c_k < 0).
AmbientManifold product_of_curves(std::vector<double> curvatures);

/// Adds `eps` to one entry of J, producing a non-Kaehler structure for validation tests.
AmbientManifold with_perturbed_j(AmbientManifold amb, double eps, Index row = 0, Index col = 1);

enum class CurvatureSource { Automatic, FiniteDifference };

/// Step used for second derivatives of the metric, relative to the first-derivative step.
inline constexpr double kSecondDerivativeStepScale = 100.0;

Tensor christoffels_from_metric(const MatrixField& metric, const Vec& p, const FdPolicy& policy = {});
CurvatureBundle curvature_from_metric(const MatrixField& metric, const Vec& p, const FdPolicy& policy = {});

Tensor christoffels_at(const AmbientManifold& amb, const Vec& p, CurvatureSource source = CurvatureSource::Automatic,
                       const FdPolicy& policy = {});
CurvatureBundle riemann_at(const AmbientManifold& amb, const Vec& p,
                           CurvatureSource source = CurvatureSource::Automatic, const FdPolicy& policy = {});

Mat ricci_from_riemann(const Tensor& riemann, const Mat& metric_inverse);

/// Closed-form tensor of constant holomorphic sectional curvature c at a point with metric g and structure J.
Tensor space_form_curvature(const Mat& g, const Mat& j, double c);

/// L = Ric/(2m+4) - rho g / (2(2m+2)(2m+4)), with ambient Ricci and ambient scalar curvature.
Mat l_tensor(const Mat& ricci, double rho, const Mat& g, Index m);

/// M(Y,Z) = -L(Y,JZ).
Mat m_tensor(const Mat& l, const Mat& j);

struct LMPair {
  Mat l;
  Mat m;
  Mat source_ricci;
  double source_scalar = 0.0;
};

LMPair lm_pair(const Mat& ricci, double rho, const Mat& g, const Mat& j, Index m);

/// Bochner-flat curvature tensor built from (L, M):
///   g(X,W)L(Y,Z) - g(Y,W)L(X,Z) + g(Y,Z)L(X,W) - g(X,Z)L(Y,W)
/// + M(Y,Z)g(JX,W) - M(X,Z)g(JY,W) + M(X,W)g(JY,Z) - M(Y,W)g(JX,Z)
/// - 2M(X,Y)g(JZ,W) - 2M(Z,W)g(JX,Y)
Tensor assemble_bochner_curvature(const LMPair& lm, const Mat& g, const Mat& j);

struct KaehlerReport {
  double j_squared = 0.0;  ///< max |J^2 + I|
  double hermitian = 0.0;  ///< max |J^T g J - g|
  double parallel = 0.0;   ///< max |nabla J|
  double threshold = 1e-6;

  double max_residual() const { return std::max({j_squared, hermitian, parallel}); }
  bool valid() const { return max_residual() <= threshold; }
};

KaehlerReport check_kaehler(const AmbientManifold& amb, const Vec& p, const FdPolicy& policy = {});

/// Max componentwise difference between the curvature tensor and its Bochner-flat assembly.
double check_bochner_flat(const AmbientManifold& amb, const Vec& p,
                          CurvatureSource source = CurvatureSource::Automatic, const FdPolicy& policy = {});
double bochner_residual(const CurvatureBundle& bundle, const Mat& g, const Mat& j, Index m);

struct SymmetryResiduals {
  double first_pair = 0.0;
  double last_pair = 0.0;
  double pair_exchange = 0.0;
  double bianchi = 0.0;

  double max_residual() const { return std::max({first_pair, last_pair, pair_exchange, bianchi}); }
};

SymmetryResiduals curvature_symmetries(const Tensor& riemann);

/// max |R(X,Y,Z,W) - R(X,Y,JZ,JW)| over coordinate slots.
double kaehler_identity_residual(const Tensor& riemann, const Mat& j);

}  // namespace bkg
