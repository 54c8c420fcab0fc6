#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bkg/ambient.hpp"
#include "bkg/expression.hpp"

namespace bkg {

using VectorMap = std::function<Vec(const Vec&)>;

struct ParameterRange {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const ParameterRange&) const = default;
};

/// A map from an n-dimensional parameter chart into the 2m real ambient coordinates.
struct Immersion {
  Index param_dim = 0;
  Index ambient_real_dim = 0;
  VectorMap map;
  /// Analytic Jacobian (2m x n) when known; finite differences otherwise.
  MatrixField jacobian;
  std::string name;
  std::vector<double> params;
  std::vector<ParameterRange> default_domain;
};

/// Catalogue entry for a built-in immersion with its closed-form invariants.
struct BuiltinInfo {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<double> default_params;
  Index param_dim;
  Index min_complex_dim;
  std::string description;
  std::string oracle;  ///< closed-form values in flat ambient, human readable
};

const std::vector<BuiltinInfo>& builtin_catalogue();

/// Instantiates a catalogue entry into C^m. Missing params take the defaults.
Immersion builtin_immersion(const std::string& name, std::vector<double> params, Index m);

/// Immersion whose 2m components are expressions of the named parameters.
Immersion expression_immersion(std::vector<std::string> parameters, std::vector<expr::Expr> components,
                               std::string name = "expression");

Mat jacobian_at(const Immersion& imm, const Vec& u, const FdPolicy& policy = {});

/// A fully evaluated point: orthonormal tangent/normal frames and second fundamental form.
struct FramedPoint {
  Vec u;
  Vec p;
  Mat jacobian;
  Mat tangent;            ///< 2m x n, columns e_1..e_n
  Mat normal;             ///< 2m x (2m-n), columns e_{n+1}..e_{2m}
  Mat chart_coeffs;       ///< n x n, column i holds e_i in the d/du basis
  Mat metric;             ///< ambient metric at p
  Mat complex_structure;  ///< J at p
  std::vector<Mat> h;     ///< h[r](i,j) = g(h(e_i, e_j), e_{n+r})
  Mat induced_metric;     ///< identity in the orthonormal frame
  std::optional<Vec> first_direction_lock;

  Index n() const noexcept { return tangent.cols(); }
  Index codim() const noexcept { return normal.cols(); }
  Mat full_frame() const;
  /// max |E^T g E - I| over the joint frame.
  double frame_residual() const;
  double h_symmetry_residual() const;
};

/// Frames at parameter point `u`. With `lock` (an ambient tangent vector) e_1 is lock/|lock|.
FramedPoint frames_at(const Immersion& imm, const AmbientManifold& amb, const Vec& u,
                      const std::optional<Vec>& lock = std::nullopt, const FdPolicy& policy = {});

/// Replaces the normal frame (must stay orthonormal and normal) and recomputes h.
FramedPoint with_normal_frame(FramedPoint fp, const Mat& normal, const Immersion& imm, const AmbientManifold& amb,
                              const FdPolicy& policy = {});

/// h^r_ij from the ambient covariant derivative of the pushed-forward frame fields.
std::vector<Mat> second_fundamental_form(const FramedPoint& fp, const Immersion& imm, const AmbientManifold& amb,
                                         const FdPolicy& policy = {});

Mat shape_operator(const FramedPoint& fp, Index r);

struct MeanCurvature {
  Vec vector;  ///< components in the normal frame
  double norm_sq = 0.0;
};

MeanCurvature mean_curvature(const FramedPoint& fp);
double h_norm_sq(const FramedPoint& fp);

/// Curvature tensor of the induced metric in the orthonormal tangent frame (n^4 entries),
/// obtained by differentiating the pulled-back metric in the parameter chart.
Tensor intrinsic_riemann(const FramedPoint& fp, const Immersion& imm, const AmbientManifold& amb,
                         const FdPolicy& policy = {});

/// Ambient curvature expressed in the joint frame (e_1..e_2m).
Tensor ambient_riemann_in_frame(const FramedPoint& fp, const CurvatureBundle& bundle);

/// |R(X,Y,Z,W) - Rbar(X,Y,Z,W) - <h(X,W),h(Y,Z)> + <h(X,Z),h(Y,W)>| for frame indices.
double gauss_residual(const FramedPoint& fp, const Tensor& intrinsic_frame, const Tensor& ambient_frame, Index x,
                      Index y, Index z, Index w);

/// Max Gauss residual over all tangent index slots.
double max_gauss_residual(const FramedPoint& fp, const Tensor& intrinsic_frame, const Tensor& ambient_frame);

}  // namespace bkg
