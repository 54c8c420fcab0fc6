#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace bkg {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct GramSchmidtOptions {
  /// Relative residual norm below which an input vector counts as dependent.
  double tolerance = 1e-10;
  /// Pick the candidate with the largest remaining norm at each step and drop
  /// dependent ones instead of failing. Input order is lost.
  bool auto_complete = false;
};

/// Orthonormalizes `vectors` with respect to `metric` (twice-iterated modified Gram-Schmidt).
///
/// Without auto_complete the first output is the normalized first input and a
/// dependent vector raises DegeneracyError. The metric must be SPD.
std::vector<Vec> gram_schmidt(std::span<const Vec> vectors, const Mat& metric, const GramSchmidtOptions& opts = {});

/// Extends an orthonormal family with candidates, pivoting on the largest remaining
/// metric norm and skipping candidates whose relative residual is below `pivot_tol`.
/// Stops after `target` vectors in total.
std::vector<Vec> extend_orthonormal(std::vector<Vec> basis, std::span<const Vec> candidates, const Mat& metric,
                                    Index target, double pivot_tol = 1e-8);

/// Columns to vector list and back.
std::vector<Vec> columns(const Mat& m);
Mat stack_columns(std::span<const Vec> vectors, Index rows);

/// Throws DegeneracyError unless `metric` is symmetric positive definite.
void require_spd(const Mat& metric, const char* where);

/// Block-standard complex structure on R^{2m} in (x1, y1, x2, y2, ...) ordering: J dx_k = dy_k.
Mat standard_complex_structure(Index m);

inline double inner(const Vec& x, const Vec& y, const Mat& g) { return x.dot(g * y); }

}  // namespace bkg
