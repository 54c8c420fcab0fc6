#include "bkg/linalg.hpp"

#include <cmath>
#include <sstream>

#include "bkg/errors.hpp"

namespace bkg {

namespace {

// Removes the components of v along the (orthonormal) basis, twice for stability.
void project_out(Vec& v, const std::vector<Vec>& basis, const Mat& g) {
  for (int sweep = 0; sweep < 2; ++sweep)
    for (const auto& b : basis) v -= inner(b, v, g) * b;
}

double metric_norm(const Vec& v, const Mat& g) { return std::sqrt(std::max(0.0, inner(v, v, g))); }

}  // namespace

void require_spd(const Mat& metric, const char* where) {
  if (metric.rows() != metric.cols()) throw DimensionError(std::string(where) + ": metric is not square");
  const double scale = std::max(1.0, metric.cwiseAbs().maxCoeff());
  if ((metric - metric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DegeneracyError(std::string(where) + ": metric is not symmetric");
  Eigen::LLT<Mat> llt(metric);
  if (llt.info() != Eigen::Success) throw DegeneracyError(std::string(where) + ": metric is not positive definite");
}

std::vector<Vec> gram_schmidt(std::span<const Vec> vectors, const Mat& metric, const GramSchmidtOptions& opts) {
  require_spd(metric, "gram_schmidt");
  for (const auto& v : vectors)
    if (v.size() != metric.rows()) throw DimensionError("gram_schmidt: vector size does not match metric");

  std::vector<Vec> out;
  if (!opts.auto_complete) {
    for (std::size_t k = 0; k < vectors.size(); ++k) {
      Vec v = vectors[k];
      const double n0 = metric_norm(v, metric);
      project_out(v, out, metric);
      const double n1 = metric_norm(v, metric);
      if (n0 == 0.0 || n1 < opts.tolerance * n0) {
        std::ostringstream os;
        os << "gram_schmidt: vector " << k << " is linearly dependent on its predecessors";
        throw DegeneracyError(os.str());
      }
      out.push_back(v / n1);
    }
    return out;
  }
  return extend_orthonormal({}, vectors, metric, metric.rows(), opts.tolerance);
}

std::vector<Vec> extend_orthonormal(std::vector<Vec> basis, std::span<const Vec> candidates, const Mat& metric,
                                    Index target, double pivot_tol) {
  std::vector<Vec> pool;
  for (const auto& c : candidates) {
    const double n = metric_norm(c, metric);
    if (n == 0.0) continue;
    pool.push_back(c / n);
  }
  for (auto& v : pool) project_out(v, basis, metric);

  while (static_cast<Index>(basis.size()) < target && !pool.empty()) {
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      const double n = metric_norm(pool[k], metric);
      if (n > best_norm) {
        best_norm = n;
        best = k;
      }
    }
    if (best_norm < pivot_tol) break;
    Vec v = pool[best];
    project_out(v, basis, metric);
    v /= metric_norm(v, metric);
    basis.push_back(v);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    for (auto& p : pool) p -= inner(v, p, metric) * v;
  }
  return basis;
}

std::vector<Vec> columns(const Mat& m) {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(m.cols()));
  for (Index j = 0; j < m.cols(); ++j) out.emplace_back(m.col(j));
  return out;
}

Mat stack_columns(std::span<const Vec> vectors, Index rows) {
  Mat m(rows, static_cast<Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) m.col(static_cast<Index>(j)) = vectors[j];
  return m;
}

Mat standard_complex_structure(Index m) {
  Mat j = Mat::Zero(2 * m, 2 * m);
  for (Index k = 0; k < m; ++k) {
    j(2 * k + 1, 2 * k) = 1.0;
    j(2 * k, 2 * k + 1) = -1.0;
  }
  return j;
}

}  // namespace bkg
