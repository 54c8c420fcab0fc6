#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <concepts>
#include <sstream>
#include <utility>
#include <vector>

#include "bkg/errors.hpp"
#include "bkg/tensor.hpp"

namespace bkg {

enum class FdScheme { Central2, Central4 };

/// Step and extrapolation settings for central finite differences.
struct FdPolicy {
  double h0 = 1e-4;
  FdScheme scheme = FdScheme::Central4;
  int richardson_levels = 1;

  /// Throws InputError unless h0 lies in [1e-8, 1e-1] and at most 3 Richardson levels are requested.
  void validate() const;

  /// Same scheme with the step multiplied by `factor`, clamped to the admissible range.
  FdPolicy scaled(double factor) const;

  int leading_order() const noexcept { return scheme == FdScheme::Central2 ? 2 : 4; }

  bool operator==(const FdPolicy&) const = default;
};

namespace detail {

inline bool finite_value(double v) { return std::isfinite(v); }
template <typename Derived>
bool finite_value(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}
template <typename Scalar>
bool finite_value(const BasicTensor<Scalar>& t) {
  return t.all_finite();
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

template <typename Field>
auto checked_eval(Field&& field, const Eigen::VectorXd& x) {
  auto value = field(x);
  if (!finite_value(value)) {
    std::ostringstream os;
    os << "finite difference: non-finite field value at (";
    for (Index k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
    os << ")";
    throw EvaluationError(os.str(), to_std(x));
  }
  return value;
}

template <typename Field>
auto central_stencil(Field&& field, const Eigen::VectorXd& point, Index axis, int order, FdScheme scheme,
                     double h) {
  const auto at = [&](double offset) {
    Eigen::VectorXd x = point;
    x[axis] += offset;
    return checked_eval(field, x);
  };
  if (scheme == FdScheme::Central2) {
    if (order == 1) return decltype(at(0.0))((at(h) - at(-h)) / (2.0 * h));
    return decltype(at(0.0))((at(h) - 2.0 * at(0.0) + at(-h)) / (h * h));
  }
  if (order == 1)
    return decltype(at(0.0))((8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h));
  return decltype(at(0.0))((16.0 * (at(h) + at(-h)) - (at(2.0 * h) + at(-2.0 * h)) - 30.0 * at(0.0)) /
                           (12.0 * h * h));
}

}  // namespace detail

/// Central-difference partial derivative of `field` along `axis` at `point`.
///
/// `order` is 1 or 2. The stencil is evaluated at h0, h0/2, ... and combined by
/// Richardson extrapolation `richardson_levels` times; the error expansion of a
/// central scheme holds only even powers, so each level removes two orders.
template <typename Field>
auto fd_derivative(Field&& field, const Eigen::VectorXd& point, Index axis, int order, const FdPolicy& policy) {
  policy.validate();
  if (order != 1 && order != 2) throw InputError("fd_derivative: order must be 1 or 2");
  if (axis < 0 || axis >= point.size()) throw DimensionError("fd_derivative: axis out of range");

  using Value = decltype(detail::central_stencil(field, point, axis, order, policy.scheme, policy.h0));
  std::vector<Value> column;
  double h = policy.h0;
  for (int k = 0; k <= policy.richardson_levels; ++k, h *= 0.5)
    column.push_back(detail::central_stencil(field, point, axis, order, policy.scheme, h));

  int power = policy.leading_order();
  for (int level = 1; level <= policy.richardson_levels; ++level, power += 2) {
    const double f = std::ldexp(1.0, power);
    for (std::size_t k = 0; k + level < column.size(); ++k)
      column[k] = Value((f * column[k + 1] - column[k]) / (f - 1.0));
  }
  return column.front();
}

/// Second directional derivative d^2/dt^2 field(point + t v) at t = 0.
template <typename Field>
auto fd_directional_second(Field&& field, const Eigen::VectorXd& point, const Eigen::VectorXd& direction,
                           const FdPolicy& policy) {
  const auto along = [&](const Eigen::VectorXd& t) { return field(Eigen::VectorXd(point + t[0] * direction)); };
  return fd_derivative(along, Eigen::VectorXd::Zero(1), 0, 2, policy);
}

/// Mixed second partial d^2 field / dx_a dx_b, from second derivatives along
/// e_a + e_b and e_a - e_b (a single stencil level, no nested differencing).
template <typename Field>
auto fd_mixed_second(Field&& field, const Eigen::VectorXd& point, Index a, Index b, const FdPolicy& policy) {
  if (a == b) return fd_derivative(field, point, a, 2, policy);
  Eigen::VectorXd plus = Eigen::VectorXd::Zero(point.size());
  Eigen::VectorXd minus = plus;
  plus[a] = 1.0;
  plus[b] = 1.0;
  minus[a] = 1.0;
  minus[b] = -1.0;
  auto dp = fd_directional_second(field, point, plus, policy);
  auto dm = fd_directional_second(field, point, minus, policy);
  return decltype(dp)((dp - dm) * 0.25);
}

}  // namespace bkg
