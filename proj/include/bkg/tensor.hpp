#pragma once

#include <Eigen/Dense>

#include <array>
#include <initializer_list>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "bkg/errors.hpp"

namespace bkg {

using Index = Eigen::Index;

/// Dense multi-index array with row-major storage.
///
/// Ranks here stay small (at most 4) and every axis is at most 2m <= 12 wide,
/// so entries live in a single contiguous Eigen vector.
template <typename Scalar>
class BasicTensor {
 public:
  using Shape = std::vector<Index>;
  using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicTensor() = default;

  explicit BasicTensor(Shape shape) : shape_(std::move(shape)) {
    entries_ = Storage::Zero(element_count(shape_));
    update_strides();
  }

  BasicTensor(Shape shape, Storage entries) : shape_(std::move(shape)), entries_(std::move(entries)) {
    if (entries_.size() != element_count(shape_)) {
      std::ostringstream os;
      os << "tensor: " << entries_.size() << " entries do not fit shape of " << element_count(shape_)
         << " elements";
      throw DimensionError(os.str());
    }
    update_strides();
  }

  static BasicTensor from_matrix(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
    BasicTensor t({m.rows(), m.cols()});
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) t(i, j) = m(i, j);
    return t;
  }

  static BasicTensor from_vector(const Storage& v) { return BasicTensor({v.size()}, v); }

  Index rank() const noexcept { return static_cast<Index>(shape_.size()); }
  const Shape& shape() const noexcept { return shape_; }
  Index dim(Index axis) const { return shape_.at(static_cast<std::size_t>(axis)); }
  Index size() const noexcept { return entries_.size(); }
  const Storage& entries() const noexcept { return entries_; }
  Storage& entries() noexcept { return entries_; }
  const std::vector<Index>& strides() const noexcept { return strides_; }

  template <typename... Idx>
  Scalar& operator()(Idx... idx) {
    return entries_[offset({static_cast<Index>(idx)...})];
  }
  template <typename... Idx>
  const Scalar& operator()(Idx... idx) const {
    return entries_[offset({static_cast<Index>(idx)...})];
  }

  Scalar& at(std::span<const Index> idx) { return entries_[offset(idx)]; }
  const Scalar& at(std::span<const Index> idx) const { return entries_[offset(idx)]; }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> as_matrix() const {
    if (rank() != 2) throw DimensionError("tensor: as_matrix requires rank 2");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(shape_[0], shape_[1]);
    for (Index i = 0; i < shape_[0]; ++i)
      for (Index j = 0; j < shape_[1]; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  bool all_finite() const { return entries_.allFinite(); }

  Scalar max_abs() const { return entries_.size() == 0 ? Scalar(0) : entries_.cwiseAbs().maxCoeff(); }

  BasicTensor& operator+=(const BasicTensor& o) {
    require_same_shape(o);
    entries_ += o.entries_;
    return *this;
  }
  BasicTensor& operator-=(const BasicTensor& o) {
    require_same_shape(o);
    entries_ -= o.entries_;
    return *this;
  }
  BasicTensor& operator*=(Scalar s) {
    entries_ *= s;
    return *this;
  }

  friend BasicTensor operator+(BasicTensor a, const BasicTensor& b) { return a += b; }
  friend BasicTensor operator-(BasicTensor a, const BasicTensor& b) { return a -= b; }
  friend BasicTensor operator*(BasicTensor a, Scalar s) { return a *= s; }
  friend BasicTensor operator*(Scalar s, BasicTensor a) { return a *= s; }
  friend BasicTensor operator/(BasicTensor a, Scalar s) { return a *= Scalar(1) / s; }

 private:
  static Index element_count(const Shape& shape) {
    Index n = 1;
    for (Index d : shape) {
      if (d < 0) throw DimensionError("tensor: negative axis size");
      n *= d;
    }
    return n;
  }

  void update_strides() {
    strides_.assign(shape_.size(), 1);
    for (std::size_t k = shape_.size(); k-- > 1;) strides_[k - 1] = strides_[k] * shape_[k];
  }

  Index offset(std::span<const Index> idx) const {
    if (idx.size() != shape_.size()) throw DimensionError("tensor: index rank mismatch");
    Index off = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] < 0 || idx[k] >= shape_[k]) throw DimensionError("tensor: index out of range");
      off += idx[k] * strides_[k];
    }
    return off;
  }
  Index offset(std::initializer_list<Index> idx) const {
    return offset(std::span<const Index>(idx.begin(), idx.size()));
  }

  void require_same_shape(const BasicTensor& o) const {
    if (o.shape_ != shape_) throw DimensionError("tensor: shape mismatch in elementwise operation");
  }

  Shape shape_;
  Storage entries_;
  std::vector<Index> strides_;
};

using Tensor = BasicTensor<double>;
using AxisPair = std::pair<Index, Index>;

/// Contracts axis `first` of `a` against axis `second` of `b` for every listed pair.
/// The result carries the free axes of `a` followed by the free axes of `b`.
template <typename Scalar>
BasicTensor<Scalar> contract(const BasicTensor<Scalar>& a, const BasicTensor<Scalar>& b,
                             std::span<const AxisPair> pairs) {
  std::vector<bool> a_used(static_cast<std::size_t>(a.rank()), false);
  std::vector<bool> b_used(static_cast<std::size_t>(b.rank()), false);
  std::vector<Index> sum_dims;
  for (const auto& [ia, ib] : pairs) {
    if (ia < 0 || ia >= a.rank() || ib < 0 || ib >= b.rank()) {
      std::ostringstream os;
      os << "contract: axis pair (" << ia << "," << ib << ") out of range for ranks " << a.rank() << " and "
         << b.rank();
      throw DimensionError(os.str());
    }
    if (a_used[ia] || b_used[ib]) {
      std::ostringstream os;
      os << "contract: axis pair (" << ia << "," << ib << ") reuses an axis";
      throw DimensionError(os.str());
    }
    if (a.dim(ia) != b.dim(ib)) {
      std::ostringstream os;
      os << "contract: axis " << ia << " of a (size " << a.dim(ia) << ") does not match axis " << ib
         << " of b (size " << b.dim(ib) << ")";
      throw DimensionError(os.str());
    }
    a_used[ia] = b_used[ib] = true;
    sum_dims.push_back(a.dim(ia));
  }

  std::vector<Index> a_free, b_free;
  typename BasicTensor<Scalar>::Shape out_shape;
  for (Index k = 0; k < a.rank(); ++k)
    if (!a_used[k]) {
      a_free.push_back(k);
      out_shape.push_back(a.dim(k));
    }
  for (Index k = 0; k < b.rank(); ++k)
    if (!b_used[k]) {
      b_free.push_back(k);
      out_shape.push_back(b.dim(k));
    }

  BasicTensor<Scalar> out(out_shape);
  const auto& as = a.strides();
  const auto& bs = b.strides();

  std::vector<Index> out_idx(out_shape.size(), 0);
  std::vector<Index> sum_idx(sum_dims.size(), 0);
  const auto advance = [](std::vector<Index>& idx, const std::vector<Index>& dims) {
    for (std::size_t k = idx.size(); k-- > 0;) {
      if (++idx[k] < dims[k]) return true;
      idx[k] = 0;
    }
    return false;
  };
  const std::vector<Index> out_dims(out_shape.begin(), out_shape.end());

  for (Index flat = 0; flat < out.size(); ++flat) {
    Index a_base = 0, b_base = 0;
    for (std::size_t k = 0; k < a_free.size(); ++k) a_base += out_idx[k] * as[a_free[k]];
    for (std::size_t k = 0; k < b_free.size(); ++k) b_base += out_idx[a_free.size() + k] * bs[b_free[k]];

    Scalar acc(0);
    std::fill(sum_idx.begin(), sum_idx.end(), 0);
    do {
      Index ao = a_base, bo = b_base;
      for (std::size_t k = 0; k < sum_idx.size(); ++k) {
        ao += sum_idx[k] * as[pairs[k].first];
        bo += sum_idx[k] * bs[pairs[k].second];
      }
      acc += a.entries()[ao] * b.entries()[bo];
    } while (!sum_idx.empty() && advance(sum_idx, sum_dims));

    out.entries()[flat] = acc;
    advance(out_idx, out_dims);
  }
  return out;
}

template <typename Scalar>
BasicTensor<Scalar> contract(const BasicTensor<Scalar>& a, const BasicTensor<Scalar>& b,
                             std::initializer_list<AxisPair> pairs) {
  return contract(a, b, std::span<const AxisPair>(pairs.begin(), pairs.size()));
}

/// Expresses a covariant rank-4 tensor in a new basis whose vectors are the columns of `frame`.
template <typename Scalar>
BasicTensor<Scalar> change_basis4(const BasicTensor<Scalar>& t,
                                  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& frame) {
  const auto f = BasicTensor<Scalar>::from_matrix(frame);
  BasicTensor<Scalar> out = t;
  // each pass contracts the leading axis and appends the new one at the back
  for (int pass = 0; pass < 4; ++pass) out = contract(out, f, {AxisPair{0, 0}});
  return out;
}

/// Evaluates a covariant rank-4 tensor on four vectors.
template <typename Scalar, typename V>
Scalar evaluate4(const BasicTensor<Scalar>& t, const V& x, const V& y, const V& z, const V& w) {
  const Index d = t.dim(0);
  Scalar acc(0);
  for (Index a = 0; a < d; ++a) {
    if (x[a] == Scalar(0)) continue;
    for (Index b = 0; b < d; ++b) {
      if (y[b] == Scalar(0)) continue;
      for (Index c = 0; c < d; ++c) {
        if (z[c] == Scalar(0)) continue;
        for (Index e = 0; e < d; ++e) acc += t(a, b, c, e) * x[a] * y[b] * z[c] * w[e];
      }
    }
  }
  return acc;
}

}  // namespace bkg
