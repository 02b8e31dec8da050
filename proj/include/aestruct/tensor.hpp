#pragma once

// Dense point-local tensors.
//
// Index convention used across the library (coordinate frames, which commute):
//   Gamma^k_ij      nabla_{d_i} d_j = Gamma^k_ij d_k         stored [k][i][j]
//   (nabla J)^k_ij  ((nabla_{d_i} J) d_j)^k                  stored [k][i][j]
//   T^k_ij          Gamma^k_ij - Gamma^k_ji                  stored [k][i][j]
// A (1,2) tensor A evaluated on basis vectors gives A(d_i, d_j)^k = A[k][i][j].

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aestruct/error.hpp"

namespace aestruct {

enum class Slot { Upper, Lower };

inline constexpr double kDefaultTolerance = 1e-8;
inline constexpr double kSingularMetricThreshold = 1e-12;

class TensorValue {
 public:
  TensorValue() = default;

  TensorValue(std::vector<Slot> valence, std::size_t dim)
      : valence_(std::move(valence)), dim_(dim), data_(flat_size(valence_.size(), dim), 0.0) {}

  TensorValue(std::vector<Slot> valence, std::size_t dim, std::vector<double> data)
      : valence_(std::move(valence)), dim_(dim), data_(std::move(data)) {
    if (data_.size() != flat_size(valence_.size(), dim_)) {
      throw ValenceError("tensor data length " + std::to_string(data_.size()) + " does not match " +
                         std::to_string(dim_) + "^" + std::to_string(valence_.size()));
    }
  }

  static TensorValue scalar(double v) { return TensorValue({}, 0, {v}); }

  /// Identity (1,1)-tensor in dimension n.
  static TensorValue identity(std::size_t n) {
    TensorValue t({Slot::Upper, Slot::Lower}, n);
    for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
    return t;
  }

  const std::vector<Slot>& valence() const { return valence_; }
  std::size_t rank() const { return valence_.size(); }
  std::size_t dim() const { return dim_; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  template <typename... I>
  double& operator()(I... idx) {
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  template <typename... I>
  double operator()(I... idx) const {
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  double& at(std::span<const std::size_t> idx) { return data_[offset(idx)]; }
  double at(std::span<const std::size_t> idx) const { return data_[offset(idx)]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Row-major multi-index of flat position `flat`.
  std::vector<std::size_t> unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(rank());
    for (std::size_t s = rank(); s-- > 0;) {
      idx[s] = flat % dim_;
      flat /= dim_;
    }
    return idx;
  }

  TensorValue& operator+=(const TensorValue& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  TensorValue& operator-=(const TensorValue& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

  TensorValue& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend TensorValue operator+(TensorValue a, const TensorValue& b) { return a += b; }
  friend TensorValue operator-(TensorValue a, const TensorValue& b) { return a -= b; }
  friend TensorValue operator*(double s, TensorValue a) { return a *= s; }

  void require_same_shape(const TensorValue& o) const {
    if (o.valence_ != valence_ || o.dim_ != dim_) throw ValenceError("tensor shapes differ");
  }

 private:
  static std::size_t flat_size(std::size_t rank, std::size_t dim) {
    std::size_t s = 1;
    for (std::size_t r = 0; r < rank; ++r) s *= dim;
    return s;
  }

  std::size_t offset(std::initializer_list<std::size_t> idx) const {
    return offset(std::span<const std::size_t>(idx.begin(), idx.size()));
  }

  std::size_t offset(std::span<const std::size_t> idx) const {
    if (idx.size() != valence_.size()) {
      throw ValenceError("tensor of rank " + std::to_string(valence_.size()) + " accessed with " +
                         std::to_string(idx.size()) + " indices");
    }
    std::size_t off = 0;
    for (std::size_t i : idx) off = off * dim_ + i;
    return off;
  }

  std::vector<Slot> valence_;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// max |a - b| over all components; shapes must agree.
inline double max_abs_difference(const TensorValue& a, const TensorValue& b) {
  a.require_same_shape(b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

namespace linalg {

using Matrix = Eigen::MatrixXd;

/// Components of a two-slot tensor as a matrix, entry (i,j) = t(i,j).
inline Matrix to_matrix(const TensorValue& t) {
  if (t.rank() != 2) throw ValenceError("expected a two-slot tensor");
  const std::size_t n = t.dim();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = t(i, j);
  return m;
}

inline TensorValue from_matrix(const Matrix& m, std::vector<Slot> valence) {
  const auto n = static_cast<std::size_t>(m.rows());
  TensorValue t(std::move(valence), n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t(i, j) = m(i, j);
  return t;
}

inline double determinant(const Matrix& m) { return m.determinant(); }

/// True iff every leading principal minor is positive.
inline bool leading_minors_positive(const Matrix& m) {
  for (Eigen::Index k = 1; k <= m.rows(); ++k) {
    if (!(m.topLeftCorner(k, k).determinant() > 0.0)) return false;
  }
  return true;
}

/// Smallest leading principal minor (used to report how far from SPD g is).
inline double min_leading_minor(const Matrix& m) {
  double lo = m.rows() > 0 ? m(0, 0) : 0.0;
  for (Eigen::Index k = 1; k <= m.rows(); ++k) lo = std::min(lo, m.topLeftCorner(k, k).determinant());
  return lo;
}

inline Matrix inverse(const Matrix& m) {
  if (std::abs(m.determinant()) < kSingularMetricThreshold) {
    throw SingularMetricError("matrix is singular (|det| = " + std::to_string(std::abs(m.determinant())) + ")");
  }
  return m.partialPivLu().inverse();
}

}  // namespace linalg

/// Trace over one upper and one lower slot; the two slots are removed.
inline TensorValue contract(const TensorValue& t, std::size_t slot_a, std::size_t slot_b) {
  if (slot_a >= t.rank() || slot_b >= t.rank() || slot_a == slot_b) {
    throw ValenceError("contraction slots must be distinct and within rank");
  }
  if (t.valence()[slot_a] == t.valence()[slot_b]) {
    throw ValenceError("contraction needs one upper and one lower slot");
  }
  std::vector<Slot> rest;
  for (std::size_t s = 0; s < t.rank(); ++s) {
    if (s != slot_a && s != slot_b) rest.push_back(t.valence()[s]);
  }
  const std::size_t n = t.dim();
  TensorValue out = rest.empty() ? TensorValue::scalar(0.0) : TensorValue(rest, n);
  std::vector<std::size_t> full(t.rank());
  for (std::size_t flat = 0; flat < out.data().size(); ++flat) {
    std::vector<std::size_t> idx = rest.empty() ? std::vector<std::size_t>{} : out.unflatten(flat);
    double sum = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      std::size_t r = 0;
      for (std::size_t s = 0; s < t.rank(); ++s) {
        full[s] = (s == slot_a || s == slot_b) ? m : idx[r++];
      }
      sum += t.at(full);
    }
    out.data()[flat] = sum;
  }
  return out;
}

namespace detail {

inline void require_metric(const TensorValue& m, Slot variance) {
  if (m.rank() != 2 || m.valence()[0] != variance || m.valence()[1] != variance) {
    throw ValenceError(variance == Slot::Lower ? "metric must be a (0,2) tensor"
                                               : "inverse metric must be a (2,0) tensor");
  }
  if (std::abs(linalg::determinant(linalg::to_matrix(m))) < kSingularMetricThreshold) {
    throw SingularMetricError("singular metric");
  }
}

/// out[..slot=a..] = sum_b m(a,b) t[..slot=b..], flipping the slot's variance.
inline TensorValue apply_on_slot(const TensorValue& t, std::size_t slot, const TensorValue& m, Slot result) {
  std::vector<Slot> valence = t.valence();
  valence[slot] = result;
  TensorValue out(valence, t.dim());
  std::vector<std::size_t> src;
  for (std::size_t flat = 0; flat < out.data().size(); ++flat) {
    src = out.unflatten(flat);
    const std::size_t a = src[slot];
    double sum = 0.0;
    for (std::size_t b = 0; b < t.dim(); ++b) {
      src[slot] = b;
      sum += m(a, b) * t.at(src);
    }
    out.data()[flat] = sum;
  }
  return out;
}

}  // namespace detail

/// Musical isomorphism on one upper slot: t_{..a..} = g_{ab} t^{..b..}.
inline TensorValue lower_index(const TensorValue& t, std::size_t slot, const TensorValue& g) {
  if (slot >= t.rank() || t.valence()[slot] != Slot::Upper) throw ValenceError("slot to lower must be upper");
  if (g.dim() != t.dim()) throw ValenceError("metric dimension mismatch");
  detail::require_metric(g, Slot::Lower);
  return detail::apply_on_slot(t, slot, g, Slot::Lower);
}

/// Inverse musical isomorphism on one lower slot: t^{..a..} = g^{ab} t_{..b..}.
inline TensorValue raise_index(const TensorValue& t, std::size_t slot, const TensorValue& g_inv) {
  if (slot >= t.rank() || t.valence()[slot] != Slot::Lower) throw ValenceError("slot to raise must be lower");
  if (g_inv.dim() != t.dim()) throw ValenceError("metric dimension mismatch");
  detail::require_metric(g_inv, Slot::Upper);
  return detail::apply_on_slot(t, slot, g_inv, Slot::Upper);
}

/// max over index triples and slot transpositions of |t_{sigma(ijk)} - sign(sigma) t_{ijk}|.
/// Zero iff t is a 3-form.
inline double antisymmetry_residual(const TensorValue& t) {
  if (t.rank() != 3 || t.valence() != std::vector<Slot>{Slot::Lower, Slot::Lower, Slot::Lower}) {
    throw ValenceError("antisymmetry residual needs a tensor with three lower slots");
  }
  const std::size_t n = t.dim();
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double v = t(i, j, k);
        r = std::max({r, std::abs(t(j, i, k) + v), std::abs(t(k, j, i) + v), std::abs(t(i, k, j) + v)});
      }
  return r;
}

}  // namespace aestruct
