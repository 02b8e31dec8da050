#pragma once

// Vector-valued bilinear forms, i.e. (1,2) tensors A with A(d_i, d_j)^k = A[k][i][j],
// and the handful of ways J and g act on them. Every identity check in the
// library is phrased through these.

#include <cstddef>

#include "aestruct/tensor.hpp"

namespace aestruct::bilinear {

inline TensorValue make(std::size_t n) { return TensorValue({Slot::Upper, Slot::Lower, Slot::Lower}, n); }

inline TensorValue make_form(std::size_t n) { return TensorValue({Slot::Lower, Slot::Lower, Slot::Lower}, n); }

/// A(Y, X).
inline TensorValue swap_args(const TensorValue& a) {
  const std::size_t n = a.dim();
  TensorValue out = make(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(k, i, j) = a(k, j, i);
  return out;
}

/// A(J^p X, J^q Y) for p, q in {0, 1}.
inline TensorValue with_j(const TensorValue& a, const TensorValue& J, bool jx, bool jy) {
  const std::size_t n = a.dim();
  TensorValue tmp = a;
  if (jx) {
    TensorValue r = make(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double s = 0.0;
          for (std::size_t m = 0; m < n; ++m) s += J(m, i) * tmp(k, m, j);
          r(k, i, j) = s;
        }
    tmp = std::move(r);
  }
  if (jy) {
    TensorValue r = make(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double s = 0.0;
          for (std::size_t m = 0; m < n; ++m) s += J(m, j) * tmp(k, i, m);
          r(k, i, j) = s;
        }
    tmp = std::move(r);
  }
  return tmp;
}

/// J A(X, Y).
inline TensorValue j_left(const TensorValue& a, const TensorValue& J) {
  const std::size_t n = a.dim();
  TensorValue out = make(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t m = 0; m < n; ++m) s += J(k, m) * a(m, i, j);
        out(k, i, j) = s;
      }
  return out;
}

/// (X, Y, Z) -> g(A(X, Y), Z), stored [i][j][l].
inline TensorValue lower(const TensorValue& a, const TensorValue& g) {
  const std::size_t n = a.dim();
  TensorValue out = make_form(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p) s += g(p, l) * a(p, i, j);
        out(i, j, l) = s;
      }
  return out;
}

/// Inverse of lower(): recovers A from the (0,3) data w(X, Y, Z) = g(A(X, Y), Z).
inline TensorValue raise_last(const TensorValue& w, const TensorValue& g_inv) {
  const std::size_t n = w.dim();
  TensorValue out = make(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += g_inv(k, l) * w(i, j, l);
        out(k, i, j) = s;
      }
  return out;
}

/// Permutes the arguments of a (0,3) form: out(x0, x1, x2) = w(x_{p0}, x_{p1}, x_{p2}).
inline TensorValue permute_form(const TensorValue& w, std::size_t p0, std::size_t p1, std::size_t p2) {
  const std::size_t n = w.dim();
  TensorValue out = make_form(n);
  std::size_t x[3];
  for (x[0] = 0; x[0] < n; ++x[0])
    for (x[1] = 0; x[1] < n; ++x[1])
      for (x[2] = 0; x[2] < n; ++x[2]) out(x[0], x[1], x[2]) = w(x[p0], x[p1], x[p2]);
  return out;
}

/// w(J^a X, J^b Y, J^c Z) for a (0,3) form.
inline TensorValue form_with_j(const TensorValue& w, const TensorValue& J, bool jx, bool jy, bool jz) {
  const std::size_t n = w.dim();
  TensorValue cur = w;
  const bool flags[3] = {jx, jy, jz};
  for (std::size_t slot = 0; slot < 3; ++slot) {
    if (!flags[slot]) continue;
    TensorValue r = make_form(n);
    std::size_t x[3];
    for (x[0] = 0; x[0] < n; ++x[0])
      for (x[1] = 0; x[1] < n; ++x[1])
        for (x[2] = 0; x[2] < n; ++x[2]) {
          double s = 0.0;
          std::size_t y[3] = {x[0], x[1], x[2]};
          for (std::size_t m = 0; m < n; ++m) {
            y[slot] = m;
            s += J(m, x[slot]) * cur(y[0], y[1], y[2]);
          }
          r(x[0], x[1], x[2]) = s;
        }
    cur = std::move(r);
  }
  return cur;
}

}  // namespace aestruct::bilinear
