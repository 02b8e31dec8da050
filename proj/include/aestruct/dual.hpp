#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace aestruct {

/// Vector-forward dual number: a value together with its partial derivatives
/// with respect to every chart coordinate, propagated in a single pass.
struct Dual {
  double value = 0.0;
  std::vector<double> partials;

  Dual() = default;
  Dual(double v, std::size_t n) : value(v), partials(n, 0.0) {}

  /// The i-th coordinate function of an n-dimensional chart evaluated at `v`.
  static Dual variable(double v, std::size_t n, std::size_t i) {
    Dual d(v, n);
    d.partials[i] = 1.0;
    return d;
  }

  std::size_t dimension() const { return partials.size(); }

  bool is_constant() const {
    for (double p : partials) {
      if (p != 0.0) return false;
    }
    return true;
  }
};

namespace detail {

/// result = a*x + b*y applied to partial vectors.
inline std::vector<double> combine(double a, const std::vector<double>& x,
                                   double b, const std::vector<double>& y) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

inline std::vector<double> scaled(double a, const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i];
  return out;
}

}  // namespace detail

inline Dual operator+(const Dual& a, const Dual& b) {
  Dual r;
  r.value = a.value + b.value;
  r.partials = detail::combine(1.0, a.partials, 1.0, b.partials);
  return r;
}

inline Dual operator-(const Dual& a, const Dual& b) {
  Dual r;
  r.value = a.value - b.value;
  r.partials = detail::combine(1.0, a.partials, -1.0, b.partials);
  return r;
}

inline Dual operator-(const Dual& a) {
  Dual r;
  r.value = -a.value;
  r.partials = detail::scaled(-1.0, a.partials);
  return r;
}

inline Dual operator*(const Dual& a, const Dual& b) {
  Dual r;
  r.value = a.value * b.value;
  r.partials = detail::combine(b.value, a.partials, a.value, b.partials);
  return r;
}

/// Caller guarantees b.value != 0.
inline Dual operator/(const Dual& a, const Dual& b) {
  Dual r;
  r.value = a.value / b.value;
  const double inv = 1.0 / b.value;
  r.partials = detail::combine(inv, a.partials, -a.value * inv * inv, b.partials);
  return r;
}

inline Dual operator*(double s, const Dual& a) {
  Dual r;
  r.value = s * a.value;
  r.partials = detail::scaled(s, a.partials);
  return r;
}

/// Applies a scalar function with known value f(x) and derivative f'(x).
inline Dual chain(const Dual& x, double fx, double dfx) {
  Dual r;
  r.value = fx;
  r.partials = detail::scaled(dfx, x.partials);
  return r;
}

/// Integer power by binary exponentiation on duals (exact product rule).
inline Dual ipow(const Dual& base, unsigned long long e) {
  Dual result(1.0, base.dimension());
  Dual b = base;
  while (e > 0) {
    if (e & 1ULL) result = result * b;
    e >>= 1ULL;
    if (e > 0) b = b * b;
  }
  return result;
}

}  // namespace aestruct
