#pragma once

// Point-local coefficients of the adapted connections of an (alpha, epsilon)
// structure, plus torsion, potential, naturality and the F-tensor.
// Conventions as in tensor.hpp: Gamma^k_ij stored [k][i][j], T^k_ij = Gamma^k_ij - Gamma^k_ji.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "aestruct/bilinear.hpp"
#include "aestruct/error.hpp"
#include "aestruct/structure.hpp"
#include "aestruct/tensor.hpp"

namespace aestruct {

inline constexpr double kBaseTorsionTolerance = 1e-10;

enum class ConnectionKind {
  LeviCivita,
  FirstCanonical,
  KobayashiNomizu,
  Yano,
  Chern,
  WellAdapted,
  Bismut,
  Skew,
  Canonical,
  Base0,
  Base1,
  BaseYano,
};

inline constexpr std::array<std::pair<ConnectionKind, std::string_view>, 12> kConnectionKindNames = {{
    {ConnectionKind::LeviCivita, "levi-civita"},
    {ConnectionKind::FirstCanonical, "first-canonical"},
    {ConnectionKind::KobayashiNomizu, "kobayashi-nomizu"},
    {ConnectionKind::Yano, "yano"},
    {ConnectionKind::Chern, "chern"},
    {ConnectionKind::WellAdapted, "well-adapted"},
    {ConnectionKind::Bismut, "bismut"},
    {ConnectionKind::Skew, "skew"},
    {ConnectionKind::Canonical, "canonical"},
    {ConnectionKind::Base0, "base0"},
    {ConnectionKind::Base1, "base1"},
    {ConnectionKind::BaseYano, "base-yano"},
}};

inline std::string_view to_string(ConnectionKind kind) {
  for (const auto& [k, name] : kConnectionKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

inline std::optional<ConnectionKind> parse_connection_kind(std::string_view name) {
  for (const auto& [k, n] : kConnectionKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

struct ConnectionParams {
  double s = 0.0;                   // canonical only
  std::optional<TensorValue> base;  // base0 / base1 / base-yano only
  double skew_tol = kDefaultTolerance;
};

struct ConnectionAtPoint {
  ConnectionKind kind = ConnectionKind::LeviCivita;
  double s = 0.0;
  TensorValue gamma;
  PointFrame frame;
};

/// T^k_ij = Gamma^k_ij - Gamma^k_ji.
inline TensorValue torsion_of(const TensorValue& gamma) { return gamma - bilinear::swap_args(gamma); }

inline TensorValue torsion(const ConnectionAtPoint& c) { return torsion_of(c.gamma); }

/// S = Gamma^a - Gamma^g.
inline TensorValue potential(const ConnectionAtPoint& c) { return c.gamma - c.frame.gamma_g; }

/// (max |nabla^a J|, max |nabla^a g|) at the frame point.
inline std::pair<double, double> naturality_residuals(const ConnectionAtPoint& c) {
  const auto& f = c.frame;
  return {covariant_derivative_J(c.gamma, f.J, f.dJ).max_abs(), covariant_derivative_g(c.gamma, f.g, f.dg).max_abs()};
}

/// F(X,Y,Z) = g(T(X,Y),Z) - g(T(Z,Y),X) + eps (g(T(JX,Y),JZ) - g(T(JZ,Y),JX)), stored [x][y][z].
inline TensorValue f_tensor_of(const TensorValue& torsion_tensor, const PointFrame& f) {
  const TensorValue w = bilinear::lower(torsion_tensor, f.g);
  const TensorValue wj = bilinear::form_with_j(w, f.J, true, false, true);
  TensorValue out = w - bilinear::permute_form(w, 2, 1, 0);
  out += static_cast<double>(f.epsilon) * (wj - bilinear::permute_form(wj, 2, 1, 0));
  return out;
}

inline TensorValue f_tensor(const ConnectionAtPoint& c) { return f_tensor_of(torsion(c), c.frame); }

/// max |(nabla_X J)JY + (nabla_JX J)Y + (nabla_Y J)JX + (nabla_JY J)X| over basis X, Y.
inline double skew_existence_residual(const PointFrame& f) {
  const auto t = nabla_j_terms(f);
  return (t.a1 + t.a2 + t.a3 + t.a4).max_abs();
}

namespace detail {

inline void require_torsion_free(const TensorValue& base) {
  const double t = torsion_of(base).max_abs();
  if (!(t < kBaseTorsionTolerance)) throw BaseTorsionError(t);
}

inline void require_base_shape(const TensorValue& base, const PointFrame& f) {
  if (base.rank() != 3 || base.dim() != f.dim() || base.valence()[0] != Slot::Upper) {
    throw ValenceError("base connection coefficients must be an n x n x n array Gamma^k_ij");
  }
}

/// nabla + (-alpha/2)(nabla_X J)JY, with nabla J taken along `base` itself.
inline TensorValue base0_gamma(const TensorValue& base, const PointFrame& f) {
  const auto t = nabla_j_terms(covariant_derivative_J(base, f.J, f.dJ), f.J);
  return base + (-0.5 * f.alpha) * t.a1;
}

/// Kobayashi-Nomizu type: base0 + (-alpha/4)((nabla_Y J)JX - (nabla_JY J)X).
inline TensorValue base1_gamma(const TensorValue& base, const PointFrame& f) {
  const auto t = nabla_j_terms(covariant_derivative_J(base, f.J, f.dJ), f.J);
  return base + (-0.5 * f.alpha) * t.a1 + (-0.25 * f.alpha) * (t.a3 - t.a4);
}

/// Yano type: nabla + (-alpha/2)(nabla_Y J)JX + (-alpha/4)((nabla_X J)JY - (nabla_JX J)Y).
inline TensorValue base_yano_gamma(const TensorValue& base, const PointFrame& f) {
  const auto t = nabla_j_terms(covariant_derivative_J(base, f.J, f.dJ), f.J);
  return base + (-0.5 * f.alpha) * t.a3 + (-0.25 * f.alpha) * (t.a1 - t.a2);
}

/// Adds the (0,3) correction extra(i,j,l) = g(Delta(d_i, d_j), d_l) to Gamma.
inline TensorValue add_lowered(const TensorValue& gamma, const TensorValue& extra, const PointFrame& f) {
  return gamma + bilinear::raise_last(extra, f.g_inv);
}

/// g(nabla^s_X Y, Z) = g(nabla^0_X Y, Z) + c g(W(Y,Z), X), with W the second
/// Nijenhuis tensor and c = alpha s/12 when alpha eps = -1, and W = N_J,
/// c = alpha s/8 when alpha eps = +1.
inline TensorValue canonical_gamma(const PointFrame& f, double s) {
  const bool minus = f.alpha_epsilon() == -1;
  const TensorValue w = bilinear::lower(minus ? second_nijenhuis(f) : nijenhuis(f), f.g);
  const double c = f.alpha * s / (minus ? 12.0 : 8.0);
  const TensorValue extra = c * bilinear::permute_form(w, 1, 2, 0);  // extra(x,y,z) = w(y,z,x)
  return add_lowered(base0_gamma(f.gamma_g, f), extra, f);
}

inline TensorValue skew_gamma(const PointFrame& f) {
  const auto t = nabla_j_terms(f);
  const TensorValue g0 = base0_gamma(f.gamma_g, f);
  if (f.alpha_epsilon() == 1) return g0 + (0.25 * f.alpha) * (t.a3 - t.a4);
  // (-alpha/2)(g((nabla_Y J)JZ, X) + g((nabla_JZ J)Y, X))
  const TensorValue w1 = bilinear::lower(t.a1, f.g);  // w1(y,z,x)
  const TensorValue w2 = bilinear::lower(t.a2, f.g);  // w2(z,y,x)
  const TensorValue extra =
      (-0.5 * f.alpha) * (bilinear::permute_form(w1, 1, 2, 0) + bilinear::permute_form(w2, 2, 1, 0));
  return add_lowered(g0, extra, f);
}

}  // namespace detail

inline ConnectionAtPoint build_connection(const PointFrame& f, ConnectionKind kind, const ConnectionParams& params = {}) {
  ConnectionAtPoint c{kind, 0.0, {}, f};
  const bool minus = f.alpha_epsilon() == -1;
  switch (kind) {
    case ConnectionKind::LeviCivita:
      c.gamma = f.gamma_g;
      break;
    case ConnectionKind::FirstCanonical:
      c.gamma = detail::base0_gamma(f.gamma_g, f);
      break;
    case ConnectionKind::KobayashiNomizu:
      c.gamma = detail::base1_gamma(f.gamma_g, f);
      break;
    case ConnectionKind::Yano:
      c.gamma = detail::base_yano_gamma(f.gamma_g, f);
      break;
    case ConnectionKind::Chern:
      if (!minus) throw SignatureError("Chern connection undefined for alpha*epsilon=+1");
      c.s = 3.0;
      c.gamma = detail::canonical_gamma(f, 3.0);
      break;
    case ConnectionKind::WellAdapted:
      c.s = 1.0;
      c.gamma = detail::canonical_gamma(f, 1.0);
      break;
    case ConnectionKind::Bismut:
      if (!minus) throw SignatureError("Bismut connection undefined for alpha*epsilon=+1");
      c.s = -3.0;
      c.gamma = detail::canonical_gamma(f, -3.0);
      break;
    case ConnectionKind::Canonical:
      c.s = params.s;
      c.gamma = detail::canonical_gamma(f, params.s);
      break;
    case ConnectionKind::Skew: {
      const double r = skew_existence_residual(f);
      if (!(r < params.skew_tol)) throw SkewNonexistenceError(r);
      c.gamma = detail::skew_gamma(f);
      break;
    }
    case ConnectionKind::Base0:
    case ConnectionKind::Base1:
    case ConnectionKind::BaseYano: {
      if (!params.base) throw ValenceError("connection kind '" + std::string(to_string(kind)) + "' needs base coefficients");
      detail::require_base_shape(*params.base, f);
      if (kind == ConnectionKind::Base0) {
        c.gamma = detail::base0_gamma(*params.base, f);
      } else {
        detail::require_torsion_free(*params.base);
        c.gamma = kind == ConnectionKind::Base1 ? detail::base1_gamma(*params.base, f)
                                                : detail::base_yano_gamma(*params.base, f);
      }
      break;
    }
  }
  return c;
}

/// g(B(X,Y), Z) with B = T^b + (alpha/4) N_J, T^b the Bismut torsion.
inline TensorValue bismut_B(const PointFrame& f) {
  const auto b = build_connection(f, ConnectionKind::Bismut);
  return bilinear::lower(torsion(b) + (0.25 * f.alpha) * nijenhuis(f), f.g);
}

/// S = K + Q with K(X,JY) = -J K(X,Y) and Q(X,JY) = J Q(X,Y):
/// K = (S - alpha J S(X,JY))/2, Q = (S + alpha J S(X,JY))/2.
inline std::pair<TensorValue, TensorValue> decompose_KQ(const TensorValue& S, const PointFrame& f) {
  const TensorValue jsj = bilinear::j_left(bilinear::with_j(S, f.J, false, true), f.J);
  TensorValue K = 0.5 * (S - static_cast<double>(f.alpha) * jsj);
  TensorValue Q = S - K;
  return {std::move(K), std::move(Q)};
}

}  // namespace aestruct
