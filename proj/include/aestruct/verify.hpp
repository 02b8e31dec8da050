#pragma once

// The identity suite. Each check evaluates a residual at every sampled frame
// and reports the maximum; checks of "A iff B" statements report 0 when the two
// residuals agree on which side of tol they fall and max(r_A, r_B) otherwise.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aestruct/bilinear.hpp"
#include "aestruct/classify.hpp"
#include "aestruct/connections.hpp"
#include "aestruct/rng.hpp"
#include "aestruct/structure.hpp"

namespace aestruct {

inline constexpr double kBracketOracleTolerance = 1e-7;

enum class CheckStatus { Pass, Fail, Skipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Skipped:
      return "skipped";
  }
  return "fail";
}

struct CheckReport {
  std::string check_id;
  std::string paper_ref;
  std::string spec;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double tol = kDefaultTolerance;
  CheckStatus status = CheckStatus::Pass;
  std::string reason;  // set for skipped checks and evaluation failures

  friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

struct SuiteConfig {
  std::size_t samples = 64;
  double tol = kDefaultTolerance;
  std::vector<double> s_values{-3.0, -1.0, 0.0, 1.0, 2.0, 3.0};
};

// ---------------------------------------------------------------------------
// Independent reformulations used only as oracles by the suite.

/// (nabla_k Phi)_ij from the partials of Phi = J^m_i g_mj and the Levi-Civita
/// coefficients, without going through nabla^g J.
inline TensorValue nabla_phi_direct(const PointFrame& f) {
  const std::size_t n = f.dim();
  const TensorValue phi = fundamental_tensor(f);
  TensorValue out = bilinear::make_form(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
          s += f.dJ(k, m, i) * f.g(m, j) + f.J(m, i) * f.dg(k, m, j);
          s -= f.gamma_g(m, k, i) * phi(m, j) + f.gamma_g(m, k, j) * phi(i, m);
        }
        out(k, i, j) = s;
      }
  return out;
}

/// Explicit Chern law
/// g(nabla^c_X Y, Z) = g(nabla^0_X Y, Z)
///   + (-alpha/4) g((nabla_Z J)JY - (nabla_Y J)JZ - (nabla_JZ J)Y + (nabla_JY J)Z, X).
/// For alpha = -1 the prefactor is the familiar 1/4.
inline TensorValue chern_explicit_gamma(const PointFrame& f) {
  const auto t = nabla_j_terms(f);
  const TensorValue l1 = bilinear::lower(t.a1, f.g);  // l1(a,b,c) = g((nabla_a J)Jb, c)
  const TensorValue l2 = bilinear::lower(t.a2, f.g);  // l2(a,b,c) = g((nabla_Ja J)b, c)
  const TensorValue extra =
      (-0.25 * f.alpha) * (bilinear::permute_form(l1, 2, 1, 0) - bilinear::permute_form(l1, 1, 2, 0) -
                           bilinear::permute_form(l2, 2, 1, 0) + bilinear::permute_form(l2, 1, 2, 0));
  const TensorValue g0 = build_connection(f, ConnectionKind::FirstCanonical).gamma;
  return g0 + bilinear::raise_last(extra, f.g_inv);
}

/// Phi-based integrability condition (same shape as integrability_condition_residual,
/// fed by nabla_phi_direct).
inline double integrability_phi_residual(const PointFrame& f) {
  const TensorValue p = nabla_phi_direct(f);
  if (f.alpha_epsilon() == -1) {
    return (p + static_cast<double>(f.alpha) * bilinear::form_with_j(p, f.J, true, true, false)).max_abs();
  }
  const TensorValue q = bilinear::form_with_j(p, f.J, false, false, true);
  return (q + bilinear::permute_form(q, 1, 2, 0) + bilinear::permute_form(q, 2, 0, 1)).max_abs();
}

namespace detail {

/// Everything the checks need at one sample point, computed once.
struct FrameData {
  PointFrame f;
  NablaJTerms t;
  TensorValue N, Nt, p;
  ConnectionAtPoint lc, first, kn, yano, well;
  std::vector<std::pair<double, ConnectionAtPoint>> canonical;
  std::optional<ConnectionAtPoint> chern, bismut, skew;
  double skew_residual = 0.0;

  /// Connections the theory proves natural.
  std::vector<const ConnectionAtPoint*> natural() const {
    std::vector<const ConnectionAtPoint*> out{&first, &well};
    for (const auto& [s, c] : canonical) out.push_back(&c);
    for (const auto* c : {&chern, &bismut, &skew}) {
      if (*c) out.push_back(&**c);
    }
    return out;
  }

  double alpha() const { return f.alpha; }
  double epsilon() const { return f.epsilon; }
  double ae() const { return f.alpha_epsilon(); }
  bool minus() const { return f.alpha_epsilon() == -1; }
};

inline FrameData make_frame_data(PointFrame frame, const SuiteConfig& cfg) {
  FrameData d;
  d.f = std::move(frame);
  const PointFrame& f = d.f;
  d.t = nabla_j_terms(f);
  d.N = nijenhuis(f);
  d.Nt = second_nijenhuis(f);
  d.p = nabla_g_phi(f);
  d.lc = build_connection(f, ConnectionKind::LeviCivita);
  d.first = build_connection(f, ConnectionKind::FirstCanonical);
  d.kn = build_connection(f, ConnectionKind::KobayashiNomizu);
  d.yano = build_connection(f, ConnectionKind::Yano);
  d.well = build_connection(f, ConnectionKind::WellAdapted);
  for (double s : cfg.s_values) {
    ConnectionParams params;
    params.s = s;
    d.canonical.emplace_back(s, build_connection(f, ConnectionKind::Canonical, params));
  }
  if (d.minus()) {
    d.chern = build_connection(f, ConnectionKind::Chern);
    d.bismut = build_connection(f, ConnectionKind::Bismut);
  }
  d.skew_residual = skew_existence_residual(f);
  if (d.skew_residual < cfg.tol) {
    ConnectionParams params;
    params.skew_tol = cfg.tol;
    d.skew = build_connection(f, ConnectionKind::Skew, params);
  }
  return d;
}

struct Context {
  const ManifoldSpec& spec;
  const SuiteConfig& cfg;
  std::vector<FrameData> frames;
};

struct Outcome {
  double max_residual = 0.0;
  std::size_t samples = 0;
};

using PointFn = std::function<std::optional<double>(const FrameData&)>;
using PairFn = std::function<std::pair<double, double>(const FrameData&)>;

inline Outcome pointwise(const Context& ctx, const PointFn& fn) {
  Outcome o;
  for (const auto& d : ctx.frames) {
    if (auto r = fn(d)) {
      o.max_residual = std::max(o.max_residual, *r);
      ++o.samples;
    }
  }
  return o;
}

inline Outcome biconditional(const Context& ctx, const PairFn& fn) {
  Outcome o;
  for (const auto& d : ctx.frames) {
    const auto [ra, rb] = fn(d);
    const bool agree = (ra < ctx.cfg.tol) == (rb < ctx.cfg.tol);
    o.max_residual = std::max(o.max_residual, agree ? 0.0 : std::max(ra, rb));
    ++o.samples;
  }
  return o;
}

inline double max_of(std::initializer_list<double> xs) { return *std::max_element(xs.begin(), xs.end()); }

inline double diff(const TensorValue& a, const TensorValue& b) { return max_abs_difference(a, b); }

/// g(S(X,Y),Z) = 1/2 (g(T(X,Y),Z) - g(T(Y,Z),X) + g(T(Z,X),Y)).
inline double potential_torsion_residual(const ConnectionAtPoint& c) {
  const TensorValue ls = bilinear::lower(potential(c), c.frame.g);
  const TensorValue wt = bilinear::lower(torsion(c), c.frame.g);
  const TensorValue rhs = 0.5 * (wt - bilinear::permute_form(wt, 1, 2, 0) + bilinear::permute_form(wt, 2, 0, 1));
  return diff(ls, rhs);
}

/// N = J T(JX,Y) + J T(X,JY) - alpha T(X,Y) - T(JX,JY).
inline double nijenhuis_torsion_residual(const ConnectionAtPoint& c, const TensorValue& N) {
  const auto& f = c.frame;
  const TensorValue T = torsion(c);
  const TensorValue rhs = bilinear::j_left(bilinear::with_j(T, f.J, true, false) + bilinear::with_j(T, f.J, false, true), f.J) -
                          static_cast<double>(f.alpha) * T - bilinear::with_j(T, f.J, true, true);
  return diff(N, rhs);
}

/// Potential tensor conditions for naturality: J S(X,Y) - S(X,JY) = (nabla_X J)Y and
/// g(S(X,Y),Z) + g(S(X,Z),Y) = 0.
inline double natural_potential_residual(const ConnectionAtPoint& c) {
  const auto& f = c.frame;
  const TensorValue S = potential(c);
  const TensorValue jcond = bilinear::j_left(S, f.J) - bilinear::with_j(S, f.J, false, true) - f.nabla_g_J;
  const TensorValue ls = bilinear::lower(S, f.g);
  return std::max(jcond.max_abs(), (ls + bilinear::permute_form(ls, 0, 2, 1)).max_abs());
}

/// Q(X,JY) - J Q(X,Y).
inline double l_alpha_residual(const TensorValue& Q, const TensorValue& J) {
  return diff(bilinear::with_j(Q, J, false, true), bilinear::j_left(Q, J));
}

/// K(X,JY) + J K(X,Y).
inline double a_alpha_residual(const TensorValue& K, const TensorValue& J) {
  return (bilinear::with_j(K, J, false, true) + bilinear::j_left(K, J)).max_abs();
}

inline double naturality_max(const ConnectionAtPoint& c) {
  const auto [rj, rg] = naturality_residuals(c);
  return std::max(rj, rg);
}

/// Lowered F(nabla^s) predicted from the family law: (alpha/2)(1 - s) g(W(X,Z),Y).
inline TensorValue predicted_f(const FrameData& d, double s) {
  const TensorValue w = bilinear::lower(d.minus() ? d.Nt : d.N, d.f.g);
  return (0.5 * d.alpha() * (1.0 - s)) * bilinear::permute_form(w, 0, 2, 1);
}

inline TensorValue random_array(SplitMix64& rng, std::size_t n) {
  TensorValue r = bilinear::make(n);
  for (double& v : r.data()) v = rng.uniform(-1.0, 1.0);
  return r;
}

struct CheckDef {
  const char* id;
  const char* ref;
  bool needs_minus;  // only defined for alpha*epsilon = -1
  std::function<Outcome(Context&)> run;
};

// The catalog of checks, sorted by id.
inline std::vector<CheckDef> check_catalog() {
  using D = const FrameData&;
  std::vector<CheckDef> defs = {
      // classify ---------------------------------------------------------------
      {"classify.implication_lattice", "kahler => quasi-kahler and integrable; nearly => quasi; quasi and integrable => kahler",
       false,
       [](Context& ctx) {
         const ClassificationReport r = [&] {
           std::vector<PointFrame> fs;
           for (const auto& d : ctx.frames) fs.push_back(d.f);
           return classify_frames(ctx.spec.name, ctx.spec.alpha_epsilon(), fs, ctx.cfg.tol);
         }();
         double violations = 0.0;
         for (const auto& i : r.implications) violations += i.consistent ? 0.0 : 1.0;
         return Outcome{violations, ctx.frames.size()};
       }},
      {"classify.integrability_characterization", "J integrable iff the nabla^g J / nabla^g Phi integrability condition holds",
       false,
       [](Context& ctx) {
         return biconditional(ctx, [](D d) {
           return std::pair{d.N.max_abs(),
                            std::max(integrability_condition_residual(d.f), integrability_phi_residual(d.f))};
         });
       }},
      {"classify.kahler_characterization", "Kahler type iff the Levi-Civita connection is natural", false,
       [](Context& ctx) {
         return biconditional(ctx, [](D d) { return std::pair{d.f.nabla_g_J.max_abs(), naturality_max(d.lc)}; });
       }},
      {"classify.quasi_kahler_equivalence", "quasi-Kahler type iff the second Nijenhuis tensor vanishes", false,
       [](Context& ctx) {
         return biconditional(ctx, [](D d) { return std::pair{quasi_kahler_residual(d.f), d.Nt.max_abs()}; });
       }},

      // connections -------------------------------------------------------------
      {"connections.base_generic_natural",
       "nabla^0, nabla^1 and their affine line built from an arbitrary base are adapted to J", false,
       [](Context& ctx) {
         SplitMix64 rng(ctx.spec.seed ^ 0xb5ad4eceda1ce2a9ULL);
         return pointwise(ctx, [&rng](D d) -> std::optional<double> {
           const auto& f = d.f;
           TensorValue base = random_array(rng, f.dim());
           TensorValue sym = 0.5 * (base + bilinear::swap_args(base));
           ConnectionParams p0, p1;
           p0.base = base;
           p1.base = sym;
           const auto c0 = build_connection(f, ConnectionKind::Base0, p0);
           const auto c0s = build_connection(f, ConnectionKind::Base0, p1);
           const auto c1 = build_connection(f, ConnectionKind::Base1, p1);
           const TensorValue mid = 0.35 * c0s.gamma + 0.65 * c1.gamma;
           return max_of({covariant_derivative_J(c0.gamma, f.J, f.dJ).max_abs(),
                          covariant_derivative_J(c1.gamma, f.J, f.dJ).max_abs(),
                          covariant_derivative_J(mid, f.J, f.dJ).max_abs()});
         });
       }},
      {"connections.base_generic_torsion",
       "torsion-free base: T^1 = (-alpha/4) N_J, nabla^1 - Yano type = (-alpha/4) N_J, Yano type torsion (alpha/4) N_J",
       false,
       [](Context& ctx) {
         SplitMix64 rng(ctx.spec.seed ^ 0x6a09e667f3bcc909ULL);
         return pointwise(ctx, [&rng](D d) -> std::optional<double> {
           const auto& f = d.f;
           const TensorValue base = random_array(rng, f.dim());
           ConnectionParams p;
           p.base = 0.5 * (base + bilinear::swap_args(base));
           const auto c1 = build_connection(f, ConnectionKind::Base1, p);
           const auto cy = build_connection(f, ConnectionKind::BaseYano, p);
           const TensorValue Nb = nijenhuis_bracket(f);
           return max_of({diff(torsion(c1), (-0.25 * f.alpha) * Nb), diff(c1.gamma - cy.gamma, (-0.25 * f.alpha) * Nb),
                          diff(torsion(cy), (0.25 * f.alpha) * Nb)});
         });
       }},
      {"connections.bismut_b_totally_skew", "B = T^b + (alpha/4) N_J is totally skew-symmetric", true,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> { return antisymmetry_residual(bismut_B(d.f)); });
       }},
      {"connections.canonical_affine", "nabla^s = (1 - s) nabla^0 + s nabla^w", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           double r = 0.0;
           for (const auto& [s, c] : d.canonical) {
             r = std::max(r, diff(c.gamma, (1.0 - s) * d.first.gamma + s * d.well.gamma));
           }
           return r;
         });
       }},
      {"connections.canonical_f_tensor", "F(nabla^s) = (alpha/2)(1 - s) g(W(X,Z),Y), W the second Nijenhuis or Nijenhuis tensor",
       false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           double r = 0.0;
           for (const auto& [s, c] : d.canonical) r = std::max(r, diff(f_tensor(c), predicted_f(d, s)));
           return r;
         });
       }},
      {"connections.canonical_family_natural", "every canonical connection nabla^s is natural", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           double r = 0.0;
           for (const auto& [s, c] : d.canonical) r = std::max(r, naturality_max(c));
           return r;
         });
       }},
      {"connections.canonical_kq_affine", "potential of nabla^s: A-part constant, L-part linear in s", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const auto [k0, q0] = decompose_KQ(potential(d.first), d.f);
           const auto [k1, q1] = decompose_KQ(potential(d.well), d.f);
           double r = 0.0;
           for (const auto& [s, c] : d.canonical) {
             const auto [k, q] = decompose_KQ(potential(c), d.f);
             r = max_of({r, diff(k, k0), diff(q, q0 + s * (q1 - q0))});
           }
           return r;
         });
       }},
      {"connections.canonical_zero_is_first", "nabla^0 of the canonical family is the first canonical connection", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           ConnectionParams p;
           p.s = 0.0;
           return diff(build_connection(d.f, ConnectionKind::Canonical, p).gamma, d.first.gamma);
         });
       }},
      {"connections.chern_explicit", "Chern connection equals its explicit nabla^0 + nabla^g J expression", true,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> { return diff(d.chern->gamma, chern_explicit_gamma(d.f)); });
       }},
      {"connections.chern_first_iff_quasi_kahler", "Chern = first canonical iff the second Nijenhuis tensor vanishes", true,
       [](Context& ctx) {
         return biconditional(ctx, [](D d) { return std::pair{d.Nt.max_abs(), diff(d.chern->gamma, d.first.gamma)}; });
       }},
      {"connections.chern_torsion", "Chern torsion satisfies T(JX,JY) = alpha T(X,Y)", true,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const TensorValue T = torsion(*d.chern);
           return diff(bilinear::with_j(T, d.f.J, true, true), d.alpha() * T);
         });
       }},
      {"connections.decompose_kq", "S = K + Q with K in A_alpha and Q in L_alpha", false,
       [](Context& ctx) {
         SplitMix64 rng(ctx.spec.seed ^ 0x3c6ef372fe94f82bULL);
         return pointwise(ctx, [&rng](D d) -> std::optional<double> {
           double r = 0.0;
           std::vector<TensorValue> samples{random_array(rng, d.f.dim()), potential(d.kn), potential(d.yano)};
           for (const auto* c : d.natural()) samples.push_back(potential(*c));
           for (const auto& S : samples) {
             const auto [K, Q] = decompose_KQ(S, d.f);
             r = max_of({r, diff(K + Q, S), a_alpha_residual(K, d.f.J), l_alpha_residual(Q, d.f.J)});
           }
           return r;
         });
       }},
      {"connections.first_canonical_f_tensor", "F(nabla^0) = (alpha/2) g(W(X,Z),Y)", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> { return diff(f_tensor(d.first), predicted_f(d, 0.0)); });
       }},
      {"connections.first_canonical_kq", "first canonical potential lies in A_alpha (K = S, Q = 0)", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const TensorValue S = potential(d.first);
           const auto [K, Q] = decompose_KQ(S, d.f);
           return std::max(diff(K, S), Q.max_abs());
         });
       }},
      {"connections.first_canonical_natural", "first canonical connection is natural", false,
       [](Context& ctx) { return pointwise(ctx, [](D d) -> std::optional<double> { return naturality_max(d.first); }); }},
      {"connections.kahler_collapse", "Kahler type iff all named connections coincide", false,
       [](Context& ctx) {
         return biconditional(ctx, [](D d) {
           std::vector<const TensorValue*> gs{&d.lc.gamma, &d.first.gamma, &d.kn.gamma, &d.yano.gamma, &d.well.gamma};
           for (const auto* c : {&d.chern, &d.bismut, &d.skew}) {
             if (*c) gs.push_back(&(*c)->gamma);
           }
           double r = 0.0;
           for (std::size_t a = 0; a < gs.size(); ++a)
             for (std::size_t b = a + 1; b < gs.size(); ++b) r = std::max(r, diff(*gs[a], *gs[b]));
           return std::pair{d.f.nabla_g_J.max_abs(), r};
         });
       }},
      {"connections.kn_minus_yano", "nabla^kn - nabla^y = (-alpha/4) N_J", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           return diff(d.kn.gamma - d.yano.gamma, (-0.25 * d.alpha()) * d.N);
         });
       }},
      {"connections.kn_natural_iff_quasi_kahler", "Kobayashi-Nomizu connection natural iff quasi-Kahler type", false,
       [](Context& ctx) {
         return biconditional(ctx, [](D d) { return std::pair{quasi_kahler_residual(d.f), naturality_max(d.kn)}; });
       }},
      {"connections.kn_torsion", "(-alpha) N_J = 4 T^kn", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           return diff(-d.alpha() * d.N, 4.0 * torsion(d.kn));
         });
       }},
      {"connections.kn_well_adapted_iff_quasi_kahler", "Kobayashi-Nomizu = well adapted iff quasi-Kahler type", false,
       [](Context& ctx) {
         return biconditional(ctx, [](D d) { return std::pair{quasi_kahler_residual(d.f), diff(d.kn.gamma, d.well.gamma)}; });
       }},
      {"connections.kn_yano_torsion", "nabla^kn = nabla^y - T^y", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           return diff(d.kn.gamma, d.yano.gamma - torsion(d.yano));
         });
       }},
      {"connections.natural_potential_conditions", "natural potentials: J S(X,Y) - S(X,JY) = (nabla_X J)Y, g(S(X,Y),Z) skew in Y,Z",
       false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           double r = 0.0;
           for (const auto* c : d.natural()) r = std::max(r, natural_potential_residual(*c));
           return r;
         });
       }},
      {"connections.natural_q_in_l_alpha", "natural connections differ from nabla^0 by a tensor in L_alpha", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           double r = 0.0;
           for (const auto* c : d.natural()) r = std::max(r, l_alpha_residual(c->gamma - d.first.gamma, d.f.J));
           return r;
         });
       }},
      {"connections.nijenhuis_torsion", "N_J = J T(JX,Y) + J T(X,JY) - alpha T(X,Y) - T(JX,JY) for natural connections", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           double r = 0.0;
           for (const auto* c : d.natural()) r = std::max(r, nijenhuis_torsion_residual(*c, d.N));
           return r;
         });
       }},
      {"connections.potential_torsion", "g(S(X,Y),Z) = (g(T(X,Y),Z) - g(T(Y,Z),X) + g(T(Z,X),Y))/2 for natural connections",
       false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           double r = 0.0;
           for (const auto* c : d.natural()) r = std::max(r, potential_torsion_residual(*c));
           return r;
         });
       }},
      {"connections.q_reconstruction", "nabla^0(base) + Q is adapted to J for every Q in L_alpha", false,
       [](Context& ctx) {
         SplitMix64 rng(ctx.spec.seed ^ 0xa54ff53a5f1d36f1ULL);
         return pointwise(ctx, [&rng](D d) -> std::optional<double> {
           const auto& f = d.f;
           ConnectionParams p;
           p.base = random_array(rng, f.dim());
           const auto c0 = build_connection(f, ConnectionKind::Base0, p);
           const TensorValue Q = decompose_KQ(random_array(rng, f.dim()), f).second;
           return covariant_derivative_J(c0.gamma + Q, f.J, f.dJ).max_abs();
         });
       }},
      {"connections.skew_in_canonical_family", "skew connection is nabla^-3 (alpha eps = -1) or, on quasi-Kahler points, nabla^-1 (alpha eps = +1)", false,
       [](Context& ctx) {
         return pointwise(ctx, [&ctx](D d) -> std::optional<double> {
           if (!d.skew) return std::nullopt;
           if (!d.minus() && !(quasi_kahler_residual(d.f) < ctx.cfg.tol)) return std::nullopt;
           ConnectionParams p;
           p.s = d.minus() ? -3.0 : -1.0;
           return diff(d.skew->gamma, build_connection(d.f, ConnectionKind::Canonical, p).gamma);
         });
       }},
      {"connections.skew_natural", "skew-torsion connection is natural where it exists", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           if (!d.skew) return std::nullopt;
           return naturality_max(*d.skew);
         });
       }},
      {"connections.skew_nijenhuis_form", "where a skew connection exists N_J = 2((nabla_X J)JY + (nabla_JX J)Y)", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           if (!d.skew) return std::nullopt;
           return diff(d.N, 2.0 * (d.t.a1 + d.t.a2));
         });
       }},
      {"connections.skew_potential_half_torsion", "skew connection potential S = T/2", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           if (!d.skew) return std::nullopt;
           return diff(potential(*d.skew), 0.5 * torsion(*d.skew));
         });
       }},
      {"connections.skew_torsion_totally_skew", "skew connection torsion is a 3-form", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           if (!d.skew) return std::nullopt;
           return antisymmetry_residual(bilinear::lower(torsion(*d.skew), d.f.g));
         });
       }},
      {"connections.torsion0_formula", "T^0(X,Y) = (-alpha/2)((nabla_X J)JY - (nabla_Y J)JX)", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           return diff(torsion(d.first), (-0.5 * d.alpha()) * (d.t.a1 - d.t.a3));
         });
       }},
      {"connections.torsion0_integrability", "J integrable iff T^0(JX,JY) = -alpha T^0(X,Y)", false,
       [](Context& ctx) {
         return biconditional(ctx, [](D d) {
           const TensorValue T = torsion(d.first);
           return std::pair{d.N.max_abs(), (bilinear::with_j(T, d.f.J, true, true) + d.alpha() * T).max_abs()};
         });
       }},
      {"connections.torsion0_nijenhuis", "T^0(JX,JY) + alpha T^0(X,Y) = -N_J(X,Y)/2", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const TensorValue T = torsion(d.first);
           return diff(bilinear::with_j(T, d.f.J, true, true) + d.alpha() * T, -0.5 * d.N);
         });
       }},
      {"connections.torsion0_quasi_kahler", "quasi-Kahler type iff T^0(JX,JY) = alpha T^0(X,Y)", true,
       [](Context& ctx) {
         return biconditional(ctx, [](D d) {
           const TensorValue T = torsion(d.first);
           return std::pair{quasi_kahler_residual(d.f), diff(bilinear::with_j(T, d.f.J, true, true), d.alpha() * T)};
         });
       }},
      {"connections.torsion0_second", "T^0(JX,JY) - alpha T^0(X,Y) = ((nabla_X J)JY - (nabla_JX J)Y - (nabla_Y J)JX + (nabla_JY J)X)/2",
       false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const TensorValue T = torsion(d.first);
           return diff(bilinear::with_j(T, d.f.J, true, true) - d.alpha() * T,
                       0.5 * (d.t.a1 - d.t.a2 - d.t.a3 + d.t.a4));
         });
       }},
      {"connections.well_adapted_f_tensor", "well adapted connection satisfies F = 0", false,
       [](Context& ctx) { return pointwise(ctx, [](D d) -> std::optional<double> { return f_tensor(d.well).max_abs(); }); }},
      {"connections.well_adapted_first_iff",
       "nabla^0 = nabla^w iff quasi-Kahler type (alpha eps = -1) or J integrable (alpha eps = +1)", false,
       [](Context& ctx) {
         return biconditional(ctx, [](D d) {
           const double hyp = d.minus() ? quasi_kahler_residual(d.f) : d.N.max_abs();
           return std::pair{hyp, diff(d.well.gamma, d.first.gamma)};
         });
       }},
      {"connections.yano_adapted_iff_integrable", "Yano connection adapted to J iff J integrable", false,
       [](Context& ctx) {
         return biconditional(ctx, [](D d) { return std::pair{d.N.max_abs(), naturality_residuals(d.yano).first}; });
       }},
      {"connections.yano_j_defect", "J S^y(X,Y) - S^y(X,JY) - (nabla_X J)Y = (-alpha/2) N_J(JX,Y)", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const TensorValue S = potential(d.yano);
           const TensorValue lhs = bilinear::j_left(S, d.f.J) - bilinear::with_j(S, d.f.J, false, true) - d.f.nabla_g_J;
           return diff(lhs, (-0.5 * d.alpha()) * bilinear::with_j(d.N, d.f.J, true, false));
         });
       }},
      {"connections.yano_metric_defect", "g(S^y(X,Y),Z) + g(S^y(X,Z),Y) in terms of nabla^g J", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const auto& f = d.f;
           const TensorValue ls = bilinear::lower(potential(d.yano), f.g);
           const TensorValue lhs = ls + bilinear::permute_form(ls, 0, 2, 1);
           const TensorValue l1 = bilinear::lower(d.t.a1, f.g);
           const TensorValue pjz = bilinear::form_with_j(d.p, f.J, false, false, true);
           const TensorValue rhs =
               (-0.5 * d.alpha()) * (d.ae() * bilinear::permute_form(pjz, 1, 2, 0) + bilinear::permute_form(l1, 2, 0, 1)) +
               (0.25 * d.alpha() * (1.0 + d.ae())) * bilinear::form_with_j(d.p, f.J, true, false, false);
           return diff(lhs, rhs);
         });
       }},
      {"connections.yano_torsion", "T^y = (alpha/4) N_J", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           return diff(torsion(d.yano), (0.25 * d.alpha()) * d.N);
         });
       }},

      // structure ----------------------------------------------------------------
      {"structure.compatibility", "g(JX,JY) = epsilon g(X,Y)", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const auto& f = d.f;
           const auto J = linalg::to_matrix(f.J);
           const auto g = linalg::to_matrix(f.g);
           return (J.transpose() * g * J - d.epsilon() * g).cwiseAbs().maxCoeff();
         });
       }},
      {"structure.j_squared", "J^2 = alpha Id", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const auto J = linalg::to_matrix(d.f.J);
           return (J * J - d.alpha() * linalg::Matrix::Identity(J.rows(), J.cols())).cwiseAbs().maxCoeff();
         });
       }},
      {"structure.levi_civita_metricity", "Levi-Civita connection is metric", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> { return naturality_residuals(d.lc).second; });
       }},
      {"structure.levi_civita_symmetry", "Levi-Civita connection is torsion-free", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> { return torsion(d.lc).max_abs(); });
       }},
      {"structure.nablaJ_anticommutes", "(nabla_X J)JY = -J(nabla_X J)Y", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           return (d.t.a1 + bilinear::j_left(d.f.nabla_g_J, d.f.J)).max_abs();
         });
       }},
      {"structure.nablaJ_g_symmetry", "g((nabla_X J)Y,Z) = alpha eps g((nabla_X J)Z,Y)", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           return diff(d.p, d.ae() * bilinear::permute_form(d.p, 0, 2, 1));
         });
       }},
      {"structure.nablaJ_JZ_antisymmetry", "g((nabla_X J)JY,Z) = -g((nabla_X J)JZ,Y)", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const TensorValue l1 = bilinear::lower(d.t.a1, d.f.g);
           return (l1 + bilinear::permute_form(l1, 0, 2, 1)).max_abs();
         });
       }},
      {"structure.nablaJ_JZ_swap", "g((nabla_X J)JY,Z) = -alpha eps g((nabla_X J)Y,JZ)", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const TensorValue l1 = bilinear::lower(d.t.a1, d.f.g);
           return (l1 + d.ae() * bilinear::form_with_j(d.p, d.f.J, false, false, true)).max_abs();
         });
       }},
      {"structure.nabla_phi", "(nabla^g Phi)(X;Y,Z) = g((nabla_X J)Y,Z)", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> { return diff(d.p, nabla_phi_direct(d.f)); });
       }},
      {"structure.nijenhuis_bracket_oracle", "nabla^g J form of N_J equals the bracket form", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> { return diff(d.N, nijenhuis_bracket(d.f)); });
       }},
      {"structure.nijenhuis_properties", "N_J skew; N_J(JX,JY) = alpha N_J; N_J(JX,Y) = N_J(X,JY); g(N_J(JX,Y),JZ) = -eps g(N_J(X,Y),Z)",
       false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const auto& J = d.f.J;
           const TensorValue lhs4 = bilinear::form_with_j(bilinear::lower(bilinear::with_j(d.N, J, true, false), d.f.g), J,
                                                          false, false, true);
           return max_of({(d.N + bilinear::swap_args(d.N)).max_abs(), diff(bilinear::with_j(d.N, J, true, true), d.alpha() * d.N),
                          diff(bilinear::with_j(d.N, J, true, false), bilinear::with_j(d.N, J, false, true)),
                          (lhs4 + d.epsilon() * bilinear::lower(d.N, d.f.g)).max_abs()});
         });
       }},
      {"structure.phi_symmetry", "g(JX,Y) = alpha eps g(X,JY)", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const auto phi = linalg::to_matrix(fundamental_tensor(d.f));
           return (phi - d.ae() * phi.transpose()).cwiseAbs().maxCoeff();
         });
       }},
      {"structure.second_nijenhuis_lowered", "g(second Nijenhuis(X,Y),JZ) in terms of nabla^g J", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const auto& f = d.f;
           const double a = d.alpha(), e = d.epsilon(), ae = d.ae();
           const TensorValue& p = d.p;
           const TensorValue pjj = bilinear::form_with_j(p, f.J, true, true, false);
           const TensorValue pjx = bilinear::form_with_j(p, f.J, true, false, false);
           const TensorValue l1 = bilinear::lower(d.t.a1, f.g);
           const TensorValue lhs1 = bilinear::form_with_j(bilinear::lower(d.Nt, f.g), f.J, false, false, true);
           const TensorValue rhs1 = (-e) * p - pjj - a * bilinear::permute_form(p, 1, 0, 2) - ae * bilinear::permute_form(pjj, 1, 0, 2);
           const TensorValue lhs2 =
               bilinear::form_with_j(bilinear::lower(bilinear::with_j(d.Nt, f.J, true, false), f.g), f.J, false, false, true);
           const TensorValue rhs2 = (-e) * pjx - a * (l1 + bilinear::permute_form(l1, 1, 0, 2)) - e * bilinear::permute_form(pjx, 1, 0, 2);
           return std::max(diff(lhs1, rhs1), diff(lhs2, rhs2));
         });
       }},
      {"structure.second_nijenhuis_properties",
       "second Nijenhuis: W(Y,X) = ae W(X,Y); W(JX,JY) = eps W(X,Y); W(JX,Y) = ae W(X,JY)", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           const auto& J = d.f.J;
           const TensorValue& W = d.Nt;
           return max_of({diff(bilinear::swap_args(W), d.ae() * W), diff(bilinear::with_j(W, J, true, true), d.epsilon() * W),
                          diff(bilinear::with_j(W, J, true, false), d.ae() * bilinear::with_j(W, J, false, true))});
         });
       }},
      {"structure.trace_j", "trace J = 0", false,
       [](Context& ctx) {
         return pointwise(ctx, [](D d) -> std::optional<double> {
           double tr = 0.0;
           for (std::size_t i = 0; i < d.f.dim(); ++i) tr += d.f.J(i, i);
           return std::abs(tr);
         });
       }},
  };
  std::sort(defs.begin(), defs.end(), [](const CheckDef& a, const CheckDef& b) { return std::string(a.id) < b.id; });
  return defs;
}

inline double check_tolerance(const std::string& id, double tol) {
  return id == "structure.nijenhuis_bracket_oracle" ? std::max(tol, kBracketOracleTolerance) : tol;
}

}  // namespace detail

/// Sorted ids of every check the suite runs.
inline std::vector<std::string> check_ids() {
  std::vector<std::string> ids;
  for (const auto& d : detail::check_catalog()) ids.emplace_back(d.id);
  return ids;
}

/// Runs every check on `spec`. Never throws for numerical reasons: evaluation
/// failures turn into failing reports carrying the error text.
inline std::vector<CheckReport> run_suite(const ManifoldSpec& spec, const SuiteConfig& cfg = {}) {
  const auto defs = detail::check_catalog();
  std::vector<CheckReport> out;
  out.reserve(defs.size());

  detail::Context ctx{spec, cfg, {}};
  std::string failure;
  try {
    for (const auto& p : sample_points(spec.domain, cfg.samples, spec.seed)) {
      ctx.frames.push_back(detail::make_frame_data(frame_at(spec, p), cfg));
    }
  } catch (const Error& e) {
    failure = e.what();
  }

  for (const auto& def : defs) {
    CheckReport r;
    r.check_id = def.id;
    r.paper_ref = def.ref;
    r.spec = spec.name;
    r.tol = detail::check_tolerance(r.check_id, cfg.tol);
    if (def.needs_minus && spec.alpha_epsilon() != -1) {
      r.status = CheckStatus::Skipped;
      r.reason = "alpha*epsilon=+1";
    } else if (!failure.empty()) {
      r.status = CheckStatus::Fail;
      r.max_residual = std::numeric_limits<double>::infinity();
      r.reason = failure;
    } else {
      try {
        const auto o = def.run(ctx);
        r.samples = o.samples;
        r.max_residual = o.max_residual;
        r.status = r.max_residual < r.tol ? CheckStatus::Pass : CheckStatus::Fail;
      } catch (const Error& e) {
        r.status = CheckStatus::Fail;
        r.max_residual = std::numeric_limits<double>::infinity();
        r.reason = e.what();
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline bool all_passed(const std::vector<CheckReport>& reports) {
  return std::none_of(reports.begin(), reports.end(), [](const auto& r) { return r.status == CheckStatus::Fail; });
}

// ---------------------------------------------------------------------------
// Rendering

enum class ReportFormat { Json, Text };

inline std::string format_number(double v, int digits) {
  if (std::isnan(v) || std::isinf(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// JSON: array of objects with fields in the fixed order check_id, paper_ref,
/// spec, samples, max_residual, tol, status; reals with 17 significant digits.
/// Text: one line per report, e.g. "PASS <check_id> max_residual=<r> (<paper_ref>)".
inline std::string render_report(const std::vector<CheckReport>& reports, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::Json) {
    if (reports.empty()) return "[]\n";
    out = "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      out += "  {\"check_id\": " + nlohmann::json(r.check_id).dump() + ", \"paper_ref\": " + nlohmann::json(r.paper_ref).dump() +
             ", \"spec\": " + nlohmann::json(r.spec).dump() + ", \"samples\": " + std::to_string(r.samples) +
             ", \"max_residual\": " + format_number(r.max_residual, 17) + ", \"tol\": " + format_number(r.tol, 17) +
             ", \"status\": \"" + to_string(r.status) + "\"}";
      out += i + 1 < reports.size() ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
  }
  for (const auto& r : reports) {
    switch (r.status) {
      case CheckStatus::Pass:
        out += "PASS ";
        break;
      case CheckStatus::Fail:
        out += "FAIL ";
        break;
      case CheckStatus::Skipped:
        out += "SKIP ";
        break;
    }
    out += r.check_id;
    if (r.status == CheckStatus::Skipped) {
      out += " reason=" + r.reason;
    } else {
      const double v = r.max_residual;
      out += " max_residual=" + (std::isinf(v) ? std::string("inf") : format_number(v, 6));
      if (r.status == CheckStatus::Fail && !r.reason.empty()) out += " error=" + r.reason;
    }
    out += " (" + r.paper_ref + ")\n";
  }
  return out;
}

/// Inverse of the JSON rendering (reason text is not part of the schema).
inline std::vector<CheckReport> parse_report_json(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  std::vector<CheckReport> out;
  for (const auto& o : doc) {
    CheckReport r;
    r.check_id = o.at("check_id").get<std::string>();
    r.paper_ref = o.at("paper_ref").get<std::string>();
    r.spec = o.at("spec").get<std::string>();
    r.samples = o.at("samples").get<std::size_t>();
    r.max_residual = o.at("max_residual").is_null() ? std::numeric_limits<double>::infinity()
                                                    : o.at("max_residual").get<double>();
    r.tol = o.at("tol").get<double>();
    const auto s = o.at("status").get<std::string>();
    r.status = s == "pass" ? CheckStatus::Pass : s == "skipped" ? CheckStatus::Skipped : CheckStatus::Fail;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace aestruct
