#pragma once

// Sampling-based type predicates: Kaehler, quasi-Kaehler, nearly Kaehler,
// integrable, and existence of a natural connection with totally skew torsion.
// A verdict only ever means "holds at the sampled points within tol".

#include <algorithm>
#include <string>
#include <vector>

#include "aestruct/bilinear.hpp"
#include "aestruct/connections.hpp"
#include "aestruct/rng.hpp"
#include "aestruct/structure.hpp"

namespace aestruct {

// Pointwise residuals ---------------------------------------------------------

inline double kahler_residual(const PointFrame& f) { return f.nabla_g_J.max_abs(); }

/// alpha eps = +1: cyclic sum g((nabla_X J)Y,Z) + g((nabla_Y J)Z,X) + g((nabla_Z J)X,Y).
/// alpha eps = -1: (nabla_X J)JY - (nabla_JX J)Y.
inline double quasi_kahler_residual(const PointFrame& f) {
  if (f.alpha_epsilon() == 1) {
    const TensorValue p = nabla_g_phi(f);
    return (p + bilinear::permute_form(p, 1, 2, 0) + bilinear::permute_form(p, 2, 0, 1)).max_abs();
  }
  const auto t = nabla_j_terms(f);
  return (t.a1 - t.a2).max_abs();
}

/// Polarized nearly-Kaehler condition (nabla_X J)Y + (nabla_Y J)X.
inline double nearly_kahler_residual(const PointFrame& f) {
  return (f.nabla_g_J + bilinear::swap_args(f.nabla_g_J)).max_abs();
}

inline double integrability_residual(const PointFrame& f) { return nijenhuis(f).max_abs(); }

/// The nabla^g J form of integrability:
/// alpha eps = -1: (nabla_X J)Y + alpha (nabla_JX J)JY;
/// alpha eps = +1: g((nabla_X J)Y,JZ) + g((nabla_Y J)Z,JX) + g((nabla_Z J)X,JY).
inline double integrability_condition_residual(const PointFrame& f) {
  if (f.alpha_epsilon() == -1) {
    const TensorValue& D = f.nabla_g_J;
    return (D + static_cast<double>(f.alpha) * bilinear::with_j(D, f.J, true, true)).max_abs();
  }
  const TensorValue q = bilinear::form_with_j(nabla_g_phi(f), f.J, false, false, true);
  return (q + bilinear::permute_form(q, 1, 2, 0) + bilinear::permute_form(q, 2, 0, 1)).max_abs();
}

// Report ----------------------------------------------------------------------

struct PredicateResult {
  std::string name;
  bool applicable = true;  // nearly_kahler only exists for alpha eps = -1
  double max_residual = 0.0;
  bool holds = false;
  std::size_t samples = 0;
};

struct ImplicationResult {
  std::string name;
  bool consistent = true;
};

struct ClassificationReport {
  std::string spec_name;
  std::size_t samples = 0;
  double tol = kDefaultTolerance;
  PredicateResult kahler{"kahler_type"};
  PredicateResult quasi_kahler{"quasi_kahler_type"};
  PredicateResult nearly_kahler{"nearly_kahler_type"};
  PredicateResult integrable{"integrable"};
  PredicateResult admits_skew{"admits_skew_connection"};
  double second_nijenhuis_residual = 0.0;  // max |second Nijenhuis|, the equivalent quasi-Kaehler test
  std::vector<ImplicationResult> implications;

  std::vector<const PredicateResult*> predicates() const {
    return {&kahler, &quasi_kahler, &nearly_kahler, &integrable, &admits_skew};
  }

  bool consistent() const {
    return std::all_of(implications.begin(), implications.end(), [](const auto& i) { return i.consistent; });
  }
};

/// Verdict consistency: kahler => quasi-kahler, kahler => integrable,
/// nearly => quasi-kahler, quasi-kahler and integrable => kahler.
inline std::vector<ImplicationResult> implication_checks(const ClassificationReport& r) {
  const bool k = r.kahler.holds, q = r.quasi_kahler.holds, i = r.integrable.holds;
  const bool nk = r.nearly_kahler.applicable && r.nearly_kahler.holds;
  return {
      {"kahler => quasi_kahler", !k || q},
      {"kahler => integrable", !k || i},
      {"nearly_kahler => quasi_kahler", !nk || q},
      {"quasi_kahler and integrable => kahler", !(q && i) || k},
  };
}

/// Classifies from precomputed frames (used by the verification suite).
inline ClassificationReport classify_frames(const std::string& name, int alpha_epsilon,
                                            const std::vector<PointFrame>& frames, double tol) {
  ClassificationReport r;
  r.spec_name = name;
  r.samples = frames.size();
  r.tol = tol;
  r.nearly_kahler.applicable = alpha_epsilon == -1;
  for (const auto& f : frames) {
    r.kahler.max_residual = std::max(r.kahler.max_residual, kahler_residual(f));
    r.quasi_kahler.max_residual = std::max(r.quasi_kahler.max_residual, quasi_kahler_residual(f));
    if (r.nearly_kahler.applicable) {
      r.nearly_kahler.max_residual = std::max(r.nearly_kahler.max_residual, nearly_kahler_residual(f));
    }
    r.integrable.max_residual = std::max(r.integrable.max_residual, integrability_residual(f));
    r.admits_skew.max_residual = std::max(r.admits_skew.max_residual, skew_existence_residual(f));
    r.second_nijenhuis_residual = std::max(r.second_nijenhuis_residual, second_nijenhuis(f).max_abs());
  }
  for (PredicateResult* p : {&r.kahler, &r.quasi_kahler, &r.nearly_kahler, &r.integrable, &r.admits_skew}) {
    p->samples = frames.size();
    p->holds = p->applicable && p->max_residual < tol;
  }
  r.implications = implication_checks(r);
  return r;
}

inline std::vector<PointFrame> sample_frames(const ManifoldSpec& spec, std::size_t samples) {
  std::vector<PointFrame> frames;
  frames.reserve(samples);
  for (const auto& p : sample_points(spec.domain, samples, spec.seed)) frames.push_back(frame_at(spec, p));
  return frames;
}

/// Evaluation errors (domain, singular metric) propagate to the caller.
inline ClassificationReport classify(const ManifoldSpec& spec, std::size_t samples = 64, double tol = kDefaultTolerance) {
  return classify_frames(spec.name, spec.alpha_epsilon(), sample_frames(spec, samples), tol);
}

}  // namespace aestruct
