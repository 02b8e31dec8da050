#pragma once

// Manifold specs, point frames and the tensors derived from (J, g) through the
// Levi-Civita connection. Index conventions are the ones stated in tensor.hpp.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aestruct/bilinear.hpp"
#include "aestruct/error.hpp"
#include "aestruct/expr.hpp"
#include "aestruct/rng.hpp"
#include "aestruct/tensor.hpp"

namespace aestruct {

inline constexpr double kDegenerateMetricThreshold = 1e-10;
inline constexpr double kAsymmetryWarningThreshold = 1e-12;

struct ManifoldSpec {
  std::string name;
  std::size_t dimension = 0;
  int alpha = -1;
  int epsilon = 1;
  std::vector<std::string> coordinates;
  std::vector<std::vector<Expression>> metric;  // [i][j] = g_ij
  std::vector<std::vector<Expression>> J;       // [i][j] = J^i_j
  std::vector<std::pair<double, double>> domain;
  std::uint64_t seed = 0;

  int alpha_epsilon() const { return alpha * epsilon; }

  friend bool operator==(const ManifoldSpec&, const ManifoldSpec&) = default;
};

namespace detail {

using Json = nlohmann::json;

inline const Json& require_field(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw SpecError(std::string("missing field '") + key + "'");
  return *it;
}

inline int parse_sign(const Json& doc, const char* key) {
  const Json& v = require_field(doc, key);
  if (!v.is_number_integer() || (v.get<long long>() != 1 && v.get<long long>() != -1)) {
    throw SpecError(std::string("'") + key + "' must be -1 or 1");
  }
  return static_cast<int>(v.get<long long>());
}

inline std::vector<std::vector<Expression>> parse_matrix(const Json& doc, const char* key,
                                                         const std::vector<std::string>& coords) {
  const std::size_t n = coords.size();
  const Json& m = require_field(doc, key);
  const std::string name(key);
  if (!m.is_array() || m.size() != n) {
    throw SpecError(name + " must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  std::vector<std::vector<Expression>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = m[i];
    if (!row.is_array() || row.size() != n) {
      throw SpecError(name + " must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix (row " +
                      std::to_string(i + 1) + " has the wrong length)");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const std::string where = name + " entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      if (!row[j].is_string()) throw SpecError(where + " must be an expression string");
      try {
        out[i].push_back(parse_expression(row[j].get<std::string>(), coords));
      } catch (const ParseError& e) {
        throw SpecError(where + ": " + e.detail() + " (at position " + std::to_string(e.position()) + ")");
      }
    }
  }
  return out;
}

}  // namespace detail

/// Parses and shape-checks a manifold spec document. Throws SpecError.
inline ManifoldSpec load_spec(std::string_view bytes) {
  detail::Json doc;
  try {
    doc = detail::Json::parse(bytes);
  } catch (const detail::Json::parse_error& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SpecError("spec must be a JSON object");

  ManifoldSpec spec;
  const auto& name = detail::require_field(doc, "name");
  if (!name.is_string()) throw SpecError("'name' must be a string");
  spec.name = name.get<std::string>();

  const auto& dim = detail::require_field(doc, "dimension");
  if (!dim.is_number_integer() || dim.get<long long>() < 1) throw SpecError("'dimension' must be a positive integer");
  spec.dimension = static_cast<std::size_t>(dim.get<long long>());
  const std::size_t n = spec.dimension;

  spec.alpha = detail::parse_sign(doc, "alpha");
  spec.epsilon = detail::parse_sign(doc, "epsilon");

  const auto& coords = detail::require_field(doc, "coordinates");
  if (!coords.is_array() || coords.size() != n) {
    throw SpecError("'coordinates' must list exactly " + std::to_string(n) + " names");
  }
  for (const auto& c : coords) {
    if (!c.is_string()) throw SpecError("coordinate names must be strings");
    spec.coordinates.push_back(c.get<std::string>());
  }
  validate_coordinates(spec.coordinates);

  spec.metric = detail::parse_matrix(doc, "metric", spec.coordinates);
  spec.J = detail::parse_matrix(doc, "J", spec.coordinates);

  const auto& domain = detail::require_field(doc, "domain");
  if (!domain.is_array() || domain.size() != n) {
    throw SpecError("'domain' must list exactly " + std::to_string(n) + " intervals");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& iv = domain[i];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
      throw SpecError("domain interval " + std::to_string(i + 1) + " must be [lo, hi]");
    }
    const double lo = iv[0].get<double>();
    const double hi = iv[1].get<double>();
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw SpecError("domain interval " + std::to_string(i + 1) + " needs finite lo < hi");
    }
    spec.domain.emplace_back(lo, hi);
  }

  if (auto it = doc.find("seed"); it != doc.end()) {
    if (it->is_number_unsigned()) {
      spec.seed = it->get<std::uint64_t>();
    } else {
      throw SpecError("'seed' must be a nonnegative integer");
    }
  }
  return spec;
}

/// Spec echo with canonically printed expressions; load_spec(to_json(s)) == s.
inline std::string to_json(const ManifoldSpec& spec, int indent = 2) {
  nlohmann::ordered_json doc;
  doc["name"] = spec.name;
  doc["dimension"] = spec.dimension;
  doc["alpha"] = spec.alpha;
  doc["epsilon"] = spec.epsilon;
  doc["coordinates"] = spec.coordinates;
  auto matrix = [](const std::vector<std::vector<Expression>>& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : m) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array();
      for (const auto& e : row) r.push_back(e.to_string());
      rows.push_back(std::move(r));
    }
    return rows;
  };
  doc["metric"] = matrix(spec.metric);
  doc["J"] = matrix(spec.J);
  nlohmann::ordered_json domain = nlohmann::ordered_json::array();
  for (const auto& [lo, hi] : spec.domain) domain.push_back({lo, hi});
  doc["domain"] = std::move(domain);
  doc["seed"] = spec.seed;
  return doc.dump(indent);
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationOptions {
  std::size_t samples = 64;
  double tol = kDefaultTolerance;
  bool require_zero_trace = true;
};

struct ValidationReport {
  std::size_t samples = 0;
  double tol = kDefaultTolerance;
  double j_squared = 0.0;      // max |J^2 - alpha Id|
  double compatibility = 0.0;  // max |J^m_i J^l_j g_ml - epsilon g_ij|
  double trace = 0.0;          // max |trace J|
  double symmetry = 0.0;       // max |g_ij - g_ji| as written
  double min_abs_det = std::numeric_limits<double>::infinity();
  bool positive_definite = true;  // only meaningful for epsilon = +1
  bool trace_required = true;
  std::vector<std::string> errors;  // evaluation failures at sample points
  bool passed = false;
};

inline ValidationReport validate_structure(const ManifoldSpec& spec, const ValidationOptions& options = {}) {
  ValidationReport rep;
  rep.samples = options.samples;
  rep.tol = options.tol;
  rep.trace_required = options.require_zero_trace;
  const std::size_t n = spec.dimension;
  const auto points = sample_points(spec.domain, options.samples, spec.seed);

  for (const auto& p : points) {
    linalg::Matrix g(n, n), J(n, n);
    try {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          g(i, j) = spec.metric[i][j].evaluate_real(p);
          J(i, j) = spec.J[i][j].evaluate_real(p);
        }
    } catch (const Error& e) {
      rep.errors.emplace_back(e.what());
      continue;
    }
    rep.symmetry = std::max(rep.symmetry, (g - g.transpose()).cwiseAbs().maxCoeff());
    const linalg::Matrix gs = 0.5 * (g + g.transpose());
    const linalg::Matrix jj = J * J - spec.alpha * linalg::Matrix::Identity(n, n);
    rep.j_squared = std::max(rep.j_squared, jj.cwiseAbs().maxCoeff());
    const linalg::Matrix comp = J.transpose() * gs * J - spec.epsilon * gs;
    rep.compatibility = std::max(rep.compatibility, comp.cwiseAbs().maxCoeff());
    rep.trace = std::max(rep.trace, std::abs(J.trace()));
    rep.min_abs_det = std::min(rep.min_abs_det, std::abs(gs.determinant()));
    if (spec.epsilon == 1 && !linalg::leading_minors_positive(gs)) rep.positive_definite = false;
  }

  rep.passed = rep.errors.empty() && options.samples > 0 && rep.j_squared < rep.tol &&
               rep.compatibility < rep.tol && rep.symmetry < rep.tol &&
               (!rep.trace_required || rep.trace < rep.tol) && rep.min_abs_det > kDegenerateMetricThreshold &&
               rep.positive_definite;
  return rep;
}

// ---------------------------------------------------------------------------
// Point frames

struct PointFrame {
  std::vector<double> point;
  int alpha = -1;
  int epsilon = 1;
  TensorValue g;          // (0,2), symmetrized
  TensorValue g_inv;      // (2,0)
  TensorValue dg;         // [k][i][j] = d_k g_ij
  TensorValue J;          // (1,1), [i][j] = J^i_j
  TensorValue dJ;         // [k][i][j] = d_k J^i_j
  TensorValue gamma_g;    // Levi-Civita Gamma^k_ij
  TensorValue nabla_g_J;  // (nabla^g J)^k_ij
  double metric_asymmetry = 0.0;
  std::vector<std::string> warnings;

  std::size_t dim() const { return point.size(); }
  int alpha_epsilon() const { return alpha * epsilon; }
};

/// Covariant derivative of J along an arbitrary coefficient array Gamma:
/// (nabla J)^k_ij = d_i J^k_j + Gamma^k_im J^m_j - Gamma^m_ij J^k_m.
inline TensorValue covariant_derivative_J(const TensorValue& gamma, const TensorValue& J, const TensorValue& dJ) {
  const std::size_t n = J.dim();
  TensorValue out = bilinear::make(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = dJ(i, k, j);
        for (std::size_t m = 0; m < n; ++m) s += gamma(k, i, m) * J(m, j) - gamma(m, i, j) * J(k, m);
        out(k, i, j) = s;
      }
  return out;
}

/// (nabla g)_kij = d_k g_ij - Gamma^m_ki g_mj - Gamma^m_kj g_im.
inline TensorValue covariant_derivative_g(const TensorValue& gamma, const TensorValue& g, const TensorValue& dg) {
  const std::size_t n = g.dim();
  TensorValue out = bilinear::make_form(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = dg(k, i, j);
        for (std::size_t m = 0; m < n; ++m) s -= gamma(m, k, i) * g(m, j) + gamma(m, k, j) * g(i, m);
        out(k, i, j) = s;
      }
  return out;
}

/// Evaluates g, J, their first partials and the Levi-Civita data at `point`.
/// Throws DomainError from expression evaluation and SingularMetricError when
/// |det g| <= 1e-10.
inline PointFrame frame_at(const ManifoldSpec& spec, std::span<const double> point) {
  const std::size_t n = spec.dimension;
  if (point.size() != n) {
    throw SpecError("point has " + std::to_string(point.size()) + " coordinates, chart has " + std::to_string(n));
  }
  PointFrame f;
  f.point.assign(point.begin(), point.end());
  f.alpha = spec.alpha;
  f.epsilon = spec.epsilon;

  std::vector<std::vector<Dual>> graw(n), jraw(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      graw[i].push_back(spec.metric[i][j].evaluate(point));
      jraw[i].push_back(spec.J[i][j].evaluate(point));
    }

  f.g = TensorValue({Slot::Lower, Slot::Lower}, n);
  f.dg = TensorValue({Slot::Lower, Slot::Lower, Slot::Lower}, n);
  f.J = TensorValue({Slot::Upper, Slot::Lower}, n);
  f.dJ = TensorValue({Slot::Lower, Slot::Upper, Slot::Lower}, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      f.metric_asymmetry = std::max(f.metric_asymmetry, std::abs(graw[i][j].value - graw[j][i].value));
      f.g(i, j) = 0.5 * (graw[i][j].value + graw[j][i].value);
      f.J(i, j) = jraw[i][j].value;
      for (std::size_t k = 0; k < n; ++k) {
        f.dg(k, i, j) = 0.5 * (graw[i][j].partials[k] + graw[j][i].partials[k]);
        f.dJ(k, i, j) = jraw[i][j].partials[k];
      }
    }
  if (f.metric_asymmetry > kAsymmetryWarningThreshold) {
    f.warnings.push_back("metric is not symmetric as written (max asymmetry " + std::to_string(f.metric_asymmetry) +
                         "); using (g + g^T)/2");
  }

  const linalg::Matrix gm = linalg::to_matrix(f.g);
  const double det = linalg::determinant(gm);
  if (!(std::abs(det) > kDegenerateMetricThreshold)) {
    throw SingularMetricError("degenerate metric at point (|det g| = " + std::to_string(std::abs(det)) + ")");
  }
  f.g_inv = linalg::from_matrix(gm.partialPivLu().inverse(), {Slot::Upper, Slot::Upper});

  f.gamma_g = bilinear::make(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t m = 0; m < n; ++m) s += f.g_inv(k, m) * (f.dg(i, j, m) + f.dg(j, i, m) - f.dg(m, i, j));
        f.gamma_g(k, i, j) = 0.5 * s;
      }
  f.nabla_g_J = covariant_derivative_J(f.gamma_g, f.J, f.dJ);
  return f;
}

// ---------------------------------------------------------------------------
// Derived tensors

/// Phi_ij = J^m_i g_mj, i.e. Phi(X, Y) = g(JX, Y).
inline TensorValue fundamental_tensor(const PointFrame& f) {
  const std::size_t n = f.dim();
  TensorValue phi({Slot::Lower, Slot::Lower}, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t m = 0; m < n; ++m) s += f.J(m, i) * f.g(m, j);
      phi(i, j) = s;
    }
  return phi;
}

/// (nabla^g Phi)_ijk = g_mk (nabla^g J)^m_ij, i.e. g((nabla_X J)Y, Z).
inline TensorValue nabla_g_phi(const PointFrame& f) { return bilinear::lower(f.nabla_g_J, f.g); }

/// The four ways nabla^g J combines with J in a vector-valued bilinear form:
///   a1(X,Y) = (nabla_X J)JY    a2(X,Y) = (nabla_JX J)Y
///   a3(X,Y) = (nabla_Y J)JX    a4(X,Y) = (nabla_JY J)X
struct NablaJTerms {
  TensorValue a1, a2, a3, a4;
};

inline NablaJTerms nabla_j_terms(const TensorValue& D, const TensorValue& J) {
  const std::size_t n = J.dim();
  NablaJTerms t{bilinear::make(n), bilinear::make(n), {}, {}};
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
          s1 += D(k, i, m) * J(m, j);
          s2 += J(m, i) * D(k, m, j);
        }
        t.a1(k, i, j) = s1;
        t.a2(k, i, j) = s2;
      }
  t.a3 = bilinear::swap_args(t.a1);
  t.a4 = bilinear::swap_args(t.a2);
  return t;
}

inline NablaJTerms nabla_j_terms(const PointFrame& f) { return nabla_j_terms(f.nabla_g_J, f.J); }

/// N_J(X,Y) = (nabla_X J)JY + (nabla_JX J)Y - (nabla_Y J)JX - (nabla_JY J)X.
inline TensorValue nijenhuis(const PointFrame& f) {
  const auto t = nabla_j_terms(f);
  return t.a1 + t.a2 - t.a3 - t.a4;
}

/// Second Nijenhuis tensor:
/// (nabla_X J)JY + ae((nabla_JX J)Y + (nabla_Y J)JX) + (nabla_JY J)X.
inline TensorValue second_nijenhuis(const PointFrame& f) {
  const auto t = nabla_j_terms(f);
  return t.a1 + static_cast<double>(f.alpha_epsilon()) * (t.a2 + t.a3) + t.a4;
}

/// Nijenhuis tensor from partial derivatives of J alone (no connection):
/// N^k_ij = J^m_i d_m J^k_j - J^m_j d_m J^k_i - J^k_m (d_i J^m_j - d_j J^m_i).
inline TensorValue nijenhuis_bracket(const PointFrame& f) {
  const std::size_t n = f.dim();
  TensorValue out = bilinear::make(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
          s += f.J(m, i) * f.dJ(m, k, j) - f.J(m, j) * f.dJ(m, k, i);
          s -= f.J(k, m) * (f.dJ(i, m, j) - f.dJ(j, m, i));
        }
        out(k, i, j) = s;
      }
  return out;
}

}  // namespace aestruct
