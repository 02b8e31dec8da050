#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aestruct {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax, unknown identifier or arity problem while parsing an expression.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at position " + std::to_string(position) + ": " + message),
        position_(position),
        detail_(message) {}

  std::size_t position() const { return position_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t position_;
  std::string detail_;
};

/// Evaluation left the domain of a function (log of nonpositive, x/0, 0^-n, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& node, const std::string& message)
      : Error("domain error in '" + node + "': " + message), node_(node) {}

  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

/// Malformed manifold description (JSON shape, matrix sizes, alpha/epsilon...).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// |det g| fell below the nondegeneracy threshold.
class SingularMetricError : public Error {
 public:
  using Error::Error;
};

/// A tensor operation received slots of the wrong variance or count.
class ValenceError : public Error {
 public:
  using Error::Error;
};

/// A connection that only exists for one sign of alpha*epsilon was requested
/// for the other sign.
class SignatureError : public Error {
 public:
  using Error::Error;
};

/// No natural connection with totally skew-symmetric torsion exists at the point.
class SkewNonexistenceError : public Error {
 public:
  explicit SkewNonexistenceError(double residual)
      : Error("no natural connection with totally skew-symmetric torsion at this point "
              "(existence residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A base connection required to be torsion-free is not.
class BaseTorsionError : public Error {
 public:
  explicit BaseTorsionError(double torsion)
      : Error("base connection is not torsion-free (max |T| = " + std::to_string(torsion) + ")"),
        torsion_(torsion) {}

  double torsion() const { return torsion_; }

 private:
  double torsion_;
};

}  // namespace aestruct
