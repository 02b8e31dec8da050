#pragma once

// Scalar expression language for chart component fields.
//
// Grammar (lowest to highest precedence):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | coordinate | pi | e | func '(' expr ')' | '(' expr ')'
//   func    := sin cos tan sinh cosh tanh exp log sqrt abs
//
// Unary minus binds looser than '^', so "-x^2" is -(x^2).

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "aestruct/dual.hpp"
#include "aestruct/error.hpp"

namespace aestruct {

enum class NodeKind { Number, Coordinate, Constant, Negate, Add, Sub, Mul, Div, Pow, Call };

enum class Function { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs };

enum class NamedConstant { Pi, E };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;      // Number
  std::size_t index = 0;    // Coordinate index, Function or NamedConstant id
  std::vector<NodePtr> children;
};

inline bool operator==(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::Number:
      if (a.number != b.number) return false;
      break;
    case NodeKind::Coordinate:
    case NodeKind::Constant:
    case NodeKind::Call:
      if (a.index != b.index) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!(*a.children[i] == *b.children[i])) return false;
  }
  return true;
}

namespace detail {

inline constexpr std::array<std::string_view, 10> kFunctionNames = {
    "sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "abs"};
inline constexpr std::array<std::string_view, 2> kConstantNames = {"pi", "e"};

inline std::optional<std::size_t> lookup(std::span<const std::string_view> names,
                                         std::string_view id) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == id) return i;
  }
  return std::nullopt;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

}  // namespace detail

/// Immutable parsed expression bound to an ordered list of chart coordinates.
class Expression {
 public:
  Expression() = default;
  Expression(NodePtr root, std::vector<std::string> coordinates)
      : root_(std::move(root)), coordinates_(std::move(coordinates)) {}

  const Node& root() const { return *root_; }
  const std::vector<std::string>& coordinates() const { return coordinates_; }
  std::size_t dimension() const { return coordinates_.size(); }
  bool empty() const { return !root_; }

  /// Canonical printer: fully parenthesized binary and unary nodes, shortest
  /// round-trip number literals. Re-parsing the output yields an identical AST.
  std::string to_string() const { return root_ ? print(*root_) : std::string(); }

  /// Value and exact first partials at `point` (length = chart dimension).
  Dual evaluate(std::span<const double> point) const {
    check_point(point);
    return eval_dual(*root_, point);
  }

  /// Plain real evaluation with the same domain rules as evaluate().
  double evaluate_real(std::span<const double> point) const {
    check_point(point);
    return eval_real(*root_, point);
  }

  friend bool operator==(const Expression& a, const Expression& b) {
    if (a.coordinates_ != b.coordinates_) return false;
    if (!a.root_ || !b.root_) return !a.root_ && !b.root_;
    return *a.root_ == *b.root_;
  }

  std::string print(const Node& node) const {
    switch (node.kind) {
      case NodeKind::Number:
        return detail::format_number(node.number);
      case NodeKind::Coordinate:
        return coordinates_[node.index];
      case NodeKind::Constant:
        return std::string(detail::kConstantNames[node.index]);
      case NodeKind::Negate:
        return "(-" + print(*node.children[0]) + ")";
      case NodeKind::Call:
        return std::string(detail::kFunctionNames[node.index]) + "(" + print(*node.children[0]) + ")";
      default:
        break;
    }
    const char* op = " + ";
    switch (node.kind) {
      case NodeKind::Sub: op = " - "; break;
      case NodeKind::Mul: op = " * "; break;
      case NodeKind::Div: op = " / "; break;
      case NodeKind::Pow: op = " ^ "; break;
      default: break;
    }
    return "(" + print(*node.children[0]) + op + print(*node.children[1]) + ")";
  }

 private:
  void check_point(std::span<const double> point) const {
    if (point.size() != coordinates_.size()) {
      throw Error("point has " + std::to_string(point.size()) + " components, chart dimension is " +
                  std::to_string(coordinates_.size()));
    }
  }

  static std::optional<long long> constant_integer(double v) {
    if (std::nearbyint(v) == v && std::abs(v) <= 1024.0) return static_cast<long long>(v);
    return std::nullopt;
  }

  Dual eval_dual(const Node& node, std::span<const double> p) const {
    const std::size_t n = p.size();
    switch (node.kind) {
      case NodeKind::Number:
        return Dual(node.number, n);
      case NodeKind::Coordinate:
        return Dual::variable(p[node.index], n, node.index);
      case NodeKind::Constant:
        return Dual(node.index == 0 ? std::numbers::pi : std::numbers::e, n);
      case NodeKind::Negate:
        return -eval_dual(*node.children[0], p);
      case NodeKind::Add:
        return eval_dual(*node.children[0], p) + eval_dual(*node.children[1], p);
      case NodeKind::Sub:
        return eval_dual(*node.children[0], p) - eval_dual(*node.children[1], p);
      case NodeKind::Mul:
        return eval_dual(*node.children[0], p) * eval_dual(*node.children[1], p);
      case NodeKind::Div: {
        Dual num = eval_dual(*node.children[0], p);
        Dual den = eval_dual(*node.children[1], p);
        if (den.value == 0.0) throw DomainError(print(node), "division by zero");
        return num / den;
      }
      case NodeKind::Pow: {
        Dual base = eval_dual(*node.children[0], p);
        Dual expo = eval_dual(*node.children[1], p);
        if (is_constant_subtree(*node.children[1])) {
          if (auto k = constant_integer(expo.value)) {
            if (*k >= 0) return ipow(base, static_cast<unsigned long long>(*k));
            if (base.value == 0.0) throw DomainError(print(node), "zero raised to a negative power");
            return Dual(1.0, n) / ipow(base, static_cast<unsigned long long>(-*k));
          }
        }
        if (!(base.value > 0.0)) {
          throw DomainError(print(node), "non-integer exponent requires a positive base");
        }
        const double v = std::pow(base.value, expo.value);
        const double lg = std::log(base.value);
        Dual r(v, n);
        for (std::size_t i = 0; i < n; ++i) {
          r.partials[i] = v * (expo.partials[i] * lg + expo.value * base.partials[i] / base.value);
        }
        return r;
      }
      case NodeKind::Call:
        return apply_dual(node, eval_dual(*node.children[0], p));
    }
    return Dual(0.0, n);
  }

  Dual apply_dual(const Node& node, const Dual& x) const {
    const double v = x.value;
    switch (static_cast<Function>(node.index)) {
      case Function::Sin: return chain(x, std::sin(v), std::cos(v));
      case Function::Cos: return chain(x, std::cos(v), -std::sin(v));
      case Function::Tan: {
        const double c = std::cos(v);
        return chain(x, std::tan(v), 1.0 / (c * c));
      }
      case Function::Sinh: return chain(x, std::sinh(v), std::cosh(v));
      case Function::Cosh: return chain(x, std::cosh(v), std::sinh(v));
      case Function::Tanh: {
        const double t = std::tanh(v);
        return chain(x, t, 1.0 - t * t);
      }
      case Function::Exp: {
        const double ev = std::exp(v);
        return chain(x, ev, ev);
      }
      case Function::Log:
        if (!(v > 0.0)) throw DomainError(print(node), "logarithm of a nonpositive value");
        return chain(x, std::log(v), 1.0 / v);
      case Function::Sqrt:
        if (v < 0.0) throw DomainError(print(node), "square root of a negative value");
        if (v == 0.0) {
          if (!x.is_constant()) throw DomainError(print(node), "square root is not differentiable at 0");
          return Dual(0.0, x.dimension());
        }
        return chain(x, std::sqrt(v), 0.5 / std::sqrt(v));
      case Function::Abs:
        if (v == 0.0) {
          if (!x.is_constant()) throw DomainError(print(node), "abs is not differentiable at 0");
          return Dual(0.0, x.dimension());
        }
        return chain(x, std::abs(v), v > 0.0 ? 1.0 : -1.0);
    }
    return x;
  }

  double eval_real(const Node& node, std::span<const double> p) const {
    switch (node.kind) {
      case NodeKind::Number: return node.number;
      case NodeKind::Coordinate: return p[node.index];
      case NodeKind::Constant: return node.index == 0 ? std::numbers::pi : std::numbers::e;
      case NodeKind::Negate: return -eval_real(*node.children[0], p);
      case NodeKind::Add: return eval_real(*node.children[0], p) + eval_real(*node.children[1], p);
      case NodeKind::Sub: return eval_real(*node.children[0], p) - eval_real(*node.children[1], p);
      case NodeKind::Mul: return eval_real(*node.children[0], p) * eval_real(*node.children[1], p);
      case NodeKind::Div: {
        const double num = eval_real(*node.children[0], p);
        const double den = eval_real(*node.children[1], p);
        if (den == 0.0) throw DomainError(print(node), "division by zero");
        return num / den;
      }
      case NodeKind::Pow: {
        const double base = eval_real(*node.children[0], p);
        const double expo = eval_real(*node.children[1], p);
        if (auto k = constant_integer(expo); k && is_constant_subtree(*node.children[1])) {
          if (*k < 0 && base == 0.0) throw DomainError(print(node), "zero raised to a negative power");
          const double r = ipow(Dual(base, 0), static_cast<unsigned long long>(std::abs(*k))).value;
          return *k < 0 ? 1.0 / r : r;
        }
        if (!(base > 0.0)) throw DomainError(print(node), "non-integer exponent requires a positive base");
        return std::pow(base, expo);
      }
      case NodeKind::Call: {
        const double v = eval_real(*node.children[0], p);
        switch (static_cast<Function>(node.index)) {
          case Function::Sin: return std::sin(v);
          case Function::Cos: return std::cos(v);
          case Function::Tan: return std::tan(v);
          case Function::Sinh: return std::sinh(v);
          case Function::Cosh: return std::cosh(v);
          case Function::Tanh: return std::tanh(v);
          case Function::Exp: return std::exp(v);
          case Function::Log:
            if (!(v > 0.0)) throw DomainError(print(node), "logarithm of a nonpositive value");
            return std::log(v);
          case Function::Sqrt:
            if (v < 0.0) throw DomainError(print(node), "square root of a negative value");
            return std::sqrt(v);
          case Function::Abs: return std::abs(v);
        }
      }
    }
    return 0.0;
  }

  static bool is_constant_subtree(const Node& node) {
    if (node.kind == NodeKind::Coordinate) return false;
    for (const auto& c : node.children) {
      if (!is_constant_subtree(*c)) return false;
    }
    return true;
  }

  NodePtr root_;
  std::vector<std::string> coordinates_;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& coords)
      : text_(text), coords_(coords) {}

  NodePtr parse() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(pos_, "empty expression");
    NodePtr root = parse_expr();
    skip_space();
    if (pos_ < text_.size()) {
      throw ParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    }
    return root;
  }

 private:
  static constexpr int kMaxDepth = 512;

  static NodePtr make(NodeKind kind, std::vector<NodePtr> children = {}, std::size_t index = 0,
                      double number = 0.0) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->index = index;
    n->number = number;
    n->children = std::move(children);
    return n;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(pos_, std::string("expected '") + c + "' before end of input");
      throw ParseError(pos_, std::string("expected '") + c + "' but found '" + text_[pos_] + "'");
    }
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxDepth) throw ParseError(parser.pos_, "expression nested too deeply");
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  NodePtr parse_expr() {
    DepthGuard guard(*this);
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make(NodeKind::Add, {lhs, parse_term()});
      } else if (accept('-')) {
        lhs = make(NodeKind::Sub, {lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(NodeKind::Mul, {lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make(NodeKind::Div, {lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    DepthGuard guard(*this);
    if (accept('-')) return make(NodeKind::Negate, {parse_unary()});
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make(NodeKind::Pow, {base, parse_unary()});
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++count;
      }
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError(start, "malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // "2e" is 2 followed by the constant e
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) throw ParseError(start, "number out of range");
    if (ec != std::errc() || ptr != last) throw ParseError(start, "malformed number");
    return make(NodeKind::Number, {}, 0, value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = text_.substr(start, pos_ - start);

    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == id) {
        if (accept('(')) throw ParseError(start, "coordinate '" + std::string(id) + "' is not a function");
        return make(NodeKind::Coordinate, {}, i);
      }
    }
    if (auto k = lookup(kConstantNames, id)) {
      if (accept('(')) throw ParseError(start, "constant '" + std::string(id) + "' takes no arguments");
      return make(NodeKind::Constant, {}, *k);
    }
    if (auto f = lookup(kFunctionNames, id)) {
      skip_space();
      if (!accept('(')) {
        throw ParseError(start, "function '" + std::string(id) + "' expects exactly one argument");
      }
      NodePtr arg = parse_expr();
      if (accept(',')) {
        throw ParseError(start, "function '" + std::string(id) + "' expects exactly one argument");
      }
      expect(')');
      return make(NodeKind::Call, {arg}, *f);
    }
    throw ParseError(start, "unknown identifier '" + std::string(id) + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& coords_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace detail

/// Checks that `coordinates` is a nonempty list of distinct identifiers that do
/// not shadow a function or named constant.
inline void validate_coordinates(const std::vector<std::string>& coordinates) {
  if (coordinates.empty()) throw SpecError("coordinate list is empty");
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    const auto& c = coordinates[i];
    if (!detail::is_identifier(c)) throw SpecError("invalid coordinate name '" + c + "'");
    if (detail::lookup(detail::kFunctionNames, c) || detail::lookup(detail::kConstantNames, c)) {
      throw SpecError("coordinate name '" + c + "' is reserved");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (coordinates[j] == c) throw SpecError("duplicate coordinate name '" + c + "'");
    }
  }
}

inline Expression parse_expression(std::string_view text, std::vector<std::string> coordinates) {
  validate_coordinates(coordinates);
  detail::Parser parser(text, coordinates);
  NodePtr root = parser.parse();
  return Expression(std::move(root), std::move(coordinates));
}

}  // namespace aestruct
