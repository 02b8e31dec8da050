#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "aestruct/expr.hpp"
#include "aestruct/rng.hpp"
#include "oracles.hpp"

using namespace aestruct;

namespace {

const std::vector<std::string> kXY{"x1", "x2"};

const Node& child(const Node& n, std::size_t i) { return *n.children.at(i); }

struct Term {
  double coeff;
  std::vector<int> powers;
};

struct Poly {
  std::vector<Term> terms;
  std::string text;

  double value(const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& t : terms) {
      double v = t.coeff;
      for (std::size_t i = 0; i < x.size(); ++i) v *= std::pow(x[i], t.powers[i]);
      s += v;
    }
    return s;
  }

  double partial(const std::vector<double>& x, std::size_t k) const {
    double s = 0.0;
    for (const auto& t : terms) {
      if (t.powers[k] == 0) continue;
      double v = t.coeff * t.powers[k];
      for (std::size_t i = 0; i < x.size(); ++i) v *= std::pow(x[i], i == k ? t.powers[i] - 1 : t.powers[i]);
      s += v;
    }
    return s;
  }
};

// Random polynomial of total degree <= 4, written with a mix of ^, * and
// parenthesized products so the parser sees varied shapes.
Poly random_poly(SplitMix64& rng, std::size_t nvars) {
  Poly p;
  const int nterms = 1 + static_cast<int>(rng.next() % 5);
  for (int t = 0; t < nterms; ++t) {
    Term term{std::round(rng.uniform(-5.0, 5.0) * 100.0) / 100.0, std::vector<int>(nvars, 0)};
    int budget = static_cast<int>(rng.next() % 5);
    while (budget > 0) {
      const std::size_t v = rng.next() % nvars;
      const int e = 1 + static_cast<int>(rng.next() % budget);
      term.powers[v] += e;
      budget -= e;
    }
    std::string s = "(" + std::to_string(term.coeff) + ")";
    for (std::size_t i = 0; i < nvars; ++i) {
      if (term.powers[i] == 0) continue;
      const std::string var = "x" + std::to_string(i + 1);
      if (term.powers[i] == 1) {
        s += " * " + var;
      } else if (rng.next() % 2 == 0) {
        s += " * " + var + "^" + std::to_string(term.powers[i]);
      } else {
        std::string prod = var;
        for (int r = 1; r < term.powers[i]; ++r) prod += "*" + var;
        s += " * (" + prod + ")";
      }
    }
    p.text += (t == 0 ? "" : (rng.next() % 2 == 0 ? " + " : " - -")) + s;
    p.terms.push_back(term);
  }
  return p;
}

}  // namespace

TEST(Parse, ProductOfPowerAndCall) {
  const auto e = parse_expression("x1^2 * sin(x2)", kXY);
  const Node& r = e.root();
  ASSERT_EQ(r.kind, NodeKind::Mul);
  EXPECT_EQ(child(r, 0).kind, NodeKind::Pow);
  EXPECT_EQ(child(child(r, 0), 0).kind, NodeKind::Coordinate);
  EXPECT_EQ(child(child(r, 0), 1).number, 2.0);
  EXPECT_EQ(child(r, 1).kind, NodeKind::Call);
  EXPECT_EQ(child(r, 1).index, static_cast<std::size_t>(Function::Sin));
}

TEST(Parse, NegationDivisionConstant) {
  const auto e = parse_expression("-(x1)/0.5 + pi", {"x1"});
  const Node& r = e.root();
  ASSERT_EQ(r.kind, NodeKind::Add);
  const Node& div = child(r, 0);
  ASSERT_EQ(div.kind, NodeKind::Div);
  EXPECT_EQ(child(div, 0).kind, NodeKind::Negate);
  EXPECT_EQ(child(div, 1).number, 0.5);
  EXPECT_EQ(child(r, 1).kind, NodeKind::Constant);
  EXPECT_EQ(child(r, 1).index, static_cast<std::size_t>(NamedConstant::Pi));
}

TEST(Parse, UnknownIdentifier) {
  try {
    parse_expression("x3 + 1", kXY);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 0u);
    EXPECT_NE(std::string(e.what()).find("unknown identifier 'x3'"), std::string::npos);
  }
}

TEST(Parse, Precedence) {
  const auto e = parse_expression("a + b * c ^ d", {"a", "b", "c", "d"});
  EXPECT_EQ(e.to_string(), "(a + (b * (c ^ d)))");
  EXPECT_EQ(parse_expression("a ^ b ^ c", {"a", "b", "c"}).to_string(), "(a ^ (b ^ c))");
  EXPECT_EQ(parse_expression("-a^2", {"a"}).to_string(), "(-(a ^ 2))");
  EXPECT_EQ(parse_expression("a - b - c", {"a", "b", "c"}).to_string(), "((a - b) - c)");
}

TEST(Parse, CanonicalFormRoundTrips) {
  for (const char* text : {"x1^2 * sin(x2)", "-(x1)/0.5 + pi", "exp(x1)*x2 - 3e-2", "1/(1 + x1)", "-(1 + x1)^2"}) {
    const auto e = parse_expression(text, kXY);
    EXPECT_EQ(parse_expression(e.to_string(), kXY), e) << text;
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_expression("", kXY), ParseError);
  EXPECT_THROW(parse_expression("x1 +", kXY), ParseError);
  EXPECT_THROW(parse_expression("(x1", kXY), ParseError);
  EXPECT_THROW(parse_expression("sin x1", kXY), ParseError);
  EXPECT_THROW(parse_expression("x1(2)", kXY), ParseError);
  EXPECT_THROW(parse_expression("1..2", kXY), ParseError);
  EXPECT_THROW(parse_expression("x1 $ 2", kXY), ParseError);
  EXPECT_THROW(parse_expression("x1", {"x1", "x1"}), SpecError);
  EXPECT_THROW(parse_expression("x1", {"sin"}), SpecError);
}

TEST(Evaluate, ExampleValues) {
  const auto e = parse_expression("x1^2*sin(x2)", kXY);
  const std::vector<double> p{2.0, 0.0};
  const Dual d = e.evaluate(p);
  EXPECT_EQ(d.value, 0.0);
  EXPECT_DOUBLE_EQ(d.partials[0], 0.0);
  EXPECT_DOUBLE_EQ(d.partials[1], 4.0);

  const Dual c = parse_expression("3.5", kXY).evaluate(p);
  EXPECT_EQ(c.value, 3.5);
  EXPECT_EQ(c.partials, (std::vector<double>{0.0, 0.0}));
}

TEST(Evaluate, ExpTimesCoordinateAgainstFiniteDifferences) {
  const auto e = parse_expression("exp(x1)*x2", kXY);
  const std::vector<double> p{0.0, 1.0};
  const Dual d = e.evaluate(p);
  EXPECT_DOUBLE_EQ(d.value, 1.0);
  for (std::size_t k = 0; k < 2; ++k) {
    const double fd = oracle::central_difference([&](const auto& x) { return e.evaluate_real(x); }, p, k, 1e-6);
    EXPECT_NEAR(d.partials[k], 1.0, 1e-15);
    EXPECT_LT(std::abs(d.partials[k] - fd) / std::max(1.0, std::abs(fd)), 1e-6);
  }
}

TEST(Evaluate, DomainErrors) {
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_THROW(parse_expression("log(x1)", kXY).evaluate(zero), DomainError);
  EXPECT_THROW(parse_expression("1/x1", kXY).evaluate(zero), DomainError);
  EXPECT_THROW(parse_expression("x1^(-1)", kXY).evaluate_real(zero), DomainError);
  EXPECT_THROW(parse_expression("sqrt(x1 - 1)", kXY).evaluate(zero), DomainError);
  EXPECT_THROW(parse_expression("x1", kXY).evaluate(std::vector<double>{1.0}), Error);
  try {
    parse_expression("x2 + log(x1)", kXY).evaluate(zero);
  } catch (const DomainError& e) {
    EXPECT_EQ(e.node(), "log(x1)");
  }
}

TEST(Evaluate, FunctionsAgainstFiniteDifferences) {
  const std::vector<std::string> texts{"sin(x1)*cos(x2)", "tan(x1 / 3)", "sinh(x1) + cosh(x2)", "tanh(x1 * x2)",
                                       "log(2 + x1^2)", "sqrt(3 + x2)", "abs(x1 - 5)", "x1^x2", "(1 + x1^2)^(-2)",
                                       "e^x1 / (2 - x2)", "pi * x1 / x2"};
  const std::vector<double> p{0.37, 1.21};
  for (const auto& t : texts) {
    const auto e = parse_expression(t, kXY);
    const Dual d = e.evaluate(p);
    EXPECT_DOUBLE_EQ(d.value, e.evaluate_real(p)) << t;
    for (std::size_t k = 0; k < 2; ++k) {
      const double fd = oracle::central_difference([&](const auto& x) { return e.evaluate_real(x); }, p, k, 1e-6);
      EXPECT_LT(std::abs(d.partials[k] - fd) / std::max(1.0, std::abs(fd)), 1e-6) << t << " d/dx" << k + 1;
    }
  }
}

// 200 random polynomials x 10 points: dual partials vs central differences
// (step 1e-6) and vs exact polynomial derivatives.
TEST(Evaluate, RandomPolynomialsMatchFiniteDifferences) {
  SplitMix64 rng(20240611);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t nvars = 1 + rng.next() % 4;
    std::vector<std::string> coords;
    for (std::size_t i = 0; i < nvars; ++i) coords.push_back("x" + std::to_string(i + 1));
    const Poly poly = random_poly(rng, nvars);
    const auto e = parse_expression(poly.text, coords);
    for (int pt = 0; pt < 10; ++pt) {
      std::vector<double> x(nvars);
      for (auto& v : x) v = rng.uniform(-2.0, 2.0);
      const Dual d = e.evaluate(x);
      ASSERT_NEAR(d.value, poly.value(x), 1e-9 * std::max(1.0, std::abs(poly.value(x)))) << poly.text;
      for (std::size_t k = 0; k < nvars; ++k) {
        const double fd = oracle::central_difference([&](const auto& y) { return e.evaluate_real(y); }, x, k, 1e-6);
        const double exact = poly.partial(x, k);
        EXPECT_LT(std::abs(d.partials[k] - fd) / std::max(1.0, std::abs(fd)), 1e-6) << poly.text;
        EXPECT_NEAR(d.partials[k], exact, 1e-9 * std::max(1.0, std::abs(exact))) << poly.text;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 2000);
}

TEST(Evaluate, Deterministic) {
  const auto e = parse_expression("sin(x1)^3 / (1 + x2^2) - exp(-x1*x2)", kXY);
  const std::vector<double> p{0.123, -0.456};
  const Dual a = e.evaluate(p), b = e.evaluate(p);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.partials, b.partials);
  EXPECT_EQ(e.evaluate_real(p), e.evaluate_real(p));
}
