#include <gtest/gtest.h>

#include <string>

#include "aestruct/catalog.hpp"
#include "aestruct/classify.hpp"
#include "oracles.hpp"

using namespace aestruct;

TEST(Classify, FlatKahlerAllHold) {
  const auto r = classify(catalog_spec("flat_kahler"));
  for (const auto* p : r.predicates()) {
    EXPECT_TRUE(p->holds) << p->name;
    EXPECT_EQ(p->max_residual, 0.0) << p->name;
    EXPECT_EQ(p->samples, 64u);
  }
  EXPECT_TRUE(r.consistent());
}

TEST(Classify, Hermitian2dIsKahler) {
  const ManifoldSpec s = catalog_spec("hermitian2d");
  const auto r = classify(s);
  EXPECT_TRUE(r.kahler.holds);
  EXPECT_TRUE(r.quasi_kahler.holds);
  EXPECT_TRUE(r.nearly_kahler.holds);
  EXPECT_TRUE(r.integrable.holds);
  for (const auto& p : sample_points(s.domain, 16, 3)) EXPECT_LT(oracle::max_abs(oracle::nabla_j(s, p)), 1e-8);
}

TEST(Classify, Hermitian4dNonIntegrable) {
  const auto r = classify(catalog_spec("hermitian4d"));
  EXPECT_FALSE(r.integrable.holds);
  EXPECT_FALSE(r.kahler.holds);
  const auto N0 = oracle::nijenhuis_bracket(catalog_spec("hermitian4d"), std::vector<double>(4, 0.0));
  EXPECT_GE(integrability_residual(frame_at(catalog_spec("hermitian4d"), std::vector<double>(4, 0.0))),
            std::abs(N0(0, 0, 2)) - 1e-8);
  EXPECT_TRUE(r.consistent());
}

TEST(Classify, NearlyKahlerOnlyForMinusSign) {
  EXPECT_FALSE(classify(catalog_spec("flat_norden")).nearly_kahler.applicable);
  EXPECT_FALSE(classify(catalog_spec("flat_norden")).nearly_kahler.holds);
  EXPECT_TRUE(classify(catalog_spec("flat_para_kahler")).nearly_kahler.applicable);
}

TEST(Classify, Norden2dNotQuasiKahler) {
  // alpha eps = +1 there; the cyclic-sum definition and the second Nijenhuis test must agree.
  const auto r = classify(catalog_spec("norden2d"));
  EXPECT_FALSE(r.quasi_kahler.holds);
  EXPECT_GT(r.second_nijenhuis_residual, 1e-8);
  EXPECT_TRUE(r.integrable.holds);
  EXPECT_FALSE(r.kahler.holds);
}

TEST(Classify, ImplicationLatticeOnCatalog) {
  for (const auto& e : kCatalog) {
    const auto r = classify(load_spec(e.json));
    EXPECT_TRUE(r.consistent()) << e.name;
    EXPECT_EQ(r.implications.size(), 4u);
    EXPECT_EQ(r.quasi_kahler.holds, r.second_nijenhuis_residual < r.tol) << e.name;
  }
}

TEST(Classify, ImplicationChecksFlagViolations) {
  ClassificationReport r;
  r.kahler.holds = true;
  r.quasi_kahler.holds = false;
  r.integrable.holds = true;
  auto imp = implication_checks(r);
  EXPECT_FALSE(imp[0].consistent);
  EXPECT_TRUE(imp[1].consistent);
  r.kahler.holds = false;
  r.quasi_kahler.holds = true;
  imp = implication_checks(r);
  EXPECT_FALSE(imp[3].consistent);
}

TEST(Classify, IntegrabilityConditionPairsWithNijenhuis) {
  for (const auto& e : kCatalog) {
    const ManifoldSpec s = load_spec(e.json);
    for (const auto& p : sample_points(s.domain, 8, 99)) {
      const auto f = frame_at(s, p);
      EXPECT_EQ(integrability_residual(f) < 1e-8, integrability_condition_residual(f) < 1e-8) << e.name;
    }
  }
}

TEST(Classify, PropagatesEvaluationErrors) {
  ManifoldSpec s = catalog_spec("hermitian2d");
  s.domain[0] = {-3.0, -2.0};  // 1/(1 + x1) stays finite but sqrt(x1) does not
  s.metric[0][0] = parse_expression("sqrt(x1)", s.coordinates);
  EXPECT_THROW(classify(s, 8), DomainError);
}
