#include <gtest/gtest.h>

#include <vector>

#include "aestruct/rng.hpp"
#include "aestruct/tensor.hpp"

using namespace aestruct;

namespace {

const std::vector<Slot> kUL{Slot::Upper, Slot::Lower};
const std::vector<Slot> kLL{Slot::Lower, Slot::Lower};
const std::vector<Slot> kUU{Slot::Upper, Slot::Upper};
const std::vector<Slot> kLLL{Slot::Lower, Slot::Lower, Slot::Lower};

TensorValue rotation() { return TensorValue(kUL, 2, {0.0, -1.0, 1.0, 0.0}); }

TensorValue random_tensor(SplitMix64& rng, std::vector<Slot> valence, std::size_t n) {
  TensorValue t(std::move(valence), n);
  for (double& v : t.data()) v = rng.uniform(-1.0, 1.0);
  return t;
}

// Symmetric positive definite: A^T A + n Id.
TensorValue random_spd(SplitMix64& rng, std::size_t n) {
  const TensorValue a = random_tensor(rng, kLL, n);
  TensorValue g(kLL, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = i == j ? static_cast<double>(n) : 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(k, i) * a(k, j);
      g(i, j) = s;
    }
  return g;
}

TensorValue outer(const TensorValue& a, const TensorValue& b) {
  std::vector<Slot> v = a.valence();
  v.insert(v.end(), b.valence().begin(), b.valence().end());
  TensorValue out(v, a.dim());
  for (std::size_t i = 0; i < a.data().size(); ++i)
    for (std::size_t j = 0; j < b.data().size(); ++j) out.data()[i * b.data().size() + j] = a.data()[i] * b.data()[j];
  return out;
}

}  // namespace

TEST(Tensor, ShapeChecks) {
  EXPECT_THROW(TensorValue(kUL, 2, {1.0, 2.0, 3.0}), ValenceError);
  TensorValue t(kLLL, 3);
  EXPECT_EQ(t.data().size(), 27u);
  EXPECT_THROW(t(0, 1), ValenceError);
  EXPECT_THROW(TensorValue(kUL, 2) + TensorValue(kLL, 2), ValenceError);
  EXPECT_EQ(t.unflatten(5), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Contract, TraceOfRotationIsZero) {
  EXPECT_EQ(contract(rotation(), 0, 1)(), 0.0);
}

TEST(Contract, IdentityGivesDimension) {
  for (std::size_t n : {1u, 2u, 4u, 5u}) EXPECT_EQ(contract(TensorValue::identity(n), 0, 1)(), static_cast<double>(n));
}

TEST(Contract, TraceOfJSquared) {
  // (J o J)^a_d = J^a_b J^b_d, then trace = alpha * n = -2.
  const TensorValue jj = contract(outer(rotation(), rotation()), 1, 2);
  EXPECT_EQ(jj.valence(), kUL);
  EXPECT_EQ(contract(jj, 0, 1)(), -2.0);
}

TEST(Contract, Linear) {
  SplitMix64 rng(7);
  const std::vector<Slot> v{Slot::Upper, Slot::Lower, Slot::Lower};
  const TensorValue a = random_tensor(rng, v, 3), b = random_tensor(rng, v, 3);
  const TensorValue lhs = contract(2.5 * a - b, 0, 2);
  const TensorValue rhs = 2.5 * contract(a, 0, 2) - contract(b, 0, 2);
  EXPECT_LT(max_abs_difference(lhs, rhs), 1e-14);
  EXPECT_THROW(contract(a, 1, 2), ValenceError);
  EXPECT_THROW(contract(a, 0, 0), ValenceError);
}

TEST(LowerRaise, LoweringJWithIdentityGivesPhi) {
  // lower_index(J, 0, g)_{aj} = g_am J^m_j = Phi_ja with Phi(X,Y) = g(JX,Y).
  const TensorValue l = lower_index(rotation(), 0, TensorValue(kLL, 2, {1, 0, 0, 1}));
  EXPECT_EQ(l.valence(), kLL);
  EXPECT_EQ(l(1, 0), 1.0);   // Phi_01 = g(J d1, d2) = 1
  EXPECT_EQ(l(0, 1), -1.0);  // Phi_10 = -1
  EXPECT_EQ(l(0, 0), 0.0);
  EXPECT_EQ(l(1, 1), 0.0);
}

TEST(LowerRaise, IdentityMetricIsIdentityMap) {
  SplitMix64 rng(11);
  const TensorValue g(kLL, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  const TensorValue gi(kUU, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  const TensorValue t = random_tensor(rng, {Slot::Upper, Slot::Lower, Slot::Lower}, 3);
  const TensorValue l = lower_index(t, 0, g);
  EXPECT_EQ(std::vector<double>(l.data().begin(), l.data().end()), std::vector<double>(t.data().begin(), t.data().end()));
  const TensorValue r = raise_index(l, 0, gi);
  EXPECT_EQ(r.valence(), t.valence());
  EXPECT_EQ(max_abs_difference(r, t), 0.0);
}

TEST(LowerRaise, RoundTripWithRandomSpdMetric) {
  SplitMix64 rng(13);
  for (std::size_t n : {2u, 3u, 4u}) {
    const TensorValue g = random_spd(rng, n);
    const TensorValue gi = linalg::from_matrix(linalg::inverse(linalg::to_matrix(g)), kUU);
    const TensorValue t = random_tensor(rng, {Slot::Upper, Slot::Lower, Slot::Lower}, n);
    EXPECT_LT(max_abs_difference(raise_index(lower_index(t, 0, g), 0, gi), t), 1e-12);
  }
}

TEST(LowerRaise, DiagonalMetricFlipsSigns) {
  const TensorValue g(kLL, 2, {1, 0, 0, -1});
  TensorValue e11(kUU, 2);
  e11(1, 1) = 1.0;
  const TensorValue once = lower_index(e11, 0, g);
  EXPECT_EQ(once(1, 1), -1.0);
  const TensorValue twice = lower_index(once, 1, g);
  EXPECT_EQ(twice(1, 1), 1.0);
  EXPECT_EQ(twice.valence(), kLL);
  TensorValue e00(kUU, 2);
  e00(0, 0) = 1.0;
  EXPECT_EQ(lower_index(lower_index(e00, 0, g), 1, g)(0, 0), 1.0);
}

TEST(LowerRaise, Errors) {
  const TensorValue g(kLL, 2, {1, 0, 0, 1});
  EXPECT_THROW(lower_index(g, 0, g), ValenceError);
  EXPECT_THROW(lower_index(rotation(), 0, TensorValue(kLL, 2, {1, 1, 1, 1})), SingularMetricError);
  EXPECT_THROW(raise_index(rotation(), 0, TensorValue(kUU, 2, {1, 0, 0, 1})), ValenceError);
  EXPECT_THROW(lower_index(rotation(), 0, TensorValue(kUU, 2, {1, 0, 0, 1})), ValenceError);
}

TEST(Antisymmetry, ZeroTensor) { EXPECT_EQ(antisymmetry_residual(TensorValue(kLLL, 3)), 0.0); }

TEST(Antisymmetry, VolumeForm) {
  TensorValue t(kLLL, 3);
  const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  for (int p = 0; p < 6; ++p) t(perms[p][0], perms[p][1], perms[p][2]) = p < 3 ? 1.0 : -1.0;
  EXPECT_EQ(antisymmetry_residual(t), 0.0);
}

TEST(Antisymmetry, SymmetricInFirstTwoSlots) {
  SplitMix64 rng(17);
  TensorValue t(kLLL, 3);
  double m = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        const double v = rng.uniform(-1.0, 1.0);
        t(i, j, k) = t(j, i, k) = v;
        m = std::max(m, std::abs(v));
      }
  EXPECT_DOUBLE_EQ(antisymmetry_residual(t), 2.0 * m);
}

TEST(Antisymmetry, InvariantUnderSignedPermutation) {
  SplitMix64 rng(19);
  const TensorValue t = random_tensor(rng, kLLL, 3);
  TensorValue p(kLLL, 3);  // p(i,j,k) = -t(j,i,k)
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) p(i, j, k) = -t(j, i, k);
  EXPECT_DOUBLE_EQ(antisymmetry_residual(p), antisymmetry_residual(t));
  EXPECT_THROW(antisymmetry_residual(rotation()), ValenceError);
}
