#include <gtest/gtest.h>

#include "wishart/diff_operator.hpp"

using namespace wishart;
using namespace wishart::ops;

TEST(DiffOperator, CommutatorAndComposition) {
  const int m = 2;
  DiffOperator d1 = DiffOperator::d(m, 1);
  DiffOperator y = DiffOperator::scalar(m, L(1));
  EXPECT_EQ(d1 * y - y * d1, DiffOperator::scalar(m, RationalFunction(1)));
  // d (y d) = y d^2 + d
  EXPECT_EQ(d1 * (L(1) * d1), L(1) * DiffOperator::d(m, 1, 2) + d1);
  // Operators in different variables commute.
  DiffOperator dx = DiffOperator::d(m, 0);
  EXPECT_EQ(dx * (L(1) * d1), (L(1) * d1) * dx);
  EXPECT_EQ(P(m, 3, 1).order(), 2);
  EXPECT_EQ(Q(m, 5, 3, 2).order_in(2), 3);
  EXPECT_THROW(DiffOperator(2) + DiffOperator(3), std::invalid_argument);
}

TEST(DiffOperator, ClearedHasPolynomialCoefficients) {
  const int m = 2;
  RationalFunction w(Poly(1), Poly::var(1) - Poly::var(2));
  DiffOperator op = w * DiffOperator::d(m, 1) + RationalFunction(Poly(3), Poly::var(0)) * DiffOperator::d(m, 0);
  EXPECT_FALSE(op.is_polynomial());
  DiffOperator c = op.cleared();
  EXPECT_TRUE(c.is_polynomial());
  EXPECT_THROW(apply(op, LambdaSeries(2, 3)), std::invalid_argument);
}

TEST(DiffOperator, ApplyToMonomialSeries) {
  // (y d^2 + 2 d) y^3 = 6 y^2 + 6 y^2 = 12 y^2
  const int m = 1;
  DiffOperator op = L(1) * DiffOperator::d(m, 1, 2) + C(2) * DiffOperator::d(m, 1);
  LambdaSeries s = LambdaSeries::monomial(1, 5, {3});
  LambdaSeries r = apply(op, s);
  EXPECT_EQ(r.coefficient({2}), ExpPoly(12));
  EXPECT_EQ(r.size(), 1u);
  EXPECT_EQ(r.valid(0), 3);
  // x d_x on x^2 E (coefficient-wise) is 2 x^2 E - x^3 E.
  DiffOperator xdx = X() * DiffOperator::d(m, 0);
  LambdaSeries e = LambdaSeries::constant(1, 2, ExpPoly::monomial(1, 2, 1));
  EXPECT_EQ(apply(xdx, e).coefficient({0}), ExpPoly::monomial(2, 2, 1) - ExpPoly::monomial(1, 3, 1));
}

TEST(DiffOperator, GaugeTranslationIsConjugation) {
  // gauge(op) g = e^{-sum lambda} V^{-1} op(e^{sum lambda} V g), V = prod_{i<j}(lambda_i - lambda_j).
  const int m = 2;
  Poly v = vandermonde_poly(m);
  for (const DiffOperator& op : {theorem2(5, m), m2_mixed(), P(m, 3, 1) * Q(m, 4, 2, 2)}) {
    RationalFunction g(Poly::var(0) * Poly::var(1) + Poly::var(2, 2) + Poly(3));
    RationalFunction lhs = apply_exp_rational(gauge_translate(op), {}, g);
    RationalFunction rhs = apply_exp_rational(op, {0, 1, 1}, RationalFunction(v) * g) / RationalFunction(v);
    EXPECT_EQ(lhs, rhs) << op.to_string();
  }
}

TEST(Lclm, Examples) {
  const int m = 1;
  DiffOperator d = DiffOperator::d(m, 1);
  DiffOperator dm1 = d - DiffOperator::scalar(m, RationalFunction(1));
  DiffOperator l = lclm({d, dm1}, 1);
  EXPECT_EQ(l, DiffOperator::d(m, 1, 2) - d);
  EXPECT_TRUE(right_remainder(l, d, 1).is_zero());
  EXPECT_TRUE(right_remainder(l, dm1, 1).is_zero());
  EXPECT_FALSE(right_remainder(DiffOperator::d(m, 1, 2), dm1 * dm1, 1).is_zero());
  // LCLM of an operator with itself is itself (monic).
  DiffOperator p = P(m, 2, 1).substitute(0, Rational(3));
  EXPECT_EQ(lclm({p, p}, 1), make_monic(p, 1));
}

TEST(Lclm, MatchesOrderFiveOperator) {
  EXPECT_TRUE(lclm_matches_order5(4, Rational(2)));
  EXPECT_TRUE(lclm_matches_order5(5, Rational(1, 2)));
  EXPECT_TRUE(lclm_matches_order5(3, Rational(7, 3)));
}

TEST(Annihilators, ProductsOfOneVariableOperators) {
  for (auto [n, m] : {std::pair{3, 2}, std::pair{5, 2}, std::pair{4, 3}}) {
    VerifyReport r = verify_theorem1(n, m, m == 3 ? 6 : 8);
    EXPECT_TRUE(r.pass) << r.params;
    EXPECT_GE(r.safe_order, 3);
  }
  // A wrong operator leaves a residual.
  LambdaSeries r = build_R_series(4, 2, 6);
  LambdaSeries res = apply(P(2, 3, 1) * P(2, 3, 2), r);
  EXPECT_FALSE(res.is_zero());
}

TEST(Annihilators, SecondOrderAndEigenvalue) {
  for (auto [n, m] : {std::pair{3, 2}, std::pair{6, 2}, std::pair{5, 3}, std::pair{4, 1}}) {
    VerifyReport r = verify_theorem2(n, m, 6);
    EXPECT_TRUE(r.pass) << r.params;
  }
  LambdaSeries r = build_R_series(4, 2, 6);
  DiffOperator wrong = euler_part(4, 2) - DiffOperator::scalar(2, RationalFunction(euler_eigenvalue(4, 2) + 1));
  EXPECT_FALSE(apply(wrong, r).is_zero());
}

TEST(Annihilators, PrintedTwoVariableOperators) {
  for (int n : {3, 4, 6}) {
    VerifyReport r = verify_printed(n, 2, 8);
    EXPECT_TRUE(r.pass) << r.params;
    EXPECT_EQ(r.details.size(), 5u);
  }
}

TEST(Annihilators, ThreeVariableSumOperatorNeedsLambdaFactor) {
  for (int n : {3, 4}) {
    LambdaSeries r = build_R_series(n, 3, 6);
    EXPECT_TRUE(apply(m3_mixed(), r).is_zero());
    EXPECT_FALSE(apply(m3_sum(n, false), r).is_zero());
    LambdaSeries fixed = apply(m3_sum(n, true), r);
    EXPECT_TRUE(fixed.is_zero());
    EXPECT_GE(fixed.safe_order(), 2);
  }
}
