#include <gtest/gtest.h>

#include "wishart/poly.hpp"

using wishart::Poly;
using wishart::Rational;
using wishart::RationalFunction;

namespace {
const Poly X = Poly::var(0);
const Poly Y = Poly::var(1);
const Poly Z = Poly::var(2);
}  // namespace

TEST(Poly, ArithmeticAndDerivative) {
  Poly p = (X + Y) * (X - Y);
  EXPECT_EQ(p, X * X - Y * Y);
  EXPECT_EQ(p.derivative(0), 2 * X);
  EXPECT_EQ(p.degree(1), 2);
  EXPECT_EQ(p.substitute(0, 3), Poly(9) - Y * Y);
  EXPECT_EQ(X.rename({2}), Z);
  EXPECT_DOUBLE_EQ(p.eval(std::vector<double>{3.0, 1.0}), 8.0);
}

TEST(Poly, ExactDivision) {
  Poly a = (X * Y + 3) * (Z - X + 1);
  EXPECT_EQ(wishart::exact_divide(a, Z - X + 1), X * Y + 3);
  EXPECT_THROW(wishart::exact_divide(a, X + 2), std::domain_error);
}

TEST(Poly, GcdRecoversCommonFactor) {
  Poly g = X * Y - Z + 2;
  Poly a = g * (X + Y) * (X + 1);
  Poly b = g * (Y * Y - Z) * (X + 1);
  EXPECT_EQ(wishart::poly_gcd(a, b), wishart::monic(g * (X + 1)));
  EXPECT_EQ(wishart::poly_gcd(X + 1, Y + 1), Poly(1));
  EXPECT_EQ(wishart::poly_gcd(X * X * Y, X * Y * Y), X * Y);
}

TEST(RationalFunction, NormalizesToLowestTerms) {
  RationalFunction r((X * X - Y * Y), (X - Y) * 2);
  EXPECT_EQ(r.num(), Rational(1, 2) * (X + Y));
  EXPECT_EQ(r.den(), Poly(1));
  RationalFunction s = RationalFunction(Poly(1), X) + RationalFunction(Poly(1), Y);
  EXPECT_EQ(s, RationalFunction(X + Y, X * Y));
  EXPECT_EQ(s * RationalFunction(X * Y), RationalFunction(X + Y));
  EXPECT_TRUE((s - s).is_zero());
}

TEST(RationalFunction, DerivativeQuotientRule) {
  RationalFunction r(Poly(1), X - Y);
  EXPECT_EQ(r.derivative(0), RationalFunction(Poly(-1), (X - Y) * (X - Y)));
  EXPECT_EQ(r.derivative(1), RationalFunction(Poly(1), (X - Y) * (X - Y)));
}
