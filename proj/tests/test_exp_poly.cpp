#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wishart/exp_poly.hpp"

using wishart::ExpPoly;
using wishart::Rational;

namespace {

ExpPoly random_exp_poly(std::mt19937& rng, int terms) {
  std::uniform_int_distribution<int> xp(-2, 4), ep(0, 3), num(-9, 9), den(1, 5);
  ExpPoly p;
  for (int i = 0; i < terms; ++i) p += ExpPoly::monomial(Rational(num(rng), den(rng)), xp(rng), ep(rng));
  return p;
}

}  // namespace

TEST(ExpPoly, AdditionExamples) {
  ExpPoly a = ExpPoly::monomial(1, 2, 1);
  EXPECT_TRUE((a + (-a)).is_zero());
  EXPECT_EQ(ExpPoly(1) + (-ExpPoly::e()), ExpPoly(1) - ExpPoly::e());
  EXPECT_EQ(ExpPoly::monomial(Rational(3, 2), 1, 0) + ExpPoly::monomial(Rational(1, 2), 1, 0),
            ExpPoly::monomial(2, 1, 0));
  EXPECT_EQ((a + (-a)).size(), 0u);
}

TEST(ExpPoly, MultiplicationExamples) {
  ExpPoly g1 = ExpPoly(1) - ExpPoly::e();
  EXPECT_EQ(g1 * ExpPoly(1), g1);
  EXPECT_EQ(ExpPoly::e() * ExpPoly::e(), ExpPoly::e(2));
  ExpPoly f = ExpPoly::monomial(1, 2, 1);  // x^{n-1} e^{-x}, n = 3
  EXPECT_EQ(f * f, ExpPoly::monomial(1, 4, 2));
}

TEST(ExpPoly, DerivativeExamples) {
  EXPECT_EQ((ExpPoly(1) - ExpPoly::e()).derivative(), ExpPoly::e());
  EXPECT_EQ(ExpPoly::monomial(1, 1, 1).derivative(), ExpPoly::e() - ExpPoly::monomial(1, 1, 1));
  EXPECT_EQ(ExpPoly::x(-1).derivative(), ExpPoly::monomial(-1, -2, 0));
}

TEST(ExpPoly, EvalExamples) {
  EXPECT_NEAR((ExpPoly(1) - ExpPoly::e()).eval(1.0), 0.6321205588285576784, 1e-16);
  EXPECT_EQ(ExpPoly().eval(17.3), 0.0);
  EXPECT_EQ(ExpPoly::x(2).eval(3.0), 9.0);
  EXPECT_THROW(ExpPoly::x(-1).eval(0.0), std::domain_error);
}

TEST(ExpPoly, IncompleteGammaExamples) {
  EXPECT_EQ(wishart::incomplete_gamma_exact(1), ExpPoly(1) - ExpPoly::e());
  EXPECT_EQ(wishart::incomplete_gamma_exact(2), ExpPoly(1) - ExpPoly::e() - ExpPoly::monomial(1, 1, 1));
  // Frozen from quadrature of int_0^2 t^2 e^{-t} dt.
  EXPECT_NEAR(wishart::incomplete_gamma_exact(3).eval(2.0), 0.64664716763387308106, 1e-15);
  EXPECT_THROW(wishart::incomplete_gamma_exact(0), std::invalid_argument);
}

TEST(ExpPoly, RingAxiomsExact) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    ExpPoly a = random_exp_poly(rng, 4), b = random_exp_poly(rng, 5), c = random_exp_poly(rng, 3);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b).derivative(), a * b.derivative() + b * a.derivative());
  }
}

TEST(ExpPoly, DerivativeMatchesFiniteDifferences) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    ExpPoly a = random_exp_poly(rng, 5);
    for (double x0 : {0.7, 1.5, 4.0}) {
      double h = 1e-5 * std::max(1.0, x0);
      double fd = (a.eval(x0 + h) - a.eval(x0 - h)) / (2 * h);
      double exact = a.derivative().eval(x0);
      EXPECT_NEAR(fd, exact, 1e-7 * std::max(1.0, std::fabs(exact)));
    }
  }
}

TEST(ExpPoly, IncompleteGammaMatchesQuadrature) {
  for (int a = 1; a <= 12; ++a) {
    ExpPoly g = wishart::incomplete_gamma_exact(a);
    for (double x : {0.1, 1.0, 5.0, 12.0, 30.0}) {
      double ref = static_cast<double>(oracle::lower_gamma(a, x));
      EXPECT_NEAR(g.eval(x), ref, 1e-12 * ref) << "a=" << a << " x=" << x;
    }
  }
}

TEST(ExpPoly, GammaRecurrenceExact) {
  for (int a = 1; a < 15; ++a)
    EXPECT_EQ(wishart::incomplete_gamma_exact(a + 1),
              wishart::incomplete_gamma_exact(a) * Rational(a) - ExpPoly::monomial(1, a, 1));
}

TEST(ExpPoly, EvalResolvesCancellation) {
  // gamma(40, x) at small x is ~x^40/40 while its ExpPoly terms are O(39!).
  ExpPoly g = wishart::incomplete_gamma_exact(40);
  double x = 0.5;
  double ref = std::pow(x, 40) / 40 * std::exp(-x) * (1 + x / 41 + x * x / (41 * 42.0) + std::pow(x, 3) / (41 * 42 * 43.0));
  EXPECT_NEAR(g.eval(x), ref, 1e-6 * ref);
}

TEST(ExpPoly, TextFormat) {
  ExpPoly p = ExpPoly(1) - ExpPoly::monomial(Rational(1, 2), 1, 1);
  EXPECT_EQ(p.to_string(), "1*x^0*E^0 + -1/2*x^1*E^1");
  EXPECT_EQ(ExpPoly().to_string(), "0");
}
