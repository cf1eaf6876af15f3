#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wishart/lambda_series.hpp"

using namespace wishart;

namespace {

ExpPoly gamma_of(int a) { return incomplete_gamma_exact(a); }

// Bracketed coefficients of (lambda1 - lambda2) and (lambda1^2 - lambda2^2)/2 in R_{n,2}.
ExpPoly r2_first(int n) {
  ExpPoly poly = ExpPoly::monomial(Rational(1, n - 1), 2, 0) - ExpPoly::monomial(2, 1, 0) + ExpPoly(n);
  ExpPoly t = poly * gamma_of(n - 1) + ExpPoly::monomial(Rational(1, n - 1), n, 1) - ExpPoly::monomial(Rational(n, n - 1), n - 1, 1);
  return t.shifted(n - 2, 1);
}

ExpPoly r2_second(int n) {
  const Rational d = Rational(1, n * (n - 1));
  ExpPoly poly = ExpPoly::monomial(d, 3, 0) - ExpPoly::monomial(Rational(1, n), 2, 0) - ExpPoly::x() + ExpPoly(n + 1);
  // (x - n - 1)(x + n) = x^2 - x - n(n+1)
  ExpPoly quad = ExpPoly::x(2) - ExpPoly::x() - ExpPoly(n * (n + 1));
  quad *= d;
  ExpPoly t = poly * gamma_of(n - 1) + quad.shifted(n - 1, 1);
  return t.shifted(n - 2, 1);
}

// R_{n,m} by quadrature: d/dx det(H^{n-j}_{n-m+1}(x, lambda_i)), one row differentiated at a time.
double r_quadrature(int n, const std::vector<double>& lam, double x) {
  const int m = static_cast<int>(lam.size());
  const int N = n - m + 1;
  double total = 0.0;
  for (int r = 0; r < m; ++r) {
    std::vector<std::vector<double>> a(m, std::vector<double>(m));
    for (int i = 0; i < m; ++i)
      for (int j = 1; j <= m; ++j)
        a[i][j - 1] = i == r ? std::pow(x, n - j) * std::exp(-x) * hpg01(N, x * lam[i])
                             : static_cast<double>(oracle::h_integral(n - j, 0, N, x, lam[i]));
    total += static_cast<double>(oracle::leibniz_det(a));
  }
  return total;
}

}  // namespace

TEST(LambdaSeries, ArithmeticExamples) {
  auto one = LambdaSeries::constant(2, 3, ExpPoly(1));
  auto l1 = LambdaSeries::monomial(2, 3, {1, 0});
  auto l2 = LambdaSeries::monomial(2, 3, {0, 1});
  EXPECT_EQ((one + l1) * (one - l1), one - LambdaSeries::monomial(2, 3, {2, 0}));
  EXPECT_EQ((l1 * l2).diff_lambda(0).coefficient({0, 1}), ExpPoly(1));
  // Degree-(order+1) products are dropped.
  auto cube = LambdaSeries::monomial(2, 3, {2, 0}) * LambdaSeries::monomial(2, 3, {2, 0});
  EXPECT_TRUE(cube.is_zero());
  EXPECT_EQ(l1.diff_lambda(0).valid(0), 2);
  EXPECT_THROW(LambdaSeries(2, 3) + LambdaSeries(3, 3), std::invalid_argument);
}

TEST(LambdaSeries, DumpFormat) {
  auto s = LambdaSeries::monomial(2, 2, {1, 0}, ExpPoly::monomial(Rational(3, 2), 1, 1));
  EXPECT_EQ(s.dump(), "1 0 : 3/2*x^1*E^1\n");
}

TEST(DetSeries, Examples) {
  auto row = h_series({2, 0, 3}, 4);
  EXPECT_TRUE(det_series({row, row}, 4).terms.empty());
  auto single = det_series({row}, 4);
  ASSERT_EQ(single.terms.size(), 5u);
  for (int q = 0; q <= 4; ++q) EXPECT_EQ(*single.find({q}), row[q]);
  for (int n = 3; n <= 6; ++n) {
    auto e = det_series({h_series({n - 1, 0, n - 1}, 2), h_series({n - 2, 0, n - 1}, 2)}, 2);
    ExpPoly expected = gamma_of(n) * gamma_of(n) - gamma_of(n + 1) * gamma_of(n - 1);
    expected *= Rational(1, n - 1);
    EXPECT_EQ(*e.find({0, 1}), expected);
  }
}

TEST(RSeries, PrintedTwoVariableCoefficients) {
  for (int n = 3; n <= 7; ++n) {
    LambdaSeries r = build_R_series(n, 2, 3);
    EXPECT_EQ(r.coefficient({1, 0}), r2_first(n)) << n;
    EXPECT_EQ(r.coefficient({0, 1}), -r2_first(n)) << n;
    ExpPoly half = r2_second(n);
    half *= Rational(1, 2);
    EXPECT_EQ(r.coefficient({2, 0}), half) << n;
    EXPECT_FALSE(r.has_negative_powers());
  }
}

TEST(RSeries, OneVariable) {
  for (int n = 1; n <= 5; ++n) {
    LambdaSeries r = build_R_series(n, 1, 6);
    Rational den = 1;
    for (int q = 0; q <= 6; ++q) {
      if (q > 0) den *= Rational((n + q - 1) * q);
      EXPECT_EQ(r.coefficient({q}), ExpPoly::monomial(Rational(1) / den, n - 1 + q, 1));
    }
  }
}

TEST(RSeries, AntisymmetricAndConsistentWithCdf) {
  for (auto [n, m, order] : {std::tuple{4, 2, 6}, std::tuple{5, 3, 4}}) {
    LambdaSeries r = build_R_series(n, m, order);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        LambdaSeries s = r.swapped(i, j);
        EXPECT_TRUE((s + r).is_zero());
      }
    EXPECT_EQ(build_cdf_det_series(n, m, order).diff_x(), r);
  }
}

TEST(RSeries, NumericMatchesQuadrature) {
  LambdaSeries r = build_R_series(4, 2, 10);
  double ref = r_quadrature(4, {0.3, 0.1}, 2.0);
  EXPECT_NEAR(r.eval(2.0, {0.3, 0.1}), ref, 1e-8 * std::fabs(ref));
}

TEST(Schur, BialternantRatio) {
  const Poly l1 = Poly::var(1), l2 = Poly::var(2), l3 = Poly::var(3);
  EXPECT_EQ(schur_poly({1, 0}), l1 + l2);
  EXPECT_EQ(schur_poly({1, 1}), l1 * l2);
  EXPECT_EQ(schur_poly({2, 0}), l1 * l1 + l1 * l2 + l2 * l2);
  EXPECT_EQ(schur_poly({1, 1, 1}), l1 * l2 * l3);
  EXPECT_EQ(partition_of({0, 2, 5}), (std::vector<int>{3, 1, 0}));
  std::vector<double> lam{0.7, 1.9, 0.2};
  for (auto mu : {std::vector<int>{3, 1, 0}, std::vector<int>{4, 4, 2}, std::vector<int>{6, 0, 0}}) {
    double v = schur_poly(mu).eval(std::vector<double>{0.0, lam[0], lam[1], lam[2]});
    // Jacobi-Trudi alternates in sign, so it is only good to ~1e-11 here.
    EXPECT_NEAR(schur_value(mu, lam), v, 1e-10 * v);
  }
}

TEST(PsiSeries, OneVariable) {
  for (int n = 1; n <= 4; ++n) {
    LambdaSeries p = build_psi_series(n, 1, 5);
    EXPECT_EQ(p, build_R_series(n, 1, 5).scaled(Rational(1) / detail::factorial(n - 1)));
  }
}

TEST(PsiSeries, TwoVariableLeadingTermAndSymmetry) {
  for (int n = 3; n <= 5; ++n) {
    LambdaSeries p = build_psi_series(n, 2, 3);
    Rational f = detail::factorial(n - 2);
    ExpPoly lead = r2_first(n);
    lead *= Rational(1) / (f * f);
    EXPECT_EQ(p.coefficient({0, 0}), lead);
    EXPECT_EQ(p.swapped(0, 1), p);
  }
  LambdaSeries p3 = build_psi_series(4, 3, 2);
  EXPECT_EQ(p3.swapped(0, 2), p3);
  EXPECT_EQ(p3.swapped(1, 2), p3);
}

TEST(PsiSeries, NumericMatchesQuadrature) {
  const std::vector<double> lam{0.3, 0.1};
  LambdaSeries p = build_psi_series(4, 2, 8);
  double ref = r_quadrature(4, lam, 2.0) / (lam[0] - lam[1]) / 4.0;
  EXPECT_NEAR(p.eval(2.0, lam), ref, 1e-8 * ref);
  SeriesEvaluator ev(4, 2, 14);
  EXPECT_NEAR(ev.pdf_ratio(2.0, lam), ref, 1e-9 * ref);
}

TEST(Lemma7, Examples) {
  std::vector<std::vector<ExpPoly>> id{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_TRUE(lemma7_check(id, {1, 2, 3}));
  EXPECT_TRUE(lemma7_check(id, {0, 0, 0}));
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int t = 0; t < 10; ++t) {
    std::vector<std::vector<ExpPoly>> a(3, std::vector<ExpPoly>(3));
    for (auto& row : a)
      for (auto& v : row) v = ExpPoly::monomial(d(rng), d(rng), d(rng) + 5) + ExpPoly(d(rng));
    Rational c3(d(rng), 7);
    c3.canonicalize();
    EXPECT_TRUE(lemma7_check(a, {Rational(d(rng)), Rational(1, 3), c3}));
  }
}
