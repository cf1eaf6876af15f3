#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "errors.hpp"

namespace wishart {

/// Rising factorial (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1.
inline double pochhammer(double a, int k) {
  if (k < 0) throw std::invalid_argument("pochhammer: k must be nonnegative");
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= a + i;
  return p;
}

namespace detail {

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace detail

/// 0F1(; n; z) = sum_k z^k / ((n)_k k!) by direct series.
inline double hpg01(double n, double z) {
  if (!(n > 0.0)) throw std::invalid_argument("hpg01: lower parameter must be positive");
  if (z == 0.0) return 1.0;
  detail::CompensatedSum s;
  double term = 1.0;
  s.add(term);
  for (int k = 0; k < 10000; ++k) {
    term *= z / ((n + k) * (k + 1.0));
    s.add(term);
    // Past the peak the terms decrease geometrically; stop once negligible.
    if (k + 1 > std::fabs(z) / (n + k) && std::fabs(term) <= 1e-17 * std::fabs(s.value())) return s.value();
    if (!std::isfinite(term)) throw numeric_failure("hpg01: overflow");
  }
  throw numeric_failure("hpg01: series did not converge within 10^4 terms");
}

/// Modified Bessel I_n(z) through 0F1, used only as a consistency oracle.
inline double bessel_i_check(int n, double z) {
  if (n < 0 || z < 0.0) throw std::invalid_argument("bessel_i_check: n >= 0 and z >= 0 required");
  double front = 1.0;
  for (int k = 1; k <= n; ++k) front *= (z / 2.0) / k;
  return front * hpg01(n + 1.0, z * z / 4.0);
}

namespace detail {

// Regularized lower P(a,x) by series, valid (and used) for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (term < sum * 1e-17) return sum * std::exp(a * std::log(x) - x - std::lgamma(a));
  }
  throw numeric_failure("incomplete gamma series did not converge");
}

// Regularized upper Q(a,x) by Lentz continued fraction, used for x >= a + 1.
inline double gamma_q_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) return std::exp(a * std::log(x) - x - std::lgamma(a)) * h;
  }
  throw numeric_failure("incomplete gamma continued fraction did not converge");
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a).
inline double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("regularized_gamma_p: a > 0, x >= 0 required");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_fraction(a, x);
}

/// Regularized upper incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a).
inline double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("regularized_gamma_q: a > 0, x >= 0 required");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_fraction(a, x);
}

/// Lower incomplete gamma gamma(a,x) = int_0^x t^{a-1} e^{-t} dt.
inline double incomplete_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("incomplete_gamma: a > 0, x >= 0 required");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) {
    // x^a e^{-x} / a * sum_k x^k / (a+1)_k, no Gamma(a) round trip.
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 100000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (term < sum * 1e-17) return sum * std::exp(a * std::log(x) - x);
    }
    throw numeric_failure("incomplete_gamma: series did not converge");
  }
  return std::tgamma(a) * (1.0 - detail::gamma_q_fraction(a, x));
}

/// Q_n(x, y) = e^{-x}/(n-1)! int_y^inf t^{n-1} e^{-t} 0F1(n; x t) dt, summed as
/// a Poisson(x) mixture of regularized upper incomplete gammas Q(n+k, y).
inline double marcum_q(int n, double x, double y) {
  if (n < 1 || x < 0.0 || y < 0.0) throw std::invalid_argument("marcum_q: n >= 1, x >= 0, y >= 0 required");
  if (y == 0.0) return 1.0;
  double weight = std::exp(-x);
  double sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    sum += weight * regularized_gamma_q(n + k, y);
    double next = weight * x / (k + 1.0);
    // Remaining Poisson mass after k, bounded geometrically once k+2 > x.
    if (k + 2.0 > x) {
      double tail = next / (1.0 - x / (k + 2.0));
      if (tail <= 1e-16 * sum || tail < 1e-300) return std::min(1.0, sum);
    }
    weight = next;
  }
  throw numeric_failure("marcum_q: Poisson mixture did not converge");
}

}  // namespace wishart
