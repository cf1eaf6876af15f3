#pragma once

// Independent reference implementations used only by the tests. Nothing here
// shares code with the library routines it checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

using real = long double;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<real>& x, std::vector<real>& w) {
  x.assign(n, 0);
  w.assign(n, 0);
  const real pi = 3.141592653589793238462643383279502884L;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    real z = std::cos(pi * (i + 0.75L) / (n + 0.5L));
    real dp = 0;
    for (int it = 0; it < 100; ++it) {
      real p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        real p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      real dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-19L) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
}

// Composite 20-point Gauss-Legendre with panel doubling until two successive
// sums agree to ~1e-16 relative.
inline real integrate(const std::function<real(real)>& f, real a, real b) {
  std::vector<real> x, w;
  gauss_legendre(20, x, w);
  auto composite = [&](int panels) {
    real h = (b - a) / panels, s = 0;
    for (int p = 0; p < panels; ++p) {
      real c = a + (p + 0.5L) * h;
      for (int i = 0; i < 20; ++i) s += w[i] * f(c + 0.5L * h * x[i]);
    }
    return s * 0.5L * h;
  };
  real prev = composite(1);
  for (int panels = 2; panels <= 4096; panels *= 2) {
    real cur = composite(panels);
    if (std::fabs(cur - prev) <= 1e-17L * std::fabs(cur) + 1e-300L) return cur;
    prev = cur;
  }
  return prev;
}

inline real hyp0f1(real n, real z) {
  real term = 1, sum = 1;
  for (int k = 0; k < 20000; ++k) {
    term *= z / ((n + k) * (k + 1));
    sum += term;
    if (k > z && std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return sum;
}

// H^{k,l}_n(x,y) by the composite Gauss-Legendre oracle.
inline real h_integral(int k, int l, int n, real x, real y) {
  return integrate([&](real t) { return std::exp(-t) * std::pow(t, k) * std::pow(x - t, l) * hyp0f1(n, t * y); },
                   0, x);
}

inline real lower_gamma(int a, real x) {
  return integrate([&](real t) { return std::pow(t, a - 1) * std::exp(-t); }, 0, x);
}

// Determinant by the Leibniz permutation expansion.
template <class T>
T leibniz_det(const std::vector<std::vector<T>>& a) {
  const int m = static_cast<int>(a.size());
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  T total = T(0);
  do {
    int inversions = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (p[i] > p[j]) ++inversions;
    T prod = T(1);
    for (int i = 0; i < m; ++i) prod = prod * a[i][p[i]];
    if (inversions % 2) total = total - prod;
    else total = total + prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

// First derivative by Richardson-extrapolated central differences.
inline double richardson_derivative(const std::function<double(double)>& f, double x, double h) {
  auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
  double d1 = d(h), d2 = d(h / 2);
  return (4 * d2 - d1) / 3;
}

}  // namespace oracle
