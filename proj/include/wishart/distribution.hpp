#pragma once

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "g_functions.hpp"
#include "hgm.hpp"
#include "lambda_series.hpp"
#include "params.hpp"
#include "special_functions.hpp"

namespace wishart {

namespace detail {

/// f[z_1..z_i] for i = 1..m over nodes sorted descending. Runs of nodes closer
/// than tol use the Taylor form sum_k a_k h_{k-r}(offsets) around their mean,
/// where taylor(c, K) returns a_k = f^(k)(c)/k! for k = 0..K.
inline std::vector<double> divided_differences(const std::vector<double>& z, double tol,
                                               const std::function<double(double)>& value,
                                               const std::function<std::vector<double>(double, int)>& taylor) {
  const std::size_t m = z.size();
  std::vector<std::vector<double>> t(m, std::vector<double>(m, 0.0));
  for (std::size_t p = 0; p < m; ++p) t[p][p] = value(z[p]);
  for (std::size_t r = 1; r < m; ++r)
    for (std::size_t p = 0; p + r < m; ++p) {
      const std::size_t q = p + r;
      if (std::fabs(z[p] - z[q]) >= tol) {
        t[p][q] = (t[p + 1][q] - t[p][q - 1]) / (z[q] - z[p]);
        continue;
      }
      double c = 0.0;
      for (std::size_t i = p; i <= q; ++i) c += z[i];
      c /= static_cast<double>(r + 1);
      std::vector<double> off;
      for (std::size_t i = p; i <= q; ++i) off.push_back(z[i] - c);
      const int extra = 6;
      const int K = static_cast<int>(r) + extra;
      std::vector<double> a = taylor(c, K);
      // h_j(offsets) for j = 0..extra by the one-variable-at-a-time recurrence.
      std::vector<double> h(static_cast<std::size_t>(extra + 1), 0.0);
      h[0] = 1.0;
      for (double o : off)
        for (std::size_t j = 1; j < h.size(); ++j) h[j] += o * h[j - 1];
      double s = 0.0;
      for (int j = 0; j <= extra; ++j) s += a[static_cast<std::size_t>(static_cast<int>(r) + j)] * h[static_cast<std::size_t>(j)];
      t[p][q] = s;
    }
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = t[0][i];
  return out;
}

inline double det(std::vector<std::vector<double>> a) {
  // Partial pivoting LU.
  const std::size_t n = a.size();
  double d = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
    if (a[p][c] == 0.0) return 0.0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

inline double log_factorial(int k) { return std::lgamma(k + 1.0); }

inline double confluence_tol(const std::vector<double>& lam, double threshold) {
  double mx = 0.0;
  for (double l : lam) mx = std::max(mx, l);
  return threshold * (1.0 + mx);
}

/// Taylor coefficients in lambda of 0F1(s; t lambda) at c: t^k 0F1(s+k; t c)/((s)_k k!).
inline std::vector<double> hyp_taylor(double s, double t, double c, int K) {
  std::vector<double> a(static_cast<std::size_t>(K + 1));
  double f = 1.0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) f *= t / ((s + k - 1.0) * k);
    a[static_cast<std::size_t>(k)] = f * hpg01(s + k, t * c);
  }
  return a;
}

/// Divided differences of lambda -> 0F1(N; t lambda) over the sorted nodes.
/// Moderate arguments use sum_k t^k/((N)_k k!) h_{k-r}(nodes): every term is
/// non-negative, so small t and confluent nodes cost no accuracy.
inline std::vector<double> hyp_divided(int N, double t, const std::vector<double>& lam, double tol) {
  const double lmax = lam.empty() ? 0.0 : *std::max_element(lam.begin(), lam.end());
  if (t * lmax <= 2500.0) {
    const std::size_t m = lam.size();
    std::vector<double> out(m, 0.0);
    // h[r][j] = h_j(lam_0..lam_r)
    std::vector<std::vector<double>> h(m, std::vector<double>(1, 1.0));
    double coef = 1.0;  // t^k / ((N)_k k!)
    for (int k = 0; k < 4000; ++k) {
      if (k > 0) coef *= t / ((N + k - 1.0) * k);
      for (std::size_t r = 0; r < m; ++r) {
        const int j = k - static_cast<int>(r);
        if (j < 0) continue;
        if (j > 0) {
          const double below = r > 0 ? h[r - 1][static_cast<std::size_t>(j)] : 0.0;
          h[r].push_back(below + lam[r] * h[r][static_cast<std::size_t>(j - 1)]);
        }
      }
      bool small = k > t * lmax + 2.0 * m;
      for (std::size_t r = 0; r < m; ++r) {
        const int j = k - static_cast<int>(r);
        if (j < 0) {
          small = false;
          continue;
        }
        const double term = coef * h[r][static_cast<std::size_t>(j)];
        out[r] += term;
        if (term > 1e-17 * out[r]) small = false;
      }
      if (small || coef == 0.0) return out;
    }
    throw numeric_failure("hyp_divided: series did not converge");
  }
  return divided_differences(
      lam, tol, [&](double l) { return hpg01(N, t * l); },
      [&](double c, int K) { return hyp_taylor(N, t, c, K); });
}

/// Sign (-1)^{m(m-1)/2} times the front 1/((n-m)!^m) times e^{-sum lambda}.
inline double front_factor(const WishartParams& p) {
  const double sign = vandermonde_sign(p.m);
  return sign * std::exp(-p.lambda_sum() - p.m * log_factorial(p.n - p.m));
}

struct QuadratureEntries {
  std::vector<std::vector<double>> a;  // A_ij = int_0^x e^{-t} t^{n-j} D_i(t) dt
  double max_rel_err = 0.0;
};

inline QuadratureEntries quadrature_entries(const WishartParams& p, const std::vector<double>& lam, double x,
                                            const EvalConfig& cfg) {
  const int m = p.m, N = p.n - p.m + 1;
  const double tol = confluence_tol(lam, cfg.confluence_threshold);
  QuadratureEntries out;
  out.a.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m), 0.0));
  if (x == 0.0) return out;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (int i = 0; i < m; ++i)
    for (int j = 1; j <= m; ++j) {
      const std::vector<double> nodes(lam.begin(), lam.begin() + i + 1);
      // Integrate over u in [0, 1] with t = x u; the adaptive rule stalls on very short intervals.
      auto f = [&](double u) {
        const double t = x * u;
        const double d = hyp_divided(N, t, nodes, tol).back();
        return std::exp(-t) * std::pow(t, p.n - j) * d;
      };
      double err = 0.0;
      const double v = x * GK::integrate(f, 0.0, 1.0, 15, cfg.rel_tol, &err);
      err *= x;
      if (!std::isfinite(v)) throw numeric_failure("quadrature: non-finite entry");
      out.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] = v;
      if (v != 0.0) out.max_rel_err = std::max(out.max_rel_err, err / std::fabs(v));
    }
  return out;
}

/// Tail entries int_x^inf of the same integrands.
inline QuadratureEntries tail_entries(const WishartParams& p, const std::vector<double>& lam, double x,
                                      const EvalConfig& cfg) {
  const int m = p.m, N = p.n - p.m + 1;
  const double tol = confluence_tol(lam, cfg.confluence_threshold);
  const double lmax = *std::max_element(lam.begin(), lam.end());
  QuadratureEntries out;
  out.a.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m), 0.0));
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (int i = 0; i < m; ++i)
    for (int j = 1; j <= m; ++j) {
      const std::vector<double> nodes(lam.begin(), lam.begin() + i + 1);
      auto f = [&](double t) {
        // Bound of the integrand in logs; far out it is zero in double precision.
        if (-t + (p.n - j) * std::log(t) + 2.0 * std::sqrt(t * lmax) < -740.0) return 0.0;
        const double d = hyp_divided(N, t, nodes, tol).back();
        return std::exp(-t) * std::pow(t, p.n - j) * d;
      };
      double err = 0.0;
      const double v = GK::integrate(f, x, std::numeric_limits<double>::infinity(), 15, cfg.rel_tol, &err);
      if (!std::isfinite(v)) throw numeric_failure("quadrature: non-finite tail entry");
      out.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] = v;
      if (v != 0.0) out.max_rel_err = std::max(out.max_rel_err, err / std::fabs(v));
    }
  return out;
}

}  // namespace detail

/// F_{n,m}(x) by t-quadrature of determinant entries (divided differences in lambda).
inline Evaluation cdf_quadrature(const WishartParams& p, double x, const EvalConfig& cfg = {}) {
  p.validate();
  cfg.validate();
  if (!(x >= 0.0)) throw std::invalid_argument("cdf: x >= 0 required");
  if (x == 0.0) return {0.0, 0.0, Method::quadrature};
  const auto lam = p.sorted();
  auto q = detail::quadrature_entries(p, lam, x, cfg);
  const double v = detail::front_factor(p) * detail::det(q.a);
  const double err = std::fabs(v) * (p.m * std::max(q.max_rel_err, cfg.rel_tol)) + 4e-16;
  if (v <= 0.5) return {v, err, Method::quadrature};
  // Upper half: with B = A + T the full-range entries, front det(B) = 1, and
  // det(B - T) - det(B) expands by rows into terms with at least one tail row.
  // The deficit then carries relative accuracy instead of cancelling against 1.
  const auto t = detail::tail_entries(p, lam, x, cfg);
  const std::size_t m = lam.size();
  double deficit = 0.0, mag = 0.0;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    auto rows = q.a;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        rows[i][j] = mask >> i & 1u ? -t.a[i][j] : q.a[i][j] + t.a[i][j];
    const double d = detail::det(rows);
    deficit -= d;
    mag += std::fabs(d);
  }
  deficit *= detail::front_factor(p);
  mag *= std::fabs(detail::front_factor(p));
  const double rel = p.m * std::max({q.max_rel_err, t.max_rel_err, cfg.rel_tol});
  return {1.0 - deficit, mag * rel + 1e-16 * std::fabs(deficit) + 1.2e-16, Method::quadrature};
}

/// psi_{n,m}(x): d/dx of the determinant, one row at a time with its exact x-derivative.
inline Evaluation pdf_quadrature(const WishartParams& p, double x, const EvalConfig& cfg = {}) {
  p.validate();
  cfg.validate();
  if (!(x > 0.0)) throw std::invalid_argument("pdf: x > 0 required");
  const auto lam = p.sorted();
  auto q = detail::quadrature_entries(p, lam, x, cfg);
  const int m = p.m, N = p.n - p.m + 1;
  const std::vector<double> d =
      detail::hyp_divided(N, x, lam, detail::confluence_tol(lam, cfg.confluence_threshold));
  double total = 0.0, mag = 0.0;
  for (int r = 0; r < m; ++r) {
    auto a = q.a;
    for (int j = 1; j <= m; ++j)
      a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j - 1)] =
          std::exp(-x) * std::pow(x, p.n - j) * d[static_cast<std::size_t>(r)];
    const double t = detail::det(a);
    total += t;
    mag += std::fabs(t);
  }
  const double v = detail::front_factor(p) * total;
  const double err = std::fabs(detail::front_factor(p)) * mag * (p.m * std::max(q.max_rel_err, cfg.rel_tol)) + 1e-300;
  return {v, err, Method::quadrature};
}

namespace detail {

inline const SeriesEvaluator& series_evaluator(int n, int m, int order) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<SeriesEvaluator>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, m, order}];
  if (!slot) slot = std::make_unique<SeriesEvaluator>(n, m, order);
  return *slot;
}

}  // namespace detail

/// F and psi from the exact lambda-series truncated at cfg.series_order. The
/// error estimate is the change from the order-2 truncation.
inline Evaluation cdf_series(const WishartParams& p, double x, const EvalConfig& cfg = {}) {
  p.validate();
  cfg.validate();
  const auto lam = p.sorted();
  const double e = std::exp(-p.lambda_sum());
  const double v = e * detail::series_evaluator(p.n, p.m, cfg.series_order).cdf_ratio(x, lam);
  const int lo = std::max(1, cfg.series_order - 2);
  const double w = e * detail::series_evaluator(p.n, p.m, lo).cdf_ratio(x, lam);
  return {v, std::fabs(v - w), Method::series};
}

inline Evaluation pdf_series(const WishartParams& p, double x, const EvalConfig& cfg = {}) {
  p.validate();
  cfg.validate();
  const auto lam = p.sorted();
  const double e = std::exp(-p.lambda_sum());
  const double v = e * detail::series_evaluator(p.n, p.m, cfg.series_order).pdf_ratio(x, lam);
  const int lo = std::max(1, cfg.series_order - 2);
  const double w = e * detail::series_evaluator(p.n, p.m, lo).pdf_ratio(x, lam);
  return {v, std::fabs(v - w), Method::series};
}

// ---------------------------------------------------------------------------
// Conjectured determinantal form.

/// log of C(x) = (n-m+1) x^{mn - C(m,2) - 1} e^{-mx} / prod_k (n-k+1)^k.
inline double log_front_conjecture(int n, int m, double x) {
  double l = std::log(static_cast<double>(n - m + 1)) + (m * n - m * (m - 1) / 2 - 1) * std::log(x) - m * x;
  for (int k = 1; k <= m; ++k) l -= k * std::log(static_cast<double>(n - k + 1));
  return l;
}

/// Exact C(x) as an ExpPoly.
inline ExpPoly front_conjecture_exact(int n, int m) {
  Rational d = 1;
  for (int k = 1; k <= m; ++k)
    for (int i = 0; i < k; ++i) d *= Rational(n - k + 1);
  return ExpPoly::monomial(Rational(n - m + 1) / d, m * n - m * (m - 1) / 2 - 1, m);
}

namespace detail {

/// Cached derivative ladder of G_{a,level} in y.
inline const std::vector<GCombo>& g_derivatives(int a, int level, int count) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<GCombo>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& v = cache[{a, level}];
  if (v.empty()) v.push_back(g_combo(a, level));
  while (static_cast<int>(v.size()) < count) v.push_back(v.back().derivative());
  return v;
}

/// Divided differences of the conjecture rows: row 1 is 0F1(n-m+1; x lambda),
/// row j >= 2 is G_{n-m+j, j}(x, lambda).
inline std::vector<std::vector<double>> conjecture_matrix(int n, int m, double x, const std::vector<double>& lam,
                                                          double tol) {
  std::vector<std::vector<double>> rows;
  rows.push_back(hyp_divided(n - m + 1, x, lam, tol));
  for (int j = 2; j <= m; ++j) {
    const int a = n - m + j;
    const auto& ladder = g_derivatives(a, j, m + 7);
    rows.push_back(divided_differences(
        lam, tol, [&](double l) { return ladder[0].value(x, l); },
        [&](double c, int K) {
          std::vector<double> t(static_cast<std::size_t>(K + 1));
          double fact = 1.0;
          for (int k = 0; k <= K; ++k) {
            if (k > 0) fact *= k;
            t[static_cast<std::size_t>(k)] = ladder.at(static_cast<std::size_t>(k)).value(x, c) / fact;
          }
          return t;
        }));
  }
  return rows;
}

}  // namespace detail

/// psi by the conjectured determinant (proved for m = 2, checked for m = 3).
inline Evaluation pdf_conjecture(const WishartParams& p, double x, const EvalConfig& cfg = {}) {
  p.validate();
  cfg.validate();
  if (!(x > 0.0)) throw std::invalid_argument("pdf: x > 0 required");
  if (p.m > 4 || (p.m == 4 && !cfg.experimental))
    throw std::invalid_argument("pdf_conjecture: m <= 3 (m = 4 needs the experimental flag)");
  const auto lam = p.sorted();
  const auto rows = detail::conjecture_matrix(p.n, p.m, x, lam, detail::confluence_tol(lam, cfg.confluence_threshold));
  const double d = detail::det(rows);
  const double log_scale = log_front_conjecture(p.n, p.m, x) - p.lambda_sum() - p.m * detail::log_factorial(p.n - p.m);
  const double scale = std::exp(log_scale);
  const double v = vandermonde_sign(p.m) * scale * d;
  // Difference quotients of nearly flat G rows cancel for small x: bound each entry's error
  // by the node values over the gap powers, then propagate through the permutation sum.
  const double tol = detail::confluence_tol(lam, cfg.confluence_threshold);
  double gap = 1.0;
  for (std::size_t i = 1; i < lam.size(); ++i)
    if (lam[i - 1] - lam[i] >= tol) gap = std::min(gap, lam[i - 1] - lam[i]);
  std::vector<std::vector<double>> rel_err(rows.size(), std::vector<double>(lam.size(), 1e-15));
  for (int j = 2; j <= p.m; ++j) {
    double top = 0.0;
    for (double l : lam) {
      const auto e = detail::g_derivatives(p.n - p.m + j, j, 1)[0].eval(x, l);
      top = std::max(top, e.magnitude);
    }
    for (std::size_t r = 1; r < lam.size(); ++r) {
      const double a = std::fabs(rows[static_cast<std::size_t>(j - 1)][r]);
      if (a > 0.0)
        rel_err[static_cast<std::size_t>(j - 1)][r] =
            std::max(1e-15, 1e-15 * top * std::pow(2.0 / gap, static_cast<double>(r)) / a);
    }
  }
  std::vector<std::size_t> perm(static_cast<std::size_t>(p.m));
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double abs_err = 0.0;
  do {
    double pr = 1.0, e = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      pr *= std::fabs(rows[i][perm[i]]);
      e += rel_err[i][perm[i]];
    }
    abs_err += pr * e;
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double err = std::fabs(v) * 1e-12 * std::pow(10.0, p.m - 1) + scale * abs_err;
  return {v, err, Method::conjecture};
}

/// The two-variable closed form with its own front factor x^{2n-2} e^{-sum lambda - 2x}/(n!(n-2)!).
inline double pdf_m2_closed(const WishartParams& p, double x, const EvalConfig& cfg = {}) {
  p.validate();
  if (p.m != 2) throw std::invalid_argument("pdf_m2_closed: m = 2 required");
  if (!(x > 0.0)) throw std::invalid_argument("pdf: x > 0 required");
  const auto lam = p.sorted();
  const double tol = detail::confluence_tol(lam, cfg.confluence_threshold);
  const GCombo g = g_combo(p.n, 2);
  const GCombo dg = g.derivative();
  const double f1 = hpg01(p.n - 1, x * lam[0]);
  const double g1 = g.value(x, lam[0]);
  double df = 0.0, dgv = 0.0;  // column differences divided by (lambda_1 - lambda_2)
  if (std::fabs(lam[0] - lam[1]) >= tol) {
    const double h = lam[0] - lam[1];
    df = (f1 - hpg01(p.n - 1, x * lam[1])) / h;
    dgv = (g1 - g.value(x, lam[1])) / h;
  } else {
    // l'Hospital: differentiate the second column at the midpoint.
    const double c = 0.5 * (lam[0] + lam[1]);
    df = x / (p.n - 1.0) * hpg01(p.n, x * c);
    dgv = dg.value(x, c);
  }
  // det([F1 F2; G1 G2])/(l1 - l2) = G1 (F1-F2)/(l1-l2) - F1 (G1-G2)/(l1-l2).
  const double d = g1 * df - f1 * dgv;
  const double log_scale = (2.0 * p.n - 2.0) * std::log(x) - p.lambda_sum() - 2.0 * x - detail::log_factorial(p.n) -
                           detail::log_factorial(p.n - 2);
  return std::exp(log_scale) * d;
}

/// Conjecture-route CDF: adaptive integral of the conjectured density.
inline Evaluation cdf_conjecture(const WishartParams& p, double x, const EvalConfig& cfg = {}) {
  if (!(x >= 0.0)) throw std::invalid_argument("cdf: x >= 0 required");
  if (x == 0.0) return {0.0, 0.0, Method::conjecture};
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  auto f = [&](double u) { return u > 0.0 ? pdf_conjecture(p, x * u, cfg).value : 0.0; };
  const double v = x * GK::integrate(f, 0.0, 1.0, 15, 1e-11, &err);
  return {v, err * x, Method::conjecture};
}

inline Evaluation cdf_eval(const WishartParams& p, double x, const EvalConfig& cfg = {}) {
  switch (cfg.method) {
    case Method::quadrature: return cdf_quadrature(p, x, cfg);
    case Method::series: return cdf_series(p, x, cfg);
    case Method::conjecture: return cdf_conjecture(p, x, cfg);
    case Method::hgm: return cdf_hgm(p, x, cfg);
  }
  throw std::invalid_argument("cdf: unknown method");
}

inline Evaluation pdf_eval(const WishartParams& p, double x, const EvalConfig& cfg = {}) {
  switch (cfg.method) {
    case Method::quadrature: return pdf_quadrature(p, x, cfg);
    case Method::series: return pdf_series(p, x, cfg);
    case Method::conjecture: return pdf_conjecture(p, x, cfg);
    case Method::hgm: return pdf_hgm(p, x, cfg);
  }
  throw std::invalid_argument("pdf: unknown method");
}

inline double cdf(const WishartParams& p, double x, const EvalConfig& cfg = {}) { return cdf_eval(p, x, cfg).value; }
inline double pdf(const WishartParams& p, double x, const EvalConfig& cfg = {}) { return pdf_eval(p, x, cfg).value; }

enum class Quantity { cdf, pdf };

/// Evaluate on a grid, optionally on several threads; output order follows xs.
inline std::vector<Evaluation> evaluate_grid(const WishartParams& p, const std::vector<double>& xs, Quantity what,
                                             const EvalConfig& cfg = {}, int threads = 1) {
  std::vector<Evaluation> out(xs.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < xs.size(); i += step)
      out[i] = what == Quantity::cdf ? cdf_eval(p, xs[i], cfg) : pdf_eval(p, xs[i], cfg);
  };
  threads = std::max(1, std::min<int>(threads, static_cast<int>(xs.size())));
  if (threads == 1) {
    work(0, 1);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        work(static_cast<std::size_t>(t), static_cast<std::size_t>(threads));
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// int_0^inf psi dx, split at the mean so the adaptive rule sees the bulk.
inline double pdf_integral(const WishartParams& p, const EvalConfig& cfg = {}) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double s = p.n * p.m + p.lambda_sum();
  const double upper = s + 12.0 * std::sqrt(s) + 40.0;
  auto f = [&](double t) { return t > 0.0 ? pdf(p, t, cfg) : 0.0; };
  double e1 = 0.0, e2 = 0.0;
  // The integrand carries ~1e-14 relative noise, so a tighter tolerance only burns levels.
  return GK::integrate(f, 0.0, s, 8, 1e-10, &e1) + GK::integrate(f, s, upper, 8, 1e-10, &e2);
}

/// Distance from which the CDF deficit is guaranteed negligible in the checks.
inline double far_tail_point(const WishartParams& p) {
  const double s = p.n + p.lambda_sum();
  return s + 10.0 * std::sqrt(s) + 20.0;
}

}  // namespace wishart
