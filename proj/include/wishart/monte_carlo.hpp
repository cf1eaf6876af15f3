#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "distribution.hpp"
#include "errors.hpp"
#include "params.hpp"

namespace wishart {

using cplx = std::complex<double>;

/// Dense Hermitian matrix, row-major.
struct HermitianMatrix {
  int size = 0;
  std::vector<cplx> a;

  explicit HermitianMatrix(int m = 0) : size(m), a(static_cast<std::size_t>(m * m)) {}
  cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(i * size + j)]; }
  cplx operator()(int i, int j) const { return a[static_cast<std::size_t>(i * size + j)]; }

  double frobenius() const {
    double s = 0.0;
    for (const cplx& z : a) s += std::norm(z);
    return std::sqrt(s);
  }
  double off_diagonal() const {
    double s = 0.0;
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        if (i != j) s += std::norm((*this)(i, j));
    return std::sqrt(s);
  }
};

/// All eigenvalues (ascending) by cyclic complex Jacobi rotations.
inline std::vector<double> hermitian_eigenvalues(HermitianMatrix A, int max_sweeps = 30) {
  const int m = A.size;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      if (std::abs(A(i, j) - std::conj(A(j, i))) > 1e-12 * (1.0 + A.frobenius()))
        throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");
  const double norm = A.frobenius();
  int sweep = 0;
  while (A.off_diagonal() > 1e-13 * norm) {
    if (++sweep > max_sweeps) throw numeric_failure("hermitian_eigenvalues: Jacobi did not converge");
    for (int p = 0; p < m - 1; ++p)
      for (int q = p + 1; q < m; ++q) {
        const cplx g = A(p, q);
        const double r = std::abs(g);
        if (r == 0.0) continue;
        const cplx e = g / r;
        // Real rotation for the pair with off-diagonal r, carried by the phase e.
        const double tau = (A(q, q).real() - A(p, p).real()) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        // A <- J^H A J with J_pp = c, J_pq = s e, J_qp = -s conj(e), J_qq = c.
        for (int k = 0; k < m; ++k) {
          const cplx akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * std::conj(e) * akq;
          A(k, q) = s * e * akp + c * akq;
        }
        for (int k = 0; k < m; ++k) {
          const cplx apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * e * aqk;
          A(q, k) = s * std::conj(e) * apk + c * aqk;
        }
        A(p, q) = A(q, p) = 0.0;
        A(p, p) = A(p, p).real();
        A(q, q) = A(q, q).real();
      }
  }
  std::vector<double> ev(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) ev[static_cast<std::size_t>(i)] = A(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double hermitian_eig_max(const HermitianMatrix& A) { return hermitian_eigenvalues(A).back(); }

struct McConfig {
  long samples = 100000;
  std::uint64_t seed = 20240601;
  int bins = 50;
  int threads = 1;
  /// Total variance of each complex Gaussian entry; 1 is the model, other values
  /// exist for negative controls.
  double entry_variance = 1.0;

  void validate() const {
    if (samples < 1) throw std::invalid_argument("McConfig: samples >= 1 required");
    if (bins < 1) throw std::invalid_argument("McConfig: bins >= 1 required");
    if (threads < 1) throw std::invalid_argument("McConfig: threads >= 1 required");
    if (!(entry_variance > 0.0)) throw std::invalid_argument("McConfig: entry_variance > 0 required");
  }
};

namespace detail {

/// Draws per independent substream. Fixed, so results do not depend on threading.
inline constexpr long mc_chunk = 4096;

/// Engine of substream k: mt19937_64 seeded through seed_seq(seed, k). Both are
/// specified bit-exactly by the standard.
inline std::mt19937_64 substream(std::uint64_t seed, long k) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(static_cast<std::uint64_t>(k) >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform on (0, 1] with 53 random bits.
inline double uniform_open(std::mt19937_64& g) { return (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53; }

/// Circularly symmetric complex normal with total variance var (Box-Muller).
inline cplx complex_normal(std::mt19937_64& g, double var) {
  const double u1 = uniform_open(g), u2 = uniform_open(g);
  const double r = std::sqrt(-var * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

/// S = X^H X for X = V + G, V the n x m matrix with sqrt(lambda_i) on its diagonal.
inline HermitianMatrix draw_scatter(const WishartParams& p, std::mt19937_64& g, double var) {
  const int n = p.n, m = p.m;
  std::vector<cplx> X(static_cast<std::size_t>(n * m));
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < m; ++a) {
      cplx z = complex_normal(g, var);
      if (k == a) z += std::sqrt(p.lambdas[static_cast<std::size_t>(a)]);
      X[static_cast<std::size_t>(k * m + a)] = z;
    }
  HermitianMatrix S(m);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += std::conj(X[static_cast<std::size_t>(k * m + a)]) * X[static_cast<std::size_t>(k * m + b)];
      if (a == b) s = s.real();
      S(a, b) = s;
      S(b, a) = std::conj(s);
    }
  return S;
}

}  // namespace detail

/// Largest eigenvalue of S for cfg.samples independent draws, in draw order.
inline std::vector<double> sample_largest_eig(const WishartParams& p, const McConfig& cfg = {}) {
  p.validate();
  cfg.validate();
  std::vector<double> out(static_cast<std::size_t>(cfg.samples));
  const long chunks = (cfg.samples + detail::mc_chunk - 1) / detail::mc_chunk;
  auto run_chunk = [&](long k) {
    auto g = detail::substream(cfg.seed, k);
    const long end = std::min(cfg.samples, (k + 1) * detail::mc_chunk);
    for (long i = k * detail::mc_chunk; i < end; ++i)
      out[static_cast<std::size_t>(i)] = hermitian_eig_max(detail::draw_scatter(p, g, cfg.entry_variance));
  };
  const int threads = static_cast<int>(std::min<long>(cfg.threads, chunks));
  if (threads <= 1) {
    for (long k = 0; k < chunks; ++k) run_chunk(k);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (long k = t; k < chunks; k += threads) run_chunk(k);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Two-sided normal quantile of the 99.9% band.
inline constexpr double band_z = 3.2905;

struct CdfPoint {
  double x = 0.0;
  double empirical = 0.0;
  double analytic = 0.0;
  double half_width = 0.0;
  bool inside = false;
};

struct CdfComparison {
  std::vector<CdfPoint> points;
  bool pass = false;
  double worst_z = 0.0;  // max |empirical - analytic| / sigma
};

/// Empirical CDF against an analytic CDF at the empirical k/(q+1) quantiles, k = 1..q.
/// A point passes if it lies in the binomial band z sqrt(F(1-F)/N) plus one count.
inline CdfComparison compare_cdf(std::vector<double> draws, const std::function<double(double)>& analytic,
                                 int quantiles = 20, double z = band_z) {
  if (draws.empty()) throw std::invalid_argument("compare_cdf: no draws");
  std::sort(draws.begin(), draws.end());
  const double N = static_cast<double>(draws.size());
  CdfComparison out;
  out.pass = true;
  for (int k = 1; k <= quantiles; ++k) {
    const auto idx = static_cast<std::size_t>(std::ceil(k * N / (quantiles + 1.0))) - 1;
    CdfPoint pt;
    pt.x = draws[idx];
    pt.empirical = static_cast<double>(std::upper_bound(draws.begin(), draws.end(), pt.x) - draws.begin()) / N;
    pt.analytic = analytic(pt.x);
    const double sigma = std::sqrt(std::max(pt.analytic * (1.0 - pt.analytic), 0.0) / N);
    pt.half_width = z * sigma + 1.0 / N;
    const double dev = std::fabs(pt.empirical - pt.analytic);
    pt.inside = dev <= pt.half_width;
    if (sigma > 0.0) out.worst_z = std::max(out.worst_z, dev / sigma);
    out.pass = out.pass && pt.inside;
    out.points.push_back(pt);
  }
  return out;
}

inline CdfComparison compare_cdf(const WishartParams& p, const McConfig& cfg, const EvalConfig& route = {},
                                 int quantiles = 20) {
  return compare_cdf(sample_largest_eig(p, cfg), [&](double x) { return cdf_eval(p, x, route).value; }, quantiles);
}

struct HistogramBin {
  double lo = 0.0, hi = 0.0;
  double density = 0.0;  // count / (N * width)
};

/// Equal-width density histogram over [min, max] of the draws.
inline std::vector<HistogramBin> density_histogram(const std::vector<double>& draws, int bins) {
  if (draws.empty() || bins < 1) throw std::invalid_argument("density_histogram: need draws and bins >= 1");
  const auto [lo_it, hi_it] = std::minmax_element(draws.begin(), draws.end());
  const double lo = *lo_it, hi = *hi_it > *lo_it ? *hi_it : *lo_it + 1.0;
  const double w = (hi - lo) / bins;
  std::vector<HistogramBin> h(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) h[static_cast<std::size_t>(b)] = {lo + b * w, lo + (b + 1) * w, 0.0};
  for (double d : draws) {
    auto b = static_cast<std::size_t>(std::min(bins - 1, static_cast<int>((d - lo) / w)));
    h[b].density += 1.0;
  }
  for (auto& bin : h) bin.density /= static_cast<double>(draws.size()) * w;
  return h;
}

}  // namespace wishart
