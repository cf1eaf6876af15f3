#pragma once

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <mpfr.h>

#include "errors.hpp"
#include "h_integrals.hpp"
#include "params.hpp"
#include "poly.hpp"
#include "special_functions.hpp"

namespace wishart {

/// Per-variable basis (b0, b1, b2) = (H^{N-1}_N(x,l), x^N e^{-x} 0F1(N; x l), x^N e^{-x} 0F1(N+1; x l)).
/// Blocks act as d/dx b = B b (or d/dl b = B b).
using Block3 = std::array<std::array<RationalFunction, 3>, 3>;
using Matrix = std::vector<std::vector<double>>;

/// Exact x-direction block; x is variable 0 and lambda is variable `var`.
inline Block3 pfaffian_x_block(int N, int var) {
  const RationalFunction x = RationalFunction::var(0), l = RationalFunction::var(var);
  const RationalFunction inv_x(Poly(1), Poly::var(0));
  const RationalFunction n(N);
  Block3 b;
  b[0][1] = inv_x;
  b[1][1] = n * inv_x - 1;
  b[1][2] = l / n;
  b[2][1] = n * inv_x;
  b[2][2] = RationalFunction(-1);
  return b;
}

/// Exact lambda-direction block.
inline Block3 pfaffian_lambda_block(int N, int var) {
  const RationalFunction x = RationalFunction::var(0);
  const RationalFunction inv_l(Poly(1), Poly::var(var));
  const RationalFunction n(N);
  Block3 b;
  b[0][0] = RationalFunction(1);
  b[0][2] = RationalFunction(Rational(-1, N));
  b[1][2] = x / n;
  b[2][1] = n * inv_l;
  b[2][2] = -(n * inv_l);
  return b;
}

/// Zero-curvature condition d_l B_x + B_x B_l = d_x B_l + B_l B_x for one variable, exactly.
inline bool pfaffian_blocks_integrable(int N) {
  const int var = 1;
  const Block3 bx = pfaffian_x_block(N, var), bl = pfaffian_lambda_block(N, var);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      RationalFunction lhs = bx[r][c].derivative(var), rhs = bl[r][c].derivative(0);
      for (int k = 0; k < 3; ++k) {
        lhs += bx[r][k] * bl[k][c];
        rhs += bl[r][k] * bx[k][c];
      }
      if (lhs != rhs) return false;
    }
  return true;
}

namespace detail {

inline std::size_t pow3(int m) {
  std::size_t d = 1;
  for (int i = 0; i < m; ++i) d *= 3;
  return d;
}

template <class R>
std::array<std::array<R, 3>, 3> x_block_value(int N, R x, R l) {
  const R n = N;
  return {{{R(0), 1 / x, R(0)}, {R(0), n / x - 1, l / n}, {R(0), n / x, R(-1)}}};
}

template <class R>
std::array<std::array<R, 3>, 3> lambda_block_value(int N, R x, R l) {
  const R n = N;
  return {{{R(1), R(0), -1 / n}, {R(0), R(0), x / n}, {R(0), n / l, -n / l}}};
}

/// Dense matrix of a block acting on factor `i` of the tensor basis (flat index
/// sum_i alpha_i 3^{m-1-i}).
template <class T, class B>
std::vector<std::vector<T>> embed_block(const B& block, int m, int i) {
  const std::size_t dim = pow3(m), stride = pow3(m - 1 - i);
  std::vector<std::vector<T>> a(dim, std::vector<T>(dim, T(0)));
  for (std::size_t row = 0; row < dim; ++row) {
    const std::size_t ai = (row / stride) % 3, base = row - ai * stride;
    for (std::size_t k = 0; k < 3; ++k) {
      const T& v = block[ai][k];
      a[row][base + k * stride] += v;
    }
  }
  return a;
}

}  // namespace detail

/// First-order system d/dx B = A(x) B (and d/dl_i B = L_i(x) B) on the 3^m tensor
/// basis prod_i b_{alpha_i}(x, lambda_i); lambdas sorted descending.
struct PfaffianSystem {
  int n = 0;
  int m = 0;
  int N = 0;
  std::vector<double> lambdas;

  std::size_t dim() const { return detail::pow3(m); }

  /// d/dx of the tensor basis as a Kronecker sum of per-variable blocks.
  template <class R>
  void rhs(const std::vector<R>& b, std::vector<R>& db, R x) const {
    const std::size_t d = dim();
    db.assign(d, 0.0);
    std::size_t stride = d;
    for (int i = 0; i < m; ++i) {
      stride /= 3;
      const auto blk = detail::x_block_value<R>(N, x, lambdas[static_cast<std::size_t>(i)]);
      for (std::size_t row = 0; row < d; ++row) {
        const std::size_t ai = (row / stride) % 3, base = row - ai * stride;
        R s = 0;
        for (std::size_t k = 0; k < 3; ++k)
          if (blk[ai][k] != 0) s += blk[ai][k] * b[base + k * stride];
        db[row] += s;
      }
    }
  }

  Matrix x_matrix(double x) const {
    Matrix a(dim(), std::vector<double>(dim(), 0.0));
    for (int i = 0; i < m; ++i) {
      auto e = detail::embed_block<double>(detail::x_block_value<double>(N, x, lambdas[static_cast<std::size_t>(i)]), m, i);
      for (std::size_t r = 0; r < dim(); ++r)
        for (std::size_t c = 0; c < dim(); ++c) a[r][c] += e[r][c];
    }
    return a;
  }

  Matrix lambda_matrix(int i, double x) const {
    return detail::embed_block<double>(detail::lambda_block_value<double>(N, x, lambdas[static_cast<std::size_t>(i)]), m, i);
  }
};

inline PfaffianSystem build_pfaffian(const WishartParams& p) {
  p.validate();
  if (p.n <= p.m) throw std::invalid_argument("build_pfaffian: n > m required");
  return {p.n, p.m, p.n - p.m + 1, p.sorted()};
}

/// Exact dense x-matrix over Q(x, lambda_1..lambda_m) (lambda_i is variable i).
inline std::vector<std::vector<RationalFunction>> pfaffian_x_matrix_exact(int n, int m) {
  const int N = n - m + 1;
  const std::size_t d = detail::pow3(m);
  std::vector<std::vector<RationalFunction>> a(d, std::vector<RationalFunction>(d));
  for (int i = 0; i < m; ++i) {
    auto e = detail::embed_block<RationalFunction>(pfaffian_x_block(N, i + 1), m, i);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        if (!e[r][c].is_zero()) a[r][c] += e[r][c];
  }
  return a;
}

/// Max-norm of d_{l_i} A + A L_i - d_x L_i - L_i A at x, with the derivative
/// terms from the exact blocks.
inline double integrability_residual(const PfaffianSystem& s, int i, double x) {
  const Matrix a = s.x_matrix(x), l = s.lambda_matrix(i, x);
  const double li = s.lambdas[static_cast<std::size_t>(i)];
  const Block3 bx = pfaffian_x_block(s.N, 1), bl = pfaffian_lambda_block(s.N, 1);
  std::array<std::array<double, 3>, 3> dbx{}, dbl{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      dbx[r][c] = bx[r][c].derivative(1).eval(std::vector<double>{x, li});
      dbl[r][c] = bl[r][c].derivative(0).eval(std::vector<double>{x, li});
    }
  const Matrix da = detail::embed_block<double>(dbx, s.m, i), dl = detail::embed_block<double>(dbl, s.m, i);
  double worst = 0.0;
  const std::size_t d = s.dim();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      double v = da[r][c] - dl[r][c];
      for (std::size_t k = 0; k < d; ++k) v += a[r][k] * l[k][c] - l[r][k] * a[k][c];
      worst = std::max(worst, std::fabs(v));
    }
  return worst;
}

/// Working precision of the numeric path (state, series start, extraction). The
/// extraction sums cancel strongly at small x and for close lambdas; the extended
/// mantissa buys about three digits over double.
using hgm_real = long double;

struct HgmConfig {
  double rtol = 1e-10;
  double atol = 1e-13;
  double x0 = 0.5;  // series start
};

struct HgmState {
  double x = 0.0;
  std::vector<hgm_real> basis;
};

namespace detail {

/// 0F1(; a; z) for z >= 0 (all terms positive).
inline hgm_real hpg01_ext(int a, hgm_real z) {
  hgm_real term = 1, sum = 1;
  for (int k = 0; k < 100000; ++k) {
    term *= z / ((a + k) * hgm_real(k + 1));
    sum += term;
    if (term <= sum * 1e-21L && k + 1 > z / (a + k)) return sum;
  }
  throw numeric_failure("hgm: 0F1 series did not converge");
}

/// Lower incomplete gamma gamma(a, x) = x^a e^{-x} sum_k x^k / (a)_{k+1}.
inline hgm_real lower_gamma_ext(int a, hgm_real x) {
  hgm_real term = hgm_real(1) / a, sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (term <= sum * 1e-21L) return sum * std::exp(a * std::log(x) - x);
  }
  throw numeric_failure("hgm: incomplete gamma series did not converge");
}

/// H^{N-1}_N(x, l) = sum_j l^j gamma(N+j, x) / ((N)_j j!).
inline hgm_real h_lower_ext(int N, hgm_real x, hgm_real l) {
  hgm_real coef = 1, sum = 0;
  for (int j = 0; j < 100000; ++j) {
    if (j > 0) coef *= l / ((N + j - 1) * hgm_real(j));
    const hgm_real t = coef * lower_gamma_ext(N + j, x);
    sum += t;
    if (coef == 0 || (j > x * l && t <= sum * 1e-21L)) return sum;
  }
  throw numeric_failure("hgm: H series did not converge");
}

/// Polynomial in (x, y) with extended-precision coefficients.
struct ExtPoly {
  std::vector<std::pair<std::array<int, 2>, hgm_real>> terms;

  explicit ExtPoly(const Poly& p) {
    mpfr_t t;
    mpfr_init2(t, 64);
    for (const auto& [e, c] : p.terms()) {
      if (e.size() > 2) throw std::logic_error("ExtPoly: more than two variables");
      mpfr_set_q(t, c.get_mpq_t(), MPFR_RNDN);
      terms.push_back({{e.size() > 0 ? e[0] : 0, e.size() > 1 ? e[1] : 0}, mpfr_get_ld(t, MPFR_RNDN)});
    }
    mpfr_clear(t);
  }
  hgm_real eval(hgm_real x, hgm_real y) const {
    hgm_real s = 0;
    for (const auto& [e, c] : terms) {
      hgm_real v = c;
      for (int k = 0; k < e[0]; ++k) v *= x;
      for (int k = 0; k < e[1]; ++k) v *= y;
      s += v;
    }
    return s;
  }
};

struct ExtRational {
  ExtPoly num, den;
  explicit ExtRational(const RationalFunction& r) : num(r.num()), den(r.den()) {}
  hgm_real eval(hgm_real x, hgm_real y) const { return num.eval(x, y) / den.eval(x, y); }
};

}  // namespace detail

/// Per-variable basis values at (x, l) from positive-term series.
inline std::array<hgm_real, 3> basis_values(int N, double x, double l) {
  const hgm_real xe = x, le = l;
  const hgm_real front = std::exp(N * std::log(xe) - xe);
  return {detail::h_lower_ext(N, xe, le), front * detail::hpg01_ext(N, xe * le),
          front * detail::hpg01_ext(N + 1, xe * le)};
}

inline HgmState initial_state(const PfaffianSystem& s, double x0) {
  if (!(x0 > 0.0)) throw std::invalid_argument("initial_state: x0 > 0 required");
  HgmState st{x0, {hgm_real(1)}};
  for (double l : s.lambdas) {
    const auto b = basis_values(s.N, x0, l);
    std::vector<hgm_real> next;
    next.reserve(st.basis.size() * 3);
    for (hgm_real v : st.basis)
      for (hgm_real c : b) next.push_back(v * c);
    st.basis = std::move(next);
  }
  return st;
}

/// Adaptive Dormand-Prince 5(4) integration in x (either direction), lambdas fixed.
inline HgmState hgm_integrate(const PfaffianSystem& s, const HgmState& start, double x_target,
                              const HgmConfig& cfg = {}) {
  if (!(start.x > 0.0) || !(x_target > 0.0)) throw std::invalid_argument("hgm_integrate: x > 0 required");
  if (start.basis.size() != s.dim()) throw std::invalid_argument("hgm_integrate: state dimension mismatch");
  HgmState st = start;
  if (x_target == start.x) return st;
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<hgm_real>;
  auto stepper = odeint::make_controlled(hgm_real(cfg.atol), hgm_real(cfg.rtol),
                                         odeint::runge_kutta_dopri5<State, hgm_real, State, hgm_real>());
  auto sys = [&s](const State& b, State& db, hgm_real x) { s.rhs(b, db, x); };
  const hgm_real dt = (hgm_real(x_target) - start.x) / 64;
  try {
    odeint::integrate_adaptive(stepper, sys, st.basis, hgm_real(start.x), hgm_real(x_target), dt);
  } catch (const odeint::step_adjustment_error& e) {
    throw numeric_failure(std::string("hgm_integrate: ") + e.what());
  }
  for (hgm_real v : st.basis)
    if (!std::isfinite(v)) throw numeric_failure("hgm_integrate: non-finite state");
  st.x = x_target;
  return st;
}

namespace detail {

struct HgmEntries {
  std::vector<std::array<RationalFunction, 3>> exact;  // coefficients of H^{n-j}_N(x, y), j = 1..m
  std::vector<std::array<ExtRational, 3>> numeric;
};

inline const HgmEntries& hgm_entries(int n, int m) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<HgmEntries>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, m}];
  if (slot) return *slot;
  const int N = n - m + 1;
  auto e = std::make_unique<HgmEntries>();
  for (int j = 1; j <= m; ++j) {
    auto c = basis_coefficients(reduce_to_basis({n - j, 0, N}, N), N);
    e->numeric.push_back({ExtRational(c[0]), ExtRational(c[1]), ExtRational(c[2])});
    e->exact.push_back(std::move(c));
  }
  slot = std::move(e);
  return *slot;
}

/// Multilinear expansion of det(E) (or of sum_r det with row r replaced by U) over
/// the tensor basis. E[i][j][k]: coefficient of b_k(lambda_i) in entry (i, j).
template <class T>
std::vector<T> expand_determinant(const std::vector<std::vector<std::array<T, 3>>>& e,
                                  const std::vector<std::array<T, 3>>* replacement) {
  const int m = static_cast<int>(e.size());
  const std::size_t d = pow3(m);
  std::vector<T> out(d, T(0));
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int inversions = 0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) inversions += perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)];
    const int sign = inversions % 2 ? -1 : 1;
    for (int r = replacement ? 0 : -1; r < (replacement ? m : 0); ++r) {
      for (std::size_t alpha = 0; alpha < d; ++alpha) {
        T prod(sign);
        std::size_t rest = alpha, stride = d;
        bool zero = false;
        for (int i = 0; i < m && !zero; ++i) {
          stride /= 3;
          const std::size_t k = rest / stride;
          rest %= stride;
          const std::size_t col = static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]);
          const T& f = i == r ? (*replacement)[col][k] : e[static_cast<std::size_t>(i)][col][k];
          if (f == T(0)) zero = true;
          else prod = prod * f;
        }
        if (!zero) out[alpha] = out[alpha] + prod;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace detail

/// Which function the extraction vector represents.
enum class HgmTarget { cdf_det, R };

/// Exact coefficients c_alpha(x, lambda_1..lambda_m) with det(H^{n-j}_N(x,lambda_i))
/// (cdf_det) or R = d/dx of it equal to sum_alpha c_alpha B_alpha.
inline std::vector<RationalFunction> extraction_vector(int n, int m, HgmTarget target) {
  if (m < 1 || n <= m) throw std::invalid_argument("extraction_vector: n > m >= 1 required");
  const int N = n - m + 1;
  const auto& ent = detail::hgm_entries(n, m).exact;
  std::vector<std::vector<std::array<RationalFunction, 3>>> e(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::array<RationalFunction, 3> c;
      for (std::size_t k = 0; k < 3; ++k) c[k] = ent[static_cast<std::size_t>(j)][k].rename({0, i + 1});
      e[static_cast<std::size_t>(i)].push_back(c);
    }
  if (target == HgmTarget::cdf_det) return detail::expand_determinant<RationalFunction>(e, nullptr);
  std::vector<std::array<RationalFunction, 3>> u(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) u[static_cast<std::size_t>(j - 1)][1] = HCombo::x_power(n - j - N);
  return detail::expand_determinant(e, &u);
}

/// Numeric extraction vector at (x, lambdas) from the cached entries.
inline std::vector<hgm_real> extraction_values(const PfaffianSystem& s, double x, HgmTarget target) {
  const auto& ent = detail::hgm_entries(s.n, s.m).numeric;
  const int m = s.m;
  std::vector<std::vector<std::array<hgm_real, 3>>> e(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::array<hgm_real, 3> c{};
      for (std::size_t k = 0; k < 3; ++k) {
        c[k] = ent[static_cast<std::size_t>(j)][k].eval(x, s.lambdas[static_cast<std::size_t>(i)]);
        if (!std::isfinite(c[k])) throw numeric_failure("hgm: extraction pole");
      }
      e[static_cast<std::size_t>(i)].push_back(c);
    }
  if (target == HgmTarget::cdf_det) return detail::expand_determinant<hgm_real>(e, nullptr);
  std::vector<std::array<hgm_real, 3>> u(static_cast<std::size_t>(m), std::array<hgm_real, 3>{});
  for (int j = 1; j <= m; ++j) u[static_cast<std::size_t>(j - 1)][1] = std::pow(hgm_real(x), s.n - j - s.N);
  return detail::expand_determinant(e, &u);
}

/// Coefficients of d/dx (sum c_alpha B_alpha): d_x c + A^T c.
inline std::vector<RationalFunction> derivative_extraction(const std::vector<RationalFunction>& c, int n, int m) {
  const auto a = pfaffian_x_matrix_exact(n, m);
  std::vector<RationalFunction> out(c.size());
  for (std::size_t b = 0; b < c.size(); ++b) {
    RationalFunction v = c[b].derivative(0);
    for (std::size_t al = 0; al < c.size(); ++al)
      if (!c[al].is_zero() && !a[al][b].is_zero()) v += c[al] * a[al][b];
    out[b] = v;
  }
  return out;
}

/// Rewrite an m=2 tensor-basis vector (no b0 (x) b0 term) on the eight-element basis
///   x^{N-1} e^{-x} 0F1(N|N+1; x l_2) H^{N-1}_N(x, l_1), the same with 1 <-> 2,
///   x^{2N-1} e^{-2x} 0F1(N|N+1; x l_1) 0F1(N|N+1; x l_2),
/// in the order of the published rank-8 coefficient table.
inline std::array<RationalFunction, 8> rank8_coefficients(const std::vector<RationalFunction>& v, int N) {
  if (v.size() != 9) throw std::invalid_argument("rank8_coefficients: m = 2 vector required");
  if (!v[0].is_zero()) throw std::invalid_argument("rank8_coefficients: b0 (x) b0 term present");
  const RationalFunction x = RationalFunction::var(0), xn = x / RationalFunction(N);
  std::array<RationalFunction, 8> d;
  d[0] = v[1] * xn;
  d[1] = v[2] * xn;
  d[2] = v[3] * xn;
  d[3] = v[6] * xn;
  d[4] = v[4] * x;
  d[5] = v[5] * x + d[2];
  d[6] = v[7] * x + d[0];
  d[7] = v[8] * x + d[1] + d[3];
  return d;
}

namespace detail {

inline void require_hgm_params(const WishartParams& p, double tol) {
  p.validate();
  if (p.n <= p.m) throw std::invalid_argument("hgm: n > m required");
  if (p.m > 3) throw std::invalid_argument("hgm: m <= 3 supported");
  const auto lam = p.sorted();
  double mx = 0.0;
  for (double l : lam) mx = std::max(mx, l);
  for (std::size_t i = 1; i < lam.size(); ++i)
    if (lam[i - 1] - lam[i] <= tol * (1.0 + mx)) throw std::domain_error("hgm: confluent lambdas are not supported");
}

/// e^{-sum l} / ((n-m)!^m prod_{i<j}(l_i - l_j)) with lambdas sorted descending.
inline double hgm_front(const PfaffianSystem& s) {
  double logv = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < s.lambdas.size(); ++i) {
    sum += s.lambdas[i];
    for (std::size_t j = i + 1; j < s.lambdas.size(); ++j) logv += std::log(s.lambdas[i] - s.lambdas[j]);
  }
  return std::exp(-sum - s.m * std::lgamma(s.n - s.m + 1.0) - logv);
}

inline std::pair<double, double> combine(const std::vector<hgm_real>& c, const std::vector<hgm_real>& b) {
  hgm_real v = 0, mag = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    v += c[i] * b[i];
    mag += std::fabs(c[i] * b[i]);
  }
  return {static_cast<double>(v), static_cast<double>(mag)};
}

inline HgmState hgm_state_at(const PfaffianSystem& s, double x, const HgmConfig& hc) {
  const double x0 = std::min(hc.x0, x);
  return hgm_integrate(s, initial_state(s, x0), x, hc);
}

inline Evaluation hgm_eval(const WishartParams& p, double x, const EvalConfig& cfg, HgmTarget target) {
  cfg.validate();
  require_hgm_params(p, cfg.confluence_threshold);
  const PfaffianSystem s = build_pfaffian(p);
  const HgmConfig hc;
  const HgmState st = hgm_state_at(s, x, hc);
  const auto [v, mag] = combine(extraction_values(s, x, target), st.basis);
  const double f = hgm_front(s);
  // ODE error is relative to the state; rounding in the extraction sum scales with its magnitude.
  return {f * v, std::fabs(f) * (std::fabs(v) * 10.0 * hc.rtol + mag * 1e-18), Method::hgm};
}

}  // namespace detail

/// F_{n,m}(x) by integrating the Pfaffian system from a series start.
inline Evaluation cdf_hgm(const WishartParams& p, double x, const EvalConfig& cfg = {}) {
  if (!(x >= 0.0)) throw std::invalid_argument("cdf: x >= 0 required");
  if (x == 0.0) return {0.0, 0.0, Method::hgm};
  return detail::hgm_eval(p, x, cfg, HgmTarget::cdf_det);
}

/// psi_{n,m}(x) by integrating the Pfaffian system from a series start.
inline Evaluation pdf_hgm(const WishartParams& p, double x, const EvalConfig& cfg = {}) {
  if (!(x > 0.0)) throw std::invalid_argument("pdf: x > 0 required");
  return detail::hgm_eval(p, x, cfg, HgmTarget::R);
}

struct TrajectoryPoint {
  double x = 0.0;
  std::vector<hgm_real> basis;
  double R = 0.0;
  double psi = 0.0;
  double cdf = 0.0;
};

/// One trajectory through increasing abscissas; each point continues from the previous.
inline std::vector<TrajectoryPoint> hgm_trajectory(const WishartParams& p, std::vector<double> xs,
                                                   const HgmConfig& hc = {}, double confluence_threshold = 1e-5) {
  detail::require_hgm_params(p, confluence_threshold);
  std::sort(xs.begin(), xs.end());
  const PfaffianSystem s = build_pfaffian(p);
  const double f = detail::hgm_front(s);
  std::vector<TrajectoryPoint> out;
  if (xs.empty()) return out;
  if (!(xs.front() > 0.0)) throw std::invalid_argument("hgm_trajectory: x > 0 required");
  HgmState st = detail::hgm_state_at(s, xs.front(), hc);
  for (double x : xs) {
    st = hgm_integrate(s, st, x, hc);
    TrajectoryPoint t{x, st.basis, 0.0, 0.0, 0.0};
    t.R = detail::combine(extraction_values(s, x, HgmTarget::R), st.basis).first;
    t.psi = f * t.R;
    t.cdf = f * detail::combine(extraction_values(s, x, HgmTarget::cdf_det), st.basis).first;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace wishart
