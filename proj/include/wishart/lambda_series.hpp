#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exp_poly.hpp"
#include "h_integrals.hpp"
#include "poly.hpp"
#include "special_functions.hpp"

namespace wishart {

/// Truncated power series in lambda_1..lambda_m with ExpPoly coefficients.
/// Each variable carries its own bound: coefficients with q_i <= valid(i)
/// are exact, everything above is unknown and never stored.
class LambdaSeries {
 public:
  using Index = std::vector<int>;
  using Map = std::map<Index, ExpPoly>;

  LambdaSeries() = default;
  LambdaSeries(int m, int order) : m_(m), valid_(static_cast<std::size_t>(m), order) {
    if (m < 1 || order < 0) throw std::invalid_argument("LambdaSeries: m >= 1 and order >= 0 required");
  }
  LambdaSeries(int m, std::vector<int> valid) : m_(m), valid_(std::move(valid)) {
    if (m < 1 || static_cast<int>(valid_.size()) != m) throw std::invalid_argument("LambdaSeries: bad bounds");
  }

  static LambdaSeries constant(int m, int order, const ExpPoly& c) {
    LambdaSeries s(m, order);
    s.add_term(Index(static_cast<std::size_t>(m), 0), c);
    return s;
  }
  static LambdaSeries monomial(int m, int order, const Index& q, const ExpPoly& c = ExpPoly(1)) {
    LambdaSeries s(m, order);
    s.add_term(q, c);
    return s;
  }

  int vars() const { return m_; }
  int valid(int i) const { return valid_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& valid_bounds() const { return valid_; }
  /// Smallest per-variable bound.
  int safe_order() const { return valid_.empty() ? 0 : *std::min_element(valid_.begin(), valid_.end()); }
  const Map& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }

  ExpPoly coefficient(const Index& q) const {
    auto it = coeffs_.find(q);
    return it == coeffs_.end() ? ExpPoly() : it->second;
  }

  bool in_range(const Index& q) const {
    for (int i = 0; i < m_; ++i)
      if (q[static_cast<std::size_t>(i)] < 0 || q[static_cast<std::size_t>(i)] > valid_[static_cast<std::size_t>(i)])
        return false;
    return true;
  }

  /// coeff[q] += c, silently dropped outside the valid box.
  void add_term(const Index& q, const ExpPoly& c) {
    if (static_cast<int>(q.size()) != m_) throw std::invalid_argument("LambdaSeries: index arity");
    if (c.is_zero() || !in_range(q)) return;
    auto [it, inserted] = coeffs_.try_emplace(q, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  /// Restrict to the box q_i <= bound_i (bounds only shrink).
  LambdaSeries truncated(const std::vector<int>& bounds) const {
    std::vector<int> v = valid_;
    for (int i = 0; i < m_; ++i) v[static_cast<std::size_t>(i)] = std::min(v[static_cast<std::size_t>(i)], bounds[static_cast<std::size_t>(i)]);
    LambdaSeries r(m_, v);
    for (const auto& [q, c] : coeffs_) r.add_term(q, c);
    return r;
  }

  LambdaSeries& operator+=(const LambdaSeries& o) { return combine(o, 1); }
  LambdaSeries& operator-=(const LambdaSeries& o) { return combine(o, -1); }
  friend LambdaSeries operator+(LambdaSeries a, const LambdaSeries& b) { return a += b; }
  friend LambdaSeries operator-(LambdaSeries a, const LambdaSeries& b) { return a -= b; }

  friend LambdaSeries operator*(const LambdaSeries& a, const LambdaSeries& b) {
    check_same(a, b);
    std::vector<int> v(a.valid_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::min(a.valid_[i], b.valid_[i]);
    LambdaSeries r(a.m_, v);
    for (const auto& [qa, ca] : a.coeffs_)
      for (const auto& [qb, cb] : b.coeffs_) {
        Index q(qa.size());
        for (std::size_t i = 0; i < q.size(); ++i) q[i] = qa[i] + qb[i];
        if (r.in_range(q)) r.add_term(q, ca * cb);
      }
    return r;
  }

  /// Multiply every coefficient by an ExpPoly (a function of x only).
  LambdaSeries scaled(const ExpPoly& s) const {
    LambdaSeries r(m_, valid_);
    if (s.is_zero()) return r;
    for (const auto& [q, c] : coeffs_) r.add_term(q, c * s);
    return r;
  }
  LambdaSeries scaled(const Rational& s) const {
    LambdaSeries r(m_, valid_);
    if (s == 0) return r;
    for (const auto& [q, c] : coeffs_) {
      ExpPoly t = c;
      t *= s;
      r.add_term(q, t);
    }
    return r;
  }

  /// Multiply by c * x^a * lambda^b (b indexed like q).
  LambdaSeries times_monomial(const Rational& c, int x_power, const Index& b) const {
    LambdaSeries r(m_, valid_);
    if (c == 0) return r;
    for (const auto& [q, v] : coeffs_) {
      Index s(q.size());
      for (std::size_t i = 0; i < s.size(); ++i) s[i] = q[i] + (i < b.size() ? b[i] : 0);
      if (!r.in_range(s)) continue;
      ExpPoly t = v.shifted(x_power);
      t *= c;
      r.add_term(s, t);
    }
    return r;
  }

  /// d/dlambda_i; the bound in variable i drops by one.
  LambdaSeries diff_lambda(int i) const {
    std::vector<int> v = valid_;
    v.at(static_cast<std::size_t>(i)) -= 1;
    LambdaSeries r(m_, v);
    if (v[static_cast<std::size_t>(i)] < 0) return r;
    for (const auto& [q, c] : coeffs_) {
      const int p = q[static_cast<std::size_t>(i)];
      if (p == 0) continue;
      Index s = q;
      s[static_cast<std::size_t>(i)] = p - 1;
      ExpPoly t = c;
      t *= Rational(p);
      r.add_term(s, t);
    }
    return r;
  }

  /// Coefficient-wise d/dx.
  LambdaSeries diff_x() const {
    LambdaSeries r(m_, valid_);
    for (const auto& [q, c] : coeffs_) r.add_term(q, c.derivative());
    return r;
  }

  /// Exchange lambda_i and lambda_j.
  LambdaSeries swapped(int i, int j) const {
    std::vector<int> v = valid_;
    std::swap(v.at(static_cast<std::size_t>(i)), v.at(static_cast<std::size_t>(j)));
    LambdaSeries r(m_, v);
    for (const auto& [q, c] : coeffs_) {
      Index s = q;
      std::swap(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)]);
      r.add_term(s, c);
    }
    return r;
  }

  friend bool operator==(const LambdaSeries& a, const LambdaSeries& b) {
    return a.m_ == b.m_ && a.valid_ == b.valid_ && a.coeffs_ == b.coeffs_;
  }

  /// Every coefficient with some negative power of e^{-x} or x.
  bool has_negative_powers() const {
    return std::any_of(coeffs_.begin(), coeffs_.end(),
                       [](const auto& t) { return t.second.has_negative_x_power() || t.second.has_negative_e_power(); });
  }

  double eval(double x, const std::vector<double>& lambdas) const {
    if (static_cast<int>(lambdas.size()) != m_) throw std::invalid_argument("LambdaSeries::eval: arity");
    double s = 0.0;
    for (const auto& [q, c] : coeffs_) {
      double mon = 1.0;
      for (int i = 0; i < m_; ++i) mon *= std::pow(lambdas[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(i)]);
      if (mon != 0.0) s += c.eval(x) * mon;
    }
    return s;
  }

  /// One line per coefficient: "q1 q2 ... qm : c*x^i*E^j + ...".
  std::string dump() const {
    std::ostringstream os;
    for (const auto& [q, c] : coeffs_) {
      for (std::size_t i = 0; i < q.size(); ++i) os << (i ? " " : "") << q[i];
      os << " : " << c.to_string() << "\n";
    }
    return os.str();
  }

 private:
  static void check_same(const LambdaSeries& a, const LambdaSeries& b) {
    if (a.m_ != b.m_) throw std::invalid_argument("LambdaSeries: mismatched number of variables");
  }
  LambdaSeries& combine(const LambdaSeries& o, int sign) {
    check_same(*this, o);
    for (std::size_t i = 0; i < valid_.size(); ++i) valid_[i] = std::min(valid_[i], o.valid_[i]);
    Map old;
    old.swap(coeffs_);
    for (auto& [q, c] : old) add_term(q, c);
    for (const auto& [q, c] : o.coeffs_) add_term(q, sign > 0 ? c : -c);
    return *this;
  }

  int m_ = 0;
  std::vector<int> valid_;
  Map coeffs_;
};

namespace detail {

inline int permutation_sign(const std::vector<int>& p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) sign = -sign;
  return sign;
}

/// Determinant by Leibniz expansion over a generic commutative ring.
template <class T>
T leibniz_det(const std::vector<std::vector<T>>& a) {
  const std::size_t m = a.size();
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  T sum{};
  do {
    T prod = a[0][static_cast<std::size_t>(p[0])];
    for (std::size_t i = 1; i < m; ++i) prod = prod * a[i][static_cast<std::size_t>(p[i])];
    if (permutation_sign(p) > 0) {
      sum = sum + prod;
    } else {
      sum = sum - prod;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return sum;
}

}  // namespace detail

/// Expansion det(f_i(lambda_j)) = sum_q D_q det(lambda_i^{q_j}) over strictly
/// increasing q, with D_q = det(c^{(i)}_{q_j}).
struct SchurExpansion {
  int m = 0;
  std::vector<std::pair<std::vector<int>, ExpPoly>> terms;

  const ExpPoly* find(const std::vector<int>& q) const {
    for (const auto& t : terms)
      if (t.first == q) return &t.second;
    return nullptr;
  }

  SchurExpansion diff_x() const {
    SchurExpansion r{m, {}};
    for (const auto& [q, c] : terms) {
      ExpPoly d = c.derivative();
      if (!d.is_zero()) r.terms.emplace_back(q, std::move(d));
    }
    return r;
  }
};

namespace detail {

// Laplace expansion along the first row with memoized minors keyed by the
// remaining column tuple; rows are functions, columns exponent indices.
class MinorCache {
 public:
  explicit MinorCache(const std::vector<std::vector<ExpPoly>>& rows) : rows_(rows) {}

  ExpPoly det(std::size_t first_row, const std::vector<int>& cols) {
    if (cols.empty()) return ExpPoly(1);
    auto key = std::make_pair(first_row, cols);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ExpPoly sum;
    std::vector<int> rest(cols.size() - 1);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const ExpPoly& a = rows_[first_row][static_cast<std::size_t>(cols[j])];
      if (a.is_zero()) continue;
      std::size_t r = 0;
      for (std::size_t k = 0; k < cols.size(); ++k)
        if (k != j) rest[r++] = cols[k];
      ExpPoly minor = det(first_row + 1, rest);
      if (minor.is_zero()) continue;
      if (j % 2 == 0) {
        sum += a * minor;
      } else {
        sum -= a * minor;
      }
    }
    memo_.emplace(key, sum);
    return sum;
  }

 private:
  const std::vector<std::vector<ExpPoly>>& rows_;
  std::map<std::pair<std::size_t, std::vector<int>>, ExpPoly> memo_;
};

// Calls f(q) for every strictly increasing q with q_m <= max_index and keep(q).
inline void for_each_increasing(int m, int max_index, const std::function<bool(const std::vector<int>&)>& keep,
                                const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> q(static_cast<std::size_t>(m));
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == m) {
      if (!keep || keep(q)) f(q);
      return;
    }
    for (int v = start; v <= max_index - (m - 1 - pos); ++v) {
      q[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, v + 1);
    }
  };
  rec(0, 0);
}

}  // namespace detail

/// Determinant-of-series expansion. rows[i][j] is the y^j coefficient of f_i;
/// tuples have q_m <= max_index (and pass `keep` when given).
inline SchurExpansion det_series(const std::vector<std::vector<ExpPoly>>& rows, int max_index,
                                 const std::function<bool(const std::vector<int>&)>& keep = {}) {
  const int m = static_cast<int>(rows.size());
  if (m < 1) throw std::invalid_argument("det_series: need at least one row");
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) < max_index + 1) throw std::invalid_argument("det_series: row too short");
  SchurExpansion out{m, {}};
  detail::MinorCache cache(rows);
  detail::for_each_increasing(m, max_index, keep, [&](const std::vector<int>& q) {
    ExpPoly d = cache.det(0, q);
    if (!d.is_zero()) out.terms.emplace_back(q, std::move(d));
  });
  return out;
}

/// Antisymmetric series sum_q D_q det(lambda_i^{q_j}) in the box of `order`.
inline LambdaSeries antisymmetric_series(const SchurExpansion& e, int order) {
  LambdaSeries s(e.m, order);
  std::vector<int> p(static_cast<std::size_t>(e.m));
  for (const auto& [q, c] : e.terms) {
    if (q.back() > order) continue;
    std::iota(p.begin(), p.end(), 0);
    do {
      LambdaSeries::Index idx(q.size());
      for (std::size_t i = 0; i < q.size(); ++i) idx[i] = q[static_cast<std::size_t>(p[i])];
      s.add_term(idx, detail::permutation_sign(p) > 0 ? c : -c);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return s;
}

/// Rows of the row-wise expansion of the CDF determinant: f_j = H^{n-j}_{n-m+1}.
inline std::vector<std::vector<ExpPoly>> cdf_rows(int n, int m, int max_index) {
  if (m < 1 || n < m) throw std::invalid_argument("cdf_rows: n >= m >= 1 required");
  std::vector<std::vector<ExpPoly>> rows;
  for (int j = 1; j <= m; ++j) rows.push_back(h_series({n - j, 0, n - m + 1}, max_index));
  return rows;
}

/// Expansion of det(H^{n-j}_{n-m+1}(x, lambda_i)) (the CDF without front factor).
inline SchurExpansion cdf_expansion(int n, int m, int max_index,
                                    const std::function<bool(const std::vector<int>&)>& keep = {}) {
  return det_series(cdf_rows(n, m, max_index), max_index, keep);
}

/// Series of det(H^{n-j}_{n-m+1}(x, lambda_i)).
inline LambdaSeries build_cdf_det_series(int n, int m, int order) {
  return antisymmetric_series(cdf_expansion(n, m, order), order);
}

/// Exact lambda-series of R_{n,m} = d/dx det(H^{n-j}_{n-m+1}(x, lambda_i)).
inline LambdaSeries build_R_series(int n, int m, int order) {
  return antisymmetric_series(cdf_expansion(n, m, order).diff_x(), order);
}

/// Vandermonde prod_{i<j}(lambda_i - lambda_j) as a Poly in variables 1..m.
inline Poly vandermonde_poly(int m) {
  Poly v(1);
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) v *= Poly::var(i) - Poly::var(j);
  return v;
}

/// Schur polynomial s_mu in variables 1..m from the bialternant ratio
/// det(lambda_i^{mu_j + m - j}) / prod_{i<j}(lambda_i - lambda_j).
inline Poly schur_poly(const std::vector<int>& mu) {
  const int m = static_cast<int>(mu.size());
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  Poly alt;
  do {
    Poly::Exponents e(static_cast<std::size_t>(m + 1), 0);
    for (int i = 0; i < m; ++i) {
      const int col = p[static_cast<std::size_t>(i)];
      e[static_cast<std::size_t>(i + 1)] = mu[static_cast<std::size_t>(col)] + m - 1 - col;
    }
    alt += Poly::monomial(detail::permutation_sign(p), e);
  } while (std::next_permutation(p.begin(), p.end()));
  try {
    return exact_divide(alt, vandermonde_poly(m));
  } catch (const std::domain_error&) {
    throw division_mismatch("schur_poly: bialternant not divisible by the Vandermonde");
  }
}

/// Partition mu with det(lambda_i^{q_j}) = (-1)^{m(m-1)/2} s_mu prod_{i<j}(lambda_i - lambda_j).
inline std::vector<int> partition_of(const std::vector<int>& q) {
  const int m = static_cast<int>(q.size());
  std::vector<int> mu(q.size());
  for (int j = 0; j < m; ++j) mu[static_cast<std::size_t>(j)] = q[static_cast<std::size_t>(m - 1 - j)] - (m - 1 - j);
  return mu;
}

inline int vandermonde_sign(int m) { return (m * (m - 1) / 2) % 2 == 0 ? 1 : -1; }

/// Numeric s_mu(lambda) via Jacobi-Trudi with complete homogeneous h_k.
inline double schur_value(const std::vector<int>& mu, const std::vector<double>& lambdas) {
  const int m = static_cast<int>(mu.size());
  const int kmax = (mu.empty() ? 0 : mu[0]) + m;
  // h[k] over all variables, by adding variables one at a time.
  std::vector<double> h(static_cast<std::size_t>(kmax + 1), 0.0);
  h[0] = 1.0;
  for (double l : lambdas)
    for (int k = 1; k <= kmax; ++k) h[static_cast<std::size_t>(k)] += l * h[static_cast<std::size_t>(k - 1)];
  auto hk = [&](int k) { return k < 0 ? 0.0 : h[static_cast<std::size_t>(k)]; };
  std::vector<std::vector<double>> a(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = hk(mu[static_cast<std::size_t>(i)] - i + j);
  return detail::leibniz_det(a);
}

namespace detail {

inline Rational factorial(int k) {
  Rational f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace detail

/// Series of psi_{n,m} e^{sum lambda} in the box of `order`, built per Schur
/// component: the R expansion is divided by the Vandermonde exactly and the
/// 1/((n-m)!)^m factor applied.
inline LambdaSeries build_psi_series(int n, int m, int order) {
  const int degree_cap = m * order;
  auto keep = [&](const std::vector<int>& q) {
    int s = 0;
    for (int v : partition_of(q)) s += v;
    return s <= degree_cap;
  };
  SchurExpansion r = cdf_expansion(n, m, degree_cap + m - 1, keep).diff_x();
  Rational front = 1;
  for (int i = 0; i < m; ++i) front *= detail::factorial(n - m);
  const Rational factor = Rational(vandermonde_sign(m)) / front;
  LambdaSeries out(m, order);
  for (const auto& [q, c] : r.terms) {
    Poly s = schur_poly(partition_of(q));
    ExpPoly cc = c;
    cc *= factor;
    for (const auto& [e, coef] : s.terms()) {
      LambdaSeries::Index idx(static_cast<std::size_t>(m), 0);
      for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = Poly::exponent(e, i + 1);
      if (!out.in_range(idx)) continue;
      ExpPoly t = cc;
      t *= coef;
      out.add_term(idx, t);
    }
  }
  return out;
}

/// Row-scaling identity: sum_l det(A with row l scaled column-wise by c_j)
/// equals (sum c_j) det(A). Exact check.
inline bool lemma7_check(const std::vector<std::vector<ExpPoly>>& a, const std::vector<Rational>& c) {
  const std::size_t m = a.size();
  if (c.size() != m) throw std::invalid_argument("lemma7_check: size mismatch");
  ExpPoly lhs;
  for (std::size_t l = 0; l < m; ++l) {
    auto b = a;
    for (std::size_t j = 0; j < m; ++j) b[l][j] *= c[j];
    lhs += detail::leibniz_det(b);
  }
  Rational total = 0;
  for (const auto& v : c) total += v;
  ExpPoly rhs = detail::leibniz_det(a);
  rhs *= total;
  return lhs == rhs;
}

/// Numeric evaluation of psi e^{sum lambda} (or the CDF determinant ratio) by
/// the exact Schur-component series, truncated at q_m <= order.
class SeriesEvaluator {
 public:
  SeriesEvaluator(int n, int m, int order) : n_(n), m_(m), order_(order) {
    if (m < 1 || n < m) throw std::invalid_argument("SeriesEvaluator: n >= m >= 1 required");
    cdf_ = cdf_expansion(n, m, order);
    pdf_ = cdf_.diff_x();
    Rational front = 1;
    for (int i = 0; i < m; ++i) front *= detail::factorial(n - m);
    factor_ = vandermonde_sign(m) / front.get_d();
    // Filled up front so evaluation is read-only and thread-safe.
    for (const auto* e : {&cdf_, &pdf_})
      for (const auto& [q, c] : e->terms)
        if (!schur_cache_.count(q)) schur_cache_.emplace(q, schur_poly(partition_of(q)));
  }

  /// det(...)/(prod_{i<j}(lambda_i - lambda_j) (n-m)!^m); multiply by e^{-sum lambda} for F.
  double cdf_ratio(double x, const std::vector<double>& lambdas) const { return sum(cdf_, x, lambdas); }
  double pdf_ratio(double x, const std::vector<double>& lambdas) const { return sum(pdf_, x, lambdas); }
  int order() const { return order_; }

 private:
  double sum(const SchurExpansion& e, double x, const std::vector<double>& lambdas) const {
    if (static_cast<int>(lambdas.size()) != m_) throw std::invalid_argument("SeriesEvaluator: arity");
    std::vector<double> point{0.0};
    point.insert(point.end(), lambdas.begin(), lambdas.end());
    detail::CompensatedSum s;
    for (const auto& [q, c] : e.terms) s.add(c.eval(x) * schur(q).eval(point));
    return s.value() * factor_;
  }

  // Schur polynomials have nonnegative coefficients, so evaluating the
  // expanded form at lambda >= 0 avoids the sign alternation of Jacobi-Trudi.
  const Poly& schur(const std::vector<int>& q) const { return schur_cache_.at(q); }

  int n_, m_, order_;
  SchurExpansion cdf_, pdf_;
  std::map<std::vector<int>, Poly> schur_cache_;
  double factor_ = 1.0;
};

}  // namespace wishart
