#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace wishart {

using Rational = mpq_class;

namespace detail {

// Minimal RAII holder for an MPFR float.
class MpfrFloat {
 public:
  explicit MpfrFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  ~MpfrFloat() { mpfr_clear(v_); }
  MpfrFloat(const MpfrFloat&) = delete;
  MpfrFloat& operator=(const MpfrFloat&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

}  // namespace detail

/// Exact element of Q[x, 1/x, e^{-x}, e^{x}]: a finite sum of c * x^i * E^j
/// with E = e^{-x}. Zero coefficients are never stored, so equality is
/// structural.
class ExpPoly {
 public:
  using Key = std::pair<int, int>;  // (power of x, power of E)
  using TermMap = std::map<Key, Rational>;

  ExpPoly() = default;
  ExpPoly(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_[{0, 0}] = c;
    canonicalize();
  }
  ExpPoly(long c) : ExpPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  ExpPoly(int c) : ExpPoly(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  static ExpPoly monomial(const Rational& c, int x_power, int e_power) {
    ExpPoly p;
    if (c != 0) p.terms_[{x_power, e_power}] = c;
    p.canonicalize();
    return p;
  }
  static ExpPoly x(int power = 1) { return monomial(1, power, 0); }
  static ExpPoly e(int power = 1) { return monomial(1, 0, power); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(int x_power, int e_power) const {
    auto it = terms_.find({x_power, e_power});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  bool has_negative_x_power() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.first < 0; });
  }
  bool has_negative_e_power() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.second < 0; });
  }

  ExpPoly& operator+=(const ExpPoly& o) {
    for (const auto& [k, c] : o.terms_) accumulate(k, c);
    return *this;
  }
  ExpPoly& operator-=(const ExpPoly& o) {
    for (const auto& [k, c] : o.terms_) accumulate(k, -c);
    return *this;
  }
  ExpPoly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& t : terms_) t.second *= s;
    }
    return *this;
  }
  ExpPoly& operator*=(const ExpPoly& o) { return *this = *this * o; }

  /// this += c * x^i * E^j * o, without temporaries.
  void add_scaled(const ExpPoly& o, const Rational& c, int x_shift = 0, int e_shift = 0) {
    if (c == 0) return;
    for (const auto& [k, v] : o.terms_) accumulate({k.first + x_shift, k.second + e_shift}, v * c);
  }

  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator-(ExpPoly a) {
    for (auto& t : a.terms_) t.second = -t.second;
    return a;
  }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
    if (b.terms_.size() == 1 && b.terms_.begin()->first == Key{0, 0}) return ExpPoly(a) *= b.terms_.begin()->second;
    if (a.terms_.size() == 1 && a.terms_.begin()->first == Key{0, 0}) return ExpPoly(b) *= a.terms_.begin()->second;
    ExpPoly r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) r.accumulate({ka.first + kb.first, ka.second + kb.second}, ca * cb);
    return r;
  }
  friend bool operator==(const ExpPoly& a, const ExpPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const ExpPoly& a, const ExpPoly& b) { return !(a == b); }

  ExpPoly pow(unsigned k) const {
    ExpPoly r(1);
    for (unsigned i = 0; i < k; ++i) r *= *this;
    return r;
  }

  /// Multiply by x^i E^j.
  ExpPoly shifted(int x_shift, int e_shift = 0) const {
    ExpPoly r;
    for (const auto& [k, c] : terms_) r.terms_[{k.first + x_shift, k.second + e_shift}] = c;
    return r;
  }

  /// Exact d/dx: d(x^i E^j) = i x^{i-1} E^j - j x^i E^j.
  ExpPoly derivative() const {
    ExpPoly r;
    for (const auto& [k, c] : terms_) {
      const auto [i, j] = k;
      if (i != 0) r.accumulate({i - 1, j}, c * i);
      if (j != 0) r.accumulate({i, j}, -c * j);
    }
    return r;
  }

  /// Numeric value at x0. Terms are summed in MPFR with the working precision
  /// raised until the cancellation against the sum of absolute term values is
  /// resolved to ~2^-60 relative, so the double result is correctly rounded
  /// up to a few ulp.
  double eval(double x0) const {
    if (terms_.empty()) return 0.0;
    if (x0 == 0.0 && has_negative_x_power())
      throw std::domain_error("ExpPoly::eval: negative power of x at x = 0");
    mpfr_prec_t prec = 128;
    for (int attempt = 0; attempt < 12; ++attempt) {
      double value = 0.0;
      long scale_exp = 0;
      long value_exp = 0;
      bool zero = eval_at_precision(x0, prec, value, scale_exp, value_exp);
      // Accumulated rounding is bounded by (#terms) * scale * 2^{-prec}.
      long guard = static_cast<long>(std::ceil(std::log2(static_cast<double>(terms_.size()) + 1.0))) + 4;
      long lost = zero ? static_cast<long>(prec) : scale_exp - value_exp;
      if (!zero && static_cast<long>(prec) - lost - guard >= 62) return value;
      if (zero && prec >= 4096) return 0.0;
      prec = static_cast<mpfr_prec_t>(std::max<long>(2 * prec, lost + guard + 96));
      if (prec > (1L << 20)) break;
    }
    throw numeric_failure("ExpPoly::eval: cancellation not resolved");
  }

  /// Plain text "c*x^i*E^j + ..." (E = e^{-x}); "0" for the zero element.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      if (!first) s += " + ";
      first = false;
      s += c.get_str() + "*x^" + std::to_string(k.first) + "*E^" + std::to_string(k.second);
    }
    return s;
  }

 private:
  // Callers may pass an mpq built from an unreduced numerator/denominator pair.
  void canonicalize() {
    for (auto& t : terms_) t.second.canonicalize();
  }

  void accumulate(const Key& k, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  // Returns true when the computed sum is exactly zero at this precision.
  bool eval_at_precision(double x0, mpfr_prec_t prec, double& out, long& scale_exp, long& value_exp) const {
    detail::MpfrFloat sum(prec), scale(prec), term(prec), xp(prec), ex(prec), xv(prec);
    mpfr_set_d(xv.get(), x0, MPFR_RNDN);
    for (const auto& [k, c] : terms_) {
      mpfr_pow_si(xp.get(), xv.get(), k.first, MPFR_RNDN);
      mpfr_mul_si(ex.get(), xv.get(), -static_cast<long>(k.second), MPFR_RNDN);
      mpfr_exp(ex.get(), ex.get(), MPFR_RNDN);
      mpfr_set_q(term.get(), c.get_mpq_t(), MPFR_RNDN);
      mpfr_mul(term.get(), term.get(), xp.get(), MPFR_RNDN);
      mpfr_mul(term.get(), term.get(), ex.get(), MPFR_RNDN);
      mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
      mpfr_abs(term.get(), term.get(), MPFR_RNDN);
      mpfr_add(scale.get(), scale.get(), term.get(), MPFR_RNDN);
    }
    out = mpfr_get_d(sum.get(), MPFR_RNDN);
    scale_exp = mpfr_zero_p(scale.get()) ? 0 : mpfr_get_exp(scale.get());
    if (mpfr_zero_p(sum.get())) return true;
    value_exp = mpfr_get_exp(sum.get());
    return false;
  }

  TermMap terms_;
};

/// gamma(a, x) = int_0^x t^{a-1} e^{-t} dt for integer a >= 1, built from
/// gamma(1,x) = 1 - e^{-x} and gamma(a+1,x) = a gamma(a,x) - x^a e^{-x}.
inline ExpPoly incomplete_gamma_exact(int a) {
  if (a < 1) throw std::invalid_argument("incomplete_gamma_exact: a must be >= 1");
  ExpPoly g = ExpPoly(1) - ExpPoly::e();
  for (int s = 1; s < a; ++s) g = g * Rational(s) - ExpPoly::monomial(1, s, 1);
  return g;
}

/// Memoized table of gamma(a, x) for a = 1..amax.
class IncompleteGammaTable {
 public:
  const ExpPoly& operator()(int a) {
    if (a < 1) throw std::invalid_argument("IncompleteGammaTable: a must be >= 1");
    if (table_.empty()) table_.push_back(ExpPoly(1) - ExpPoly::e());
    while (static_cast<int>(table_.size()) < a) {
      const int s = static_cast<int>(table_.size());
      table_.push_back(table_.back() * Rational(s) - ExpPoly::monomial(1, s, 1));
    }
    return table_[a - 1];
  }

 private:
  std::vector<ExpPoly> table_;
};

}  // namespace wishart
