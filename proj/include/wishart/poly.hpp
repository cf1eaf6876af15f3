#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wishart {

using Rational = mpq_class;

/// Sparse multivariate polynomial over Q. Exponent vectors are stored with
/// trailing zeros trimmed, so polynomials over different variable counts mix
/// freely and std::vector's lexicographic order is the lex monomial order
/// with variable 0 most significant.
class Poly {
 public:
  using Exponents = std::vector<int>;
  using TermMap = std::map<Exponents, Rational>;

  Poly() = default;
  Poly(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_[{}] = c;
    canonicalize();
  }
  Poly(long c) : Poly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Poly(int c) : Poly(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  static Poly var(int index, int power = 1) {
    Exponents e(static_cast<std::size_t>(index) + 1, 0);
    e[static_cast<std::size_t>(index)] = power;
    Poly p;
    p.terms_[trim(std::move(e))] = 1;
    return p;
  }
  static Poly monomial(const Rational& c, Exponents e) {
    Poly p;
    if (c != 0) p.terms_[trim(std::move(e))] = c;
    p.canonicalize();
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
  Rational constant_value() const {
    auto it = terms_.find({});
    return it == terms_.end() ? Rational(0) : it->second;
  }
  std::size_t size() const { return terms_.size(); }

  int num_vars() const {
    std::size_t n = 0;
    for (const auto& t : terms_) n = std::max(n, t.first.size());
    return static_cast<int>(n);
  }
  int degree(int v) const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, exponent(t.first, v));
    return d;
  }
  bool depends_on(int v) const { return degree(v) > 0; }
  int total_degree() const {
    int d = 0;
    for (const auto& t : terms_) {
      int s = 0;
      for (int e : t.first) s += e;
      d = std::max(d, s);
    }
    return d;
  }

  /// Leading term under lex order.
  std::pair<Exponents, Rational> leading_term() const {
    if (terms_.empty()) throw std::domain_error("Poly::leading_term of zero");
    return *terms_.rbegin();
  }

  Poly& operator+=(const Poly& o) {
    for (const auto& [e, c] : o.terms_) accumulate(e, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [e, c] : o.terms_) accumulate(e, -c);
    return *this;
  }
  Poly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& t : terms_) t.second *= s;
    }
    return *this;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& t : a.terms_) t.second = -t.second;
    return a;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.accumulate(add_exponents(ea, eb), ca * cb);
    return r;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly pow(unsigned k) const {
    Poly r(1);
    for (unsigned i = 0; i < k; ++i) r *= *this;
    return r;
  }

  Poly derivative(int v) const {
    Poly r;
    for (const auto& [e, c] : terms_) {
      int d = exponent(e, v);
      if (d == 0) continue;
      Exponents f = e;
      f[static_cast<std::size_t>(v)] -= 1;
      r.accumulate(trim(std::move(f)), c * d);
    }
    return r;
  }

  /// Substitute variable v by a rational constant.
  Poly substitute(int v, const Rational& value) const {
    Poly r;
    for (const auto& [e, c] : terms_) {
      int d = exponent(e, v);
      Rational w = c;
      for (int i = 0; i < d; ++i) w *= value;
      Exponents f = e;
      if (static_cast<std::size_t>(v) < f.size()) f[static_cast<std::size_t>(v)] = 0;
      r.accumulate(trim(std::move(f)), w);
    }
    return r;
  }

  /// Rename variables: variable i becomes map[i] (indices beyond map keep their index).
  Poly rename(const std::vector<int>& map) const {
    Poly r;
    for (const auto& [e, c] : terms_) {
      Exponents f;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        int target = i < map.size() ? map[i] : static_cast<int>(i);
        if (f.size() <= static_cast<std::size_t>(target)) f.resize(static_cast<std::size_t>(target) + 1, 0);
        f[static_cast<std::size_t>(target)] += e[i];
      }
      r.accumulate(trim(std::move(f)), c);
    }
    return r;
  }

  double eval(const std::vector<double>& point) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      double t = c.get_d();
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) t *= std::pow(at(point, i), e[i]);
      s += t;
    }
    return s;
  }
  Rational eval(const std::vector<Rational>& point) const {
    Rational s = 0;
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) t *= at(point, i);
      s += t;
    }
    return s;
  }

  /// Coefficients in variable v: result[d] is the coefficient of v^d.
  std::vector<Poly> coefficients_in(int v) const {
    std::vector<Poly> out(static_cast<std::size_t>(degree(v)) + 1);
    for (const auto& [e, c] : terms_) {
      int d = exponent(e, v);
      Exponents f = e;
      if (static_cast<std::size_t>(v) < f.size()) f[static_cast<std::size_t>(v)] = 0;
      out[static_cast<std::size_t>(d)].accumulate(trim(std::move(f)), c);
    }
    return out;
  }

  std::string to_string(const std::vector<std::string>& names = {}) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += i < names.size() ? names[i] : "v" + std::to_string(i);
        if (e[i] != 1) mono += "^" + std::to_string(e[i]);
      }
      Rational a = abs(c);
      std::string coef = a.get_str();
      if (!first) s += c < 0 ? " - " : " + ";
      else if (c < 0) s += "-";
      first = false;
      if (mono.empty()) s += coef;
      else if (a == 1) s += mono;
      else s += coef + "*" + mono;
    }
    return s;
  }

  static int exponent(const Exponents& e, int v) {
    return static_cast<std::size_t>(v) < e.size() ? e[static_cast<std::size_t>(v)] : 0;
  }
  static Exponents trim(Exponents e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
    return e;
  }
  static Exponents add_exponents(const Exponents& a, const Exponents& b) {
    Exponents r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return trim(std::move(r));
  }

 private:
  void canonicalize() {
    for (auto& t : terms_) t.second.canonicalize();
  }

  template <class T>
  static T at(const std::vector<T>& p, std::size_t i) {
    if (i >= p.size()) throw std::out_of_range("Poly::eval: point has too few coordinates");
    return p[i];
  }

  void accumulate(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  TermMap terms_;
};

namespace poly_detail {

inline bool divides(const Poly::Exponents& d, const Poly::Exponents& e) {
  if (d.size() > e.size()) return false;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > e[i]) return false;
  return true;
}

inline Poly::Exponents subtract(const Poly::Exponents& e, const Poly::Exponents& d) {
  Poly::Exponents r = e;
  for (std::size_t i = 0; i < d.size(); ++i) r[i] -= d[i];
  return Poly::trim(std::move(r));
}

}  // namespace poly_detail

/// Exact quotient a / b; throws if b does not divide a.
inline Poly exact_divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("exact_divide: division by zero polynomial");
  if (b.is_constant()) {
    Poly r = a;
    r *= Rational(1) / b.constant_value();
    return r;
  }
  const auto [lb_e, lb_c] = b.leading_term();
  Poly q, r = a;
  while (!r.is_zero()) {
    const auto [lr_e, lr_c] = r.leading_term();
    if (!poly_detail::divides(lb_e, lr_e)) throw std::domain_error("exact_divide: not divisible");
    Poly t = Poly::monomial(lr_c / lb_c, poly_detail::subtract(lr_e, lb_e));
    q += t;
    r -= t * b;
  }
  return q;
}

/// Scale so the lex-leading coefficient is 1.
inline Poly monic(const Poly& p) {
  if (p.is_zero()) return p;
  Poly r = p;
  r *= Rational(1) / p.leading_term().second;
  return r;
}

Poly poly_gcd(const Poly& a, const Poly& b);

namespace poly_detail {

inline Poly content_in(const Poly& p, int v) {
  Poly g;
  for (const auto& c : p.coefficients_in(v)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? monic(c) : poly_gcd(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g.is_zero() ? Poly(1) : g;
}

inline Poly lead_in(const Poly& p, int v) { return p.coefficients_in(v).back(); }

// Pseudo-remainder of a by b with respect to variable v.
inline Poly pseudo_remainder(Poly a, const Poly& b, int v) {
  const int db = b.degree(v);
  const Poly lb = lead_in(b, v);
  while (!a.is_zero() && a.degree(v) >= db) {
    const int da = a.degree(v);
    Poly la = lead_in(a, v);
    a = a * lb - la * Poly::var(v, da - db) * b;
  }
  return a;
}

inline Poly monomial_gcd(const Poly& a, const Poly& b) {
  Poly::Exponents g;
  bool first = true;
  for (const Poly* p : {&a, &b}) {
    for (const auto& t : p->terms()) {
      if (first) {
        g = t.first;
        first = false;
      } else {
        Poly::Exponents h(std::min(g.size(), t.first.size()));
        for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::min(g[i], t.first[i]);
        g = Poly::trim(std::move(h));
      }
    }
  }
  return Poly::monomial(1, g);
}

}  // namespace poly_detail

/// Greatest common divisor over Q, normalized monic in lex order.
inline Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Poly(1);
  if (a.size() == 1 || b.size() == 1) return poly_detail::monomial_gcd(a, b);
  int v = -1;
  const int nv = std::max(a.num_vars(), b.num_vars());
  for (int i = nv - 1; i >= 0; --i)
    if (a.depends_on(i) || b.depends_on(i)) {
      v = i;
      break;
    }
  if (!a.depends_on(v)) return poly_gcd(a, poly_detail::content_in(b, v));
  if (!b.depends_on(v)) return poly_gcd(poly_detail::content_in(a, v), b);
  const Poly ca = poly_detail::content_in(a, v);
  const Poly cb = poly_detail::content_in(b, v);
  Poly pa = exact_divide(a, ca);
  Poly pb = exact_divide(b, cb);
  if (pa.degree(v) < pb.degree(v)) std::swap(pa, pb);
  Poly g;
  while (true) {
    Poly r = poly_detail::pseudo_remainder(pa, pb, v);
    if (r.is_zero()) {
      g = pb;
      break;
    }
    if (!r.depends_on(v)) {
      g = Poly(1);
      break;
    }
    pa = pb;
    pb = exact_divide(r, poly_detail::content_in(r, v));
  }
  if (!g.is_constant()) g = exact_divide(g, poly_detail::content_in(g, v));
  return monic(poly_gcd(ca, cb) * g);
}

/// Quotient of polynomials over Q, kept in lowest terms with a monic
/// denominator.
class RationalFunction {
 public:
  RationalFunction() : den_(1) {}
  RationalFunction(const Poly& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(int c) : num_(c), den_(1) {}   // NOLINT(google-explicit-constructor)
  RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RationalFunction var(int index) { return RationalFunction(Poly::var(index)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ - b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(RationalFunction a) {
    a.num_ = -a.num_;
    return a;
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero() || b.is_zero()) return RationalFunction();
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("RationalFunction: division by zero");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

  RationalFunction derivative(int v) const {
    if (den_.is_constant()) return RationalFunction(num_.derivative(v), den_);
    return RationalFunction(num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_);
  }
  RationalFunction substitute(int v, const Rational& value) const {
    return RationalFunction(num_.substitute(v, value), den_.substitute(v, value));
  }
  RationalFunction rename(const std::vector<int>& map) const {
    return RationalFunction(num_.rename(map), den_.rename(map));
  }
  double eval(const std::vector<double>& point) const { return num_.eval(point) / den_.eval(point); }
  Rational eval(const std::vector<Rational>& point) const {
    Rational d = den_.eval(point);
    if (d == 0) throw std::domain_error("RationalFunction::eval: pole");
    return num_.eval(point) / d;
  }

  std::string to_string(const std::vector<std::string>& names = {}) const {
    if (den_ == Poly(1)) return num_.to_string(names);
    return "(" + num_.to_string(names) + ")/(" + den_.to_string(names) + ")";
  }

 private:
  void normalize() {
    if (den_.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
    if (num_.is_zero()) {
      den_ = Poly(1);
      return;
    }
    if (!den_.is_constant()) {
      Poly g = poly_gcd(num_, den_);
      if (!g.is_constant()) {
        num_ = exact_divide(num_, g);
        den_ = exact_divide(den_, g);
      }
    }
    Rational lc = den_.leading_term().second;
    if (lc != 1) {
      Rational inv = Rational(1) / lc;
      num_ *= inv;
      den_ *= inv;
    }
  }

  Poly num_;
  Poly den_;
};

}  // namespace wishart
