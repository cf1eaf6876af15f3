#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "diff_operator.hpp"
#include "errors.hpp"
#include "exp_poly.hpp"
#include "poly.hpp"
#include "special_functions.hpp"

namespace wishart {

/// Transcendental building blocks in y (x is a parameter):
///   hyp(s)   = 0F1(s; x y)
///   tail(v)  = e^y int_y^inf e^{-t} 0F1(v; x t) dt
///   lower(v) = e^y int_0^y  e^{-t} 0F1(v; x t) dt   (= e^y H^0_v(y, x))
///   exp      = e^y
enum class GAtomKind { hyp, tail, lower, exp };

struct GAtom {
  GAtomKind kind = GAtomKind::hyp;
  int param = 1;
  friend bool operator<(const GAtom& a, const GAtom& b) { return std::tie(a.kind, a.param) < std::tie(b.kind, b.param); }
  friend bool operator==(const GAtom& a, const GAtom& b) { return a.kind == b.kind && a.param == b.param; }
};

namespace detail {

/// sum_k x^k / (v)_k * w_k(y) for the weights of the tail or lower atom.
/// tail: w_k = e_k(y) = sum_{i<=k} y^i/i!; lower: w_k = e^y - e_k(y).
inline double tail_or_lower(int v, double x, double y, bool lower) {
  if (v < 1) throw std::invalid_argument("G atom: parameter must be >= 1");
  CompensatedSum s;
  double a = 1.0;        // x^k / (v)_k
  double power = 1.0;    // y^k / k!
  double partial = 1.0;  // e_k(y)
  const double ey = std::exp(y);
  for (int k = 0; k < 100000; ++k) {
    if (k > 0) {
      a *= x / (v + k - 1.0);
      power *= y / k;
      partial += power;
    }
    double w = partial;
    if (lower) {
      if (k + 1.0 < y) {
        w = ey - partial;
      } else {
        // sum_{i>k} y^i / i!, geometric once i > y
        double t = power * y / (k + 1.0);
        w = 0.0;
        for (int i = k + 1; t > 1e-300 && i < k + 100000; ++i) {
          w += t;
          if (t <= 1e-18 * w) break;
          t *= y / (i + 1.0);
        }
      }
    }
    const double term = a * w;
    s.add(term);
    if (k > x && a * std::max(ey, 1.0) <= 1e-18 * std::fabs(s.value())) return s.value();
    if (a == 0.0) return s.value();
  }
  throw numeric_failure("G atom: series did not converge");
}

}  // namespace detail

/// Finite sum of polynomial(x, y) * atom; Poly variable 0 is x, 1 is y.
class GCombo {
 public:
  using Map = std::map<GAtom, Poly>;

  GCombo() = default;
  static GCombo atom(GAtomKind kind, int param, const Poly& c = Poly(1)) {
    GCombo g;
    g.add({kind, param}, c);
    return g;
  }
  static GCombo hyp(int s, const Poly& c = Poly(1)) { return atom(GAtomKind::hyp, s, c); }
  static GCombo tail(int v, const Poly& c = Poly(1)) { return atom(GAtomKind::tail, v, c); }
  static GCombo lower(int v, const Poly& c = Poly(1)) { return atom(GAtomKind::lower, v, c); }
  static GCombo exp(const Poly& c = Poly(1)) { return atom(GAtomKind::exp, 0, c); }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const GAtom& a, const Poly& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(a, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  GCombo& operator+=(const GCombo& o) {
    for (const auto& [a, c] : o.terms_) add(a, c);
    return *this;
  }
  GCombo& operator-=(const GCombo& o) {
    for (const auto& [a, c] : o.terms_) add(a, -c);
    return *this;
  }
  friend GCombo operator+(GCombo a, const GCombo& b) { return a += b; }
  friend GCombo operator-(GCombo a, const GCombo& b) { return a -= b; }
  friend GCombo operator*(const Poly& p, const GCombo& g) {
    GCombo r;
    for (const auto& [a, c] : g.terms_) r.add(a, p * c);
    return r;
  }
  friend bool operator==(const GCombo& a, const GCombo& b) { return a.terms_ == b.terms_; }

  /// d/dy by the closed-form rules for each atom.
  GCombo derivative() const {
    GCombo r;
    const Poly x = Poly::var(0);
    for (const auto& [a, c] : terms_) {
      r.add(a, c.derivative(1));
      switch (a.kind) {
        case GAtomKind::hyp: {
          Poly f = x * c;
          f *= Rational(1, a.param);
          r.add({GAtomKind::hyp, a.param + 1}, f);
          break;
        }
        case GAtomKind::tail:
          r.add(a, c);
          r.add({GAtomKind::hyp, a.param}, -c);
          break;
        case GAtomKind::lower:
          r.add(a, c);
          r.add({GAtomKind::hyp, a.param}, c);
          break;
        case GAtomKind::exp:
          r.add(a, c);
          break;
      }
    }
    return r;
  }

  /// Apply an operator that differentiates only in y (variable 1) and has
  /// polynomial coefficients in (x, y).
  GCombo apply(const DiffOperator& op) const {
    if (!op.is_polynomial()) throw std::invalid_argument("GCombo::apply: polynomial coefficients required");
    std::vector<GCombo> d{*this};
    GCombo r;
    for (const auto& [alpha, c] : op.terms()) {
      for (std::size_t v = 0; v < alpha.size(); ++v)
        if (v != 1 && alpha[v] != 0) throw std::invalid_argument("GCombo::apply: only d/dy supported");
      const int k = alpha[1];
      while (static_cast<int>(d.size()) <= k) d.push_back(d.back().derivative());
      Poly p = c.num();
      p *= Rational(1) / c.den().constant_value();
      r += p * d[static_cast<std::size_t>(k)];
    }
    return r;
  }

  struct Value {
    double value = 0.0;
    double magnitude = 0.0;  // sum of |term|, for relative residuals
  };

  Value eval(double x, double y) const {
    Value out;
    detail::CompensatedSum s;
    for (const auto& [a, c] : terms_) {
      double atom = 0.0;
      switch (a.kind) {
        case GAtomKind::hyp: atom = hpg01(a.param, x * y); break;
        case GAtomKind::tail: atom = detail::tail_or_lower(a.param, x, y, false); break;
        case GAtomKind::lower: atom = detail::tail_or_lower(a.param, x, y, true); break;
        case GAtomKind::exp: atom = std::exp(y); break;
      }
      // Polynomial coefficient summed monomial by monomial into the magnitude.
      for (const auto& [e, coef] : c.terms()) {
        double t = coef.get_d() * atom;
        const int px = Poly::exponent(e, 0), py = Poly::exponent(e, 1);
        if (px) t *= std::pow(x, px);
        if (py) t *= std::pow(y, py);
        s.add(t);
        out.magnitude += std::fabs(t);
      }
    }
    out.value = s.value();
    return out;
  }

  double value(double x, double y) const { return eval(x, y).value; }

  /// Exact value at y = 0 as a function of x.
  ExpPoly at_zero() const {
    ExpPoly r;
    for (const auto& [a, c] : terms_) {
      ExpPoly atom;
      switch (a.kind) {
        case GAtomKind::hyp: atom = ExpPoly(1); break;
        case GAtomKind::exp: atom = ExpPoly(1); break;
        case GAtomKind::lower: break;
        case GAtomKind::tail: atom = tail_at_zero(a.param); break;
      }
      if (atom.is_zero()) continue;
      ExpPoly coef;
      for (const auto& [e, q] : c.terms())
        if (Poly::exponent(e, 1) == 0) coef += ExpPoly::monomial(q, Poly::exponent(e, 0), 0);
      r += coef * atom;
    }
    return r;
  }

  /// Exact Taylor coefficients in y at 0, k = 0..order.
  std::vector<ExpPoly> taylor(int order) const {
    std::vector<ExpPoly> out;
    GCombo d = *this;
    Rational fact = 1;
    for (int k = 0; k <= order; ++k) {
      if (k > 0) {
        d = d.derivative();
        fact *= k;
      }
      ExpPoly c = d.at_zero();
      c *= Rational(1) / fact;
      out.push_back(c);
    }
    return out;
  }

  /// int_0^inf e^{-t} 0F1(v; x t) dt = sum_k x^k/(v)_k = (v-1) x^{1-v} e^x gamma(v-1, x).
  static ExpPoly tail_at_zero(int v) {
    if (v < 1) throw std::invalid_argument("tail_at_zero: v >= 1 required");
    if (v == 1) return ExpPoly::e(-1);
    const int a = v - 1;
    ExpPoly r = incomplete_gamma_exact(a).shifted(-a, -1);
    r *= Rational(a);
    return r;
  }

 private:
  Map terms_;
};

/// Recursion operator -y d^2 - (a - level + 1) d + x + level on one variable.
inline DiffOperator g_raising(int a, int level) {
  const int m = 1;
  return -(ops::L(1) * DiffOperator::d(m, 1, 2)) - ops::C(a - level + 1) * DiffOperator::d(m, 1) +
         DiffOperator::scalar(m, ops::X() + ops::C(level));
}

/// G_{a,level}(x, y): level 2 closed form, higher levels by the raising recursion.
inline GCombo g_combo(int a, int level) {
  if (level < 2 || a < level) throw std::invalid_argument("g_combo: a >= level >= 2 required");
  const Poly x = Poly::var(0), y = Poly::var(1);
  GCombo g = GCombo::hyp(a, Poly(a)) + GCombo::hyp(a + 1, y) + GCombo::tail(a + 1, x - y - Poly(a - 1));
  for (int l = 2; l < level; ++l) g = g.apply(g_raising(a, l));
  return g;
}

/// Numeric G_{n,level}(x, y).
inline double g_function(int n, int level, double x, double y) {
  if (x < 0.0 || y < 0.0) throw std::invalid_argument("g_function: x, y >= 0 required");
  return g_combo(n, level).value(x, y);
}

/// Taylor coefficients of G_{a,level} in y by coefficient recursions (independent of GCombo):
/// tail: t_0 = a x^{-a} e^x gamma(a,x), (k+1) t_{k+1} = t_k - f_k with f_k those of 0F1(a+1; x y).
inline std::vector<ExpPoly> g_taylor(int a, int level, int order) {
  if (level < 2 || a < level) throw std::invalid_argument("g_taylor: a >= level >= 2 required");
  const int extra = level - 2;
  const int top = order + extra + 1;
  auto hyp_coeff = [](int s, int k) {
    Rational c = 1;
    for (int i = 0; i < k; ++i) c /= Rational((s + i) * (i + 1));
    return ExpPoly::monomial(c, k, 0);
  };
  std::vector<ExpPoly> t(static_cast<std::size_t>(top + 1));
  t[0] = GCombo::tail_at_zero(a + 1);
  for (int k = 0; k < top; ++k) {
    ExpPoly d = t[static_cast<std::size_t>(k)] - hyp_coeff(a + 1, k);
    d *= Rational(1, k + 1);
    t[static_cast<std::size_t>(k + 1)] = d;
  }
  std::vector<ExpPoly> g(static_cast<std::size_t>(top + 1));
  const ExpPoly lin = ExpPoly::x() - ExpPoly(a - 1);
  for (int k = 0; k <= top; ++k) {
    ExpPoly v = hyp_coeff(a, k);
    v *= Rational(a);
    if (k > 0) v += hyp_coeff(a + 1, k - 1) - t[static_cast<std::size_t>(k - 1)];
    v += lin * t[static_cast<std::size_t>(k)];
    g[static_cast<std::size_t>(k)] = v;
  }
  for (int l = 2; l < level; ++l) {
    std::vector<ExpPoly> next(g.size() - 1);
    for (std::size_t k = 0; k + 1 < g.size(); ++k) {
      const int kk = static_cast<int>(k);
      ExpPoly v = g[k + 1];
      v *= Rational(-(kk + 1) * kk - (a - l + 1) * (kk + 1));
      v += (ExpPoly::x() + ExpPoly(l)) * g[k];
      next[k] = v;
    }
    g = next;
  }
  g.resize(static_cast<std::size_t>(order + 1));
  return g;
}

/// Closed-form solutions Y_{N,M} of Q_{N,N-M}[y], M = 2, 3, 4.
inline GCombo y_solution_combo(int N, int M) {
  if (N < 1) throw std::invalid_argument("y_solution: N >= 1 required");
  const Poly x = Poly::var(0), y = Poly::var(1);
  const Poly l2 = y - x + Poly(N - 1);
  const Poly s = Poly(2) * x - Poly(N - 1);  // 2x - N + 1
  const Poly l3 = l2 * l2 + s;
  const Poly l4 = l2 * l2 * l2 + Poly(3) * s * (l2 - Poly(1)) - Poly(N - 1);
  Poly a, b, c;
  switch (M) {
    case 2:
      a = Poly(N);
      b = y;
      c = l2;
      break;
    case 3:
      a = Poly(N) * (l2 - Poly(2));
      b = y * (l2 - Poly(1));
      c = l3;
      break;
    case 4:
      a = Poly(N) * ((l2 - Poly(2)) * (l2 - Poly(2)) + Poly(2) * y + Poly(2) * x + Poly(2));
      b = y * ((l2 - Poly(1)) * (l2 - Poly(1)) + y + Poly(3) * x - Poly(N - 2));
      c = l4;
      break;
    default:
      throw std::invalid_argument("y_solution: M must be 2, 3 or 4");
  }
  return GCombo::hyp(N, a) + GCombo::hyp(N + 1, b) + GCombo::lower(N + 1, c);
}

inline double y_solution(int N, int M, double x, double y) { return y_solution_combo(N, M).value(x, y); }

/// |op(g)| / magnitude at (x, y).
inline double relative_residual(const GCombo& g, const DiffOperator& op, double x, double y) {
  GCombo::Value v = g.apply(op).eval(x, y);
  if (v.magnitude == 0.0) return 0.0;
  return std::fabs(v.value) / v.magnitude;
}

}  // namespace wishart
