#pragma once

#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exp_poly.hpp"
#include "poly.hpp"
#include "special_functions.hpp"

namespace wishart {

/// Index of H^{k,l}_n(x,y) = int_0^x e^{-t} t^k (x-t)^l 0F1(n; t y) dt.
struct HIndex {
  int k = 0;
  int l = 0;
  int n = 1;
  friend bool operator<(const HIndex& a, const HIndex& b) {
    return std::tie(a.k, a.l, a.n) < std::tie(b.k, b.l, b.n);
  }
  friend bool operator==(const HIndex& a, const HIndex& b) { return a.k == b.k && a.l == b.l && a.n == b.n; }
};

inline void validate(const HIndex& idx) {
  if (idx.k < 0 || idx.l < 0 || idx.n < 1) throw std::invalid_argument("HIndex: need k >= 0, l >= 0, n >= 1");
}

/// Adaptive Gauss-Kronrod quadrature of the defining integral.
inline double h_eval(const HIndex& idx, double x, double y, double rel_tol = 1e-13) {
  validate(idx);
  if (x < 0.0 || y < 0.0) throw std::invalid_argument("h_eval: x >= 0 and y >= 0 required");
  if (x == 0.0) return 0.0;
  // t = x u on [0, 1]; the adaptive rule stalls on very short intervals.
  auto f = [&](double u) {
    const double t = x * u;
    double v = std::exp(-t) * hpg01(idx.n, t * y);
    if (idx.k) v *= std::pow(t, idx.k);
    if (idx.l) v *= std::pow(x - t, idx.l);
    return v;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err1 = 0.0, err2 = 0.0, result = 0.0;
  if (idx.l > 0) {
    result = GK::integrate(f, 0.0, 0.5, 15, rel_tol, &err1) + GK::integrate(f, 0.5, 1.0, 15, rel_tol, &err2);
  } else {
    result = GK::integrate(f, 0.0, 1.0, 15, rel_tol, &err1);
  }
  result *= x;
  err1 *= x;
  err2 *= x;
  if (err1 + err2 > 1e-10 * (1.0 + std::fabs(result))) throw numeric_failure("h_eval: quadrature did not converge");
  return result;
}

/// Term-wise series sum_j y^j gamma(k+j+1, x) / ((n)_j j!) for l = 0. All terms
/// are positive for y >= 0.
inline double h_series_value(const HIndex& idx, double x, double y) {
  validate(idx);
  if (idx.l != 0) throw std::invalid_argument("h_series_value: only l = 0");
  if (x == 0.0) return 0.0;
  detail::CompensatedSum s;
  double coef = 1.0;  // y^j / ((n)_j j!)
  for (int j = 0; j < 10000; ++j) {
    if (j > 0) coef *= y / ((idx.n + j - 1.0) * j);
    double term = coef * incomplete_gamma(idx.k + j + 1.0, x);
    s.add(term);
    if (coef == 0.0) return s.value();
    if (j > x * y && term <= 1e-17 * s.value()) return s.value();
  }
  throw numeric_failure("h_series_value: series did not converge");
}

/// Exact coefficients of y^0..y^order of H^k_n(x,y): gamma(k+j+1,x)/((n)_j j!).
inline std::vector<ExpPoly> h_series(const HIndex& idx, int order) {
  validate(idx);
  if (idx.l != 0) throw std::invalid_argument("h_series: only l = 0");
  if (order < 0) throw std::invalid_argument("h_series: order must be nonnegative");
  IncompleteGammaTable gamma;
  std::vector<ExpPoly> out;
  Rational denom = 1;
  for (int j = 0; j <= order; ++j) {
    if (j > 0) denom *= Rational(idx.n + j - 1) * j;
    ExpPoly t = gamma(idx.k + j + 1);
    t *= Rational(1) / denom;
    out.push_back(std::move(t));
  }
  return out;
}

/// Atom of an H-combination: either H^{k,l}_n(x,y) or the boundary function
/// e^{-x} 0F1(nu; x y) (powers of x live in the coefficient).
struct HAtom {
  enum Kind { H = 0, Boundary = 1 };
  Kind kind = H;
  HIndex index;  // for Boundary only index.n (= nu) is used
  static HAtom h(int k, int n, int l = 0) { return {H, {k, l, n}}; }
  static HAtom boundary(int nu) { return {Boundary, {0, 0, nu}}; }
  friend bool operator<(const HAtom& a, const HAtom& b) {
    return std::tie(a.kind, a.index) < std::tie(b.kind, b.index);
  }
  friend bool operator==(const HAtom& a, const HAtom& b) { return a.kind == b.kind && a.index == b.index; }
  std::string to_string() const {
    if (kind == Boundary) return "exp(-x)*0F1(" + std::to_string(index.n) + ";x*y)";
    std::string s = "H[k=" + std::to_string(index.k);
    if (index.l) s += ",l=" + std::to_string(index.l);
    return s + ",n=" + std::to_string(index.n) + "](x,y)";
  }
};

/// Q(x,y)-linear combination of atoms; coefficient variables: x = 0, y = 1.
class HCombo {
 public:
  using Map = std::map<HAtom, RationalFunction>;
  static constexpr int kX = 0;
  static constexpr int kY = 1;

  HCombo() = default;
  static HCombo atom(const HAtom& a, const RationalFunction& c = RationalFunction(1)) {
    HCombo r;
    r.add(a, c);
    return r;
  }
  static HCombo h(int k, int n, const RationalFunction& c = RationalFunction(1)) { return atom(HAtom::h(k, n), c); }
  static HCombo hl(int k, int l, int n, const RationalFunction& c = RationalFunction(1)) {
    return atom(HAtom::h(k, n, l), c);
  }
  /// c * x^xpow * e^{-x} 0F1(nu; x y).
  static HCombo boundary(int xpow, int nu, const RationalFunction& c = RationalFunction(1)) {
    return atom(HAtom::boundary(nu), c * x_power(xpow));
  }
  static RationalFunction x_power(int p) {
    if (p >= 0) return RationalFunction(Poly::var(kX, p));
    return RationalFunction(Poly(1), Poly::var(kX, -p));
  }
  static RationalFunction X() { return RationalFunction::var(kX); }
  static RationalFunction Y() { return RationalFunction::var(kY); }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  RationalFunction coefficient(const HAtom& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? RationalFunction() : it->second;
  }

  void add(const HAtom& a, const RationalFunction& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(a);
    if (it == terms_.end()) {
      terms_.emplace(a, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  HCombo& operator+=(const HCombo& o) {
    for (const auto& [a, c] : o.terms_) add(a, c);
    return *this;
  }
  HCombo& operator-=(const HCombo& o) {
    for (const auto& [a, c] : o.terms_) add(a, -c);
    return *this;
  }
  friend HCombo operator+(HCombo a, const HCombo& b) { return a += b; }
  friend HCombo operator-(HCombo a, const HCombo& b) { return a -= b; }
  friend HCombo operator*(const RationalFunction& s, const HCombo& a) {
    HCombo r;
    for (const auto& [k, c] : a.terms_) r.add(k, s * c);
    return r;
  }
  friend bool operator==(const HCombo& a, const HCombo& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const HCombo& a, const HCombo& b) { return !(a == b); }

  /// Replace one atom by a combination.
  HCombo substitute(const HAtom& a, const HCombo& replacement) const {
    HCombo r;
    for (const auto& [k, c] : terms_) {
      if (k == a) {
        r += c * replacement;
      } else {
        r.add(k, c);
      }
    }
    return r;
  }

  /// Value at (x, y); H atoms through `h` (default: quadrature).
  template <class HEval>
  double eval(double x, double y, HEval&& h) const {
    double s = 0.0;
    for (const auto& [a, c] : terms_) s += c.eval(std::vector<double>{x, y}) * atom_value(a, x, y, h);
    return s;
  }
  double eval(double x, double y) const {
    return eval(x, y, [](const HIndex& i, double xx, double yy) { return h_eval(i, xx, yy); });
  }
  /// Sum of |coefficient * atom| (the scale used for relative residuals).
  template <class HEval>
  double magnitude(double x, double y, HEval&& h) const {
    double s = 0.0;
    for (const auto& [a, c] : terms_) s += std::fabs(c.eval(std::vector<double>{x, y}) * atom_value(a, x, y, h));
    return s;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [a, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + c.to_string({"x", "y"}) + ")*" + a.to_string();
    }
    return s;
  }

 private:
  template <class HEval>
  static double atom_value(const HAtom& a, double x, double y, HEval& h) {
    if (a.kind == HAtom::Boundary) return std::exp(-x) * hpg01(a.index.n, x * y);
    return h(a.index, x, y);
  }

  Map terms_;
};

/// A printed identity lhs = rhs between H-combinations.
struct HRelation {
  std::string name;
  HCombo lhs;
  HCombo rhs;
  HCombo residual() const { return lhs - rhs; }
};

namespace detail {

inline RationalFunction rf(const Rational& c) { return RationalFunction(c); }
inline void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace detail

enum class Lemma1 { rec3, recip, rechd };
enum class Lemma2 { shift_n, shift_k };
enum class Lemma3 { simrec1, simrec2, hrecg };
enum class Lemma45 { hklnx, hklnr, hklni, hklnt, hklrecu, hklrecu2 };

/// Recurrences shifting n and k of H^k_n (l = 0), instantiated at idx.
inline HRelation rec_lemma1(Lemma1 variant, const HIndex& idx) {
  using detail::rf;
  const int k = idx.k, n = idx.n;
  const RationalFunction X = HCombo::X(), Y = HCombo::Y();
  detail::require(k > 0, "rec_lemma1: k > 0 required");
  switch (variant) {
    case Lemma1::rec3:
      detail::require(n >= 2, "rec3: n >= 2 required");
      return {"rec3", HCombo::h(k, n - 1),
              HCombo::h(k, n) + HCombo::h(k + 1, n + 1, Y * rf(Rational(1, n * (n - 1))))};
    case Lemma1::recip:
      return {"recip", HCombo::h(k - 1, n, rf(k)),
              HCombo::h(k, n) - HCombo::h(k, n + 1, Y * rf(Rational(1, n))) + HCombo::boundary(k, n)};
    case Lemma1::rechd:
      detail::require(n >= 2, "rechd: n >= 2 required");
      return {"rechd", HCombo::h(k - 1, n - 1, rf(k)),
              HCombo::h(k, n, (rf(n - 1) - Y) * rf(Rational(1, n - 1))) +
                  HCombo::h(k + 1, n + 1, Y * rf(Rational(1, n * (n - 1)))) + HCombo::boundary(k, n - 1)};
  }
  throw std::invalid_argument("rec_lemma1: unknown variant");
}

inline HRelation rec_lemma2(Lemma2 variant, const HIndex& idx) {
  using detail::rf;
  const int k = idx.k, n = idx.n;
  const RationalFunction X = HCombo::X(), Y = HCombo::Y();
  detail::require(k > 0, "rec_lemma2: k > 0 required");
  detail::require(n >= 2, "rec_lemma2: n >= 2 required");
  switch (variant) {
    case Lemma2::shift_n:
      return {"shift_n", HCombo::h(k, n - 1, rf(n * (n - 1))),
              HCombo::h(k, n, rf(n) * (Y + rf(n - 1))) + HCombo::h(k, n + 1, Y * rf(k - n + 1)) -
                  HCombo::boundary(k + 1, n + 1, Y)};
    case Lemma2::shift_k:
      return {"shift_k", HCombo::h(k + 1, n),
              HCombo::h(k, n, Y + rf(2 * k + 2 - n)) + HCombo::h(k - 1, n, rf(k * (n - k - 1))) -
                  HCombo::boundary(k, n - 1, rf(n - 1)) + HCombo::boundary(k, n, rf(k) - X)};
  }
  throw std::invalid_argument("rec_lemma2: unknown variant");
}

inline HRelation rec_lemma3(Lemma3 variant, int n) {
  using detail::rf;
  const RationalFunction Y = HCombo::Y();
  detail::require(n >= 1, "rec_lemma3: n >= 1 required");
  switch (variant) {
    case Lemma3::simrec1:
      detail::require(n >= 2, "simrec1: n >= 2 required");
      return {"simrec1", HCombo::h(n - 1, n - 1, rf(n - 1)),
              HCombo::h(n - 1, n, Y + rf(n - 1)) - HCombo::boundary(n, n + 1, Y * rf(Rational(1, n)))};
    case Lemma3::simrec2:
      return {"simrec2", HCombo::h(n, n),
              HCombo::h(n - 1, n, Y + rf(n)) - HCombo::boundary(n, n + 1, Y * rf(Rational(1, n))) -
                  HCombo::boundary(n, n)};
    case Lemma3::hrecg:
      return {"hrecg", HCombo::h(n, n + 1), HCombo::h(n - 1, n, rf(n)) - HCombo::boundary(n, n + 1)};
  }
  throw std::invalid_argument("rec_lemma3: unknown variant");
}

inline HRelation rec_lemma45(Lemma45 variant, const HIndex& idx) {
  using detail::rf;
  const int k = idx.k, l = idx.l, n = idx.n;
  const RationalFunction X = HCombo::X(), Y = HCombo::Y();
  switch (variant) {
    case Lemma45::hklnx:
      detail::require(k > 0 && l > 0, "hklnx: k > 0, l > 0 required");
      return {"hklnx", HCombo::hl(k, l, n, X), HCombo::hl(k + 1, l, n) + HCombo::hl(k, l + 1, n)};
    case Lemma45::hklnr:
      detail::require(k > 0 && l > 0 && n >= 2, "hklnr: k > 0, l > 0, n >= 2 required");
      return {"hklnr", HCombo::hl(k, l, n - 1),
              HCombo::hl(k, l, n) + HCombo::hl(k + 1, l, n + 1, Y * rf(Rational(1, n * (n - 1))))};
    case Lemma45::hklni:
      detail::require(k > 0 && l > 0, "hklni: k > 0, l > 0 required");
      return {"hklni", HCombo::hl(k, l, n),
              HCombo::hl(k - 1, l, n, rf(k)) - HCombo::hl(k, l - 1, n, rf(l)) +
                  HCombo::hl(k, l, n + 1, Y * rf(Rational(1, n)))};
    case Lemma45::hklnt:
      detail::require(n >= 2, "hklnt: n >= 2 required");
      return {"hklnt",
              HCombo::hl(k, l + 1, n - 1) + HCombo::hl(k + 2, l, n + 1, Y * rf(Rational(1, n * (n - 1)))),
              HCombo::hl(k, l + 1, n) + HCombo::hl(k + 1, l, n + 1, X * Y * rf(Rational(1, n * (n - 1))))};
    case Lemma45::hklrecu:
      detail::require(k > 0 && l > 0 && n >= 2, "hklrecu: k > 0, l > 0, n >= 2 required");
      return {"hklrecu", HCombo::hl(k - 1, l, n - 1, rf(n - 1)),
              HCombo::hl(k, l, n) + HCombo::hl(k, l - 1, n, rf(l)) + HCombo::hl(k - 1, l, n, rf(n - k - 1))};
    case Lemma45::hklrecu2:
      detail::require(k > 0 && l > 0, "hklrecu2: k > 0, l > 0 required");
      return {"hklrecu2", HCombo::hl(k - 1, l, k, rf(k)),
              HCombo::hl(k, l, k + 1) + HCombo::hl(k, l - 1, k + 1, rf(l))};
  }
  throw std::invalid_argument("rec_lemma45: unknown variant");
}

/// Special case of hklrecu2 used in the annihilation proof: k = n-m+1, l = m.
inline HRelation rec_superh(int n, int m) {
  detail::require(m >= 1 && n - m >= 0, "superh: n >= m >= 1 required");
  HRelation r = rec_lemma45(Lemma45::hklrecu2, HIndex{n - m + 1, m, 1});
  r.name = "superh";
  return r;
}

/// Numeric check of a relation: |lhs - rhs| / (sum of |terms|).
template <class HEval>
double relation_residual(const HRelation& r, double x, double y, HEval&& h) {
  double diff = r.lhs.eval(x, y, h) - r.rhs.eval(x, y, h);
  double scale = r.lhs.magnitude(x, y, h) + r.rhs.magnitude(x, y, h);
  return scale == 0.0 ? std::fabs(diff) : std::fabs(diff) / scale;
}

/// Which recurrence family drives the reduction chains.
enum class ReductionRoute { lemma3, lemma2 };

namespace detail {

class BasisReducer {
 public:
  BasisReducer(int target, ReductionRoute route) : target_(target), route_(route) {}

  HCombo reduce(int k, int n) {
    HCombo c = same_level(k, n);
    // Move the level-n basis atom to the target level.
    for (int level = n; level != target_;) {
      const int next = level < target_ ? level + 1 : level - 1;
      c = c.substitute(HAtom::h(level - 1, level), level < target_ ? up(level) : down(level));
      level = next;
    }
    return normalize_boundary(c);
  }

 private:
  // H^k_n with k >= n-1 in terms of H^{n-1}_n and boundary atoms.
  HCombo same_level(int k, int n) {
    auto key = std::make_pair(k, n);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    HCombo r;
    if (k == n - 1) {
      r = HCombo::h(n - 1, n);
    } else if (k == n) {
      r = route_ == ReductionRoute::lemma3 ? rec_lemma3(Lemma3::simrec2, n).rhs
                                           : rec_lemma2(Lemma2::shift_k, HIndex{n - 1, 0, n}).rhs;
    } else {
      HCombo step = rec_lemma2(Lemma2::shift_k, HIndex{k - 1, 0, n}).rhs;
      step = step.substitute(HAtom::h(k - 1, n), same_level(k - 1, n));
      r = step.substitute(HAtom::h(k - 2, n), same_level(k - 2, n));
    }
    cache_.emplace(key, r);
    return r;
  }

  // H^{L-1}_L in terms of level L+1.
  HCombo up(int L) {
    const RationalFunction Y = HCombo::Y();
    if (route_ == ReductionRoute::lemma3) {
      return rf(Rational(1, L)) * (HCombo::h(L, L + 1) + HCombo::boundary(L, L + 1));
    }
    // shift_n at (n = L+1, k = L): H^L_L in terms of H^L_{L+1}; shift_k at
    // (n = L, k = L-1) ties H^L_L to H^{L-1}_L.
    HRelation a = rec_lemma2(Lemma2::shift_n, HIndex{L, 0, L + 1});
    HCombo hll = RationalFunction(Rational(1, (L + 1) * L)) * a.rhs;
    HRelation b = rec_lemma2(Lemma2::shift_k, HIndex{L - 1, 0, L});
    HCombo rest = b.rhs - HCombo::h(L - 1, L, b.rhs.coefficient(HAtom::h(L - 1, L)));
    RationalFunction inv = RationalFunction(1) / b.rhs.coefficient(HAtom::h(L - 1, L));
    return inv * (hll - rest);
  }

  // H^{L-1}_L in terms of level L-1.
  HCombo down(int L) {
    if (route_ == ReductionRoute::lemma3) {
      return rec_lemma3(Lemma3::hrecg, L - 1).rhs;
    }
    HRelation a = rec_lemma2(Lemma2::shift_n, HIndex{L - 1, 0, L});
    // L(L-1) H^{L-1}_{L-1} = c H^{L-1}_L + rest  =>  H^{L-1}_L = (lhs - rest)/c.
    RationalFunction c = a.rhs.coefficient(HAtom::h(L - 1, L));
    HCombo rest = a.rhs - HCombo::h(L - 1, L, c);
    HCombo lhs = RationalFunction(L * (L - 1)) * same_level(L - 1, L - 1);
    return (RationalFunction(1) / c) * (lhs - rest);
  }

  // Rewrite every e^{-x} 0F1(nu; xy) with nu outside {N, N+1}.
  HCombo normalize_boundary(HCombo c) const {
    const RationalFunction Z = HCombo::X() * HCombo::Y();
    while (true) {
      int worst = 0;
      for (const auto& [a, coef] : c.terms())
        if (a.kind == HAtom::Boundary && (a.index.n < target_ || a.index.n > target_ + 1)) {
          worst = a.index.n;
          // Prefer the extreme indices first so the chain terminates.
          if (a.index.n > target_ + 1) break;
        }
      if (worst == 0) return c;
      HCombo rep;
      if (worst > target_ + 1) {
        // 0F1(nu) = (nu-1)(nu-2)/z (0F1(nu-2) - 0F1(nu-1)).
        RationalFunction f = RationalFunction(Rational((worst - 1) * (worst - 2))) / Z;
        rep = HCombo::atom(HAtom::boundary(worst - 2), f) - HCombo::atom(HAtom::boundary(worst - 1), f);
      } else {
        // 0F1(nu) = 0F1(nu+1) + z/((nu+1) nu) 0F1(nu+2).
        rep = HCombo::atom(HAtom::boundary(worst + 1)) +
              HCombo::atom(HAtom::boundary(worst + 2), Z * rf(Rational(1, (worst + 1) * worst)));
      }
      c = c.substitute(HAtom::boundary(worst), rep);
    }
  }

  int target_;
  ReductionRoute route_;
  std::map<std::pair<int, int>, HCombo> cache_;
};

}  // namespace detail

/// Express H^k_n (k >= n-1, n > 1) over the basis {H^{N-1}_N, e^{-x}0F1(N;xy),
/// e^{-x}0F1(N+1;xy)} with coefficients in Q(x,y). The result is checked
/// numerically against quadrature at a sample point.
inline HCombo reduce_to_basis(const HIndex& idx, int N, ReductionRoute route = ReductionRoute::lemma3,
                              bool check = true) {
  validate(idx);
  if (idx.l != 0) throw std::invalid_argument("reduce_to_basis: l must be 0");
  if (idx.n < 2 || N < 2) throw std::invalid_argument("reduce_to_basis: n > 1 and N > 1 required");
  if (idx.k < idx.n - 1) throw std::invalid_argument("reduce_to_basis: requires k >= n-1");
  HCombo r = detail::BasisReducer(N, route).reduce(idx.k, idx.n);
  if (check) {
    const double xs = 1.3, ys = 0.7;
    double lhs = h_eval(idx, xs, ys);
    double rhs = r.eval(xs, ys);
    if (std::fabs(lhs - rhs) > 1e-9 * (std::fabs(lhs) + r.magnitude(xs, ys, [](const HIndex& i, double a, double b) {
                                         return h_eval(i, a, b);
                                       })))
      throw numeric_failure("reduce_to_basis: numeric validation failed");
  }
  return r;
}

/// Coefficients of a reduced combination on the product-friendly basis
/// b0 = H^{N-1}_N, b1 = x^N e^{-x} 0F1(N; xy), b2 = x^N e^{-x} 0F1(N+1; xy).
inline std::array<RationalFunction, 3> basis_coefficients(const HCombo& c, int N) {
  std::array<RationalFunction, 3> out;
  const RationalFunction inv_xn = HCombo::x_power(-N);
  for (const auto& [a, coef] : c.terms()) {
    if (a == HAtom::h(N - 1, N)) {
      out[0] = coef;
    } else if (a == HAtom::boundary(N)) {
      out[1] = coef * inv_xn;
    } else if (a == HAtom::boundary(N + 1)) {
      out[2] = coef * inv_xn;
    } else {
      throw std::logic_error("basis_coefficients: combination is not over the level-N basis");
    }
  }
  return out;
}

struct RecurrenceSuiteResult {
  std::size_t checked = 0;
  double worst = 0.0;
  std::string worst_case;
  bool pass = false;
};

/// Every recurrence instantiated on k, l <= max_kl and n <= max_n (where its
/// preconditions hold), checked at all (x, y) pairs from `points`.
inline RecurrenceSuiteResult recurrence_suite(int max_kl = 6, int max_n = 8,
                                              const std::vector<double>& points = {0.5, 1.0, 2.0, 5.0, 10.0},
                                              double tol = 1e-10) {
  std::map<std::tuple<int, int, int, double, double>, double> cache;
  auto h = [&](const HIndex& i, double x, double y) {
    const auto key = std::make_tuple(i.k, i.l, i.n, x, y);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double v = h_eval(i, x, y);
    cache.emplace(key, v);
    return v;
  };
  std::vector<HRelation> rels;
  auto add = [&](auto make) {
    try {
      rels.push_back(make());
    } catch (const std::invalid_argument&) {
      // preconditions not met at this index
    }
  };
  for (int n = 1; n <= max_n; ++n) {
    for (int k = 0; k <= max_kl; ++k) {
      for (Lemma1 v : {Lemma1::rec3, Lemma1::recip, Lemma1::rechd}) add([&] { return rec_lemma1(v, {k, 0, n}); });
      for (Lemma2 v : {Lemma2::shift_n, Lemma2::shift_k}) add([&] { return rec_lemma2(v, {k, 0, n}); });
      for (int l = 0; l <= max_kl; ++l)
        for (Lemma45 v : {Lemma45::hklnx, Lemma45::hklnr, Lemma45::hklni, Lemma45::hklnt, Lemma45::hklrecu,
                          Lemma45::hklrecu2})
          add([&] { return rec_lemma45(v, {k, l, n}); });
    }
    for (Lemma3 v : {Lemma3::simrec1, Lemma3::simrec2, Lemma3::hrecg}) add([&] { return rec_lemma3(v, n); });
    for (int m = 1; m <= n; ++m) add([&] { return rec_superh(n, m); });
  }
  RecurrenceSuiteResult out;
  for (const HRelation& r : rels)
    for (double x : points)
      for (double y : points) {
        const double res = relation_residual(r, x, y, h);
        ++out.checked;
        if (!(res <= out.worst)) {
          out.worst = res;
          out.worst_case = r.lhs.to_string() + " = " + r.rhs.to_string() + " at x=" + std::to_string(x) +
                           " y=" + std::to_string(y);
        }
      }
  out.pass = out.checked > 0 && out.worst < tol;
  return out;
}

}  // namespace wishart
