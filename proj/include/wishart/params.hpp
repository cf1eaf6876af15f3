#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wishart {

struct WishartParams {
  int n = 1;
  int m = 1;
  std::vector<double> lambdas;

  void validate() const {
    if (m < 1 || n < m) throw std::invalid_argument("WishartParams: n >= m >= 1 required");
    if (static_cast<int>(lambdas.size()) != m) throw std::invalid_argument("WishartParams: need m lambdas");
    for (double l : lambdas)
      if (!(l >= 0.0) || !std::isfinite(l)) throw std::invalid_argument("WishartParams: lambdas must be finite and >= 0");
  }
  /// Lambdas sorted descending.
  std::vector<double> sorted() const {
    std::vector<double> s = lambdas;
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
  }
  double lambda_sum() const {
    double s = 0.0;
    for (double l : lambdas) s += l;
    return s;
  }
};

enum class Method { quadrature, series, conjecture, hgm };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::quadrature: return "quadrature";
    case Method::series: return "series";
    case Method::conjecture: return "conjecture";
    case Method::hgm: return "hgm";
  }
  return "?";
}

inline Method method_from_string(const std::string& s) {
  if (s == "quadrature") return Method::quadrature;
  if (s == "series") return Method::series;
  if (s == "conjecture") return Method::conjecture;
  if (s == "hgm") return Method::hgm;
  throw std::invalid_argument("unknown method: " + s);
}

struct EvalConfig {
  Method method = Method::quadrature;
  double confluence_threshold = 1e-5;
  double rel_tol = 1e-12;   // quadrature tolerance
  int series_order = 16;    // lambda-series truncation
  bool experimental = false;  // allow the m = 4 conjecture route

  void validate() const {
    if (!(confluence_threshold > 0.0)) throw std::invalid_argument("EvalConfig: confluence_threshold > 0 required");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("EvalConfig: rel_tol > 0 required");
    if (series_order < 1) throw std::invalid_argument("EvalConfig: series_order >= 1 required");
  }
};

struct Evaluation {
  double value = 0.0;
  double err_est = 0.0;
  Method method = Method::quadrature;
};

}  // namespace wishart
