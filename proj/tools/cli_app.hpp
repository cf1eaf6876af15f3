#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wishart/diff_operator.hpp"
#include "wishart/distribution.hpp"
#include "wishart/h_integrals.hpp"
#include "wishart/hgm.hpp"
#include "wishart/monte_carlo.hpp"

namespace wishart::cli {

enum ExitCode { ok = 0, usage = 1, numeric = 2, verification = 3 };

/// JSON config file: a flat object whose keys are long flag names.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }
  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw CLI::ConversionError("config: top level must be an object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      auto scalar = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Worker count: hardware concurrency capped by WISHART_ROOTS_THREADS.
inline int thread_cap() {
  int t = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("WISHART_ROOTS_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) t = std::min(t, cap);
  }
  return t;
}

struct Options {
  int n = 0;
  int m = 0;
  std::vector<double> lambdas;
  std::vector<double> xs;
  double x_min = 0.5;
  double x_max = 20.0;
  int points = 100;
  std::string method = "quadrature";
  std::string quantity = "cdf";
  std::optional<int> order;  // series order; verify defaults to 10
  std::optional<double> tol;
  std::uint64_t seed = 20240601;
  long samples = 100000;
  int bins = 0;
  double perturb = 0.0;
  std::string check;

  WishartParams params() const {
    WishartParams p{n, m, lambdas};
    p.validate();
    return p;
  }
  std::vector<double> grid() const {
    if (!xs.empty()) return xs;
    if (points < 1 || !(x_max >= x_min) || x_min < 0.0) throw std::invalid_argument("grid: need points >= 1, 0 <= x-min <= x-max");
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(points == 1 ? x_min : x_min + (x_max - x_min) * i / (points - 1));
    return g;
  }
  EvalConfig eval_config(Method route) const {
    EvalConfig c;
    c.method = route;
    if (tol) c.rel_tol = *tol;
    if (order) c.series_order = *order;
    return c;
  }
};

inline const std::vector<Method> all_methods{Method::quadrature, Method::series, Method::conjecture, Method::hgm};

/// x,value,method,err_est rows, or one column per route for --method all.
inline void write_values(std::ostream& out, const Options& o, const std::vector<double>& xs, Quantity q) {
  const WishartParams p = o.params();
  if (o.method != "all") {
    const auto rows = evaluate_grid(p, xs, q, o.eval_config(method_from_string(o.method)), thread_cap());
    out << "x,value,method,err_est\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
      out << num(xs[i]) << ',' << num(rows[i].value) << ',' << to_string(rows[i].method) << ','
          << num(rows[i].err_est) << '\n';
    return;
  }
  std::vector<std::vector<double>> cols;
  for (Method m : all_methods) {
    std::vector<double> col(xs.size(), std::nan(""));
    try {
      const auto rows = evaluate_grid(p, xs, q, o.eval_config(m), thread_cap());
      for (std::size_t i = 0; i < xs.size(); ++i) col[i] = rows[i].value;
    } catch (const std::invalid_argument&) {
      // route not defined for these parameters
    } catch (const std::domain_error&) {
    }
    cols.push_back(std::move(col));
  }
  out << "x";
  for (Method m : all_methods) out << ',' << to_string(m);
  out << '\n';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << num(xs[i]);
    for (const auto& c : cols) out << ',' << num(c[i]);
    out << '\n';
  }
}

inline void write_trajectory(std::ostream& out, const Options& o) {
  HgmConfig hc;
  if (o.tol) hc.rtol = *o.tol;
  const auto traj = hgm_trajectory(o.params(), o.grid(), hc);
  out << "x,cdf,pdf,R";
  const std::size_t dim = traj.empty() ? 0 : traj.front().basis.size();
  for (std::size_t k = 0; k < dim; ++k) out << ",b" << k;
  out << '\n';
  for (const auto& pt : traj) {
    out << num(pt.x) << ',' << num(pt.cdf) << ',' << num(pt.psi) << ',' << num(pt.R);
    for (auto b : pt.basis) out << ',' << num(static_cast<double>(b));
    out << '\n';
  }
}

inline int write_mc(std::ostream& out, std::ostream& err, const Options& o) {
  McConfig mc;
  mc.samples = o.samples;
  mc.seed = o.seed;
  mc.threads = thread_cap();
  const WishartParams p = o.params();
  const auto draws = sample_largest_eig(p, mc);
  if (o.bins > 0) {
    out << "lo,hi,density\n";
    for (const auto& b : density_histogram(draws, o.bins)) out << num(b.lo) << ',' << num(b.hi) << ',' << num(b.density) << '\n';
    return ok;
  }
  const EvalConfig route = o.eval_config(method_from_string(o.method));
  const auto r = compare_cdf(draws, [&](double x) { return std::clamp(cdf_eval(p, x, route).value + o.perturb, 0.0, 1.0); });
  out << "x,empirical,analytic,half_width,inside\n";
  for (const auto& pt : r.points)
    out << num(pt.x) << ',' << num(pt.empirical) << ',' << num(pt.analytic) << ',' << num(pt.half_width) << ','
        << (pt.inside ? 1 : 0) << '\n';
  err << (r.pass ? "inside" : "OUTSIDE") << " the 99.9% band, worst z = " << num(r.worst_z) << '\n';
  return r.pass ? ok : verification;
}

inline nlohmann::json report_json(const VerifyReport& r) {
  return {{"check", r.check},
          {"params", r.params},
          {"max_residual_terms", r.max_residual_terms},
          {"safe_order", r.safe_order},
          {"pass", r.pass},
          {"details", r.details}};
}

inline int write_verify(std::ostream& out, const Options& o) {
  nlohmann::json reports = nlohmann::json::array();
  const std::string& c = o.check;
  if (c == "recurrences") {
    const auto r = recurrence_suite();
    reports.push_back({{"check", "recurrences"},
                       {"params", "k,l<=6 n<=8 x,y in {0.5,1,2,5,10}"},
                       {"max_residual_terms", r.worst < 1e-10 ? 0 : 1},
                       {"max_relative_residual", r.worst},
                       {"checked", r.checked},
                       {"pass", r.pass}});
  } else if (c == "lclm") {
    bool pass = true;
    nlohmann::json at = nlohmann::json::array();
    for (const Rational& x0 : {Rational(1, 2), Rational(2), Rational(7, 3)}) {
      const bool okay = lclm_matches_order5(o.n, x0);
      pass = pass && okay;
      at.push_back({{"x", x0.get_str()}, {"match", okay}});
    }
    reports.push_back({{"check", "lclm"},
                       {"params", "n=" + std::to_string(o.n)},
                       {"max_residual_terms", pass ? 0 : 1},
                       {"specializations", at},
                       {"pass", pass}});
  } else {
    if (o.n < 1 || o.m < 1 || o.n < o.m) throw std::invalid_argument("verify: need n >= m >= 1");
    const bool all = c == "operators";
    if (all || c == "theorem1") reports.push_back(report_json(verify_theorem1(o.n, o.m, o.order.value_or(10))));
    if (all || c == "theorem2") reports.push_back(report_json(verify_theorem2(o.n, o.m, o.order.value_or(10))));
    if ((all && (o.m == 2 || o.m == 3)) || c == "printed") reports.push_back(report_json(verify_printed(o.n, o.m, o.order.value_or(10))));
    if (reports.empty()) throw std::invalid_argument("verify: unknown check " + c);
  }
  bool pass = true;
  for (const auto& r : reports) pass = pass && r.at("pass").get<bool>();
  out << reports.dump(2) << '\n';
  return pass ? ok : verification;
}

/// Full command line; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Largest eigenvalue of a complex non-central Wishart matrix"};
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--json", "", "JSON config file with default flag values");
  Options o;
  app.add_option("--n", o.n, "degrees of freedom n")->check(CLI::PositiveNumber);
  app.add_option("--m", o.m, "matrix size m")->check(CLI::PositiveNumber);
  app.add_option("--lambda", o.lambdas, "non-centrality eigenvalues, comma separated")->delimiter(',');
  app.add_option("--x", o.xs, "abscissas, comma separated")->delimiter(',');
  app.add_option("--x-min", o.x_min, "grid start");
  app.add_option("--x-max", o.x_max, "grid end");
  app.add_option("--points", o.points, "grid size");
  app.add_option("--method", o.method, "quadrature|series|conjecture|hgm|all");
  app.add_option("--quantity", o.quantity, "cdf|pdf (table)")->check(CLI::IsMember({"cdf", "pdf"}));
  app.add_option("--order", o.order, "lambda-series order (series route, verify)");
  app.add_option("--tol", o.tol, "relative tolerance (quadrature or HGM)");
  app.add_option("--seed", o.seed, "Monte Carlo seed");
  app.add_option("--samples", o.samples, "Monte Carlo samples");
  app.add_option("--bins", o.bins, "Monte Carlo: emit a density histogram with this many bins");
  app.add_option("--perturb", o.perturb, "Monte Carlo: shift the analytic CDF (negative control)");

  auto* cdf_cmd = app.add_subcommand("cdf", "CDF at --x")->fallthrough();
  auto* pdf_cmd = app.add_subcommand("pdf", "density at --x")->fallthrough();
  auto* table_cmd = app.add_subcommand("table", "--quantity on a grid")->fallthrough();
  auto* hgm_cmd = app.add_subcommand("hgm", "HGM trajectory with basis values")->fallthrough();
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo comparison against --method")->fallthrough();
  auto* verify_cmd = app.add_subcommand("verify", "exact and numeric identity checks")->fallthrough();
  verify_cmd->add_option("check", o.check, "operators|theorem1|theorem2|printed|lclm|recurrences")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return usage;
  } catch (const nlohmann::json::exception& e) {
    err << "config: " << e.what() << '\n';
    return usage;
  }

  try {
    if (o.method != "all") method_from_string(o.method);
    if (*cdf_cmd || *pdf_cmd) {
      if (o.xs.empty()) throw std::invalid_argument("--x is required");
      write_values(out, o, o.xs, *cdf_cmd ? Quantity::cdf : Quantity::pdf);
      return ok;
    }
    if (*table_cmd) {
      write_values(out, o, o.grid(), o.quantity == "pdf" ? Quantity::pdf : Quantity::cdf);
      return ok;
    }
    if (*hgm_cmd) {
      write_trajectory(out, o);
      return ok;
    }
    if (*mc_cmd) {
      if (o.method == "all") throw std::invalid_argument("mc: pick one analytic route");
      return write_mc(out, err, o);
    }
    if (*verify_cmd) return write_verify(out, o);
  } catch (const numeric_failure& e) {
    err << "numeric failure: " << e.what() << '\n';
    return numeric;
  } catch (const std::invalid_argument& e) {
    err << "usage: " << e.what() << '\n';
    return usage;
  } catch (const std::domain_error& e) {
    err << "usage: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return numeric;
  }
  return usage;
}

}  // namespace wishart::cli
