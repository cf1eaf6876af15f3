#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

using namespace wishart;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run_in_process(std::vector<std::string> args) {
  args.insert(args.begin(), "wishart_roots");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Runs the installed binary through the shell; stdout only.
Result run_binary(const std::string& args, const std::string& env = "") {
  const char* bin = std::getenv("WISHART_ROOTS_BIN");
  Result r;
  if (!bin) return r;
  const std::string cmd = env + " '" + std::string(bin) + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Cli, CdfRowContract) {
  const Result r = run_in_process({"cdf", "--n", "4", "--m", "2", "--lambda", "2,1", "--x", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "value", "method", "err_est"}));
  EXPECT_EQ(rows[1][0], "3");
  EXPECT_EQ(rows[1][2], "quadrature");
  // 17 significant digits round-trip exactly.
  EXPECT_EQ(std::stod(rows[1][1]), cdf({4, 2, {2.0, 1.0}}, 3.0));
}

TEST(Cli, TableOnHgmGrid) {
  const Result r = run_in_process({"table", "--n", "4", "--m", "2", "--lambda", "2,1", "--x-min", "0.5", "--x-max", "20",
                                   "--points", "100", "--method", "hgm"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 101u);
  double prev_x = -1.0, prev_v = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][2], "hgm");
    const double x = std::stod(rows[i][0]), v = std::stod(rows[i][1]);
    EXPECT_GT(x, prev_x);
    EXPECT_GE(v, prev_v);
    prev_x = x;
    prev_v = v;
  }
  EXPECT_EQ(std::stod(rows[1][0]), 0.5);
  EXPECT_EQ(std::stod(rows.back()[0]), 20.0);
}

TEST(Cli, AllRoutesSideBySide) {
  const Result r = run_in_process({"pdf", "--n", "4", "--m", "2", "--lambda", "2,1", "--x", "1,3", "--method", "all"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "quadrature", "series", "conjecture", "hgm"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double q = std::stod(rows[i][1]);
    for (std::size_t c = 2; c < 5; ++c) EXPECT_NEAR(std::stod(rows[i][c]), q, 1e-8 * q);
  }
  // Routes that are undefined for the parameters print nan.
  const Result r4 = run_in_process({"pdf", "--n", "5", "--m", "4", "--lambda", "3,2,1,0.5", "--x", "4", "--method", "all",
                                  "--order", "6"});
  ASSERT_EQ(r4.code, 0) << r4.err;
  const auto rows4 = csv(r4.out);
  EXPECT_EQ(rows4[1][3], "nan");
  EXPECT_EQ(rows4[1][4], "nan");
  EXPECT_NE(rows4[1][1], "nan");
}

TEST(Cli, HgmTrajectory) {
  const Result r = run_in_process({"hgm", "--n", "3", "--m", "2", "--lambda", "2,1", "--x", "1,2,4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  ASSERT_EQ(rows[0].size(), 4u + 9u);
  EXPECT_EQ(rows[0][1], "cdf");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double x = std::stod(rows[i][0]);
    EXPECT_NEAR(std::stod(rows[i][1]), cdf({3, 2, {2.0, 1.0}}, x), 1e-8);
  }
}

TEST(Cli, VerifyReports) {
  const Result r = run_in_process({"verify", "operators", "--n", "4", "--m", "2", "--order", "12"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 3u);
  for (const auto& rep : j) {
    EXPECT_TRUE(rep.at("pass").get<bool>());
    EXPECT_EQ(rep.at("max_residual_terms").get<int>(), 0);
    EXPECT_TRUE(rep.contains("check"));
    EXPECT_TRUE(rep.contains("params"));
  }
  const Result l = run_in_process({"verify", "lclm", "--n", "4"});
  EXPECT_EQ(l.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(l.out)[0].at("pass").get<bool>());
  EXPECT_EQ(run_in_process({"verify", "nonsense", "--n", "4", "--m", "2"}).code, cli::usage);
  EXPECT_EQ(run_in_process({"verify", "printed", "--n", "5", "--m", "4"}).code, cli::usage);
}

TEST(Cli, MonteCarloAndNegativeControl) {
  const std::vector<std::string> base{"mc", "--n", "4", "--m", "2", "--lambda", "2,1", "--samples", "20000"};
  const Result good = run_in_process(base);
  EXPECT_EQ(good.code, 0) << good.err;
  EXPECT_EQ(csv(good.out).size(), 21u);
  auto bad_args = base;
  bad_args.insert(bad_args.end(), {"--perturb", "0.02"});
  EXPECT_EQ(run_in_process(bad_args).code, cli::verification);
  auto hist = base;
  hist.insert(hist.end(), {"--bins", "12"});
  const Result h = run_in_process(hist);
  EXPECT_EQ(h.code, 0);
  EXPECT_EQ(csv(h.out)[0], (std::vector<std::string>{"lo", "hi", "density"}));
  EXPECT_EQ(csv(h.out).size(), 13u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_in_process({}).code, cli::usage);
  EXPECT_EQ(run_in_process({"bogus"}).code, cli::usage);
  EXPECT_EQ(run_in_process({"cdf", "--n", "4", "--m", "2", "--lambda", "2", "--x", "3"}).code, cli::usage);
  EXPECT_EQ(run_in_process({"cdf", "--n", "4", "--m", "2", "--lambda", "2,1"}).code, cli::usage);
  EXPECT_EQ(run_in_process({"cdf", "--n", "4", "--m", "2", "--lambda", "2,1", "--x", "3", "--method", "magic"}).code,
            cli::usage);
  EXPECT_EQ(run_in_process({"pdf", "--n", "4", "--m", "2", "--lambda", "1,1", "--x", "3", "--method", "hgm"}).code,
            cli::usage);
  EXPECT_EQ(run_in_process({"cdf", "--n", "-4", "--m", "2", "--lambda", "2,1", "--x", "3"}).code, cli::usage);
  EXPECT_EQ(run_in_process({"--help"}).code, cli::ok);
}

TEST(Cli, JsonConfigDefaultsAndOverrides) {
  const std::string path = ::testing::TempDir() + "wishart_cli_config.json";
  {
    std::ofstream f(path);
    f << R"({"n": 4, "m": 2, "lambda": [2, 1], "x": [1, 3], "method": "conjecture"})";
  }
  const Result a = run_in_process({"pdf", "--json", path});
  ASSERT_EQ(a.code, 0) << a.err;
  auto rows = csv(a.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][2], "conjecture");
  const Result b = run_in_process({"pdf", "--json", path, "--method", "quadrature", "--x", "2"});
  rows = csv(b.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "2");
  EXPECT_EQ(rows[1][2], "quadrature");
  {
    std::ofstream f(path);
    f << R"({"unknown_flag": 1})";
  }
  EXPECT_EQ(run_in_process({"pdf", "--json", path}).code, cli::usage);
  {
    std::ofstream f(path);
    f << "{not json";
  }
  EXPECT_EQ(run_in_process({"pdf", "--json", path}).code, cli::usage);
}

TEST(Cli, BinaryExitCodesAndDeterminism) {
  if (!std::getenv("WISHART_ROOTS_BIN")) GTEST_SKIP() << "WISHART_ROOTS_BIN not set";
  const std::string table = "table --n 5 --m 3 --lambda 3,2,1 --x-min 0.5 --x-max 12 --points 24 --quantity pdf";
  const Result a = run_binary(table, "WISHART_ROOTS_THREADS=1");
  const Result b = run_binary(table, "WISHART_ROOTS_THREADS=4");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(csv(a.out).size(), 25u);
  const std::string mc = "mc --n 3 --m 1 --lambda 1 --samples 5000 --seed 7";
  EXPECT_EQ(run_binary(mc, "WISHART_ROOTS_THREADS=1").out, run_binary(mc, "WISHART_ROOTS_THREADS=3").out);
  EXPECT_EQ(run_binary("cdf --n 4 --m 2 --lambda 2 --x 3").code, 1);
  EXPECT_EQ(run_binary("mc --n 3 --m 1 --lambda 1 --samples 50000 --perturb 0.02").code, 3);
  EXPECT_EQ(run_binary("verify theorem2 --n 4 --m 2 --order 9").code, 0);
}
