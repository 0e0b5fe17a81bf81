#include <gtest/gtest.h>

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"dampcheck"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = dampcheck::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, Classify) {
  auto r = run({"classify", "--omega0", "1", "--gamma", "0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("Underdamped, omega=0.8660254", 0), 0u) << r.out;
  r = run({"classify", "--omega0", "1", "--gamma", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Critical\n");
  r = run({"classify", "--omega0", "1", "--gamma", "1.25"});
  EXPECT_EQ(r.out, "Overdamped, zeta=0.75\n");
  r = run({"classify", "--omega0", "1", "--gamma", "-1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ParseErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"classify", "--gamma", "abc"}).code, 2);
  EXPECT_EQ(run({"residual", "--curve", "bogus"}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, Residual) {
  auto r = run({"residual", "--curve", "liu-claimed", "--gamma", "0.1", "--convention", "liu"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("verdict: violates"), std::string::npos);
  EXPECT_NE(r.out.find("max |dp/dt - rhs|: 2"), std::string::npos);
  r = run({"residual", "--curve", "corrected", "--gamma", "0.1", "--x0", "1", "--p0", "-0.1"});
  EXPECT_EQ(r.code, 0) << r.out;
  // The undamped claimed curve still runs the wrong way round the circle.
  r = run({"residual", "--curve", "liu-claimed", "--gamma", "0", "--convention", "liu"});
  EXPECT_EQ(r.code, 1);
  r = run({"residual", "--curve", "corrected", "--gamma", "10"});
  EXPECT_EQ(r.code, 0) << r.out;
  r = run({"residual", "--curve", "corrected", "--omega0", "2", "--convention", "liu"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, Conserve) {
  auto r = run({"conserve", "--invariant", "r", "--gamma", "0.1", "--x0", "1", "--p0", "0", "--t-end", "62.8",
                "--dt", "1e-3"});
  EXPECT_EQ(r.code, 0) << r.out;
  r = run({"conserve", "--invariant", "h1-naive", "--gamma", "0.1", "--x0", "1", "--p0", "0", "--t-end", "62.8",
           "--dt", "1e-3"});
  EXPECT_EQ(r.code, 1) << r.out;
  const auto pos = r.out.find("max deviation from initial: ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_GE(std::stod(r.out.substr(pos + 28)), 1.0);

  const std::string csv = ::testing::TempDir() + "dampcheck_h1.csv";
  r = run({"conserve", "--invariant", "h1-unwrapped", "--trajectory", "liu-claimed", "--gamma", "0.1", "--t-end",
           "10", "--dt", "0.01", "--tol", "1e-9", "-o", csv.c_str()});
  EXPECT_EQ(r.code, 0) << r.out;
  const std::string body = slurp(csv);
  EXPECT_EQ(body.rfind("t,value\n", 0), 0u);
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 1002);

  r = run({"conserve", "--invariant", "r", "--gamma", "1"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, Field) {
  const std::string csv = ::testing::TempDir() + "dampcheck_field.csv";
  const std::string svg = ::testing::TempDir() + "dampcheck_field.svg";
  auto r = run({"field", "--invariant", "h1", "--gamma", "0.1", "--nx", "100", "--ny", "100", "-o", csv.c_str(),
                "--svg", svg.c_str()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("branch jump across negative x-axis: 6.28"), std::string::npos) << r.out;
  EXPECT_EQ(slurp(csv).rfind("x,p,value,valid\n", 0), 0u);
  EXPECT_EQ(slurp(svg).rfind("<svg", 0), 0u);

  r = run({"field", "--invariant", "cos-h1", "--gamma", "0.1", "--x-min", "-2", "--x-max", "-0.1", "--p-min",
           "-0.5", "--p-max", "0.5", "--nx", "40", "--ny", "40"});
  EXPECT_EQ(r.code, 0);
  const auto pos = r.out.find("branch jump across negative x-axis: ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::abs(std::stod(r.out.substr(pos + 36))), 1e-3);

  r = run({"field", "--invariant", "h1", "--gamma", "0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("singular"), std::string::npos);
}

TEST(Cli, DemoErrors) {
  auto r = run({"demo-errors"});
  EXPECT_EQ(r.code, 0) << r.out;
  for (int k = 1; k <= 7; ++k) {
    EXPECT_NE(r.out.find("Error #" + std::to_string(k) + ":"), std::string::npos);
  }
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);

  r = run({"demo-errors", "--gamma", "0.25"});
  EXPECT_EQ(r.code, 0) << r.out;

  r = run({"demo-errors", "--json"});
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_TRUE(j["all_passed"].get<bool>());
  ASSERT_EQ(j["errors"].size(), 7u);
  EXPECT_NEAR(j["errors"][0]["evidence"]["residual_x(0)"].get<double>(), -0.1, 1e-12);
  EXPECT_NEAR(j["errors"][5]["evidence"]["branch_jump"].get<double>(), dampcheck::kTwoPi, 1e-7);

  EXPECT_EQ(run({"demo-errors", "--gamma", "1"}).code, 2);
  EXPECT_EQ(run({"demo-errors", "--gamma", "0"}).code, 2);
}

TEST(Cli, Deterministic) {
  const auto a = run({"demo-errors", "--json", "--gamma", "0.3"});
  const auto b = run({"demo-errors", "--json", "--gamma", "0.3"});
  EXPECT_EQ(a.out, b.out);
}
