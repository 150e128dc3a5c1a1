#include "qz/cli.hpp"
#include "qz/cli_output.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using qz::cli::json;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qzlab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  testing::internal::CaptureStdout();
  testing::internal::CaptureStderr();
  const int code = qz::cli::run_cli(static_cast<int>(argv.size()), argv.data());
  Result r{code, testing::internal::GetCapturedStdout()};
  testing::internal::GetCapturedStderr();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

class CliTest : public testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("qz_cli_" + std::string(testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

void expect_outputs_exist(const json& manifest) {
  ASSERT_TRUE(manifest.contains("outputs"));
  EXPECT_FALSE(manifest["outputs"].empty());
  for (const auto& o : manifest["outputs"]) EXPECT_TRUE(fs::exists(o.get<std::string>())) << o;
}

const json* find_comparison(const json& list, const std::string& name) {
  for (const auto& c : list)
    if (c["name"] == name) return &c;
  return nullptr;
}

}  // namespace

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, qz::cli::kUsage);
  EXPECT_EQ(run({"no-such-command"}).code, qz::cli::kUsage);
  EXPECT_EQ(run({"ground-state", "--problem", "quartic"}).code, qz::cli::kUsage);
  EXPECT_EQ(run({"--version"}).code, qz::cli::kSuccess);
}

TEST_F(CliTest, GroundStateWritesProfileAndManifest) {
  const Result r = run({"ground-state", "--problem", "r2d", "--out", path("r.csv")});
  ASSERT_EQ(r.code, qz::cli::kSuccess);
  const json m = read_json(path("r_manifest.json"));
  expect_outputs_exist(m);
  EXPECT_EQ(m["command"], "ground-state");
  EXPECT_FALSE(m["grid_hashes"].empty());
  EXPECT_EQ(slurp(path("r.csv")).substr(0, 5), "xi,R\n");
  EXPECT_NEAR(m["results"]["profiles"]["R"]["int_sq"].get<double>(), 1.862255, 1e-5);
}

TEST_F(CliTest, InvalidInputIsAValidationFailure) {
  EXPECT_EQ(run({"dynamics", "--hamiltonian", "0.1", "--out", path("t.csv")}).code, qz::cli::kValidationFailure);
  EXPECT_EQ(run({"simulate", "--dt", "-1", "--out", dir_.string()}).code, qz::cli::kValidationFailure);
  EXPECT_EQ(run({"dynamics", "--coeffs", path("missing.json"), "--out", path("t.csv")}).code,
            qz::cli::kValidationFailure);
}

TEST_F(CliTest, DynamicsFromCoefficientFileIsDeterministic) {
  {
    std::ofstream os(path("m.json"));
    os << R"({"m1": 0.7274490671260528, "m2": 0.5528589653160726, "m3": 10.784827257147906})";
  }
  const std::vector<std::string> common{"dynamics", "--model",  "scalar2d", "--hamiltonian", "-0.0430", "--ntilde",
                                        "0.240",    "--gamma",  "5e-3",     "--coeffs",      path("m.json"),
                                        "--tend",   "50"};
  auto a = common, b = common;
  a.insert(a.end(), {"--out", path("a.csv")});
  b.insert(b.end(), {"--out", path("b.csv")});
  ASSERT_EQ(run(a).code, qz::cli::kSuccess);
  ASSERT_EQ(run(b).code, qz::cli::kSuccess);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  const json m = read_json(path("a_manifest.json"));
  expect_outputs_exist(m);
  EXPECT_NEAR(m["results"]["threshold_gamma"].get<double>(), 0.03105, 1e-4);
  EXPECT_NEAR(m["results"]["lambda_min"].get<double>(), 0.48429, 1e-4);
}

TEST_F(CliTest, FunctionalsReportsBound) {
  ASSERT_EQ(run({"functionals", "--d", "2", "--c", "2.90", "--gamma", "5e-3", "--out", dir_.string()}).code,
            qz::cli::kSuccess);
  const json m = read_json(path("functionals_manifest.json"));
  EXPECT_NEAR(m["results"]["H"].get<double>(), -0.0430, 5e-5);
  EXPECT_GT(m["results"]["bound"].get<double>(), 0.0);
}

TEST_F(CliTest, SimulateWritesDiagnostics) {
  ASSERT_EQ(run({"simulate", "--c", "2.0", "--rmax", "12", "--n", "400", "--dt", "2e-3", "--tend", "0.1", "--out",
                 dir_.string()})
                .code,
            qz::cli::kSuccess);
  const std::string csv = slurp(path("diagnostics.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,maxE,lambda_est,N,H,sponge_loss");
  expect_outputs_exist(read_json(path("simulate_manifest.json")));
}

TEST_F(CliTest, ScalarCoefficientTableFlagsTheMassReference) {
  const Result r = run({"reproduce", "coeff_table_2d", "--out", dir_.string()});
  EXPECT_EQ(r.code, qz::cli::kValidationFailure);
  const json m = read_json(path("coeff_table_2d_manifest.json"));
  expect_outputs_exist(m);
  const json& list = m["results"]["comparisons"];
  for (const char* k : {"m1", "m2", "m3"}) {
    const json* c = find_comparison(list, k);
    ASSERT_NE(c, nullptr) << k;
    EXPECT_TRUE((*c)["pass"].get<bool>()) << k;
    EXPECT_TRUE(c->contains("reference_value"));
  }
  const json* mass = find_comparison(list, "mass_R");
  ASSERT_NE(mass, nullptr);
  EXPECT_FALSE((*mass)["pass"].get<bool>());
}

TEST_F(CliTest, ReproduceArrestPanel) {
  EXPECT_EQ(run({"reproduce", "--figure", "2a", "--out", dir_.string()}).code, qz::cli::kSuccess);
  const json m = read_json(path("fig2_top_manifest.json"));
  expect_outputs_exist(m);
  EXPECT_TRUE(m["passed"].get<bool>());
}

TEST_F(CliTest, SweepMarksThreshold) {
  ASSERT_EQ(run({"sweep", "--gamma-fraction", "0.99,1.01", "--H", "-0.043", "--N", "0.24", "--out", dir_.string()})
                .code,
            qz::cli::kSuccess);
  const std::string csv = slurp(path("sweep.csv"));
  EXPECT_NE(csv.find("\"bounded\""), std::string::npos);
  EXPECT_NE(csv.find("\"no bounded orbit\""), std::string::npos);
  expect_outputs_exist(read_json(path("sweep_manifest.json")));
}

TEST(CliOutput, ComparisonJson) {
  const qz::cli::Comparison rel{"x", 1.01, 1.0, 0.02, false, ""};
  const json j = qz::cli::to_json(rel);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_NEAR(j["rel_err"].get<double>(), 0.01, 1e-12);
  const qz::cli::Comparison abs{"y", 1e-7, 0.0, 1e-8, true, ""};
  EXPECT_FALSE(qz::cli::to_json(abs)["pass"].get<bool>());
  EXPECT_TRUE(qz::cli::to_json(abs).contains("abs_err"));
}

TEST(CliOutput, SeventeenDigits) {
  EXPECT_EQ(qz::cli::fmt(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(qz::cli::fmt(1.0 / 3.0)), 1.0 / 3.0);
}
