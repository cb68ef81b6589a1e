#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlsat/formula.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = {}) {
  std::istringstream in(input);
  std::ostringstream out, err;
  Run r;
  r.code = mlsat::cli::run(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mlsat_cli_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = (dir_ / name).string();
    std::ofstream(path) << text;
    return path;
  }
  std::string path(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SolveUnitClauses) {
  const auto f = write("unit.cnf", "p cnf 3 3\n1 0\n-2 0\n3 0\n");
  const auto r = run({"solve", f, "--seed", "1"});
  EXPECT_EQ(r.code, mlsat::cli::kExitSat);
  EXPECT_NE(r.out.find("s SATISFIABLE\n"), std::string::npos);
  EXPECT_NE(r.out.find("v -1 2 -3 0\n"), std::string::npos);
  EXPECT_EQ(r.out.rfind("c ", 0), 0u);  // convention comment leads
}

TEST_F(CliTest, SolveContradiction) {
  const auto f = write("contra.cnf", "p cnf 1 2\n1 0\n-1 0\n");
  const auto r = run({"solve", f, "--restarts", "10"});
  EXPECT_EQ(r.code, mlsat::cli::kExitOk);
  EXPECT_NE(r.out.find("s UNKNOWN\n"), std::string::npos);
  EXPECT_NE(r.out.find("o 1/2\n"), std::string::npos);
}

TEST_F(CliTest, SolveFromStdinAndModes) {
  const auto text = "p hybrid 3 2\nx 1 2 0\nx 1 -2 0\n";
  auto r = run({"solve", "-", "--mode", "maxsat", "--restarts", "5"}, text);
  EXPECT_EQ(r.code, mlsat::cli::kExitOk);
  EXPECT_NE(r.out.find("o 1/2\n"), std::string::npos);
  r = run({"solve", "-", "--mode", "threshold:1"}, text);
  EXPECT_NE(r.out.find("s THRESHOLD_MET\n"), std::string::npos);
  r = run({"solve", "-", "--mode", "threshold:3"}, text);
  EXPECT_EQ(r.code, mlsat::cli::kExitError);
  r = run({"solve", "-", "--mode", "fast"}, text);
  EXPECT_EQ(r.code, mlsat::cli::kExitError);
}

TEST_F(CliTest, SolveDeterministic) {
  const auto gen = run({"gen", "hybrid", "--n", "20", "--seed", "4", "-o", path("h.txt")});
  ASSERT_EQ(gen.code, 0);
  const auto a = run({"solve", path("h.txt"), "--seed", "9", "--threads", "1"});
  const auto b = run({"solve", path("h.txt"), "--seed", "9", "--threads", "1"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.code, b.code);
}

TEST_F(CliTest, ParseErrorsExitOne) {
  const auto f = write("bad.txt", "p hybrid 2 1\n1 3 0\n");
  const auto r = run({"solve", f});
  EXPECT_EQ(r.code, mlsat::cli::kExitError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_EQ(run({"solve", path("missing.txt")}).code, mlsat::cli::kExitError);
  EXPECT_EQ(run({"solve", f, "--bogus"}).code, mlsat::cli::kExitError);
  EXPECT_EQ(run({}).code, mlsat::cli::kExitError);
  EXPECT_EQ(run({"--help"}).code, mlsat::cli::kExitOk);
}

TEST_F(CliTest, GenVertexCoverVerifies) {
  ASSERT_EQ(run({"gen", "vc", "--n", "20", "--seed", "7", "-o", path("vc.txt")}).code, 0);
  const auto check = run({"check", path("vc.txt")});
  EXPECT_EQ(check.code, 0);
  EXPECT_NE(check.out.find("s VERIFIED"), std::string::npos);
}

TEST_F(CliTest, GenParityShape) {
  const auto r = run({"gen", "parity", "--n", "8", "--e", "0.25", "--seed", "1"});
  ASSERT_EQ(r.code, 0);
  const auto f = mlsat::parse_formula(r.out);
  EXPECT_EQ(f.m(), 16u);
  EXPECT_TRUE(std::all_of(f.clauses.begin(), f.clauses.end(),
                          [](const auto& c) { return c.kind == mlsat::ClauseKind::Xor; }));
  // The certificate is the noisy hidden parity: 12 of 16.
  write("p.txt", r.out);
  const auto check = run({"check", path("p.txt")});
  EXPECT_EQ(check.code, mlsat::cli::kExitViolated);
  EXPECT_NE(check.out.find("o 12/16"), std::string::npos);
}

TEST_F(CliTest, GenHybridCounts) {
  const auto r = run({"gen", "hybrid", "--n", "50", "--r", "1.5", "--s", "0.2", "--l",
                      "0.1", "--k", "0.4", "--seed", "2"});
  ASSERT_EQ(r.code, 0);
  const auto f = mlsat::parse_formula(r.out);
  EXPECT_EQ(f.m(), 75u + 10u + 1u);
  EXPECT_EQ(run({"gen", "hybrid", "--l", "0"}).code, mlsat::cli::kExitError);
  EXPECT_EQ(run({"gen", "tree"}).code, mlsat::cli::kExitError);
}

TEST_F(CliTest, SolveCheckRoundTrip) {
  ASSERT_EQ(run({"gen", "vc", "--n", "12", "--seed", "3", "-o", path("vc.txt")}).code, 0);
  const auto solved = run({"solve", path("vc.txt"), "--seed", "2"});
  ASSERT_EQ(solved.code, mlsat::cli::kExitSat);
  write("model.txt", solved.out);
  const auto check = run({"check", path("vc.txt"), path("model.txt")});
  EXPECT_EQ(check.code, 0);
  EXPECT_NE(check.out.find("c CNF 18/18"), std::string::npos);
  EXPECT_NE(check.out.find("c CARD_LE 1/1"), std::string::npos);
}

TEST_F(CliTest, CheckRejectsCorruptedModels) {
  const auto f = write("f.txt", "p hybrid 3 2\n1 0\nx 1 2 3 0\n");
  write("good.txt", "v -1 2 3 0\n");
  write("bad.txt", "v 1 2 3 0\n");
  write("short.txt", "v 1 2 0\n");
  EXPECT_EQ(run({"check", f, path("good.txt")}).code, 0);
  const auto bad = run({"check", f, path("bad.txt")});
  EXPECT_EQ(bad.code, mlsat::cli::kExitViolated);
  EXPECT_NE(bad.out.find("o 0/2"), std::string::npos);
  EXPECT_EQ(run({"check", f, path("short.txt")}).code, mlsat::cli::kExitError);
  EXPECT_EQ(run({"check", f}).code, mlsat::cli::kExitError);  // no certificate
}

TEST_F(CliTest, MaxSatBreakdownMatchesReport) {
  const auto f = write("m.txt", "p hybrid 3 4\n1 0\n-1 0\nx 2 3 0\nn 1 2 3 0\n");
  const auto solved = run({"solve", f, "--mode", "maxsat", "--restarts", "20"});
  write("model.txt", solved.out);
  const auto check = run({"check", f, path("model.txt")});
  const auto o_line = [](const std::string& s) {
    const auto at = s.find("\no ");
    return s.substr(at + 1, s.find('\n', at + 1) - at - 1);
  };
  EXPECT_EQ(o_line(solved.out), o_line(check.out));
  EXPECT_EQ(o_line(check.out), "o 3/4");
}
