// Runs the issnet binary and checks the exit-status contract.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("issnet_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  int run(const std::string& args) {
    const std::string cmd = std::string(ISSNET_BIN) + " " + args + " --out " + (dir_ / "out").string() +
                            " >" + (dir_ / "stdout").string() + " 2>" + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  std::string record(const std::string& file, const std::string& section, const std::string& key) {
    std::istringstream in(slurp(dir_ / "out" / file));
    const std::string prefix = section + "\t" + key + "\t";
    for (std::string line; std::getline(in, line);)
      if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    return "<missing>";
  }

  fs::path dir_;
};

const char* kWorked = ISSNET_SOURCE_DIR "/docs/example_sum.ini";

TEST_F(Cli, CertifyWorkedExample) {
  EXPECT_EQ(run(std::string("certify --config ") + kWorked), 0) << slurp(dir_ / "stderr");
  EXPECT_EQ(record("certify.tsv", "certify", "status"), "VALID");
  EXPECT_LT(std::stod(record("certify.tsv", "certify", "residual")), 0.0);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "certify.tsv.tmp"));
}

TEST_F(Cli, AnalyzeGrowthCase) {
  const auto cfg = write("diag.ini", "[operator]\nform = finite\nrow.0 = 1.1 0\nrow.1 = 0 1.1\n");
  EXPECT_EQ(run("analyze --config " + cfg.string()), 1);
  EXPECT_EQ(record("analyze.tsv", "analyze", "status"), "Unknown");
  EXPECT_NEAR(std::stod(record("analyze.tsv", "analyze", "upper_bound")), 1.1, 1e-12);
  EXPECT_GT(std::stod(record("analyze.tsv", "analyze", "uges.a")), 1.0);
  EXPECT_EQ(run("certify --config " + cfg.string()), 1);
  EXPECT_EQ(record("certify.tsv", "certify", "status"), "NONE");
}

TEST_F(Cli, SimulateNeedsExample) {
  const auto cfg = write("op.ini", "[operator]\nform = finite\nrow.0 = 0.5\n");
  EXPECT_EQ(run("simulate --config " + cfg.string()), 2);
  EXPECT_NE(slurp(dir_ / "stderr").find("[example]"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("analyze"), 2);                                            // --config missing
  EXPECT_EQ(run("--config " + std::string(kWorked)), 2);                   // no subcommand
  EXPECT_EQ(run("frobnicate --config " + std::string(kWorked)), 2);        // unknown subcommand
  EXPECT_EQ(run("analyze --config " + (dir_ / "absent.ini").string()), 2);  // unreadable file
  const auto bad = write("bad.ini", "[operator]\nform = finite\nrow.0 = -1\n");
  EXPECT_EQ(run("analyze --config " + bad.string()), 2);
  EXPECT_NE(slurp(dir_ / "stderr").find("line 3"), std::string::npos);
  EXPECT_EQ(run("analyze --n-max 0 --config " + std::string(kWorked)), 2);
}

TEST_F(Cli, GraphCheckAndNMaxOverride) {
  const auto cfg = write("pair.ini", "[operator]\nform = finite\naggregation = max\nrow.0 = 0 0.5\nrow.1 = 1.5 0\n");
  EXPECT_EQ(run("graph-check --config " + cfg.string()), 0);
  EXPECT_EQ(record("graph-check.tsv", "graph", "condition_n"), "2");
  EXPECT_EQ(record("graph-check.tsv", "graph", "identities"), "true");
  EXPECT_EQ(run("analyze --n-max 1 --config " + cfg.string()), 1);
  EXPECT_EQ(run("analyze --n-max 2 --config " + cfg.string()), 0);

  const auto mixed = write("mixed.ini", "[operator]\nform = finite\naggregation = mixed\nsplit = 1\nrow.0 = 0.5\n");
  EXPECT_EQ(run("graph-check --config " + mixed.string()), 2);
}

TEST_F(Cli, QuietPrintsNothing) {
  EXPECT_EQ(run(std::string("analyze --quiet --config ") + kWorked), 0);
  EXPECT_TRUE(slurp(dir_ / "stdout").empty());
}

}  // namespace
