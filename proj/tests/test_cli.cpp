#include <gtest/gtest.h>

#include "support/cli_runner.hpp"

using namespace sedvel::clitest;

namespace {

const std::string kExe = SEDVEL_CLI;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("sedvel_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    write_inputs(root_ / "in");
  }
  void TearDown() override {
    if (!HasFailure()) fs::remove_all(root_);
  }

  CliResult run(std::vector<std::string> args) {
    return run_cli(kExe, args, root_ / "scratch");
  }

  fs::path root_;
};

}  // namespace

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"profile"}).code, 2);                                  // missing --vs30
  EXPECT_EQ(run({"profile", "--vs30", "-5"}).code, 2);                  // validator
  EXPECT_EQ(run({"--coeffs", "preset:nope", "profile", "--vs30", "300"}).code, 2);
  EXPECT_EQ(run({"profile", "--vs30", "300", "--mode", "spatial-conditioned"}).code, 2);
  EXPECT_EQ(run({"merge", "--profiles", "x.csv"}).code, 2);             // no background
  EXPECT_EQ(run({"semivariogram", "--profiles", (root_ / "missing.csv").string()}).code, 3);
  {
    std::ofstream(root_ / "bad.csv") << "id,top_m,thickness_m,vs_mps\na,0,5,abc\n";
    EXPECT_EQ(run({"calibrate", "--profiles", (root_ / "bad.csv").string()}).code, 3);
  }
  EXPECT_EQ(run({"--out-dir", (root_ / "o").string(), "evaluate", "--profiles",
                 (root_ / "missing.csv").string()}).code, 3);
  ASSERT_EQ(run({"--out-dir", (root_ / "s").string(), "synth", "--n", "3", "--depth-min", "60",
                 "--vs30-max", "400"}).code, 0);
  // a three-wavelet ensemble cannot be flat over two decades
  EXPECT_EQ(run({"--out-dir", (root_ / "o").string(), "evaluate", "--profiles",
                 (root_ / "s" / "synth_profiles.csv").string(), "--ensemble-count", "3"}).code, 4);
}

TEST_F(Cli, ProfileOutputs) {
  const auto r = run({"--out-dir", (root_ / "p").string(), "profile", "--vs30", "300",
                      "--realizations", "2", "--id", "abc"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(root_ / "p" / "abc_median.csv"));
  EXPECT_TRUE(fs::exists(root_ / "p" / "abc_r001.csv"));
  EXPECT_TRUE(fs::exists(root_ / "p" / "abc_r002.csv"));
  EXPECT_NE(r.out.find("realized vs30 300.0"), std::string::npos) << r.out;
}

TEST_F(Cli, HelpCarriesUnits) {
  EXPECT_NE(run({"profile", "--help"}).out.find("[m/s]"), std::string::npos);
  EXPECT_NE(run({"profile", "--help"}).out.find("[m]"), std::string::npos);
  EXPECT_NE(run({"grid", "--help"}).out.find("Slice depths [m]"), std::string::npos);
  EXPECT_NE(run({"evaluate", "--help"}).out.find("[Hz]"), std::string::npos);
  EXPECT_NE(run({"--help"}).out.find("[km]"), std::string::npos);
}

TEST_F(Cli, ConfigFileMatchesFlags) {
  const auto a = run({"--config", (root_ / "in" / "config.toml").string(), "--out-dir",
                      (root_ / "a").string(), "synth", "--n", "5"});
  const auto b = run({"--seed", "7", "--out-dir", (root_ / "b").string(), "synth", "--n", "5"});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(read_tree(root_ / "a"), read_tree(root_ / "b"));
}

TEST_F(Cli, PipelineIsDeterministicAcrossThreadCounts) {
  for (int threads : {1, 4}) {
    for (const auto& args : pipeline(root_ / "in", root_ / ("t" + std::to_string(threads)), threads, 11)) {
      const auto r = run(args);
      ASSERT_EQ(r.code, 0) << args[6] << ": " << r.err;
    }
  }
  const auto one = read_tree(root_ / "t1"), four = read_tree(root_ / "t4");
  EXPECT_GT(one.size(), 20u);
  ASSERT_EQ(one.size(), four.size());
  for (const auto& [name, text] : one) {
    ASSERT_TRUE(four.count(name)) << name;
    EXPECT_TRUE(four.at(name) == text) << name << " differs between 1 and 4 threads";
  }
}
