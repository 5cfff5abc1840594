#include <staleperc/csv.hpp>
#include <staleperc/dataset.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace staleperc;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("staleperc_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int invoke(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + STALEPERC_CLI_PATH + " " + args + " > " + (dir_ / "stdout.txt").string() +
                            " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string stdout_text() const { return slurp(dir_ / "stdout.txt"); }
  std::string stderr_text() const { return slurp(dir_ / "stderr.txt"); }

  fs::path dir_;
};

const char* kSmall = R"([run]
horizon = 120
[dataset]
dim = 4
clients = 3
examples_per_client = 10
margin = 0.15
)";

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(invoke(""), 1);
  EXPECT_EQ(invoke("frobnicate"), 1);
  EXPECT_EQ(invoke("run --reps 0"), 1);
  EXPECT_EQ(invoke("--help"), 0);
}

TEST_F(Cli, GenDataIsReproducible) {
  const auto cfg = write_file("c.ini", kSmall);
  const auto a = dir_ / "a.txt";
  const auto b = dir_ / "b.txt";
  ASSERT_EQ(invoke("--config " + cfg.string() + " gen-data --output " + a.string()), 0);
  ASSERT_EQ(invoke("--config " + cfg.string() + " gen-data --output " + b.string()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  GenerateOptions o;
  o.dim = 4;
  o.num_clients = 3;
  o.examples_per_client = 10;
  o.target_margin = 0.15;
  o.seed = 7;
  EXPECT_TRUE(read_dataset(a) == generate_dataset(o));
}

TEST_F(Cli, MarginNotBelowRadiusIsConfigError) {
  const auto cfg = write_file("c.ini", "[dataset]\nmargin = 1\nradius = 1\n");
  EXPECT_EQ(invoke("--config " + cfg.string() + " gen-data --output " + (dir_ / "d.txt").string()), 2);
  EXPECT_FALSE(fs::exists(dir_ / "d.txt"));
  EXPECT_NE(stderr_text().find("margin"), std::string::npos);
}

TEST_F(Cli, ConfigAndIoErrors) {
  const auto bad = write_file("bad.ini", "[staleness]\nprofile = 0.5,0.1\n");
  EXPECT_EQ(invoke("--config " + bad.string() + " run"), 2);
  const auto missing = write_file("missing.ini", "[dataset]\npath = nowhere.txt\n");
  EXPECT_EQ(invoke("--config " + missing.string() + " --out " + (dir_ / "o").string() + " run"), 3);
  EXPECT_EQ(invoke("--seed banana run"), 1);
  EXPECT_EQ(invoke("run", "STALEPERC_SEED=banana"), 2);
}

TEST_F(Cli, RunWritesArtifactsAndPasses) {
  const auto cfg = write_file("c.ini", kSmall);
  const auto out = dir_ / "out";
  ASSERT_EQ(invoke("--config " + cfg.string() + " --out " + out.string() + " --reps 3 run"), 0) << stdout_text();
  for (const char* f : {"trace.csv", "summary.csv", "verdicts.txt", "config.ini"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_EQ(slurp(out / "verdicts.txt").find("FAIL"), std::string::npos);
  EXPECT_NE(stdout_text().find("PASS"), std::string::npos);
}

TEST_F(Cli, EnvironmentAndFlagPrecedence) {
  const auto cfg = write_file("c.ini", kSmall);
  const auto env_out = dir_ / "env";
  ASSERT_EQ(invoke("--config " + cfg.string() + " run", "STALEPERC_OUT=" + env_out.string() + " STALEPERC_SEED=5"),
            0);
  const auto flag_out = dir_ / "flag";
  ASSERT_EQ(invoke("--config " + cfg.string() + " --seed 5 --out " + flag_out.string() + " run",
                   "STALEPERC_OUT=" + env_out.string() + "_unused STALEPERC_SEED=6"),
            0);
  EXPECT_FALSE(fs::exists(dir_ / "env_unused"));
  EXPECT_EQ(slurp(env_out / "trace.csv"), slurp(flag_out / "trace.csv"));
}

TEST_F(Cli, InjectedCorruptionFails) {
  const auto cfg = write_file("c.ini", kSmall);
  EXPECT_EQ(invoke("--config " + cfg.string() + " --out " + (dir_ / "o").string() + " run --inject-corruption -1"),
            4);
  const std::string text = stdout_text();
  const auto at = text.find("round ");
  ASSERT_NE(at, std::string::npos);
  const std::string round = text.substr(at + 6, text.find('\n', at) - at - 6);
  const std::string verdicts = slurp(dir_ / "o" / "verdicts.txt");
  EXPECT_NE(verdicts.find("FAIL"), std::string::npos);
  EXPECT_NE(verdicts.find(round), std::string::npos) << verdicts;
}

TEST_F(Cli, SingleCellSweepMatchesRunSummary) {
  const auto cfg = write_file("c.ini", std::string(kSmall) + "[noise]\nfamily = gaussian\nsigma2_dl = 0.1\n");
  const auto run_out = dir_ / "run";
  const auto sweep_out = dir_ / "sweep";
  ASSERT_EQ(invoke("--config " + cfg.string() + " --reps 5 --out " + run_out.string() + " run"), 0);
  ASSERT_EQ(invoke("--config " + cfg.string() + " --reps 5 --out " + sweep_out.string() + " --jobs 2 sweep"), 0);

  std::istringstream summary(slurp(run_out / "summary.csv"));
  std::istringstream grid(slurp(sweep_out / "sweep.csv"));
  std::string s_line, g_line;
  std::getline(summary, s_line);
  std::getline(grid, g_line);
  std::size_t rows = 0;
  while (std::getline(summary, s_line)) {
    ASSERT_TRUE(std::getline(grid, g_line));
    const auto s = split_trimmed(s_line, ',');
    const auto g = split_trimmed(g_line, ',');
    // summary: A,mean_KA,se_KA,bound_thm1; sweep: profile,s_bar,V,A,mean_KA,se_KA,bound_thm1
    EXPECT_EQ(s[0], g[3]);
    EXPECT_EQ(s[1], g[4]);
    EXPECT_EQ(s[2], g[5]);
    EXPECT_EQ(s[3], g[6]);
    ++rows;
  }
  EXPECT_EQ(rows, 5u);
  EXPECT_FALSE(std::getline(grid, g_line));
}

TEST_F(Cli, ProfileDesign) {
  EXPECT_EQ(invoke("profile-design --freq 0.1,0.9,0.9"), 0);
  EXPECT_NE(stdout_text().find("alpha = 0,1,0"), std::string::npos) << stdout_text();
  EXPECT_EQ(invoke("profile-design --freq 0.1,0.1,0.1"), 0);
  EXPECT_NE(stderr_text().find("warning"), std::string::npos);
  EXPECT_EQ(invoke("profile-design --freq 0.1,1.5"), 2);
}

TEST_F(Cli, SelfTest) {
  EXPECT_EQ(invoke("--jobs 2 self-test"), 0) << stdout_text();
  EXPECT_EQ(stdout_text().find("FAIL"), std::string::npos);
}
