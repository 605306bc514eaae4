#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "quasar/errors.hpp"
#include "quasar/experiment.hpp"
#include "quasar/problems/instance_io.hpp"
#include "quasar/problems/piecewise.hpp"

namespace {

namespace fs = std::filesystem;

class Workdir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("quasar_exp_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

const char* kSmallConfig = R"([problem]
kind = piecewise
n = 40
d = 4
gamma = 0.5
seed = 3

[experiment]
methods = GD, QAGD, QASVRG-II, QASGD
seeds = 7
output = out

[defaults]
horizon = 200
eps = 1e-3
)";

TEST(Config, RoundTripIsLossless) {
  quasar::ExperimentConfig cfg = quasar::parse_config(kSmallConfig);
  ASSERT_EQ(cfg.methods.size(), 4u);
  EXPECT_EQ(cfg.methods[2].method, quasar::Method::kQASVRG_II);
  EXPECT_EQ(cfg.methods[0].horizon, 200u);
  cfg.check.batches = {1, 5, 25};
  cfg.check.gamma = 0.75;
  cfg.methods[1].restart = true;
  cfg.methods[3].sigma = 0.3;
  cfg.problem.label_noise = 0.125;
  const std::string text = quasar::write_config(cfg);
  EXPECT_EQ(quasar::parse_config(text), cfg);
  EXPECT_EQ(quasar::write_config(quasar::parse_config(text)), text);
}

TEST(Config, MethodSectionOverridesDefaults) {
  const std::string text = std::string(kSmallConfig) + "\n[QAGD]\nhorizon = 17\n";
  const auto cfg = quasar::parse_config(text);
  EXPECT_EQ(cfg.methods[1].horizon, 17u);
  EXPECT_EQ(cfg.methods[0].horizon, 200u);
}

TEST(Config, Errors) {
  EXPECT_THROW(quasar::parse_config("[problem]\nkind = piecewise\nbogus = 1\n"),
               quasar::ConfigError);
  EXPECT_THROW(quasar::parse_config("[nonsense]\nx = 1\n"), quasar::ConfigError);
  EXPECT_THROW(quasar::parse_config("[experiment]\nmethods = QAGD\nseeds = x\n"),
               quasar::ConfigError);
}

TEST_F(Workdir, UnknownMethodExitsTwoAndNamesIt) {
  const std::string path =
      write("bad.cfg", "[problem]\nkind = piecewise\n[experiment]\nmethods = QAGD, Adamax\n");
  std::ostringstream out, err;
  EXPECT_EQ(quasar::cmd_run(path, out, err), 2);
  EXPECT_NE(err.str().find("Adamax"), std::string::npos) << err.str();
}

TEST_F(Workdir, MissingConfigExitsTwo) {
  std::ostringstream out, err;
  EXPECT_EQ(quasar::cmd_run((dir_ / "absent.cfg").string(), out, err), 2);
}

TEST_F(Workdir, RunEmitsArtifactsAndIsByteIdentical) {
  const std::string path = write("small.cfg", kSmallConfig);
  std::ostringstream out, err;
  ASSERT_EQ(quasar::cmd_run(path, out, err), 0) << err.str();
  const fs::path o = dir_ / "out";
  for (const char* name : {"trace_GD_seed7.csv", "trace_QAGD_seed7.csv",
                           "trace_QASVRG-II_seed7.csv", "trace_QASGD_seed7.csv", "summary.csv",
                           "band_QAGD.csv", "plot.gp"}) {
    EXPECT_TRUE(fs::exists(o / name)) << name;
  }
  const std::string header = slurp(o / "trace_QAGD_seed7.csv").substr(0, 58);
  EXPECT_EQ(header.rfind(quasar::kTraceHeader, 0), 0u);

  std::map<std::string, std::string> first;
  for (const auto& e : fs::directory_iterator(o)) first[e.path().filename()] = slurp(e.path());
  fs::remove_all(o);
  ASSERT_EQ(quasar::cmd_run(path, out, err), 0);
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(o)) {
    EXPECT_EQ(first[e.path().filename()], slurp(e.path())) << e.path();
    ++compared;
  }
  EXPECT_EQ(compared, first.size());
}

TEST_F(Workdir, DivergenceIsARecordedResult) {
  const std::string path = write("div.cfg", R"([problem]
kind = quadratic
d = 2

[experiment]
methods = GD
seeds = 0
output = out

[GD]
sgd_stepsize = 2.5
horizon = 200
)");
  std::ostringstream out, err;
  EXPECT_EQ(quasar::cmd_run(path, out, err), 0) << err.str();
  const std::string summary = slurp(dir_ / "out" / "summary.csv");
  EXPECT_NE(summary.find("diverged"), std::string::npos) << summary;
}

TEST_F(Workdir, CheckPassesWithDeclaredGammaAndFailsWhenOverstated) {
  const std::string base = "[problem]\nkind = piecewise\nn = 200\nd = 4\ngamma = 0.5\n"
                           "[check]\nsamples = 2000\npairs = 20\n";
  std::ostringstream out, err;
  EXPECT_EQ(quasar::cmd_check(write("ok.cfg", base + "gamma = 0.5\n"), out, err), 0) << out.str();
  EXPECT_NE(out.str().find("CHECK quasar PASS"), std::string::npos);
  std::ostringstream out2, err2;
  EXPECT_EQ(quasar::cmd_check(write("bad.cfg", base + "gamma = 0.99\n"), out2, err2), 1);
  EXPECT_NE(out2.str().find("CHECK quasar FAIL"), std::string::npos);
}

TEST_F(Workdir, LdsQuasarCheckIsMeasuredOnly) {
  const std::string path = write("lds.cfg", R"([problem]
kind = lds
N = 20
d = 2
T = 16
[check]
samples = 200
radius = 0.2
pairs = 5
gamma = 0.99
)");
  std::ostringstream out, err;
  const int code = quasar::cmd_check(path, out, err);
  EXPECT_NE(out.str().find("measured"), std::string::npos) << out.str();
  EXPECT_EQ(code, 0) << out.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QUASAR_OPT_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST_F(Workdir, GenRoundTrips) {
  const std::string lds = (dir_ / "lds.json").string();
  ASSERT_EQ(run_cli("gen lds --N 200 --d 5 --T 64 --noise 0 --seed 0 --out " + lds), 0);
  const auto a = quasar::load_instance(lds);
  ASSERT_TRUE(std::holds_alternative<quasar::LdsInstance>(a));
  EXPECT_EQ(std::get<quasar::LdsInstance>(a).N, 200u);

  const std::string glm = (dir_ / "glm.json").string();
  ASSERT_EQ(run_cli("gen glm --n 500 --d 20 --link logistic --seed 0 --out " + glm), 0);
  const auto g = std::get<quasar::GlmInstance>(quasar::load_instance(glm));
  EXPECT_EQ(quasar::glm_value_grad(g, g.w_star).first, 0.0);

  const std::string pw = (dir_ / "pw.json").string();
  ASSERT_EQ(run_cli("gen piecewise --n 200 --d 4 --gamma 0.5 --mu 0 --seed 0 --out " + pw), 0);
  const auto p = std::get<quasar::PiecewiseInstance>(quasar::load_instance(pw));
  EXPECT_NO_THROW(quasar::PiecewiseModel{p});

  // a saved instance drives a run
  const std::string path = write("inst.cfg", "[problem]\nkind = instance\npath = pw.json\n"
                                             "[experiment]\nmethods = QAGD\noutput = out\n"
                                             "[QAGD]\nhorizon = 20\n");
  std::ostringstream out, err;
  EXPECT_EQ(quasar::cmd_run(path, out, err), 0) << err.str();

  EXPECT_EQ(run_cli("gen banana --out " + pw), 2);
  EXPECT_EQ(run_cli("gen lds --out /nonexistent/dir/x.json"), 1);
  EXPECT_EQ(run_cli("frobnicate"), 2);
}

TEST(Workers, EnvironmentCap) {
  ::setenv("QUASAR_OPT_WORKERS", "3", 1);
  EXPECT_EQ(quasar::worker_count(0), 3u);
  EXPECT_LE(quasar::worker_count(2), 2u);
  ::unsetenv("QUASAR_OPT_WORKERS");
  EXPECT_GE(quasar::worker_count(0), 1u);
}

}  // namespace
