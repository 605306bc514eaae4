#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "quasar/diagnostics.hpp"
#include "quasar/oracle.hpp"
#include "quasar/solvers.hpp"

namespace quasar {

struct ProblemSpec {
  // piecewise | glm | lds | quadratic | csv | instance
  std::string kind = "piecewise";
  std::size_t n = 200;
  std::size_t d = 4;
  double gamma = 0.5;
  double mu = 0.0;
  std::uint64_t seed = 0;
  double label_noise = 0.0;
  std::string link = "logistic";
  std::size_t N = 100;
  std::size_t T = 32;
  double noise = 0.0;
  std::string path;
  std::string label_column = "-1";
  bool normalize = true;
  // Zero keeps the model's own smoothness constant.
  double L = 0.0;
  // Radius of the random start for non-LDS problems; perturbation scale for LDS.
  double init_scale = 5.0;
  std::uint64_t init_seed = 1;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

struct MethodSettings {
  Method method = Method::kQAGD;
  double gamma = 0.5;
  double mu = 0.0;
  // Zero selects the problem's smoothness constant.
  double L = 0.0;
  double eps = 1e-4;
  std::size_t horizon = 1000;
  double q = 0.25;
  double p = 0.0;
  double sigma = 1.0;
  double R = 0.0;
  double sgd_stepsize = 0.0;
  double rho_sgc = 1.0;
  bool restart = false;
  std::size_t max_stages = 50;
  std::size_t stage_horizon = 10000;
  std::size_t qasgd_switch = 0;
  std::size_t record_every = 1;

  friend bool operator==(const MethodSettings&, const MethodSettings&) = default;
};

struct CheckSpec {
  std::size_t samples = 10000;
  double radius = 10.0;
  double gamma = 0.5;
  double mu = 0.0;
  double sigma = 1.0;
  std::size_t pairs = 100;
  std::vector<std::size_t> batches{1};
  std::size_t fd_points = 10;
  std::uint64_t seed = 0;

  friend bool operator==(const CheckSpec&, const CheckSpec&) = default;
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<MethodSettings> methods;
  std::vector<std::uint64_t> seeds{0};
  std::string output = "out";
  std::size_t workers = 0;
  CheckSpec check;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// INI text. Method sections are named after the method; a [defaults] section
// supplies values shared by all methods. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string write_config(const ExperimentConfig& cfg);

struct BuiltProblem {
  std::shared_ptr<const ComponentModel> model;
  Vector y0;
  std::optional<Vector> x_star;
  double f_star = 0.0;
  bool interpolating = false;
  // False when the quasar-convexity constant cannot be known (LDS).
  bool gamma_known = true;
  double L = 1.0;
};

BuiltProblem build_problem(const ProblemSpec& spec);

RunConfig make_run_config(const MethodSettings& m, const BuiltProblem& p, std::uint64_t seed);

struct RunOutcome {
  Method method = Method::kQAGD;
  std::uint64_t seed = 0;
  Trace trace;
  std::string status = "ok";
  std::string message;
};

RunOutcome execute_run(const BuiltProblem& p, const MethodSettings& m, std::uint64_t seed);

// Writes content to path through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& content);

std::string summary_csv(const std::vector<RunOutcome>& runs, const ExperimentConfig& cfg,
                        double f_star);
std::string band_csv(const std::vector<const RunOutcome*>& runs, double f_star);
std::string plot_script(const ExperimentConfig& cfg);

// Exit code 0 on success, 1 on runtime or check failure, 2 on bad usage or config.
int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_check(const std::string& config_path, std::ostream& out, std::ostream& err);

std::vector<CheckReport> run_checks(const ExperimentConfig& cfg, const BuiltProblem& p);

std::size_t worker_count(std::size_t configured);

}  // namespace quasar
