#include <CLI11.hpp>
#include <iostream>

#include "quasar/errors.hpp"
#include "quasar/experiment.hpp"
#include "quasar/problems/csv.hpp"
#include "quasar/problems/instance_io.hpp"

namespace {

struct GenOptions {
  std::size_t n = 200;
  std::size_t d = 4;
  std::size_t N = 200;
  std::size_t T = 64;
  double noise = 0.0;
  double gamma = 0.5;
  double mu = 0.0;
  double label_noise = 0.0;
  std::string link = "logistic";
  std::uint64_t seed = 0;
  std::string out;
};

int generate(const std::string& kind, const GenOptions& o) {
  using namespace quasar;
  ProblemInstance inst;
  try {
    if (kind == "lds") {
      inst = generate_lds(o.N, o.d, o.T, o.noise, o.seed);
    } else if (kind == "glm") {
      inst = generate_glm(o.n, o.d, parse_link(o.link), o.seed);
    } else if (kind == "piecewise") {
      inst = generate_piecewise(o.n, o.d, o.gamma, o.mu, o.seed, o.label_noise);
    } else {
      std::cerr << "unknown problem kind '" << kind << "'\n";
      return 2;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    save_instance(o.out, inst);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "wrote " << instance_kind(inst) << " instance to " << o.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerated methods for quasar-convex finite sums"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "run every (method, seed) pair of a config");
  run->add_option("config", config, "experiment config file")->required();
  auto* check = app.add_subcommand("check", "run assumption diagnostics for a config");
  check->add_option("config", config, "experiment config file")->required();

  GenOptions g;
  std::string kind;
  auto* gen = app.add_subcommand("gen", "generate and save a problem instance");
  gen->add_option("kind", kind, "lds | glm | piecewise")->required();
  gen->add_option("--n", g.n, "component count");
  gen->add_option("--d", g.d, "dimension");
  gen->add_option("--N", g.N, "sequence count (lds)");
  gen->add_option("--T", g.T, "sequence length (lds)");
  gen->add_option("--noise", g.noise, "output noise standard deviation (lds)");
  gen->add_option("--gamma", g.gamma, "quasar-convexity constant (piecewise)");
  gen->add_option("--mu", g.mu, "regularization (piecewise)");
  gen->add_option("--label-noise", g.label_noise, "offset noise (piecewise)");
  gen->add_option("--link", g.link, "logistic | quadratic | leaky_relu (glm)");
  gen->add_option("--seed", g.seed, "generator seed");
  gen->add_option("--out", g.out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*run) return quasar::cmd_run(config, std::cout, std::cerr);
  if (*check) return quasar::cmd_check(config, std::cout, std::cerr);
  return generate(kind, g);
}
