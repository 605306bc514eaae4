#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <unistd.h>
#include <vector>

#include "quasar/diagnostics.hpp"
#include "quasar/experiment.hpp"
#include "quasar/linesearch.hpp"
#include "quasar/problems/glm.hpp"
#include "quasar/problems/lds.hpp"
#include "quasar/problems/piecewise.hpp"
#include "quasar/problems/quadratic.hpp"
#include "quasar/schedules.hpp"
#include "quasar/solvers.hpp"

namespace {

namespace fs = std::filesystem;
using quasar::FiniteSumObjective;
using quasar::Method;
using quasar::QuasarParams;
using quasar::RunConfig;
using quasar::StepParams;
using quasar::Vector;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Vector random_point(std::size_t d, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  Vector x(d);
  for (std::size_t j = 0; j < d; ++j) x[j] = nd(rng);
  return x;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Gap of QAGD after t iterations and the rate bound at t.
std::pair<double, double> qagd_gap_and_bound(std::shared_ptr<const quasar::ComponentModel> model,
                                             const Vector& y0, double mu_bar_gamma_L[3],
                                             std::size_t t, double eps) {
  FiniteSumObjective f(model);
  RunConfig c;
  c.method = Method::kQAGD;
  c.qp.gamma = mu_bar_gamma_L[1];
  c.qp.mu_bar = mu_bar_gamma_L[0];
  c.qp.L = mu_bar_gamma_L[2];
  c.eps = eps;
  c.horizon = t;
  const auto r = quasar::run_method(f, y0, c);
  const double gap = f.peek_value(r.y);
  const double R2 = 0.5 * quasar::squared_norm(y0);
  const double g = c.qp.gamma;
  const double tp = static_cast<double>(t) + 1.0;
  return {gap, 8.0 * c.qp.L * R2 / (g * g * c.qp.mu_bar * tp * tp) + eps / 2.0};
}

Outcome criterion1() {
  const std::vector<std::size_t> ts{10, 30, 100, 300};
  auto run = [&](std::shared_ptr<const quasar::ComponentModel> model, const Vector& y0,
                 double L, std::vector<double>& gaps, bool& within) {
    double consts[3] = {1.0, 1.0, L};
    within = true;
    for (std::size_t t : ts) {
      const auto [gap, bound] = qagd_gap_and_bound(model, y0, consts, t, 1e-4);
      gaps.push_back(gap);
      within = within && gap <= bound;
    }
  };
  auto slope_of = [&](const std::vector<double>& gaps) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (!(gaps[i] > 0.0)) return std::nan("");
      lx.push_back(std::log(static_cast<double>(ts[i])));
      ly.push_back(std::log(gaps[i]));
    }
    return least_squares_slope(lx, ly);
  };

  std::vector<double> gaps;
  bool within = false;
  run(std::make_shared<quasar::SeparableQuadratic>(quasar::SeparableQuadratic::isotropic(2)),
      Vector{3.0, -4.0}, 1.0, gaps, within);
  const double slope = slope_of(gaps);

  // Ill-conditioned diagonal quadratic where the gap stays positive.
  std::vector<double> gaps2;
  bool within2 = false;
  run(std::make_shared<quasar::SeparableQuadratic>(
          std::vector<Vector>{Vector{1.0, 1e-4, 1e-5, 1e-6}}, Vector(4)),
      Vector{3.0, -4.0, 2.0, 5.0}, 1.0, gaps2, within2);
  const double slope2 = slope_of(gaps2);

  std::string detail = "half-norm gaps";
  for (double g : gaps) detail += " " + fmt(g);
  detail += " slope=" + fmt(slope) + "; anisotropic gaps";
  for (double g : gaps2) detail += " " + fmt(g);
  detail += " slope=" + fmt(slope2);
  const bool slope_ok = std::isnan(slope) || slope <= -1.9;
  return {within && slope_ok && within2, detail};
}

Outcome criterion2() {
  std::size_t rows = 0;
  double worst = -std::numeric_limits<double>::infinity();
  bool pass = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(100 + seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t d = 6;
    const double mu = 0.05 + 0.5 * u(rng);
    Vector w(d);
    for (std::size_t j = 0; j < d; ++j) w[j] = 1.0 + mu + 3.0 * u(rng);
    w[0] = 1.0 + mu;
    auto model = std::make_shared<quasar::SeparableQuadratic>(std::vector<Vector>{w}, Vector(d));
    FiniteSumObjective f(model);
    RunConfig c;
    c.method = Method::kQAGD;
    c.qp.gamma = 1.0;
    c.qp.mu = model->strong_convexity();
    c.qp.L = model->smoothness();
    c.horizon = 500;
    c.energy_tracking = true;
    c.x_star = Vector(d);
    const auto r = quasar::run_method(f, random_point(d, rng, 5.0), c);
    double prev = *r.trace.initial_energy;
    for (const auto& row : r.trace.rows) {
      const double excess = *row.energy - prev;
      worst = std::max(worst, excess / std::max(1.0, prev));
      if (excess > 1e-9 * std::max(1.0, prev)) pass = false;
      prev = *row.energy;
      ++rows;
    }
    pass = pass && r.trace.rows.size() == 500;
  }
  return {pass, "iterations=" + std::to_string(rows) + " worst relative increase=" + fmt(worst)};
}

class Poly1d : public quasar::SegmentOracle {
 public:
  Poly1d(double q, double a, double l) : q_(q), a_(a), l_(l) {}
  double value(const Vector& x) override {
    const double t = x[0];
    return q_ * t * t * t * t + 0.5 * a_ * t * t + l_ * t;
  }
  Vector gradient(const Vector& x) override {
    const double t = x[0];
    return Vector{4.0 * q_ * t * t * t + a_ * t + l_};
  }
  double curvature_bound(double lo, double hi) const {
    auto f2 = [&](double t) { return std::abs(12.0 * q_ * t * t + a_); };
    double m = std::max(f2(lo), f2(hi));
    if (lo <= 0.0 && hi >= 0.0) m = std::max(m, f2(0.0));
    return m;
  }

 private:
  double q_, a_, l_;
};

Outcome criterion3() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::size_t bound_ok = 0, cert_ok = 0, searched = 0;
  double worst_residual = -std::numeric_limits<double>::infinity();
  const std::size_t trials = 1000;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Poly1d f(trial % 2 ? 0.5 * u01(rng) : 0.0, 3.0 * u(rng), 2.0 * u(rng));
    const double y = 3.0 * u(rng);
    double z = 3.0 * u(rng);
    if (z == y) z += 1.0;
    quasar::BisearchSpec s;
    s.L = std::max(f.curvature_bound(std::min(y, z), std::max(y, z)), 1e-3);
    s.c = trial % 3 == 0 ? 0.0 : 10.0 * u01(rng);
    if (trial % 4 < 2) {
      s.b = s.L * (0.01 + 0.99 * u01(rng));
    } else {
      s.eps_tilde = std::pow(10.0, -6.0 * u01(rng));
    }
    if (trial % 5 == 0) s.guess = u01(rng);
    const Vector vy{y}, vz{z};
    const auto r = quasar::bisearch(f, vy, vz, s);
    if (r.branch == quasar::ExitBranch::kSearch) ++searched;
    const auto bound = quasar::bisearch_eval_bound(s, (y - z) * (y - z));
    if (bound && static_cast<double>(r.fn_evals + r.grad_evals) <= *bound) ++bound_ok;
    const double res = quasar::bisearch_residual(f, vy, vz, s, r.tau);
    worst_residual = std::max(worst_residual, res);
    if (res <= 1e-9 && r.tau >= 0.0 && r.tau <= 1.0) ++cert_ok;
  }
  return {bound_ok == trials && cert_ok == trials,
          "eval bound " + std::to_string(bound_ok) + "/" + std::to_string(trials) +
              ", certificate " + std::to_string(cert_ok) + "/" + std::to_string(trials) +
              ", searched " + std::to_string(searched) + ", worst residual " +
              fmt(worst_residual)};
}

Outcome criterion4() {
  const auto inst = quasar::generate_piecewise(50, 4, 0.5, 0.0, 0);
  quasar::PiecewiseModel m(inst);
  std::mt19937_64 rng(44);
  std::vector<quasar::VariancePair> pairs;
  for (int t = 0; t < 100; ++t) pairs.push_back({random_point(4, rng, 3.0), random_point(4, rng, 3.0)});
  bool pass = true;
  std::string detail;
  for (std::size_t b : {1u, 5u, 25u}) {
    // Subsets of size 25 out of 50 number about 1.3e14; the exact closed form replaces enumeration.
    const auto mode = b == 25 ? quasar::VarianceMode::kClosedForm : quasar::VarianceMode::kEnumerate;
    const auto r = quasar::check_variance_bound(m, 0.0, m.smoothness(), pairs, b, mode);
    pass = pass && r.pass;
    detail += "b=" + std::to_string(b) + (b == 25 ? " (closed form)" : " (enumerated)") +
              " worst=" + fmt(r.worst) + " violations=" + std::to_string(r.violations) + "; ";
  }
  // Sampled cross-check of the closed form at b = 25.
  double worst_z = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    const auto c = quasar::svrg_variance(m, pairs[i].x, pairs[i].anchor, 25,
                                         quasar::VarianceMode::kClosedForm);
    const auto s = quasar::svrg_variance(m, pairs[i].x, pairs[i].anchor, 25,
                                         quasar::VarianceMode::kMonteCarlo, 20000, i);
    if (s.std_error > 0.0) worst_z = std::max(worst_z, std::abs(s.value - c.value) / s.std_error);
  }
  pass = pass && worst_z <= 5.0;
  detail += "Monte Carlo vs closed form worst z=" + fmt(worst_z);
  return {pass, detail};
}

// Mean over seeds of the per-stage gap ratio, one entry per stage index.
std::vector<double> stage_ratios(quasar::SvrgOption option, double mu, std::size_t seeds,
                                 double& factor, std::size_t& common_stages) {
  std::vector<std::vector<double>> per_seed;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const auto inst = quasar::generate_piecewise(200, 4, 0.5, mu, seed);
    auto model = quasar::piecewise_objective(inst);
    FiniteSumObjective f(model);
    RunConfig c;
    c.method = option == quasar::SvrgOption::kOptII ? Method::kQASVRG_II : Method::kQASVRG_I;
    c.qp.gamma = 0.5;
    c.qp.mu = mu;
    c.qp.L = model->smoothness();
    c.q = 0.25;
    c.p = c.qp.gamma * c.qp.mu_bar / 16.0;
    c.eps = 1e-10;
    c.seed = seed;
    c.x_star = Vector(4);
    std::mt19937_64 rng(500 + seed);
    const auto r = quasar::run_method(f, random_point(4, rng, 5.0), c);
    std::vector<double> ratios;
    const auto& fv = r.trace.stage_fvals;
    for (std::size_t s = 0; s + 1 < fv.size(); ++s) {
      if (!(fv[s] > 0.0)) break;
      ratios.push_back(fv[s + 1] / fv[s]);
    }
    per_seed.push_back(ratios);
    factor = option == quasar::SvrgOption::kOptII
                 ? c.q + 8.0 * c.p / (c.qp.gamma * c.qp.mu_bar) + c.eps
                 : c.q + 0.5;
  }
  common_stages = per_seed.front().size();
  for (const auto& r : per_seed) common_stages = std::min(common_stages, r.size());
  std::vector<double> mean(common_stages, 0.0);
  for (const auto& r : per_seed) {
    for (std::size_t s = 0; s < common_stages; ++s) mean[s] += r[s] / static_cast<double>(seeds);
  }
  return mean;
}

Outcome criterion5() {
  bool pass = true;
  std::string detail;
  for (const auto& [option, mu, label] :
       {std::tuple{quasar::SvrgOption::kOptII, 0.0, "OptII mu=0"},
        std::tuple{quasar::SvrgOption::kOptI, 0.1, "OptI mu=0.1"}}) {
    double factor = 0.0;
    std::size_t stages = 0;
    const auto mean = stage_ratios(option, mu, 10, factor, stages);
    double worst = 0.0;
    for (double v : mean) worst = std::max(worst, v);
    const bool ok = stages > 0 && worst <= factor + 0.05;
    pass = pass && ok;
    detail += std::string(label) + ": stages=" + std::to_string(stages) + " worst mean ratio=" +
              fmt(worst) + " factor=" + fmt(factor) + "; ";
  }
  return {pass, detail};
}

Outcome criterion6() {
  const std::size_t t = 10000;
  const double gamma = 0.5;
  const double eps = 1e-4;
  double sum_gap = 0.0, sum_bound = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = quasar::generate_piecewise(200, 4, gamma, 0.0, seed, 0.1);
    auto model = quasar::piecewise_objective(inst);
    // Reference minimum from a long gradient descent run.
    FiniteSumObjective g(model);
    const auto ref = quasar::gd_baseline(g, Vector(4), 1.0 / model->smoothness(), 20000);
    double f_star = g.peek_value(ref.y);
    for (const auto& row : ref.trace.rows) f_star = std::min(f_star, row.fval);

    // sigma^2 bounds the mean squared component gradient since every row has unit norm.
    const double sigma = 1.0;
    FiniteSumObjective f(model);
    RunConfig c;
    c.method = Method::kQASGD;
    c.qp.gamma = gamma;
    c.qp.L = model->smoothness();
    c.eps = eps;
    c.horizon = t;
    c.sigma = sigma;
    c.seed = seed;
    c.x_star = ref.y;
    c.f_star = f_star;
    std::mt19937_64 rng(900 + seed);
    const Vector y0 = random_point(4, rng, 2.0);
    const auto r = quasar::run_method(f, y0, c);
    const double fy = f.peek_value(r.y);
    f_star = std::min(f_star, fy);
    const double R = std::sqrt(quasar::squared_norm(y0 - ref.y) / 2.0);
    const double tp = static_cast<double>(t) + 1.0;
    const double bound = 2.0 * c.qp.L * R * R / (c.qp.mu_bar * tp * tp) +
                         2.0 * sigma * R / (gamma * c.qp.mu_bar * std::sqrt(tp)) + eps / 2.0;
    sum_gap += fy - f_star;
    sum_bound += bound;
  }
  const double gap = sum_gap / 5.0;
  const double bound = sum_bound / 5.0;
  return {gap <= 3.0 * bound, "mean gap=" + fmt(gap) + " 3x bound=" + fmt(3.0 * bound)};
}

Outcome criterion7() {
  std::mt19937_64 rng(77);
  std::string detail;
  bool pass = true;

  const auto pw = quasar::generate_piecewise(100, 4, 0.5, 0.0, 1);
  quasar::PiecewiseModel pm(pw);
  std::vector<Vector> smooth, near;
  while (smooth.size() + near.size() < 10) {
    Vector x = random_point(4, rng, 3.0);
    (pm.knot_distance(x.span()) > 1e-3 ? smooth : near).push_back(x);
  }
  const auto r1 = quasar::finite_diff_check(quasar::mean_oracle(pm), smooth, 1e-6, 1e-5);
  bool near_ok = true;
  double near_worst = 0.0;
  if (!near.empty()) {
    const auto r1b = quasar::finite_diff_check(quasar::mean_oracle(pm), near, 1e-7, 1e-4);
    near_ok = r1b.pass;
    near_worst = r1b.worst;
  }
  pass = pass && r1.pass && near_ok;
  detail += "piecewise worst=" + fmt(std::max(r1.worst, near_worst)) + " (" +
            std::to_string(near.size()) + " near knots); ";

  const auto gi = quasar::generate_glm(200, 5, quasar::Link::kLogistic, 2);
  quasar::GlmModel gm(gi);
  std::vector<Vector> gp;
  for (int i = 0; i < 10; ++i) gp.push_back(random_point(5, rng, 1.0));
  const auto r2 = quasar::finite_diff_check(quasar::mean_oracle(gm), gp, 1e-6, 1e-5);
  pass = pass && r2.pass;
  detail += "glm worst=" + fmt(r2.worst) + "; ";

  auto li = std::make_shared<quasar::LdsInstance>(quasar::generate_lds(20, 3, 24, 0.0, 3));
  quasar::LdsModel lm(li, 1.0);
  std::vector<Vector> lp;
  for (std::uint64_t s = 0; s < 10; ++s) lp.push_back(quasar::perturbed_init(*li, 0.3, s).to_vector());
  const auto r3 = quasar::finite_diff_check(quasar::mean_oracle(lm), lp, 1e-6, 1e-5);
  pass = pass && r3.pass;
  detail += "lds worst=" + fmt(r3.worst);
  return {pass, detail};
}

double max_component(const quasar::ComponentModel& m, const Vector& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) worst = std::max(worst, m.value(i, x.span()));
  return worst;
}

Outcome criterion8() {
  const auto pw = quasar::generate_piecewise(200, 4, 0.5, 0.0, 0);
  const double a = max_component(quasar::PiecewiseModel(pw), Vector(4));
  const auto gi = quasar::generate_glm(500, 20, quasar::Link::kLogistic, 0);
  const double b = max_component(quasar::GlmModel(gi), gi.w_star);
  auto li = std::make_shared<quasar::LdsInstance>(quasar::generate_lds(200, 5, 64, 0.0, 0));
  const double c = max_component(quasar::LdsModel(li, 1.0),
                                 quasar::LdsModelParams::from_system(li->truth).to_vector());
  return {a <= 1e-20 && b <= 1e-20 && c <= 1e-20,
          "max component value piecewise=" + fmt(a) + " glm=" + fmt(b) + " lds=" + fmt(c)};
}

bool leq(double lhs, double rhs) { return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)); }

Outcome criterion9() {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t checks = 0, failures = 0;
  std::string first_failure;
  auto expect = [&](bool ok, const char* what, std::size_t k) {
    ++checks;
    if (!ok) {
      if (failures++ == 0) first_failure = std::string(what) + " at k=" + std::to_string(k);
    }
  };
  auto common = [&](const StepParams& s, std::size_t n, std::size_t k) {
    expect(s.growth > 1.0 && (!std::isfinite(s.A_next) || s.A_next > s.A_k), "A increasing", k);
    expect(s.B_next >= s.B_k || !std::isfinite(s.B_k), "B nondecreasing", k);
    if (s.batch_size) expect(*s.batch_size >= 1 && *s.batch_size <= n, "batch in range", k);
  };
  for (int trial = 0; trial < 100; ++trial) {
    QuasarParams plain;
    plain.gamma = 0.05 + 0.95 * u(rng);
    plain.mu_bar = 0.5 + 1.5 * u(rng);
    plain.L = 0.1 + 10.0 * u(rng);
    QuasarParams strong = plain;
    const double kappa_min = plain.gamma / (2.0 - plain.gamma);
    const double kappa = kappa_min * (1.0 + 1000.0 * u(rng) * u(rng));
    strong.mu = strong.L / (strong.mu_bar * kappa);
    const std::size_t n = 2 + static_cast<std::size_t>(500.0 * u(rng));
    const double p = plain.gamma * plain.mu_bar / 16.0 * (0.01 + 0.99 * u(rng));
    const double eps = 1e-4;
    const double g = plain.gamma;
    for (std::size_t k = 0; k <= 10000; ++k) {
      {
        const StepParams s = quasar::params_qagd(k, plain, eps);
        common(s, n, k);
        expect(leq(1.0 / (2.0 * plain.mu_bar * s.beta * s.beta), s.A_next / (2.0 * plain.L)),
               "QAGD plain", k);
      }
      {
        const StepParams s = quasar::params_qagd(k, strong, eps);
        common(s, n, k);
        expect(leq(s.alpha / s.beta, 0.5), "QAGD strong alpha/beta", k);
        // B_k / A_{k+1} = mu / growth
        expect(leq(strong.mu / (strong.mu_bar * s.beta * s.beta), s.growth / (2.0 * strong.L)),
               "QAGD strong coupling", k);
      }
      for (auto phase : {quasar::SgdPhase::kStep1, quasar::SgdPhase::kStep2}) {
        const StepParams s = quasar::params_qasgd(k, 10000, phase, strong, 1.0, 1.0, eps);
        common(s, n, k);
        expect(leq(s.alpha / s.beta, 0.5), "QASGD alpha/beta", k);
        expect(leq(4.0 * strong.mu / (strong.mu_bar * strong.mu_bar * s.beta), g / 2.0),
               "QASGD beta", k);
      }
      {
        const StepParams s = quasar::params_qasgd(k, 10000, quasar::SgdPhase::kPlain, plain, 1.0,
                                                  1.0, eps);
        common(s, n, k);
      }
      {
        const StepParams s =
            quasar::params_qasvrg(k, quasar::SvrgOption::kOptII, plain, n, p, 1.0, eps);
        common(s, n, k);
        const double a_bar = s.A_next - s.A_k;
        expect(leq(quasar::batch_delta(n, *s.batch_size), g * p / (8.0 * plain.L * a_bar)),
               "OptII batch", k);
      }
      {
        const StepParams s =
            quasar::params_qasvrg(k, quasar::SvrgOption::kOptI, strong, n, p, 1.0, eps);
        common(s, n, k);
        // a_bar / A_{k+1} = (growth - 1) / growth
        expect(leq(quasar::batch_delta(n, *s.batch_size), (s.growth - 1.0) / (8.0 * s.growth)),
               "OptI batch", k);
      }
      {
        const double rho = 1.0 + 3.0 * u(rng);
        common(quasar::params_qasgd_sgc(k, plain, rho, eps), n, k);
        common(quasar::params_qasgd_sgc(k, strong, rho, eps), n, k);
      }
    }
  }
  std::string detail = std::to_string(checks) + " relations, " + std::to_string(failures) +
                       " violated";
  if (failures) detail += " (first: " + first_failure + ")";
  return {failures == 0, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> run_bundled(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "piecewise.cfg";
  fs::copy_file(fs::path(QUASAR_SOURCE_DIR) / "configs" / "piecewise.cfg", cfg);
  std::ostringstream out, err;
  if (quasar::cmd_run(cfg.string(), out, err) != 0) {
    throw std::runtime_error("cmd_run failed: " + err.str());
  }
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return files;
}

Outcome criterion10() {
  const fs::path base = fs::temp_directory_path() / ("quasar_accept_" + std::to_string(::getpid()));
  const auto a = run_bundled(base / "a");
  const auto b = run_bundled(base / "b");
  fs::remove_all(base);
  std::size_t bytes = 0;
  for (const auto& [name, content] : a) bytes += content.size();
  return {a == b && a.size() > 1,
          std::to_string(a.size()) + " files, " + std::to_string(bytes) + " bytes, " +
              (a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<double, std::function<Outcome()>>> criteria{
      {1.0, criterion1}, {0.0, criterion2}, {5.0, criterion3},  {10.0, criterion4},
      {60.0, criterion5}, {30.0, criterion6}, {5.0, criterion7}, {5.0, criterion8},
      {5.0, criterion9}, {0.0, criterion10}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto [budget, fn] = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget > 0.0 && secs > budget) {
      o.pass = false;
      o.detail += " [over time budget " + fmt(budget) + " s]";
    }
    if (!o.pass) ++failed;
    std::printf("CRITERION %zu %s (%.2f s) %s\n", i + 1, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
