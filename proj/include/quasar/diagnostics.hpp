#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "quasar/mirror.hpp"
#include "quasar/oracle.hpp"
#include "quasar/schedules.hpp"
#include "quasar/trace.hpp"

namespace quasar {

struct CheckReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  // Largest residual seen; positive values beyond the tolerance are violations.
  double worst = 0.0;
  bool pass = true;
  // Non-gating reports are informational and never decide an exit code.
  bool gating = true;
  bool applicable = true;
  std::vector<std::string> details;

  // CHECK <name> PASS|FAIL worst=<v> n=<samples>
  std::string summary_line() const;
  std::string block() const;
};

double lyapunov_energy(double A_k, double B_k, double f_yk, double f_star, double D_star_zk);

// Uniform sampling in the ball of the given radius around center.
struct SampleBall {
  Vector center;
  double radius = 1.0;
};

Vector sample_in_ball(const SampleBall& ball, Sampler& s);

// Mean value and gradient of the model at x, uncounted.
double mean_value_grad(const ComponentModel& m, const Vector& x, Vector& grad);

// f(x*) >= f(x) + <grad f(x), x* - x> / gamma + mu D_h(x*, x) at sampled x.
CheckReport check_quasar(const ComponentModel& f, const Vector& x_star, double gamma, double mu,
                         const MirrorMap& h, const SampleBall& ball, std::size_t n_samples,
                         std::uint64_t seed);

// f(x) >= f(x*) + gamma mu / (2 - gamma) D_h(x*, x). Non-gating for non-Euclidean h.
CheckReport check_quasar_growth(const ComponentModel& f, const Vector& x_star, double gamma,
                                double mu, const MirrorMap& h, const SampleBall& ball,
                                std::size_t n_samples, std::uint64_t seed);

// mean_i ||grad f_i(x)||^2 <= sigma^2 + 2 mu^2 ||x* - x||^2. The measured second moment
// sup is reported in details.
CheckReport check_bounded_gradient(const ComponentModel& f, const Vector& x_star, double sigma,
                                   double mu, const SampleBall& ball, std::size_t n_samples,
                                   std::uint64_t seed);

// mean_i ||grad f_i(x) - grad f(x)||^2 <= sigma_bar^2.
CheckReport check_bounded_variance(const ComponentModel& f, double sigma_bar,
                                   const SampleBall& ball, std::size_t n_samples,
                                   std::uint64_t seed);

enum class VarianceMode { kAuto, kEnumerate, kClosedForm, kMonteCarlo };

struct VariancePair {
  Vector x;
  Vector anchor;
};

// Expectation over size-b subsets drawn without replacement of ||grad_k - grad f(x)||^2
// for the SVRG estimator, computed from component gradients directly.
struct VarianceMeasurement {
  double value = 0.0;
  double std_error = 0.0;
  VarianceMode mode = VarianceMode::kEnumerate;
};

VarianceMeasurement svrg_variance(const ComponentModel& f, const Vector& x, const Vector& anchor,
                                  std::size_t b, VarianceMode mode = VarianceMode::kAuto,
                                  std::size_t mc_samples = 20000, std::uint64_t seed = 0);

// Variance <= 4 L (n - b) / (b (n - 1)) (f(x) + f(anchor) - 2 f*) at every pair.
CheckReport check_variance_bound(const ComponentModel& f, double f_star, double L,
                                 const std::vector<VariancePair>& pairs, std::size_t b,
                                 VarianceMode mode = VarianceMode::kAuto);

CheckReport check_kappa(const QuasarParams& qp);

using ValueGrad = std::function<double(const Vector& x, Vector* grad)>;

// Central differences against the analytic gradient; worst relative error.
CheckReport finite_diff_check(const ValueGrad& f, const std::vector<Vector>& points, double step,
                              double tol, const std::string& name = "finite_diff");

ValueGrad mean_oracle(const ComponentModel& f);

CheckReport compactness_monitor(const Trace& trace, double radius);

}  // namespace quasar
