#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "quasar/mirror.hpp"
#include "quasar/oracle.hpp"
#include "quasar/schedules.hpp"
#include "quasar/trace.hpp"

namespace quasar {

enum class Method { kGD, kSGD, kQAGD, kQASGD, kQASVRG_I, kQASVRG_II, kQASGD_SGC };

std::string method_name(Method m);
// Accepts the canonical names and their underscore spellings; throws ConfigError.
Method parse_method(std::string_view name);

struct RunConfig {
  Method method = Method::kQAGD;
  QuasarParams qp;
  double eps = 1e-4;
  std::size_t horizon = 1000;
  double q = 0.25;
  // Zero selects gamma * mu_bar / 16.
  double p = 0.0;
  std::uint64_t seed = 0;
  double sigma = 1.0;
  // Unset selects the surrogate ||y0 - x*|| / sqrt(2), or ||y0|| / sqrt(2) without x*.
  std::optional<double> R;
  // Zero selects 1 / L.
  double sgd_stepsize = 0.0;
  bool restart_heuristic = false;
  bool energy_tracking = false;
  std::optional<Vector> x_star;
  double f_star = 0.0;
  std::size_t max_stages = 50;
  // Inner horizon for QASVRG when the stage-length formula is unavailable.
  std::size_t stage_horizon = 10000;
  // Step-1 length for QASGD with mu > 0; unset selects the predicted noise-floor crossing.
  std::optional<std::size_t> qasgd_switch;
  double rho_sgc = 1.0;
  std::size_t record_every = 1;
  int bisearch_max_iters = 200;
  // Null selects the Euclidean map.
  std::shared_ptr<const MirrorMap> mirror;

  void validate() const;
  const MirrorMap& mirror_map() const;
  double effective_p() const;
};

enum class Estimator { kFull, kStochastic, kSvrg };

using Schedule = std::function<StepParams(std::size_t k)>;

struct RunResult {
  Vector y;
  Trace trace;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, Trace partial)
      : std::runtime_error(what), trace_(std::move(partial)) {}
  const Trace& trace() const noexcept { return trace_; }

 private:
  Trace trace_;
};

// The accelerated iteration with a given estimator and schedule. SVRG requires an anchor.
RunResult accelerated_loop(FiniteSumObjective& f, Estimator est, const Schedule& schedule,
                           const Vector& y0, std::size_t horizon, const RunConfig& cfg,
                           const SvrgAnchor* anchor = nullptr);

RunResult multi_stage_qasvrg(FiniteSumObjective& f, SvrgOption option, const Vector& y0,
                             const RunConfig& cfg);

// Plain phase for mu = 0; Step 1 then Step 2 for mu > 0.
RunResult run_qasgd(FiniteSumObjective& f, const Vector& y0, const RunConfig& cfg);

RunResult gd_baseline(FiniteSumObjective& f, const Vector& y0, double stepsize,
                      std::size_t horizon);
RunResult sgd_baseline(FiniteSumObjective& f, const Vector& y0, double stepsize,
                       std::size_t horizon, std::uint64_t seed);

RunResult run_method(FiniteSumObjective& f, const Vector& y0, const RunConfig& cfg);

}  // namespace quasar
