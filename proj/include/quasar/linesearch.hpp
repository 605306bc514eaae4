#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "quasar/vector.hpp"

namespace quasar {

// Value and gradient of the function searched along the segment z -> y.
// Bisearch only ever queries points of the form interpolate(z, y, tau).
class SegmentOracle {
 public:
  virtual ~SegmentOracle() = default;
  virtual double value(const Vector& x) = 0;
  virtual Vector gradient(const Vector& x) = 0;
};

enum class ExitBranch { kNone, kGuess, kOne, kZero, kSearch };

const char* branch_name(ExitBranch b);

struct BisearchSpec {
  double b = 0.0;
  double c = 0.0;
  double eps_tilde = 0.0;
  double L = 1.0;
  std::optional<double> guess;
  int max_iters = 200;

  void validate() const;
};

struct BisearchResult {
  double tau = 1.0;
  std::uint64_t fn_evals = 0;
  std::uint64_t grad_evals = 0;
  ExitBranch branch = ExitBranch::kNone;
  int iterations = 0;
};

class SearchFailure : public std::runtime_error {
 public:
  SearchFailure(const std::string& what, double best_tau)
      : std::runtime_error(what), best_tau_(best_tau) {}
  double best_tau() const noexcept { return best_tau_; }

 private:
  double best_tau_;
};

BisearchResult bisearch(SegmentOracle& f, const Vector& y, const Vector& z,
                        const BisearchSpec& spec);

// Upper bound on fn_evals + grad_evals for one call; nullopt when b = 0 and eps_tilde = 0.
std::optional<double> bisearch_eval_bound(const BisearchSpec& spec, double dist_sq);

// Left side minus right side of the acceptance condition at tau; <= 0 means accepted.
double bisearch_residual(SegmentOracle& f, const Vector& y, const Vector& z,
                         const BisearchSpec& spec, double tau);

}  // namespace quasar
