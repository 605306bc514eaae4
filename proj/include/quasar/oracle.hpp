#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quasar/vector.hpp"

namespace quasar {

// The pure mathematics of a finite sum f = (1/n) sum_i f_i: per-component
// value and gradient, nothing else. Implementations must be reentrant.
class ComponentModel {
 public:
  virtual ~ComponentModel() = default;

  virtual std::size_t size() const = 0;
  virtual std::size_t dim() const = 0;
  // max_i L_i when known, otherwise a user estimate.
  virtual double smoothness() const = 0;
  virtual std::string name() const = 0;

  virtual double value(std::size_t i, std::span<const double> x) const = 0;
  // Overwrites grad with the gradient of f_i at x and returns f_i(x).
  virtual double value_gradient(std::size_t i, std::span<const double> x,
                                std::span<double> grad) const = 0;
};

struct EvalCounts {
  std::uint64_t fn = 0;
  std::uint64_t grad = 0;

  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

// Counted access to a ComponentModel. Counters are component-weighted: a full
// pass adds n. One instance belongs to one run; the model behind it may be shared.
class FiniteSumObjective {
 public:
  explicit FiniteSumObjective(std::shared_ptr<const ComponentModel> model);

  std::size_t n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }
  double smoothness() const noexcept { return smoothness_; }
  void set_smoothness(double L);

  const ComponentModel& model() const noexcept { return *model_; }
  std::shared_ptr<const ComponentModel> shared_model() const noexcept { return model_; }

  double component_value(std::size_t i, const Vector& x);
  Vector component_grad(std::size_t i, const Vector& x);

  // (1/n) sum_i f_i(x); adds n function evaluations.
  double value(const Vector& x);
  // (1/n) sum_i grad f_i(x); adds n gradient evaluations.
  Vector gradient(const Vector& x);

  // Mini-batch average over the given indices (repeats allowed).
  double batch_value(std::span<const std::size_t> batch, const Vector& x);
  Vector batch_gradient(std::span<const std::size_t> batch, const Vector& x);

  // Uncounted full value, for monitoring and traces.
  double peek_value(const Vector& x) const;

  const EvalCounts& counts() const noexcept { return counts_; }

 private:
  void check_point(const Vector& x) const;
  void check_index(std::size_t i) const;

  std::shared_ptr<const ComponentModel> model_;
  std::size_t n_;
  std::size_t dim_;
  double smoothness_;
  EvalCounts counts_;
};

// Deterministic index source. Each run owns one; never shared across threads.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t index(std::size_t n);
  double normal();
  double uniform(double lo, double hi);
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Fixed per-stage SVRG reference point with its full gradient and value.
struct SvrgAnchor {
  Vector point;
  Vector full_grad;
  double value = 0.0;
};

Vector full_gradient(FiniteSumObjective& f, const Vector& x);

// grad f_i(x) for i uniform on [n].
std::pair<Vector, std::size_t> stochastic_gradient(FiniteSumObjective& f, const Vector& x,
                                                   Sampler& s);

// b indices i.i.d. uniform on [n] (with replacement). Requires 1 <= b <= n.
std::vector<std::size_t> sample_batch(std::size_t n, std::size_t b, Sampler& s);

// b distinct indices uniform over size-b subsets of [n].
std::vector<std::size_t> sample_subset(std::size_t n, std::size_t b, Sampler& s);

// Full gradient and value pass at point: adds n gradient and n function evaluations.
SvrgAnchor make_anchor(FiniteSumObjective& f, const Vector& point);

// (1/b) sum_{i in batch} [grad f_i(x) - grad f_i(anchor)] + anchor.full_grad.
// Adds 2b gradient evaluations.
Vector svrg_estimate(FiniteSumObjective& f, const Vector& x, const SvrgAnchor& anchor,
                     std::span<const std::size_t> batch);

// Same estimator when the mini-batch gradient at x is already known; adds b.
Vector svrg_correct(FiniteSumObjective& f, Vector batch_grad_at_x, const SvrgAnchor& anchor,
                    std::span<const std::size_t> batch);

}  // namespace quasar
