#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "quasar/oracle.hpp"

namespace quasar {

// g(x) = (x^gamma - 1) / gamma + 1/2 for x >= 1, x^2 / 2 on [0, 1], 0 below.
std::pair<double, double> gq_value_grad(double x, double gamma);

struct PiecewiseInstance {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> a;  // n x d, row-major
  std::vector<double> b;  // labels in {+1, -1}
  double gamma = 0.5;
  double mu = 0.0;
  // Additive shift inside g for each component; all zero for the noise-free problem.
  std::vector<double> offsets;
  std::uint64_t seed = 0;
};

// Rows a_i ~ N(0, I) normalized to unit length, labels uniform on {+1, -1}.
// label_noise > 0 adds N(0, label_noise^2) offsets, which breaks interpolation.
PiecewiseInstance generate_piecewise(std::size_t n, std::size_t d, double gamma, double mu,
                                     std::uint64_t seed, double label_noise = 0.0);

// f_i(x) = g(b_i a_i^T x + offset_i) + mu / 2 ||x||^2, reported L = 1 + mu / 2.
class PiecewiseModel : public ComponentModel {
 public:
  // Throws std::invalid_argument on rows that are not unit length unless normalize is set.
  explicit PiecewiseModel(PiecewiseInstance inst, bool normalize = false);

  std::size_t size() const override { return inst_.n; }
  std::size_t dim() const override { return inst_.d; }
  double smoothness() const override { return 1.0 + 0.5 * inst_.mu; }
  std::string name() const override { return "piecewise"; }

  double value(std::size_t i, std::span<const double> x) const override;
  double value_gradient(std::size_t i, std::span<const double> x,
                        std::span<double> grad) const override;

  const PiecewiseInstance& instance() const noexcept { return inst_; }
  // Smallest |b_i a_i^T x + offset_i - knot| over components and knots {0, 1}.
  double knot_distance(std::span<const double> x) const;

 private:
  double margin(std::size_t i, std::span<const double> x) const;

  PiecewiseInstance inst_;
};

std::shared_ptr<PiecewiseModel> piecewise_objective(const PiecewiseInstance& inst,
                                                    bool normalize = false);

}  // namespace quasar
