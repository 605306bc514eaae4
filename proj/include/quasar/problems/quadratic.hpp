#pragma once

#include <vector>

#include "quasar/oracle.hpp"

namespace quasar {

// f_i(x) = 1/2 sum_j w_ij (x_j - c_j)^2 with a common center c.
class SeparableQuadratic : public ComponentModel {
 public:
  SeparableQuadratic(std::vector<Vector> weights, Vector center);

  // n = 1, f(x) = scale / 2 ||x||^2.
  static SeparableQuadratic isotropic(std::size_t dim, double scale = 1.0);

  std::size_t size() const override { return weights_.size(); }
  std::size_t dim() const override { return center_.size(); }
  double smoothness() const override { return L_; }
  std::string name() const override { return "quadratic"; }

  double value(std::size_t i, std::span<const double> x) const override;
  double value_gradient(std::size_t i, std::span<const double> x,
                        std::span<double> grad) const override;

  const Vector& center() const noexcept { return center_; }
  // Smallest eigenvalue of the averaged Hessian.
  double strong_convexity() const noexcept { return mu_; }

 private:
  std::vector<Vector> weights_;
  Vector center_;
  double L_ = 0.0;
  double mu_ = 0.0;
};

}  // namespace quasar
