#pragma once

#include <functional>
#include <string>

#include "quasar/vector.hpp"

namespace quasar {

// A strongly convex distance generator h given through its gradient map and the inverse map.
// Also carries h itself and its strong-convexity modulus. Immutable once built.
class MirrorMap {
 public:
  using Map = std::function<Vector(const Vector&)>;
  using Value = std::function<double(const Vector&)>;

  MirrorMap(std::string name, Map grad_h, Map inv_grad_h, Value value_h, double mu_bar);

  // h(x) = ||x||^2 / 2, mu_bar = 1.
  static MirrorMap euclidean();
  // h(x) = sum_j w_j x_j^2 / 2, mu_bar = min_j w_j. Weights must be positive.
  static MirrorMap diagonal(const Vector& weights);

  const std::string& name() const noexcept { return name_; }
  double mu_bar() const noexcept { return mu_bar_; }
  bool is_euclidean() const noexcept { return euclidean_; }

  Vector grad(const Vector& x) const { return grad_h_(x); }
  Vector inv_grad(const Vector& u) const { return inv_grad_h_(u); }
  double value(const Vector& x) const { return value_h_(x); }

 private:
  std::string name_;
  Map grad_h_;
  Map inv_grad_h_;
  Value value_h_;
  double mu_bar_;
  bool euclidean_ = false;
};

// D_h(x, y) = h(x) - h(y) - <grad h(y), x - y>
double bregman(const MirrorMap& h, const Vector& x, const Vector& y);

// argmin_u <grad, u - z> + beta D_h(u, z) + alpha D_h(u, x_next), in closed form.
Vector mirror_step(const MirrorMap& h, const Vector& z, const Vector& x_next, const Vector& grad,
                   double alpha, double beta);

// argmin_y rho <grad, y - x_next> + ||y - x_next||^2 / 2 = x_next - rho * grad
Vector gd_step(const Vector& x_next, const Vector& grad, double rho);

}  // namespace quasar
