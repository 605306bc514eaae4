#include "quasar/problems/quadratic.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace quasar {

SeparableQuadratic::SeparableQuadratic(std::vector<Vector> weights, Vector center)
    : weights_(std::move(weights)), center_(std::move(center)) {
  if (weights_.empty() || center_.empty()) throw std::invalid_argument("empty quadratic");
  Vector mean(center_.size());
  for (const Vector& w : weights_) {
    require_same_dim(w, center_);
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (!(w[j] >= 0.0)) throw std::invalid_argument("quadratic weights must be nonnegative");
      L_ = std::max(L_, w[j]);
    }
    mean += w;
  }
  mu_ = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < mean.size(); ++j) {
    mu_ = std::min(mu_, mean[j] / static_cast<double>(weights_.size()));
  }
  if (!(L_ > 0.0)) throw std::invalid_argument("quadratic must have a positive weight");
}

SeparableQuadratic SeparableQuadratic::isotropic(std::size_t dim, double scale) {
  return SeparableQuadratic({Vector(dim, scale)}, Vector(dim));
}

double SeparableQuadratic::value(std::size_t i, std::span<const double> x) const {
  const Vector& w = weights_[i];
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - center_[j];
    s += w[j] * d * d;
  }
  return 0.5 * s;
}

double SeparableQuadratic::value_gradient(std::size_t i, std::span<const double> x,
                                          std::span<double> grad) const {
  const Vector& w = weights_[i];
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - center_[j];
    grad[j] = w[j] * d;
    s += w[j] * d * d;
  }
  return 0.5 * s;
}

}  // namespace quasar
