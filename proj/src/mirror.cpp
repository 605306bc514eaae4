#include "quasar/mirror.hpp"

#include <algorithm>
#include <stdexcept>

namespace quasar {

MirrorMap::MirrorMap(std::string name, Map grad_h, Map inv_grad_h, Value value_h, double mu_bar)
    : name_(std::move(name)),
      grad_h_(std::move(grad_h)),
      inv_grad_h_(std::move(inv_grad_h)),
      value_h_(std::move(value_h)),
      mu_bar_(mu_bar) {
  if (!(mu_bar_ > 0.0)) throw std::invalid_argument("MirrorMap: mu_bar must be positive");
}

MirrorMap MirrorMap::euclidean() {
  auto identity = [](const Vector& x) { return x; };
  MirrorMap h("euclidean", identity, identity,
              [](const Vector& x) { return 0.5 * squared_norm(x); }, 1.0);
  h.euclidean_ = true;
  return h;
}

MirrorMap MirrorMap::diagonal(const Vector& weights) {
  if (weights.empty()) throw std::invalid_argument("MirrorMap::diagonal: empty weights");
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0)) {
      throw std::invalid_argument("MirrorMap::diagonal: weights must be positive");
    }
  }
  const double mu_bar = *std::min_element(weights.coords().begin(), weights.coords().end());
  auto grad = [weights](const Vector& x) {
    require_same_dim(x, weights);
    Vector out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = weights[j] * x[j];
    return out;
  };
  auto inv = [weights](const Vector& u) {
    require_same_dim(u, weights);
    Vector out(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) out[j] = u[j] / weights[j];
    return out;
  };
  auto value = [weights](const Vector& x) {
    require_same_dim(x, weights);
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += weights[j] * x[j] * x[j];
    return 0.5 * s;
  };
  return MirrorMap("diagonal", grad, inv, value, mu_bar);
}

double bregman(const MirrorMap& h, const Vector& x, const Vector& y) {
  require_same_dim(x, y);
  if (h.is_euclidean()) return 0.5 * squared_distance(x, y);
  return h.value(x) - h.value(y) - dot(h.grad(y), x - y);
}

Vector mirror_step(const MirrorMap& h, const Vector& z, const Vector& x_next, const Vector& grad,
                   double alpha, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("mirror_step: beta must be positive");
  if (alpha < 0.0) throw std::invalid_argument("mirror_step: alpha must be nonnegative");
  require_same_dim(z, grad);
  require_same_dim(z, x_next);
  // Stationarity: beta (grad h(u) - grad h(z)) + alpha (grad h(u) - grad h(x)) + grad = 0.
  // Written as a correction to grad h(z) so that alpha = 0 gives grad h(z) - grad / beta exactly.
  Vector dual = h.grad(z);
  if (alpha == 0.0) {
    for (std::size_t j = 0; j < dual.size(); ++j) dual[j] -= grad[j] / beta;
  } else {
    Vector shift = h.grad(x_next) - dual;
    shift *= alpha;
    shift -= grad;
    axpy(1.0 / (alpha + beta), shift, dual);
  }
  return h.inv_grad(dual);
}

Vector gd_step(const Vector& x_next, const Vector& grad, double rho) {
  require_same_dim(x_next, grad);
  Vector y = x_next;
  if (rho != 0.0) axpy(-rho, grad, y);
  return y;
}

}  // namespace quasar
