#include "quasar/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "quasar/kernels.hpp"

namespace quasar {

FiniteSumObjective::FiniteSumObjective(std::shared_ptr<const ComponentModel> model)
    : model_(std::move(model)) {
  if (!model_) throw std::invalid_argument("FiniteSumObjective: null model");
  n_ = model_->size();
  dim_ = model_->dim();
  smoothness_ = model_->smoothness();
  if (n_ == 0 || dim_ == 0) throw std::invalid_argument("FiniteSumObjective: empty model");
}

void FiniteSumObjective::set_smoothness(double L) {
  if (!(L > 0.0)) throw std::invalid_argument("smoothness constant must be positive");
  smoothness_ = L;
}

void FiniteSumObjective::check_point(const Vector& x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("objective: point has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(dim_));
  }
}

void FiniteSumObjective::check_index(std::size_t i) const {
  if (i >= n_) throw std::out_of_range("objective: component index out of range");
}

double FiniteSumObjective::component_value(std::size_t i, const Vector& x) {
  check_point(x);
  check_index(i);
  ++counts_.fn;
  return model_->value(i, x.span());
}

Vector FiniteSumObjective::component_grad(std::size_t i, const Vector& x) {
  check_point(x);
  check_index(i);
  ++counts_.grad;
  Vector g(dim_);
  model_->value_gradient(i, x.span(), g.span());
  return g;
}

double FiniteSumObjective::value(const Vector& x) {
  check_point(x);
  counts_.fn += n_;
  return peek_value(x);
}

Vector FiniteSumObjective::gradient(const Vector& x) {
  check_point(x);
  counts_.grad += n_;
  Vector sum(dim_);
  Vector g(dim_);
  for (std::size_t i = 0; i < n_; ++i) {
    model_->value_gradient(i, x.span(), g.span());
    kernels::axpy(1.0, g.span(), sum.span());
  }
  sum *= 1.0 / static_cast<double>(n_);
  return sum;
}

double FiniteSumObjective::batch_value(std::span<const std::size_t> batch, const Vector& x) {
  check_point(x);
  if (batch.empty()) throw std::invalid_argument("batch_value: empty batch");
  counts_.fn += batch.size();
  double s = 0.0;
  for (std::size_t i : batch) {
    check_index(i);
    s += model_->value(i, x.span());
  }
  return s / static_cast<double>(batch.size());
}

Vector FiniteSumObjective::batch_gradient(std::span<const std::size_t> batch, const Vector& x) {
  check_point(x);
  if (batch.empty()) throw std::invalid_argument("batch_gradient: empty batch");
  counts_.grad += batch.size();
  Vector sum(dim_);
  Vector g(dim_);
  for (std::size_t i : batch) {
    check_index(i);
    model_->value_gradient(i, x.span(), g.span());
    kernels::axpy(1.0, g.span(), sum.span());
  }
  sum *= 1.0 / static_cast<double>(batch.size());
  return sum;
}

double FiniteSumObjective::peek_value(const Vector& x) const {
  check_point(x);
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += model_->value(i, x.span());
  return s / static_cast<double>(n_);
}

std::size_t Sampler::index(std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

double Sampler::normal() {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

double Sampler::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

Vector full_gradient(FiniteSumObjective& f, const Vector& x) { return f.gradient(x); }

std::pair<Vector, std::size_t> stochastic_gradient(FiniteSumObjective& f, const Vector& x,
                                                   Sampler& s) {
  const std::size_t i = s.index(f.n());
  return {f.component_grad(i, x), i};
}

std::vector<std::size_t> sample_batch(std::size_t n, std::size_t b, Sampler& s) {
  if (b < 1 || b > n) throw std::invalid_argument("sample_batch: require 1 <= b <= n");
  std::vector<std::size_t> batch(b);
  for (auto& i : batch) i = s.index(n);
  return batch;
}

std::vector<std::size_t> sample_subset(std::size_t n, std::size_t b, Sampler& s) {
  if (b < 1 || b > n) throw std::invalid_argument("sample_subset: require 1 <= b <= n");
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  // Partial Fisher-Yates.
  for (std::size_t j = 0; j < b; ++j) {
    const std::size_t pick = j + s.index(n - j);
    std::swap(all[j], all[pick]);
  }
  all.resize(b);
  return all;
}

SvrgAnchor make_anchor(FiniteSumObjective& f, const Vector& point) {
  SvrgAnchor anchor{point, f.gradient(point), 0.0};
  anchor.value = f.value(point);
  return anchor;
}

Vector svrg_estimate(FiniteSumObjective& f, const Vector& x, const SvrgAnchor& anchor,
                     std::span<const std::size_t> batch) {
  if (batch.empty()) throw std::invalid_argument("svrg_estimate: empty batch");
  return svrg_correct(f, f.batch_gradient(batch, x), anchor, batch);
}

Vector svrg_correct(FiniteSumObjective& f, Vector batch_grad_at_x, const SvrgAnchor& anchor,
                    std::span<const std::size_t> batch) {
  if (batch.empty()) throw std::invalid_argument("svrg_correct: empty batch");
  require_same_dim(batch_grad_at_x, anchor.full_grad);
  if (anchor.point.size() != f.dim()) {
    throw std::invalid_argument("svrg_correct: anchor dimension mismatch");
  }
  Vector est = std::move(batch_grad_at_x);
  est -= f.batch_gradient(batch, anchor.point);
  est += anchor.full_grad;
  return est;
}

}  // namespace quasar
