#include "quasar/problems/glm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>

#include "quasar/errors.hpp"

namespace quasar {

namespace {
constexpr double kLeakySlope = 0.01;
}

std::string link_name(Link l) {
  switch (l) {
    case Link::kLogistic: return "logistic";
    case Link::kQuadratic: return "quadratic";
    case Link::kLeakyRelu: return "leaky_relu";
  }
  return "?";
}

Link parse_link(std::string_view name) {
  std::string s(name);
  for (char& ch : s) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (ch == '-') ch = '_';
  }
  if (s == "logistic") return Link::kLogistic;
  if (s == "quadratic") return Link::kQuadratic;
  if (s == "leaky_relu" || s == "leakyrelu") return Link::kLeakyRelu;
  throw ConfigError("unknown link '" + std::string(name) + "'");
}

std::pair<double, double> link_value_grad(Link l, double z) {
  switch (l) {
    case Link::kLogistic: {
      const double s = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
      return {s, s * (1.0 - s)};
    }
    case Link::kQuadratic:
      return {z * z, 2.0 * z};
    case Link::kLeakyRelu:
      return z > 0.0 ? std::pair{z, 1.0} : std::pair{kLeakySlope * z, kLeakySlope};
  }
  return {0.0, 0.0};
}

GlmInstance generate_glm(std::size_t n, std::size_t d, Link link, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("glm: n and d must be positive");
  GlmInstance inst;
  inst.n = n;
  inst.d = d;
  inst.link = link;
  inst.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  inst.w_star = Vector(d);
  for (std::size_t j = 0; j < d; ++j) inst.w_star[j] = normal(rng);
  inst.X.resize(n * d);
  for (double& v : inst.X) v = normal(rng);
  inst.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z = 0.0;
    for (std::size_t j = 0; j < d; ++j) z += inst.X[i * d + j] * inst.w_star[j];
    inst.y[i] = link_value_grad(link, z).first;
  }
  return inst;
}

GlmModel::GlmModel(GlmInstance inst, std::optional<double> L) : inst_(std::move(inst)) {
  if (inst_.n < 1 || inst_.d < 1 || inst_.X.size() != inst_.n * inst_.d ||
      inst_.y.size() != inst_.n) {
    throw std::invalid_argument("glm: inconsistent instance shape");
  }
  if (L) {
    if (!(*L > 0.0)) throw std::invalid_argument("glm: L must be positive");
    L_ = *L;
    return;
  }
  double row_max = 0.0;
  for (std::size_t i = 0; i < inst_.n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < inst_.d; ++j) s += inst_.X[i * inst_.d + j] * inst_.X[i * inst_.d + j];
    row_max = std::max(row_max, s);
  }
  // Logistic: |sigma'| <= 1/4, |sigma''| <= 1/(6 sqrt 3), |sigma - y| <= 1.
  double curvature = 2.0;
  if (inst_.link == Link::kLogistic) curvature = 2.0 * (1.0 / 16.0 + 1.0 / (6.0 * std::sqrt(3.0)));
  if (inst_.link == Link::kQuadratic) {
    double ymax = 0.0;
    for (double v : inst_.y) ymax = std::max(ymax, std::abs(v));
    curvature = 2.0 * (4.0 * ymax + 2.0 * ymax);
    curvature = std::max(curvature, 2.0);
  }
  L_ = curvature * row_max;
}

double GlmModel::activation(std::size_t i, std::span<const double> w) const {
  const double* row = inst_.X.data() + i * inst_.d;
  double z = 0.0;
  for (std::size_t j = 0; j < inst_.d; ++j) z += row[j] * w[j];
  return z;
}

double GlmModel::value(std::size_t i, std::span<const double> w) const {
  const double r = link_value_grad(inst_.link, activation(i, w)).first - inst_.y[i];
  return r * r;
}

double GlmModel::value_gradient(std::size_t i, std::span<const double> w,
                                std::span<double> grad) const {
  const auto [s, ds] = link_value_grad(inst_.link, activation(i, w));
  const double r = s - inst_.y[i];
  const double scale = 2.0 * r * ds;
  const double* row = inst_.X.data() + i * inst_.d;
  for (std::size_t j = 0; j < inst_.d; ++j) grad[j] = scale * row[j];
  return r * r;
}

std::pair<double, Vector> glm_value_grad(const GlmInstance& inst, const Vector& w,
                                         std::optional<std::size_t> i) {
  GlmModel model(inst, 1.0);
  if (w.size() != inst.d) throw std::invalid_argument("glm: weight dimension mismatch");
  Vector grad(inst.d);
  if (i) {
    if (*i >= inst.n) throw std::out_of_range("glm: component index out of range");
    const double v = model.value_gradient(*i, w.span(), grad.span());
    return {v, std::move(grad)};
  }
  Vector g(inst.d);
  double total = 0.0;
  for (std::size_t k = 0; k < inst.n; ++k) {
    total += model.value_gradient(k, w.span(), g.span());
    grad += g;
  }
  grad *= 1.0 / static_cast<double>(inst.n);
  return {total / static_cast<double>(inst.n), std::move(grad)};
}

}  // namespace quasar
