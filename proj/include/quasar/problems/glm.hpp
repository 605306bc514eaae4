#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quasar/oracle.hpp"

namespace quasar {

enum class Link { kLogistic, kQuadratic, kLeakyRelu };

std::string link_name(Link l);
Link parse_link(std::string_view name);

// sigma(z) and sigma'(z); LeakyReLU uses slope 0.01 below zero and the left derivative at 0.
std::pair<double, double> link_value_grad(Link l, double z);

struct GlmInstance {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> X;  // n x d, row-major
  Vector w_star;
  std::vector<double> y;
  Link link = Link::kLogistic;
  std::uint64_t seed = 0;
};

// Rows of X and w_star i.i.d. standard normal; y_i = sigma(w_star^T x_i).
GlmInstance generate_glm(std::size_t n, std::size_t d, Link link, std::uint64_t seed);

// f_i(w) = (sigma(w^T x_i) - y_i)^2.
class GlmModel : public ComponentModel {
 public:
  // Without L, a curvature estimate from the link and the row norms is reported.
  explicit GlmModel(GlmInstance inst, std::optional<double> L = std::nullopt);

  std::size_t size() const override { return inst_.n; }
  std::size_t dim() const override { return inst_.d; }
  double smoothness() const override { return L_; }
  std::string name() const override { return "glm"; }

  double value(std::size_t i, std::span<const double> w) const override;
  double value_gradient(std::size_t i, std::span<const double> w,
                        std::span<double> grad) const override;

  const GlmInstance& instance() const noexcept { return inst_; }

 private:
  double activation(std::size_t i, std::span<const double> w) const;

  GlmInstance inst_;
  double L_;
};

// Mean loss and gradient over all components, or component i alone.
std::pair<double, Vector> glm_value_grad(const GlmInstance& inst, const Vector& w,
                                         std::optional<std::size_t> i = std::nullopt);

}  // namespace quasar
