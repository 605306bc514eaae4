#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "quasar/oracle.hpp"

namespace quasar {

// h_{t+1} = A h_t + B x_t, y_t = C h_t + D x_t, h_0 = 0. A is d x d row-major.
struct LdsSystem {
  std::size_t d = 0;
  std::vector<double> A;
  std::vector<double> B;
  std::vector<double> C;
  double D = 0.0;
};

struct LdsInstance {
  LdsSystem truth;
  std::size_t N = 0;
  std::size_t T = 0;
  std::size_t T1 = 0;
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> outputs;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

// Trainable part of the model; B is fixed to the true system's B.
struct LdsModelParams {
  std::size_t d = 0;
  std::vector<double> A;
  std::vector<double> C;
  double D = 0.0;

  // A row-major, then C, then D: length d^2 + d + 1.
  Vector to_vector() const;
  static LdsModelParams from_vector(const Vector& v, std::size_t d);
  static LdsModelParams from_system(const LdsSystem& s);
};

class LdsDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LdsGenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double spectral_radius(const std::vector<double>& A, std::size_t d);

// Companion-form A with spectral radius <= 0.9; B, C, D standard normal.
LdsInstance generate_lds(std::size_t N, std::size_t d, std::size_t T, double noise_std,
                         std::uint64_t seed);

// Outputs of a system for one input sequence.
std::vector<double> simulate_lds(const LdsSystem& s, const std::vector<double>& x);

// Tail loss (1 / (T - T1)) sum_{t >= T1} (y_hat_t - y_t)^2, averaged over sequences
// or for sequence i alone. grad may be null. B_override replaces the known B.
double lds_value_grad(const LdsInstance& inst, const LdsModelParams& params,
                      std::optional<std::size_t> i, Vector* grad,
                      const std::vector<double>* B_override = nullptr);

// True parameters plus scale * N(0, 1) noise, redrawn until rho(A_hat) < 1.
LdsModelParams perturbed_init(const LdsInstance& inst, double scale, std::uint64_t seed);

class LdsModel : public ComponentModel {
 public:
  LdsModel(std::shared_ptr<const LdsInstance> inst, double L);

  std::size_t size() const override { return inst_->N; }
  std::size_t dim() const override { return d_ * d_ + d_ + 1; }
  double smoothness() const override { return L_; }
  std::string name() const override { return "lds"; }

  double value(std::size_t i, std::span<const double> x) const override;
  double value_gradient(std::size_t i, std::span<const double> x,
                        std::span<double> grad) const override;

  const LdsInstance& instance() const noexcept { return *inst_; }

 private:
  std::shared_ptr<const LdsInstance> inst_;
  std::size_t d_;
  double L_;
};

}  // namespace quasar
