#pragma once

#include <cstddef>
#include <optional>

namespace quasar {

struct QuasarParams {
  double gamma = 1.0;
  double mu = 0.0;
  double mu_bar = 1.0;
  double L = 1.0;

  // L / (mu_bar * mu); infinite when mu = 0.
  double kappa() const;
  // Throws ConfigError on out-of-range constants or kappa < gamma / (2 - gamma).
  void validate() const;
};

struct StepParams {
  double A_k = 0.0;
  double A_next = 0.0;
  double B_k = 0.0;
  double B_next = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double b = 0.0;
  double c = 0.0;
  double eps_tilde = 0.0;
  // A_next / A_k, finite even where A_k itself overflows.
  double growth = 0.0;
  std::optional<std::size_t> batch_size;

  friend bool operator==(const StepParams&, const StepParams&) = default;
};

enum class SgdPhase { kPlain, kStep1, kStep2 };
enum class SvrgOption { kOptI, kOptII };

StepParams params_qagd(std::size_t k, const QuasarParams& qp, double eps);

StepParams params_qasgd(std::size_t k, std::size_t t, SgdPhase phase, const QuasarParams& qp,
                        double sigma, double R, double eps);

StepParams params_qasvrg(std::size_t k, SvrgOption option, const QuasarParams& qp,
                         std::size_t n, double p, double f_y0, double eps);

StepParams params_qasgd_sgc(std::size_t k, const QuasarParams& qp, double rho_sgc, double eps);

std::size_t stage_length(SvrgOption option, const QuasarParams& qp, std::size_t n, double q,
                         double D_current, double f_current);

// Plain-phase step scale eta = min(mu_bar / L, 2 R gamma / (sigma (t + 1)^{3/2})).
double qasgd_eta(std::size_t t, const QuasarParams& qp, double sigma, double R);

// R = ||z0|| / sqrt(2), the usual stand-in for the unknown initial distance.
double qasgd_surrogate_R(double z0_norm);

// First Step-1 iteration at which E0 / (1 + r)^k falls below mu_bar sigma^2 / (4 mu).
std::size_t qasgd_default_switch(const QuasarParams& qp, double sigma, double E0,
                                 std::size_t horizon);

// Per-iteration growth ratio of the geometric schedules.
double qasgd_step1_ratio(const QuasarParams& qp);

// (n - b) / (b (n - 1)), zero when b = n.
double batch_delta(std::size_t n, std::size_t b);

}  // namespace quasar
