#include "quasar/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quasar/errors.hpp"

namespace quasar {

double QuasarParams::kappa() const {
  if (mu == 0.0) return std::numeric_limits<double>::infinity();
  return L / (mu_bar * mu);
}

void QuasarParams::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("mu must be nonnegative");
  if (!(mu_bar > 0.0) || !std::isfinite(mu_bar)) throw ConfigError("mu_bar must be positive");
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("L must be positive");
  if (mu > 0.0 && kappa() < gamma / (2.0 - gamma)) {
    throw ConfigError("condition number " + std::to_string(kappa()) +
                      " is below gamma / (2 - gamma) = " + std::to_string(gamma / (2.0 - gamma)));
  }
}

namespace {

// A_k = s (k + j)^2 with B_k = 1.
StepParams quadratic_weights(std::size_t k, double scale, double shift) {
  const double j = static_cast<double>(k) + shift;
  StepParams s;
  s.A_k = scale * j * j;
  s.A_next = scale * (j + 1.0) * (j + 1.0);
  s.growth = ((j + 1.0) * (j + 1.0)) / (j * j);
  s.B_k = 1.0;
  s.B_next = 1.0;
  return s;
}

// A_k = (1 + g)^k with B_k = mu A_k.
StepParams geometric_weights(std::size_t k, double g, double mu) {
  StepParams s;
  s.A_k = std::pow(1.0 + g, static_cast<double>(k));
  s.A_next = s.A_k * (1.0 + g);
  s.growth = 1.0 + g;
  s.B_k = mu * s.A_k;
  s.B_next = mu * s.A_next;
  return s;
}

// A_k / (A_{k+1} - A_k) for the quadratic family.
double quadratic_ratio(std::size_t k, double shift) {
  const double j = static_cast<double>(k) + shift;
  return (j * j) / (2.0 * j + 1.0);
}

double quadratic_gap(double scale, std::size_t k, double shift) {
  const double j = static_cast<double>(k) + shift;
  return scale * (2.0 * j + 1.0);
}

void require_eps(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("target accuracy eps must be positive");
}

}  // namespace

StepParams params_qasgd_sgc(std::size_t k, const QuasarParams& qp, double rho_sgc, double eps) {
  qp.validate();
  if (!(rho_sgc >= 1.0)) throw std::invalid_argument("strong growth constant must be >= 1");
  const double g = qp.gamma;
  const double rL = rho_sgc * qp.L;
  if (qp.mu == 0.0) {
    require_eps(eps);
    const double scale = qp.mu_bar * g * g / (4.0 * rL);
    StepParams s = quadratic_weights(k, scale, 1.0);
    const double a_bar = quadratic_gap(scale, k, 1.0);
    s.alpha = 0.0;
    s.beta = g / a_bar;
    s.rho = 1.0 / rL;
    s.b = 0.0;
    s.c = g * quadratic_ratio(k, 1.0);
    s.eps_tilde = g * eps / 2.0;
    return s;
  }
  const double r = g / (2.0 * rho_sgc * std::sqrt(qp.kappa()));
  StepParams s = geometric_weights(k, r, qp.mu);
  s.alpha = g * qp.mu;
  s.beta = g * qp.mu / r;
  s.rho = 1.0 / rL;
  s.b = g * qp.mu_bar * qp.mu / 2.0;
  s.c = g / r;
  s.eps_tilde = 0.0;
  return s;
}

StepParams params_qagd(std::size_t k, const QuasarParams& qp, double eps) {
  return params_qasgd_sgc(k, qp, 1.0, eps);
}

double qasgd_eta(std::size_t t, const QuasarParams& qp, double sigma, double R) {
  if (t < 1) throw std::invalid_argument("QASGD horizon must be at least 1");
  if (!(sigma >= 0.0) || !(R > 0.0)) throw std::invalid_argument("QASGD needs sigma >= 0, R > 0");
  const double cap = qp.mu_bar / qp.L;
  if (sigma == 0.0) return cap;
  const double tp = static_cast<double>(t) + 1.0;
  return std::min(cap, std::sqrt(4.0 * R * R / (sigma * sigma)) * qp.gamma / std::pow(tp, 1.5));
}

double qasgd_surrogate_R(double z0_norm) { return z0_norm / std::sqrt(2.0); }

double qasgd_step1_ratio(const QuasarParams& qp) {
  const double gm = qp.gamma * qp.mu_bar;
  return std::min(gm * gm / 16.0, 0.5);
}

StepParams params_qasgd(std::size_t k, std::size_t t, SgdPhase phase, const QuasarParams& qp,
                        double sigma, double R, double eps) {
  qp.validate();
  const double g = qp.gamma;
  if (phase == SgdPhase::kPlain) {
    if (qp.mu != 0.0) throw std::invalid_argument("QASGD plain phase requires mu = 0");
    require_eps(eps);
    const double eta = qasgd_eta(t, qp, sigma, R);
    StepParams s = quadratic_weights(k, eta, 1.0);
    s.alpha = 0.0;
    s.beta = g / quadratic_gap(eta, k, 1.0);
    s.rho = 0.0;
    s.b = 0.0;
    s.c = g * quadratic_ratio(k, 1.0);
    s.eps_tilde = g * eps / 2.0;
    return s;
  }
  if (!(qp.mu > 0.0)) throw std::invalid_argument("QASGD two-phase schedule requires mu > 0");
  StepParams s;
  double a_over_gap = 0.0;
  if (phase == SgdPhase::kStep1) {
    const double r = qasgd_step1_ratio(qp);
    s = geometric_weights(k, r, qp.mu);
    a_over_gap = 1.0 / r;
  } else {
    const double gm = g * qp.mu_bar;
    const double m = std::max(48.0 / (gm * gm), 5.0);
    const double scale = gm * gm / 36.0;
    s = quadratic_weights(k, scale, m);
    s.B_k = qp.mu * s.A_k;
    s.B_next = qp.mu * s.A_next;
    a_over_gap = quadratic_ratio(k, m);
  }
  s.alpha = g * qp.mu / 2.0;
  s.beta = g * qp.mu * a_over_gap / 2.0;
  s.rho = 0.0;
  s.b = g * qp.mu_bar * qp.mu / 4.0;
  s.c = g * a_over_gap / 2.0;
  s.eps_tilde = 0.0;
  return s;
}

std::size_t qasgd_default_switch(const QuasarParams& qp, double sigma, double E0,
                                 std::size_t horizon) {
  const double r = qasgd_step1_ratio(qp);
  const double floor_e = qp.mu_bar * sigma * sigma / (4.0 * qp.mu);
  std::size_t k = 1;
  if (E0 > floor_e && floor_e > 0.0) {
    k = static_cast<std::size_t>(std::ceil(std::log(E0 / floor_e) / std::log1p(r)));
  } else if (floor_e == 0.0) {
    k = horizon;
  }
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(horizon, 1));
}

double batch_delta(std::size_t n, std::size_t b) {
  if (b >= n) return 0.0;
  return static_cast<double>(n - b) / (static_cast<double>(b) * static_cast<double>(n - 1));
}

namespace {

std::size_t clamp_batch(double raw, std::size_t n) {
  const double c = std::ceil(raw);
  if (!(c >= 1.0)) return 1;
  if (c >= static_cast<double>(n)) return n;
  return static_cast<std::size_t>(c);
}

}  // namespace

StepParams params_qasvrg(std::size_t k, SvrgOption option, const QuasarParams& qp,
                         std::size_t n, double p, double f_y0, double eps) {
  qp.validate();
  if (n < 1) throw std::invalid_argument("QASVRG needs at least one component");
  const double g = qp.gamma;
  const double nn = static_cast<double>(n);
  if (option == SvrgOption::kOptII || qp.mu == 0.0) {
    if (!(p > 0.0 && p <= g * qp.mu_bar / 16.0)) {
      throw std::invalid_argument("QASVRG slack p must lie in (0, gamma mu_bar / 16]");
    }
    require_eps(eps);
    if (!(f_y0 >= 0.0)) throw std::invalid_argument("stage start objective must be nonnegative");
    const double scale = g * g * qp.mu_bar / (16.0 * qp.L);
    StepParams s = quadratic_weights(k, scale, 1.0);
    const double m = g * qp.mu_bar * (2.0 * static_cast<double>(k) + 3.0);
    s.batch_size = clamp_batch(m * nn / (2.0 * (nn - 1.0) * p + m), n);
    s.alpha = 0.0;
    s.beta = g / (2.0 * quadratic_gap(scale, k, 1.0));
    s.rho = 1.0 / qp.L;
    s.b = 0.0;
    s.c = g * quadratic_ratio(k, 1.0) / 2.0;
    s.eps_tilde = g * eps * f_y0 / 2.0;
    return s;
  }
  const double root = std::sqrt(8.0 * qp.kappa());
  const double r = g / root;
  StepParams s = geometric_weights(k, r, qp.mu);
  s.batch_size = clamp_batch(8.0 * nn * (root + g) / (g * (nn - 1.0) + 8.0 * (root + g)), n);
  s.alpha = g * qp.mu / 2.0;
  s.beta = g * qp.mu / (2.0 * r);
  s.rho = 1.0 / qp.L;
  s.b = g * qp.mu_bar * qp.mu / 4.0;
  s.c = g / (2.0 * r);
  s.eps_tilde = 0.0;
  return s;
}

std::size_t stage_length(SvrgOption option, const QuasarParams& qp, std::size_t n, double q,
                         double D_current, double f_current) {
  (void)n;
  qp.validate();
  if (!(q > 0.0 && q <= 0.25)) throw std::invalid_argument("stage slack q must lie in (0, 1/4]");
  double t = 1.0;
  if (option == SvrgOption::kOptII || qp.mu == 0.0) {
    if (!(f_current > 0.0)) throw std::invalid_argument("stage length needs f(y_s) > 0");
    if (!(D_current >= 0.0)) throw std::invalid_argument("Bregman distance must be nonnegative");
    t = std::ceil(std::sqrt(17.0 * qp.L * D_current /
                            (qp.gamma * qp.gamma * qp.mu_bar * q * f_current)));
  } else {
    const double base = 1.0 + qp.gamma / std::sqrt(8.0 * qp.kappa());
    t = std::ceil(std::log(2.0 / (qp.gamma * q)) / std::log(base));
  }
  if (!(t >= 1.0)) return 1;
  if (t > 1e9) return 1000000000;
  return static_cast<std::size_t>(t);
}

}  // namespace quasar
