#include "quasar/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "quasar/kernels.hpp"

namespace quasar {

std::string CheckReport::summary_line() const {
  std::string s = "CHECK " + name + (pass ? " PASS" : " FAIL") + " worst=" +
                  format_double(worst) + " n=" + std::to_string(samples);
  if (!applicable) {
    s += " not-applicable";
  } else if (!gating) {
    s += " measured";
  }
  return s;
}

std::string CheckReport::block() const {
  std::ostringstream os;
  os << "[" << name << "]\n"
     << "samples = " << samples << "\n"
     << "violations = " << violations << "\n"
     << "worst = " << format_double(worst) << "\n"
     << "pass = " << (pass ? "true" : "false") << "\n"
     << "gating = " << (gating ? "true" : "false") << "\n";
  for (const auto& d : details) os << "note = " << d << "\n";
  return os.str();
}

double lyapunov_energy(double A_k, double B_k, double f_yk, double f_star, double D_star_zk) {
  if (!(A_k >= 0.0) || !(B_k >= 0.0)) throw std::invalid_argument("energy weights must be >= 0");
  return A_k * (f_yk - f_star) + B_k * D_star_zk;
}

Vector sample_in_ball(const SampleBall& ball, Sampler& s) {
  const std::size_t d = ball.center.size();
  Vector v(d);
  double nrm = 0.0;
  while (nrm == 0.0) {
    for (std::size_t j = 0; j < d; ++j) v[j] = s.normal();
    nrm = norm(v);
  }
  const double r = ball.radius * std::pow(s.uniform(0.0, 1.0), 1.0 / static_cast<double>(d));
  Vector x = ball.center;
  axpy(r / nrm, v, x);
  return x;
}

double mean_value_grad(const ComponentModel& m, const Vector& x, Vector& grad) {
  const std::size_t n = m.size();
  grad = Vector(m.dim());
  Vector g(m.dim());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += m.value_gradient(i, x.span(), g.span());
    grad += g;
  }
  grad *= 1.0 / static_cast<double>(n);
  return total / static_cast<double>(n);
}

namespace {

void record(CheckReport& r, double residual, double tol) {
  ++r.samples;
  if (r.samples == 1 || residual > r.worst) r.worst = residual;
  if (residual > tol) {
    ++r.violations;
    r.pass = false;
  }
}

double slack(double scale) { return 1e-9 * std::max(1.0, std::abs(scale)); }

}  // namespace

CheckReport check_quasar(const ComponentModel& f, const Vector& x_star, double gamma, double mu,
                         const MirrorMap& h, const SampleBall& ball, std::size_t n_samples,
                         std::uint64_t seed) {
  CheckReport r;
  r.name = "quasar";
  Sampler s(seed);
  Vector g;
  const double f_star = mean_value_grad(f, x_star, g);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Vector x = sample_in_ball(ball, s);
    const double fx = mean_value_grad(f, x, g);
    const double residual =
        fx + dot(g, x_star - x) / gamma + mu * bregman(h, x_star, x) - f_star;
    record(r, residual, slack(fx));
  }
  r.details.push_back("gamma=" + format_double(gamma) + " mu=" + format_double(mu));
  return r;
}

CheckReport check_quasar_growth(const ComponentModel& f, const Vector& x_star, double gamma,
                                double mu, const MirrorMap& h, const SampleBall& ball,
                                std::size_t n_samples, std::uint64_t seed) {
  CheckReport r;
  r.name = "quasar_growth";
  r.gating = h.is_euclidean();
  if (mu == 0.0) {
    r.applicable = false;
    r.details.push_back("mu = 0");
    return r;
  }
  Sampler s(seed);
  Vector g;
  const double f_star = mean_value_grad(f, x_star, g);
  const double coef = gamma * mu / (2.0 - gamma);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Vector x = sample_in_ball(ball, s);
    const double fx = mean_value_grad(f, x, g);
    record(r, f_star + coef * bregman(h, x_star, x) - fx, slack(fx));
  }
  if (!r.gating) r.pass = r.violations == 0;
  return r;
}

CheckReport check_bounded_gradient(const ComponentModel& f, const Vector& x_star, double sigma,
                                   double mu, const SampleBall& ball, std::size_t n_samples,
                                   std::uint64_t seed) {
  CheckReport r;
  r.name = "bounded_gradient";
  Sampler s(seed);
  Vector g(f.dim());
  double sup_moment = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Vector x = sample_in_ball(ball, s);
    double moment = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      f.value_gradient(i, x.span(), g.span());
      moment += squared_norm(g);
    }
    moment /= static_cast<double>(f.size());
    sup_moment = std::max(sup_moment, moment);
    const double bound = sigma * sigma + 2.0 * mu * mu * squared_distance(x_star, x);
    record(r, moment - bound, slack(bound));
  }
  r.details.push_back("measured sup of mean squared gradient norm = " + format_double(sup_moment));
  return r;
}

CheckReport check_bounded_variance(const ComponentModel& f, double sigma_bar,
                                   const SampleBall& ball, std::size_t n_samples,
                                   std::uint64_t seed) {
  CheckReport r;
  r.name = "bounded_variance";
  Sampler s(seed);
  Vector g(f.dim());
  Vector mean;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Vector x = sample_in_ball(ball, s);
    mean_value_grad(f, x, mean);
    double var = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      f.value_gradient(i, x.span(), g.span());
      var += squared_distance(g, mean);
    }
    var /= static_cast<double>(f.size());
    const double bound = sigma_bar * sigma_bar;
    record(r, var - bound, slack(bound));
  }
  return r;
}

namespace {

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

VarianceMeasurement svrg_variance(const ComponentModel& f, const Vector& x, const Vector& anchor,
                                  std::size_t b, VarianceMode mode, std::size_t mc_samples,
                                  std::uint64_t seed) {
  const std::size_t n = f.size();
  const std::size_t d = f.dim();
  if (b < 1 || b > n) throw std::invalid_argument("svrg_variance: require 1 <= b <= n");
  // xi_i = grad f_i(x) - grad f_i(anchor); the estimator error is mean_S xi - mean xi.
  std::vector<Vector> xi(n, Vector(d));
  Vector ga(d);
  Vector xi_bar(d);
  for (std::size_t i = 0; i < n; ++i) {
    f.value_gradient(i, x.span(), xi[i].span());
    f.value_gradient(i, anchor.span(), ga.span());
    xi[i] -= ga;
    xi_bar += xi[i];
  }
  xi_bar *= 1.0 / static_cast<double>(n);

  if (mode == VarianceMode::kAuto) {
    mode = log_binomial(n, b) <= std::log(1e4) + 1e-9 ? VarianceMode::kEnumerate
                                                       : VarianceMode::kClosedForm;
  }
  VarianceMeasurement out;
  out.mode = mode;
  const double inv_b = 1.0 / static_cast<double>(b);
  auto subset_error = [&](const std::vector<std::size_t>& idx) {
    Vector m(d);
    for (std::size_t i : idx) m += xi[i];
    m *= inv_b;
    return squared_distance(m, xi_bar);
  };
  switch (mode) {
    case VarianceMode::kEnumerate: {
      if (log_binomial(n, b) > std::log(5e6)) {
        throw std::invalid_argument("svrg_variance: too many subsets to enumerate");
      }
      std::vector<double> flat(n * d);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) flat[i * d + j] = xi[i][j] - xi_bar[j];
      }
      // sums[level] holds the running sum of the first level chosen rows.
      std::vector<double> sums((b + 1) * d, 0.0);
      double total = 0.0;
      double count = 0.0;
      const double inv_b2 = inv_b * inv_b;
      auto descend = [&](auto&& self, std::size_t start, std::size_t level) -> void {
        const double* prev = sums.data() + level * d;
        double* cur = sums.data() + (level + 1) * d;
        const std::size_t last = n - (b - level - 1);
        for (std::size_t i = start; i < last; ++i) {
          const double* row = flat.data() + i * d;
          if (level + 1 == b) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
              const double v = prev[j] + row[j];
              acc += v * v;
            }
            total += acc * inv_b2;
            count += 1.0;
          } else {
            for (std::size_t j = 0; j < d; ++j) cur[j] = prev[j] + row[j];
            self(self, i + 1, level + 1);
          }
        }
      };
      descend(descend, 0, 0);
      out.value = total / count;
      break;
    }
    case VarianceMode::kClosedForm: {
      double spread = 0.0;
      for (const Vector& v : xi) spread += squared_distance(v, xi_bar);
      spread /= static_cast<double>(n);
      out.value = n == 1 ? 0.0
                         : static_cast<double>(n - b) /
                               (static_cast<double>(b) * static_cast<double>(n - 1)) * spread;
      break;
    }
    case VarianceMode::kMonteCarlo: {
      Sampler s(seed);
      double sum = 0.0;
      double sum_sq = 0.0;
      for (std::size_t k = 0; k < mc_samples; ++k) {
        const double e = subset_error(sample_subset(n, b, s));
        sum += e;
        sum_sq += e * e;
      }
      const double m = static_cast<double>(mc_samples);
      out.value = sum / m;
      const double var = std::max(0.0, sum_sq / m - out.value * out.value);
      out.std_error = std::sqrt(var / m);
      break;
    }
    case VarianceMode::kAuto: break;
  }
  return out;
}

CheckReport check_variance_bound(const ComponentModel& f, double f_star, double L,
                                 const std::vector<VariancePair>& pairs, std::size_t b,
                                 VarianceMode mode) {
  CheckReport r;
  r.name = "variance_bound_b" + std::to_string(b);
  const std::size_t n = f.size();
  const double factor = n == 1 ? 0.0
                               : static_cast<double>(n - b) /
                                     (static_cast<double>(b) * static_cast<double>(n - 1));
  Vector g;
  double worst_se = 0.0;
  VarianceMode used = mode;
  for (const auto& pr : pairs) {
    const double fx = mean_value_grad(f, pr.x, g);
    const double fa = mean_value_grad(f, pr.anchor, g);
    const double rhs = 4.0 * L * factor * (fx - f_star + fa - f_star);
    const VarianceMeasurement m = svrg_variance(f, pr.x, pr.anchor, b, mode);
    used = m.mode;
    worst_se = std::max(worst_se, m.std_error);
    record(r, m.value - rhs, slack(rhs) + 3.0 * m.std_error);
  }
  switch (used) {
    case VarianceMode::kEnumerate: r.details.push_back("mode=enumerate"); break;
    case VarianceMode::kClosedForm: r.details.push_back("mode=closed_form"); break;
    case VarianceMode::kMonteCarlo:
      r.details.push_back("mode=monte_carlo max_std_error=" + format_double(worst_se));
      break;
    case VarianceMode::kAuto: break;
  }
  return r;
}

CheckReport check_kappa(const QuasarParams& qp) {
  CheckReport r;
  r.name = "kappa";
  if (qp.mu == 0.0) {
    r.applicable = false;
    r.details.push_back("mu = 0");
    return r;
  }
  const double floor_k = qp.gamma / (2.0 - qp.gamma);
  record(r, floor_k - qp.L / (qp.mu_bar * qp.mu), 0.0);
  return r;
}

CheckReport finite_diff_check(const ValueGrad& f, const std::vector<Vector>& points, double step,
                              double tol, const std::string& name) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff_check: step must be positive");
  CheckReport r;
  r.name = name;
  for (const Vector& p : points) {
    Vector g;
    f(p, &g);
    Vector fd(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double h = step * std::max(1.0, std::abs(p[j]));
      Vector up = p;
      Vector dn = p;
      up[j] += h;
      dn[j] -= h;
      fd[j] = (f(up, nullptr) - f(dn, nullptr)) / (2.0 * h);
    }
    const double denom = std::max({norm(g), norm(fd), 1e-8});
    record(r, std::sqrt(squared_distance(g, fd)) / denom, tol);
  }
  return r;
}

ValueGrad mean_oracle(const ComponentModel& f) {
  return [&f](const Vector& x, Vector* grad) {
    Vector g;
    const double v = mean_value_grad(f, x, g);
    if (grad) *grad = std::move(g);
    return v;
  };
}

CheckReport compactness_monitor(const Trace& trace, double radius) {
  CheckReport r;
  r.name = "compactness";
  double worst = 0.0;
  for (const TraceRow& row : trace.rows) {
    worst = std::max(worst, row.iterate_norm);
    ++r.samples;
    if (!(row.iterate_norm <= radius)) {
      ++r.violations;
      r.pass = false;
    }
  }
  r.worst = worst;
  r.details.push_back("radius=" + format_double(radius));
  return r;
}

}  // namespace quasar
