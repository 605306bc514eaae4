#include "quasar/problems/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace quasar {

std::pair<double, double> gq_value_grad(double x, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (x >= 1.0) return {(std::pow(x, gamma) - 1.0) / gamma + 0.5, std::pow(x, gamma - 1.0)};
  if (x >= 0.0) return {0.5 * x * x, x};
  return {0.0, 0.0};
}

PiecewiseInstance generate_piecewise(std::size_t n, std::size_t d, double gamma, double mu,
                                     std::uint64_t seed, double label_noise) {
  if (n < 1 || d < 1) throw std::invalid_argument("piecewise: n and d must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (!(mu >= 0.0)) throw std::invalid_argument("mu must be nonnegative");
  if (!(label_noise >= 0.0)) throw std::invalid_argument("label noise must be nonnegative");
  PiecewiseInstance inst;
  inst.n = n;
  inst.d = d;
  inst.gamma = gamma;
  inst.mu = mu;
  inst.seed = seed;
  inst.a.resize(n * d);
  inst.b.resize(n);
  inst.offsets.assign(n, 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < n; ++i) {
    double nrm = 0.0;
    do {
      nrm = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double v = normal(rng);
        inst.a[i * d + j] = v;
        nrm += v * v;
      }
    } while (nrm == 0.0);
    nrm = std::sqrt(nrm);
    for (std::size_t j = 0; j < d; ++j) inst.a[i * d + j] /= nrm;
    inst.b[i] = coin(rng) ? 1.0 : -1.0;
  }
  if (label_noise > 0.0) {
    for (double& o : inst.offsets) o = label_noise * normal(rng);
  }
  return inst;
}

PiecewiseModel::PiecewiseModel(PiecewiseInstance inst, bool normalize) : inst_(std::move(inst)) {
  if (inst_.n < 1 || inst_.d < 1 || inst_.a.size() != inst_.n * inst_.d ||
      inst_.b.size() != inst_.n) {
    throw std::invalid_argument("piecewise: inconsistent instance shape");
  }
  if (inst_.offsets.empty()) inst_.offsets.assign(inst_.n, 0.0);
  if (inst_.offsets.size() != inst_.n) throw std::invalid_argument("piecewise: offsets size");
  if (!(inst_.gamma > 0.0 && inst_.gamma <= 1.0)) throw std::invalid_argument("bad gamma");
  if (!(inst_.mu >= 0.0)) throw std::invalid_argument("bad mu");
  for (std::size_t i = 0; i < inst_.n; ++i) {
    if (inst_.b[i] != 1.0 && inst_.b[i] != -1.0) {
      throw std::invalid_argument("piecewise: labels must be +1 or -1");
    }
    double nrm = 0.0;
    for (std::size_t j = 0; j < inst_.d; ++j) nrm += inst_.a[i * inst_.d + j] * inst_.a[i * inst_.d + j];
    nrm = std::sqrt(nrm);
    if (std::abs(nrm - 1.0) <= 1e-12) continue;
    if (!normalize || nrm == 0.0) {
      throw std::invalid_argument("piecewise: row " + std::to_string(i) + " is not unit length");
    }
    for (std::size_t j = 0; j < inst_.d; ++j) inst_.a[i * inst_.d + j] /= nrm;
  }
}

double PiecewiseModel::margin(std::size_t i, std::span<const double> x) const {
  const double* row = inst_.a.data() + i * inst_.d;
  double s = 0.0;
  for (std::size_t j = 0; j < inst_.d; ++j) s += row[j] * x[j];
  return inst_.b[i] * s + inst_.offsets[i];
}

double PiecewiseModel::value(std::size_t i, std::span<const double> x) const {
  double reg = 0.0;
  if (inst_.mu > 0.0) {
    for (double v : x) reg += v * v;
    reg *= 0.5 * inst_.mu;
  }
  return gq_value_grad(margin(i, x), inst_.gamma).first + reg;
}

double PiecewiseModel::value_gradient(std::size_t i, std::span<const double> x,
                                      std::span<double> grad) const {
  const auto [g, dg] = gq_value_grad(margin(i, x), inst_.gamma);
  const double* row = inst_.a.data() + i * inst_.d;
  const double scale = inst_.b[i] * dg;
  double reg = 0.0;
  for (std::size_t j = 0; j < inst_.d; ++j) {
    grad[j] = scale * row[j] + inst_.mu * x[j];
    reg += x[j] * x[j];
  }
  return g + 0.5 * inst_.mu * reg;
}

double PiecewiseModel::knot_distance(std::span<const double> x) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < inst_.n; ++i) {
    const double m = margin(i, x);
    best = std::min({best, std::abs(m), std::abs(m - 1.0)});
  }
  return best;
}

std::shared_ptr<PiecewiseModel> piecewise_objective(const PiecewiseInstance& inst,
                                                    bool normalize) {
  return std::make_shared<PiecewiseModel>(inst, normalize);
}

}  // namespace quasar
