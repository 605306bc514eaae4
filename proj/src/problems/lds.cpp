#include "quasar/problems/lds.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "quasar/kernels.hpp"

namespace quasar {

Vector LdsModelParams::to_vector() const {
  std::vector<double> v;
  v.reserve(d * d + d + 1);
  v.insert(v.end(), A.begin(), A.end());
  v.insert(v.end(), C.begin(), C.end());
  v.push_back(D);
  return Vector(std::move(v));
}

LdsModelParams LdsModelParams::from_vector(const Vector& v, std::size_t d) {
  if (v.size() != d * d + d + 1) throw std::invalid_argument("lds: parameter length mismatch");
  LdsModelParams p;
  p.d = d;
  p.A.assign(v.data(), v.data() + d * d);
  p.C.assign(v.data() + d * d, v.data() + d * d + d);
  p.D = v[d * d + d];
  return p;
}

LdsModelParams LdsModelParams::from_system(const LdsSystem& s) {
  return LdsModelParams{s.d, s.A, s.C, s.D};
}

double spectral_radius(const std::vector<double>& A, std::size_t d) {
  if (A.size() != d * d) throw std::invalid_argument("spectral_radius: shape mismatch");
  Eigen::MatrixXd M(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) M(r, c) = A[r * d + c];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  if (es.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

constexpr double kRadius = 0.9;
constexpr int kBudget = 1000;

// Characteristic coefficients from roots drawn in the disk of radius 0.9,
// complex roots in conjugate pairs.
std::vector<double> sample_char_poly(std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::complex<double>> roots;
  while (roots.size() + 1 < d) {
    const double r = kRadius * std::sqrt(unit(rng));
    const double phi = std::numbers::pi * unit(rng);
    roots.push_back(std::polar(r, phi));
    roots.push_back(std::polar(r, -phi));
  }
  if (roots.size() < d) roots.emplace_back(kRadius * (2.0 * unit(rng) - 1.0), 0.0);
  std::vector<std::complex<double>> poly{1.0};
  for (const auto& z : roots) {
    std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += poly[k];
      next[k + 1] -= z * poly[k];
    }
    poly = std::move(next);
  }
  std::vector<double> coeffs(d);
  for (std::size_t k = 0; k < d; ++k) coeffs[k] = poly[k + 1].real();
  return coeffs;
}

// x^d + a_1 x^{d-1} + ... + a_d -> first row (-a_1, ..., -a_d), ones on the subdiagonal.
std::vector<double> companion(const std::vector<double>& a) {
  const std::size_t d = a.size();
  std::vector<double> A(d * d, 0.0);
  for (std::size_t c = 0; c < d; ++c) A[c] = -a[c];
  for (std::size_t r = 1; r < d; ++r) A[r * d + r - 1] = 1.0;
  return A;
}

void gemv(const std::vector<double>& A, std::size_t d, const std::vector<double>& x,
          std::vector<double>& out) {
  kernels::active().gemv(A.data(), d, d, x.data(), out.data());
}

void check_shapes(const LdsInstance& inst, const LdsModelParams& p) {
  const std::size_t d = inst.truth.d;
  if (p.d != d || p.A.size() != d * d || p.C.size() != d) {
    throw std::invalid_argument("lds: parameter shape does not match instance");
  }
}

}  // namespace

std::vector<double> simulate_lds(const LdsSystem& s, const std::vector<double>& x) {
  const std::size_t d = s.d;
  std::vector<double> h(d, 0.0), next(d, 0.0), y(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    double v = s.D * x[t];
    for (std::size_t j = 0; j < d; ++j) v += s.C[j] * h[j];
    y[t] = v;
    gemv(s.A, d, h, next);
    for (std::size_t j = 0; j < d; ++j) h[j] = next[j] + s.B[j] * x[t];
  }
  return y;
}

LdsInstance generate_lds(std::size_t N, std::size_t d, std::size_t T, double noise_std,
                         std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("lds: d must be positive");
  if (T < 4) throw std::invalid_argument("lds: T must be at least 4");
  if (N < 1) throw std::invalid_argument("lds: N must be positive");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("lds: noise_std must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  LdsInstance inst;
  inst.N = N;
  inst.T = T;
  inst.T1 = T / 4;
  inst.noise_std = noise_std;
  inst.seed = seed;
  LdsSystem& s = inst.truth;
  s.d = d;
  int tries = 0;
  do {
    if (++tries > kBudget) throw LdsGenerationError("lds: could not draw a stable system");
    s.A = companion(sample_char_poly(d, rng));
  } while (!(spectral_radius(s.A, d) <= kRadius + 1e-9));
  s.B.resize(d);
  s.C.resize(d);
  for (double& v : s.B) v = normal(rng);
  for (double& v : s.C) v = normal(rng);
  s.D = normal(rng);
  inst.inputs.assign(N, std::vector<double>(T));
  for (auto& seq : inst.inputs) {
    for (double& v : seq) v = normal(rng);
  }
  std::mt19937_64 noise_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> noise(0.0, noise_std > 0.0 ? noise_std : 1.0);
  inst.outputs.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    inst.outputs[i] = simulate_lds(s, inst.inputs[i]);
    if (noise_std > 0.0) {
      for (double& v : inst.outputs[i]) v += noise(noise_rng);
    }
  }
  return inst;
}

namespace {

// Loss of one sequence; accumulates the gradient into grad when given.
double sequence_loss(const LdsInstance& inst, const LdsModelParams& p,
                     const std::vector<double>& B, std::size_t i, double* grad) {
  const std::size_t d = p.d;
  const std::size_t T = inst.T;
  const std::size_t T1 = inst.T1;
  const double inv = 1.0 / static_cast<double>(T - T1);
  const auto& x = inst.inputs[i];
  const auto& y = inst.outputs[i];
  LdsSystem model{d, p.A, B, p.C, p.D};
  std::vector<double> states(grad ? (T + 1) * d : 0);
  std::vector<double> h(d, 0.0), next(d, 0.0), err(T, 0.0);
  double loss = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    if (grad) std::copy(h.begin(), h.end(), states.begin() + t * d);
    double v = model.D * x[t];
    for (std::size_t j = 0; j < d; ++j) v += model.C[j] * h[j];
    if (t >= T1) {
      const double e = v - y[t];
      loss += e * e;
      err[t] = 2.0 * e * inv;
    }
    gemv(model.A, d, h, next);
    for (std::size_t j = 0; j < d; ++j) h[j] = next[j] + B[j] * x[t];
  }
  loss *= inv;
  if (!std::isfinite(loss)) throw LdsDivergence("lds: simulated state is not finite");
  if (!grad) return loss;
  double* gA = grad;
  double* gC = grad + d * d;
  double* gD = grad + d * d + d;
  // lambda_t = dLoss/dh_t; lambda_T = 0.
  std::vector<double> lam(d, 0.0), prev(d, 0.0);
  const auto& kt = kernels::active();
  for (std::size_t t = T; t-- > 0;) {
    const double* ht = states.data() + t * d;
    // h_{t+1} = A h_t + ...: dA += lambda_{t+1} h_t^T.
    kt.rank1_acc(1.0, lam.data(), d, ht, d, gA);
    const double e = err[t];
    if (e != 0.0) {
      for (std::size_t j = 0; j < d; ++j) gC[j] += e * ht[j];
      *gD += e * x[t];
    }
    for (std::size_t j = 0; j < d; ++j) prev[j] = model.C[j] * e;
    kt.gemv_t_acc(model.A.data(), d, d, lam.data(), prev.data());
    lam.swap(prev);
  }
  return loss;
}

}  // namespace

double lds_value_grad(const LdsInstance& inst, const LdsModelParams& params,
                      std::optional<std::size_t> i, Vector* grad,
                      const std::vector<double>* B_override) {
  check_shapes(inst, params);
  const std::vector<double>& B = B_override ? *B_override : inst.truth.B;
  if (B.size() != params.d) throw std::invalid_argument("lds: B shape mismatch");
  const std::size_t len = params.d * params.d + params.d + 1;
  if (grad) *grad = Vector(len);
  if (i) {
    if (*i >= inst.N) throw std::out_of_range("lds: sequence index out of range");
    return sequence_loss(inst, params, B, *i, grad ? grad->data() : nullptr);
  }
  double total = 0.0;
  for (std::size_t k = 0; k < inst.N; ++k) {
    total += sequence_loss(inst, params, B, k, grad ? grad->data() : nullptr);
  }
  const double scale = 1.0 / static_cast<double>(inst.N);
  if (grad) *grad *= scale;
  return total * scale;
}

LdsModelParams perturbed_init(const LdsInstance& inst, double scale, std::uint64_t seed) {
  if (!(scale >= 0.0)) throw std::invalid_argument("lds: perturbation scale must be nonnegative");
  LdsModelParams base = LdsModelParams::from_system(inst.truth);
  if (scale == 0.0) return base;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int tries = 0; tries < kBudget; ++tries) {
    LdsModelParams p = base;
    for (double& v : p.A) v += scale * normal(rng);
    for (double& v : p.C) v += scale * normal(rng);
    p.D += scale * normal(rng);
    if (spectral_radius(p.A, p.d) < 1.0) return p;
  }
  throw LdsGenerationError("lds: could not draw a stable perturbed initialization");
}

LdsModel::LdsModel(std::shared_ptr<const LdsInstance> inst, double L)
    : inst_(std::move(inst)), L_(L) {
  if (!inst_) throw std::invalid_argument("lds: null instance");
  if (!(L > 0.0)) throw std::invalid_argument("lds: L must be positive");
  d_ = inst_->truth.d;
}

double LdsModel::value(std::size_t i, std::span<const double> x) const {
  const LdsModelParams p =
      LdsModelParams::from_vector(Vector(std::vector<double>(x.begin(), x.end())), d_);
  return sequence_loss(*inst_, p, inst_->truth.B, i, nullptr);
}

double LdsModel::value_gradient(std::size_t i, std::span<const double> x,
                                std::span<double> grad) const {
  const LdsModelParams p =
      LdsModelParams::from_vector(Vector(std::vector<double>(x.begin(), x.end())), d_);
  std::fill(grad.begin(), grad.end(), 0.0);
  return sequence_loss(*inst_, p, inst_->truth.B, i, grad.data());
}

}  // namespace quasar
