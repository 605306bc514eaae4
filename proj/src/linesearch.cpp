#include "quasar/linesearch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quasar {

const char* branch_name(ExitBranch b) {
  switch (b) {
    case ExitBranch::kGuess: return "guess";
    case ExitBranch::kOne: return "one";
    case ExitBranch::kZero: return "zero";
    case ExitBranch::kSearch: return "search";
    case ExitBranch::kNone: break;
  }
  return "none";
}

void BisearchSpec::validate() const {
  if (!(b >= 0.0) || !(c >= 0.0) || !(eps_tilde >= 0.0)) {
    throw std::invalid_argument("bisearch: b, c and eps_tilde must be nonnegative");
  }
  if (b > 0.0 && eps_tilde > 0.0) {
    throw std::invalid_argument("bisearch: b and eps_tilde cannot both be positive");
  }
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("bisearch: L must be positive");
  if (guess && !(*guess >= 0.0 && *guess <= 1.0)) {
    throw std::invalid_argument("bisearch: guess must lie in [0, 1]");
  }
  if (max_iters < 1) throw std::invalid_argument("bisearch: max_iters must be positive");
}

namespace {

struct Restriction {
  SegmentOracle& f;
  const Vector& y;
  const Vector& z;
  Vector dir;
  BisearchResult& out;

  double g(double tau) {
    ++out.fn_evals;
    return f.value(interpolate(z, y, tau));
  }
  double dg(double tau) {
    ++out.grad_evals;
    return dot(f.gradient(interpolate(z, y, tau)), dir);
  }
};

}  // namespace

BisearchResult bisearch(SegmentOracle& f, const Vector& y, const Vector& z,
                        const BisearchSpec& spec) {
  spec.validate();
  require_same_dim(y, z);
  BisearchResult out;
  if (y == z) {
    out.tau = 1.0;
    out.branch = ExitBranch::kOne;
    return out;
  }
  Restriction r{f, y, z, y - z, out};
  const double dist_sq = squared_distance(y, z);
  const double p = spec.b * dist_sq;
  const double c = spec.c;
  const double eps = spec.eps_tilde;

  std::optional<double> g1;
  auto g_one = [&] {
    if (!g1) g1 = r.g(1.0);
    return *g1;
  };

  if (spec.guess) {
    const double t = *spec.guess;
    const double lhs = c * r.g(t) + t * (r.dg(t) - t * p);
    if (lhs <= c * g_one()) {
      out.tau = t;
      out.branch = ExitBranch::kGuess;
      return out;
    }
  }

  const double dg1 = r.dg(1.0);
  if (dg1 <= p + eps) {
    out.tau = 1.0;
    out.branch = ExitBranch::kOne;
    return out;
  }
  if (c == 0.0 || r.g(0.0) <= g_one() + eps / c) {
    out.tau = 0.0;
    out.branch = ExitBranch::kZero;
    return out;
  }

  const double delta = 1.0 - dg1 / (spec.L * dist_sq);
  if (!(delta > 0.0 && delta < 1.0)) {
    throw SearchFailure("bisearch: search interval is empty; L is too small for this segment",
                        0.0);
  }
  out.branch = ExitBranch::kSearch;
  const double rhs = c * g_one() + eps;
  const double g_delta = r.g(delta);
  double lo = 0.0;
  double hi = delta;
  double tau = delta;
  double g_tau = g_delta;
  double best_tau = tau;
  double best_excess = std::numeric_limits<double>::infinity();
  for (;;) {
    const double excess = c * g_tau + tau * (r.dg(tau) - tau * p) - rhs;
    if (excess <= 0.0) break;
    if (excess < best_excess) {
      best_excess = excess;
      best_tau = tau;
    }
    if (out.iterations >= spec.max_iters) {
      throw SearchFailure("bisearch: iteration cap reached; smoothness assumption violated",
                          best_tau);
    }
    ++out.iterations;
    tau = 0.5 * (lo + hi);
    g_tau = r.g(tau);
    if (g_tau <= g_delta) {
      hi = tau;
    } else {
      lo = tau;
    }
  }
  out.tau = tau;
  return out;
}

std::optional<double> bisearch_eval_bound(const BisearchSpec& spec, double dist_sq) {
  const double inf = std::numeric_limits<double>::infinity();
  const double by_b = spec.b > 0.0 ? 2.0 * std::pow(spec.L / spec.b, 3.0) : inf;
  const double by_eps = spec.eps_tilde > 0.0 ? spec.L * dist_sq / (2.0 * spec.eps_tilde) : inf;
  const double m = std::min(by_b, by_eps);
  if (!std::isfinite(m)) return std::nullopt;
  const double arg = (4.0 + spec.c) * m;
  const double lg = arg > 0.0 ? std::max(std::log2(arg), 1.0) : 1.0;
  return 6.0 + 3.0 * std::ceil(lg);
}

double bisearch_residual(SegmentOracle& f, const Vector& y, const Vector& z,
                         const BisearchSpec& spec, double tau) {
  const Vector x = interpolate(z, y, tau);
  const double p = spec.b * squared_distance(y, z);
  const double slope = dot(f.gradient(x), y - z);
  return spec.c * f.value(x) + tau * (slope - tau * p) - spec.c * f.value(y) - spec.eps_tilde;
}

}  // namespace quasar
