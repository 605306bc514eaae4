#include "quasar/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "quasar/errors.hpp"
#include "quasar/linesearch.hpp"

namespace quasar {

std::string method_name(Method m) {
  switch (m) {
    case Method::kGD: return "GD";
    case Method::kSGD: return "SGD";
    case Method::kQAGD: return "QAGD";
    case Method::kQASGD: return "QASGD";
    case Method::kQASVRG_I: return "QASVRG-I";
    case Method::kQASVRG_II: return "QASVRG-II";
    case Method::kQASGD_SGC: return "QASGD-SGC";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string s(name);
  for (char& ch : s) {
    if (ch == '_') ch = '-';
    ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  }
  for (Method m : {Method::kGD, Method::kSGD, Method::kQAGD, Method::kQASGD, Method::kQASVRG_I,
                   Method::kQASVRG_II, Method::kQASGD_SGC}) {
    if (s == method_name(m)) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  qp.validate();
  if (mirror && std::abs(mirror->mu_bar() - qp.mu_bar) > 1e-12 * qp.mu_bar) {
    throw ConfigError("mu_bar does not match the mirror map");
  }
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (record_every < 1) throw ConfigError("record_every must be positive");
  if (!(sgd_stepsize >= 0.0)) throw ConfigError("sgd_stepsize must be nonnegative");
  if (method == Method::kQASVRG_I || method == Method::kQASVRG_II) {
    if (!(q > 0.0 && q <= 0.25)) throw ConfigError("q must lie in (0, 1/4]");
    const double pe = effective_p();
    if (!(pe > 0.0 && pe <= qp.gamma * qp.mu_bar / 16.0 * (1.0 + 1e-12))) {
      throw ConfigError("p must lie in (0, gamma mu_bar / 16]");
    }
    if (method == Method::kQASVRG_I && !(qp.mu > 0.0)) {
      throw ConfigError("QASVRG-I requires mu > 0");
    }
  }
  if (method == Method::kQASGD_SGC && !(rho_sgc >= 1.0)) throw ConfigError("rho_sgc must be >= 1");
  if (method == Method::kQASGD && !(sigma >= 0.0)) throw ConfigError("sigma must be nonnegative");
  if (energy_tracking && !x_star) throw ConfigError("energy tracking needs a known minimizer");
}

const MirrorMap& RunConfig::mirror_map() const {
  static const MirrorMap kEuclidean = MirrorMap::euclidean();
  return mirror ? *mirror : kEuclidean;
}

double RunConfig::effective_p() const {
  return p > 0.0 ? p : qp.gamma * qp.mu_bar / 16.0;
}

namespace {

// Restriction of the sampled function to the search segment, with a one-entry
// gradient cache so the gradient at the accepted point is not paid twice.
class SampledSegment : public SegmentOracle {
 public:
  SampledSegment(FiniteSumObjective& f, const std::vector<std::size_t>* batch)
      : f_(f), batch_(batch) {}

  double value(const Vector& x) override {
    return batch_ ? f_.batch_value(*batch_, x) : f_.value(x);
  }
  Vector gradient(const Vector& x) override {
    if (has_cache_ && cache_point_ == x) return cache_grad_;
    cache_grad_ = batch_ ? f_.batch_gradient(*batch_, x) : f_.gradient(x);
    cache_point_ = x;
    has_cache_ = true;
    return cache_grad_;
  }

 private:
  FiniteSumObjective& f_;
  const std::vector<std::size_t>* batch_;
  bool has_cache_ = false;
  Vector cache_point_;
  Vector cache_grad_;
};

bool diverged(double fval, double f0) {
  if (!std::isfinite(fval)) return true;
  return f0 > 0.0 && fval > 1e12 * f0;
}

double energy_at(const RunConfig& cfg, double A, double B, double fval, const Vector& z) {
  return A * (fval - cfg.f_star) + B * bregman(cfg.mirror_map(), *cfg.x_star, z);
}

struct LoopState {
  Trace trace;
  Sampler sampler;
  std::size_t stage = 0;
};

// One pass of the accelerated iteration appending to state.trace. Returns the last y.
Vector run_inner(FiniteSumObjective& f, Estimator est, const Schedule& schedule,
                 const Vector& y0, std::size_t horizon, const RunConfig& cfg,
                 const SvrgAnchor* anchor, LoopState& st, bool restart) {
  if (est == Estimator::kSvrg && !anchor) {
    throw std::invalid_argument("SVRG estimator needs an anchor");
  }
  const MirrorMap& h = cfg.mirror_map();
  const bool track = cfg.energy_tracking && cfg.x_star.has_value();
  Vector y = y0;
  Vector z = y0;
  const double f0 = st.trace.initial_fval;
  for (std::size_t k = 0; k < horizon; ++k) {
    const StepParams th = schedule(k);
    if (track && k == 0 && st.stage == 0 && !st.trace.initial_energy) {
      st.trace.initial_energy = energy_at(cfg, th.A_k, th.B_k, st.trace.initial_fval, z);
    }
    std::vector<std::size_t> batch;
    switch (est) {
      case Estimator::kFull: break;
      case Estimator::kStochastic: batch = {st.sampler.index(f.n())}; break;
      case Estimator::kSvrg: {
        if (!th.batch_size) throw std::invalid_argument("SVRG schedule must carry a batch size");
        batch = sample_batch(f.n(), *th.batch_size, st.sampler);
        break;
      }
    }
    SampledSegment seg(f, est == Estimator::kFull ? nullptr : &batch);
    BisearchSpec spec;
    spec.b = th.b;
    spec.c = th.c;
    spec.eps_tilde = th.eps_tilde;
    spec.L = f.smoothness();
    spec.max_iters = cfg.bisearch_max_iters;
    BisearchResult bs;
    try {
      bs = bisearch(seg, y, z, spec);
    } catch (const SearchFailure&) {
      st.trace.status = "search-failure";
      throw;
    }
    const Vector x = interpolate(z, y, bs.tau);
    Vector grad = seg.gradient(x);
    if (est == Estimator::kSvrg) grad = svrg_correct(f, std::move(grad), *anchor, batch);
    Vector z_next = mirror_step(h, z, x, grad, th.alpha, th.beta);
    Vector y_next = gd_step(x, grad, th.rho);
    const bool stop = restart && dot(grad, y_next - y) > 0.0;
    y = std::move(y_next);
    z = std::move(z_next);

    const double fval = f.peek_value(y);
    const bool last = stop || k + 1 == horizon;
    const bool bad = diverged(fval, f0);
    if (bad || last || (k + 1) % cfg.record_every == 0) {
      TraceRow row;
      row.stage = st.stage;
      row.k = k + 1;
      row.fval = fval;
      row.tau = bs.tau;
      row.batch = est == Estimator::kFull ? f.n() : batch.size();
      row.fn_evals = f.counts().fn;
      row.grad_evals = f.counts().grad;
      if (track && !bad) row.energy = energy_at(cfg, th.A_next, th.B_next, fval, z);
      row.branch = bs.branch;
      row.iterate_norm = norm(y);
      st.trace.rows.push_back(row);
    }
    if (bad) {
      st.trace.status = "diverged";
      throw DivergenceError("objective diverged at stage " + std::to_string(st.stage) +
                                " iteration " + std::to_string(k + 1),
                            st.trace);
    }
    if (stop) {
      st.trace.notes.push_back("restart at stage " + std::to_string(st.stage) + " iteration " +
                               std::to_string(k + 1));
      break;
    }
  }
  return y;
}

LoopState begin(FiniteSumObjective& f, const Vector& y0, const RunConfig& cfg) {
  if (y0.size() != f.dim()) throw std::invalid_argument("initial point has wrong dimension");
  LoopState st{Trace{}, Sampler(cfg.seed), 0};
  st.trace.initial_fval = f.peek_value(y0);
  return st;
}

}  // namespace

RunResult accelerated_loop(FiniteSumObjective& f, Estimator est, const Schedule& schedule,
                           const Vector& y0, std::size_t horizon, const RunConfig& cfg,
                           const SvrgAnchor* anchor) {
  LoopState st = begin(f, y0, cfg);
  Vector y = run_inner(f, est, schedule, y0, horizon, cfg, anchor, st, cfg.restart_heuristic);
  return {std::move(y), std::move(st.trace)};
}

RunResult multi_stage_qasvrg(FiniteSumObjective& f, SvrgOption option, const Vector& y0,
                             const RunConfig& cfg) {
  LoopState st = begin(f, y0, cfg);
  const QuasarParams& qp = cfg.qp;
  const double p = cfg.effective_p();
  const bool opt2 = option == SvrgOption::kOptII || qp.mu == 0.0;
  const double contraction =
      opt2 ? cfg.q + 8.0 * p / (qp.gamma * qp.mu_bar) + cfg.eps : cfg.q + 0.5;
  std::size_t stages = cfg.max_stages;
  if (contraction < 1.0) {
    const double predicted = std::ceil(std::log(1.0 / cfg.eps) / std::abs(std::log(contraction)));
    stages = std::min<std::size_t>(stages, static_cast<std::size_t>(std::max(predicted, 1.0)));
  }
  Vector y = y0;
  const double target = cfg.eps * (st.trace.initial_fval - cfg.f_star) + cfg.f_star;
  double prev = std::numeric_limits<double>::infinity();
  std::string reason = "stage budget exhausted";
  bool broke = true;
  for (std::size_t s = 0; s < stages; ++s) {
    st.stage = s;
    const SvrgAnchor anchor = make_anchor(f, y);
    const double f_ys = anchor.value;
    st.trace.stage_fvals.push_back(f_ys);
    if (s > 0 && f_ys <= target) {
      reason = "target reached";
      break;
    }
    if (!(f_ys < prev)) {
      reason = "objective stopped decreasing";
      break;
    }
    prev = f_ys;
    const double gap = f_ys - cfg.f_star;
    if (!(gap > 0.0)) {
      reason = "minimum reached";
      break;
    }
    std::size_t t = cfg.stage_horizon;
    if (!opt2) {
      t = stage_length(option, qp, f.n(), cfg.q, 0.0, gap);
    } else if (cfg.x_star) {
      t = stage_length(option, qp, f.n(), cfg.q, bregman(cfg.mirror_map(), *cfg.x_star, y), gap);
    }
    const Schedule schedule = [&](std::size_t k) {
      return params_qasvrg(k, option, qp, f.n(), p, gap, cfg.eps);
    };
    y = run_inner(f, Estimator::kSvrg, schedule, y, t, cfg, &anchor, st, cfg.restart_heuristic);
    broke = s + 1 < stages;
  }
  if (!broke || stages == 0) st.trace.stage_fvals.push_back(f.peek_value(y));
  st.trace.notes.push_back("stopped: " + reason);
  return {std::move(y), std::move(st.trace)};
}

RunResult run_qasgd(FiniteSumObjective& f, const Vector& y0, const RunConfig& cfg) {
  LoopState st = begin(f, y0, cfg);
  const QuasarParams& qp = cfg.qp;
  const double R = cfg.R ? *cfg.R
                         : qasgd_surrogate_R(cfg.x_star ? norm(y0 - *cfg.x_star) : norm(y0));
  const std::size_t t = std::max<std::size_t>(cfg.horizon, 1);
  if (qp.mu == 0.0) {
    st.trace.notes.push_back("plain phase eta=" + format_double(qasgd_eta(t, qp, cfg.sigma, R)) +
                             " frozen for horizon " + std::to_string(t));
    const Schedule schedule = [&](std::size_t k) {
      return params_qasgd(k, t, SgdPhase::kPlain, qp, cfg.sigma, R, cfg.eps);
    };
    Vector y = run_inner(f, Estimator::kStochastic, schedule, y0, cfg.horizon, cfg, nullptr, st,
                         false);
    return {std::move(y), std::move(st.trace)};
  }
  const double E0 = (st.trace.initial_fval - cfg.f_star) + qp.mu * R * R;
  const std::size_t k1 =
      std::min(cfg.qasgd_switch.value_or(qasgd_default_switch(qp, cfg.sigma, E0, t)), t);
  st.trace.notes.push_back("step1 length " + std::to_string(k1));
  const Schedule step1 = [&](std::size_t k) {
    return params_qasgd(k, t, SgdPhase::kStep1, qp, cfg.sigma, R, cfg.eps);
  };
  Vector y = run_inner(f, Estimator::kStochastic, step1, y0, k1, cfg, nullptr, st, false);
  st.stage = 1;
  const Schedule step2 = [&](std::size_t k) {
    return params_qasgd(k, t, SgdPhase::kStep2, qp, cfg.sigma, R, cfg.eps);
  };
  y = run_inner(f, Estimator::kStochastic, step2, y, t - k1, cfg, nullptr, st, false);
  return {std::move(y), std::move(st.trace)};
}

namespace {

RunResult plain_descent(FiniteSumObjective& f, const Vector& y0, double stepsize,
                        std::size_t horizon, std::optional<std::uint64_t> seed,
                        std::size_t record_every) {
  if (!(stepsize > 0.0)) throw std::invalid_argument("stepsize must be positive");
  if (y0.size() != f.dim()) throw std::invalid_argument("initial point has wrong dimension");
  Trace trace;
  trace.initial_fval = f.peek_value(y0);
  Sampler sampler(seed.value_or(0));
  Vector x = y0;
  for (std::size_t k = 0; k < horizon; ++k) {
    Vector g = seed ? f.component_grad(sampler.index(f.n()), x) : f.gradient(x);
    axpy(-stepsize, g, x);
    const double fval = f.peek_value(x);
    const bool bad = diverged(fval, trace.initial_fval);
    if (bad || k + 1 == horizon || (k + 1) % record_every == 0) {
      TraceRow row;
      row.k = k + 1;
      row.fval = fval;
      row.batch = seed ? 1 : f.n();
      row.fn_evals = f.counts().fn;
      row.grad_evals = f.counts().grad;
      row.iterate_norm = norm(x);
      trace.rows.push_back(row);
    }
    if (bad) {
      trace.status = "diverged";
      throw DivergenceError("objective diverged at iteration " + std::to_string(k + 1), trace);
    }
  }
  return {std::move(x), std::move(trace)};
}

}  // namespace

RunResult gd_baseline(FiniteSumObjective& f, const Vector& y0, double stepsize,
                      std::size_t horizon) {
  return plain_descent(f, y0, stepsize, horizon, std::nullopt, 1);
}

RunResult sgd_baseline(FiniteSumObjective& f, const Vector& y0, double stepsize,
                       std::size_t horizon, std::uint64_t seed) {
  return plain_descent(f, y0, stepsize, horizon, seed, 1);
}

RunResult run_method(FiniteSumObjective& f, const Vector& y0, const RunConfig& cfg) {
  cfg.validate();
  const double step = cfg.sgd_stepsize > 0.0 ? cfg.sgd_stepsize : 1.0 / f.smoothness();
  switch (cfg.method) {
    case Method::kGD:
      return plain_descent(f, y0, step, cfg.horizon, std::nullopt, cfg.record_every);
    case Method::kSGD:
      return plain_descent(f, y0, step, cfg.horizon, cfg.seed, cfg.record_every);
    case Method::kQAGD:
    case Method::kQASGD_SGC: {
      const double rho = cfg.method == Method::kQAGD ? 1.0 : cfg.rho_sgc;
      const Estimator est =
          cfg.method == Method::kQAGD ? Estimator::kFull : Estimator::kStochastic;
      const Schedule schedule = [&](std::size_t k) {
        return params_qasgd_sgc(k, cfg.qp, rho, cfg.eps);
      };
      return accelerated_loop(f, est, schedule, y0, cfg.horizon, cfg);
    }
    case Method::kQASGD:
      return run_qasgd(f, y0, cfg);
    case Method::kQASVRG_I:
      return multi_stage_qasvrg(f, SvrgOption::kOptI, y0, cfg);
    case Method::kQASVRG_II:
      return multi_stage_qasvrg(f, SvrgOption::kOptII, y0, cfg);
  }
  throw ConfigError("unhandled method");
}

}  // namespace quasar
