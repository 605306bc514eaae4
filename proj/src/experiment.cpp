#include "quasar/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "quasar/errors.hpp"
#include "quasar/linesearch.hpp"
#include "quasar/problems/csv.hpp"
#include "quasar/problems/glm.hpp"
#include "quasar/problems/instance_io.hpp"
#include "quasar/problems/lds.hpp"
#include "quasar/problems/piecewise.hpp"
#include "quasar/problems/quadratic.hpp"

namespace quasar {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string where(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

double to_double(const std::string& section, const std::string& key, const std::string& v) {
  double out = 0.0;
  const std::string s = trim(v);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(out)) {
    throw ConfigError(where(section, key) + ": expected a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_uint(const std::string& section, const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const std::string s = trim(v);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(where(section, key) + ": expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& section, const std::string& key, const std::string& v) {
  std::string s = trim(v);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(where(section, key) + ": expected a boolean, got '" + v + "'");
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

// Typed field bindings shared by the reader and the writer.
template <class S>
struct Binding {
  std::string key;
  std::function<void(S&, const std::string& section, const std::string& value)> read;
  std::function<std::string(const S&)> write;
};

template <class S>
Binding<S> field_binding(std::string key, double S::*m) {
  return {key, [key, m](S& s, const std::string& sec, const std::string& v) { s.*m = to_double(sec, key, v); },
          [m](const S& s) { return format_double(s.*m); }};
}
template <class S>
Binding<S> field_binding(std::string key, std::size_t S::*m) {
  return {key,
          [key, m](S& s, const std::string& sec, const std::string& v) {
            s.*m = static_cast<std::size_t>(to_uint(sec, key, v));
          },
          [m](const S& s) { return std::to_string(s.*m); }};
}
template <class S>
Binding<S> field_binding(std::string key, std::uint64_t S::*m) requires(!std::is_same_v<std::uint64_t, std::size_t>) {
  return {key, [key, m](S& s, const std::string& sec, const std::string& v) { s.*m = to_uint(sec, key, v); },
          [m](const S& s) { return std::to_string(s.*m); }};
}
template <class S>
Binding<S> field_binding(std::string key, bool S::*m) {
  return {key, [key, m](S& s, const std::string& sec, const std::string& v) { s.*m = to_bool(sec, key, v); },
          [m](const S& s) { return fmt_bool(s.*m); }};
}
template <class S>
Binding<S> field_binding(std::string key, std::string S::*m) {
  return {key, [m](S& s, const std::string&, const std::string& v) { s.*m = trim(v); },
          [m](const S& s) { return s.*m; }};
}

const std::vector<Binding<ProblemSpec>>& problem_bindings() {
  static const std::vector<Binding<ProblemSpec>> b = {
      field_binding("kind", &ProblemSpec::kind),         field_binding("n", &ProblemSpec::n),
      field_binding("d", &ProblemSpec::d),               field_binding("gamma", &ProblemSpec::gamma),
      field_binding("mu", &ProblemSpec::mu),             field_binding("seed", &ProblemSpec::seed),
      field_binding("label_noise", &ProblemSpec::label_noise), field_binding("link", &ProblemSpec::link),
      field_binding("N", &ProblemSpec::N),               field_binding("T", &ProblemSpec::T),
      field_binding("noise", &ProblemSpec::noise),       field_binding("path", &ProblemSpec::path),
      field_binding("label_column", &ProblemSpec::label_column),
      field_binding("normalize", &ProblemSpec::normalize), field_binding("L", &ProblemSpec::L),
      field_binding("init_scale", &ProblemSpec::init_scale), field_binding("init_seed", &ProblemSpec::init_seed),
  };
  return b;
}

const std::vector<Binding<MethodSettings>>& method_bindings() {
  static const std::vector<Binding<MethodSettings>> b = {
      field_binding("gamma", &MethodSettings::gamma),
      field_binding("mu", &MethodSettings::mu),
      field_binding("L", &MethodSettings::L),
      field_binding("eps", &MethodSettings::eps),
      field_binding("horizon", &MethodSettings::horizon),
      field_binding("q", &MethodSettings::q),
      field_binding("p", &MethodSettings::p),
      field_binding("sigma", &MethodSettings::sigma),
      field_binding("R", &MethodSettings::R),
      field_binding("sgd_stepsize", &MethodSettings::sgd_stepsize),
      field_binding("rho_sgc", &MethodSettings::rho_sgc),
      field_binding("restart", &MethodSettings::restart),
      field_binding("max_stages", &MethodSettings::max_stages),
      field_binding("stage_horizon", &MethodSettings::stage_horizon),
      field_binding("qasgd_switch", &MethodSettings::qasgd_switch),
      field_binding("record_every", &MethodSettings::record_every),
  };
  return b;
}

const std::vector<Binding<CheckSpec>>& check_bindings() {
  static const std::vector<Binding<CheckSpec>> b = {
      field_binding("samples", &CheckSpec::samples),     field_binding("radius", &CheckSpec::radius),
      field_binding("gamma", &CheckSpec::gamma),         field_binding("mu", &CheckSpec::mu),
      field_binding("sigma", &CheckSpec::sigma),         field_binding("pairs", &CheckSpec::pairs),
      field_binding("fd_points", &CheckSpec::fd_points), field_binding("seed", &CheckSpec::seed),
  };
  return b;
}

template <class S>
void apply(S& s, const std::vector<Binding<S>>& bindings, const std::string& section,
           const pt::ptree& tree, const std::set<std::string>& extra = {}) {
  for (const auto& [key, node] : tree) {
    if (extra.count(key)) continue;
    const auto it = std::find_if(bindings.begin(), bindings.end(),
                                 [&](const Binding<S>& b) { return b.key == key; });
    if (it == bindings.end()) throw ConfigError(where(section, key) + ": unknown key");
    it->read(s, section, node.data());
  }
}

template <class S>
void emit(std::ostream& os, const std::string& section, const S& s,
          const std::vector<Binding<S>>& bindings) {
  os << "[" << section << "]\n";
  for (const auto& b : bindings) os << b.key << " = " << b.write(s) << "\n";
  os << "\n";
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  std::set<std::string> known{"problem", "experiment", "check", "defaults"};
  if (auto p = tree.get_child_optional("problem")) apply(cfg.problem, problem_bindings(), "problem", *p);
  for (const auto& [key, node] : tree) {
    if (node.empty() && !node.data().empty()) {
      throw ConfigError("config: key '" + key + "' outside of any section");
    }
  }

  cfg.check.gamma = cfg.problem.gamma;
  cfg.check.mu = cfg.problem.mu;
  std::vector<std::string> method_names;
  if (auto e = tree.get_child_optional("experiment")) {
    for (const auto& [key, node] : *e) {
      const std::string v = node.data();
      if (key == "methods") {
        method_names = split_list(v);
      } else if (key == "seeds") {
        cfg.seeds.clear();
        for (const auto& s : split_list(v)) cfg.seeds.push_back(to_uint("experiment", key, s));
      } else if (key == "output") {
        cfg.output = trim(v);
      } else if (key == "workers") {
        cfg.workers = static_cast<std::size_t>(to_uint("experiment", key, v));
      } else {
        throw ConfigError(where("experiment", key) + ": unknown key");
      }
    }
  }
  if (auto c = tree.get_child_optional("check")) {
    apply(cfg.check, check_bindings(), "check", *c, {"batches"});
    if (auto b = c->get_optional<std::string>("batches")) {
      cfg.check.batches.clear();
      for (const auto& s : split_list(*b)) {
        cfg.check.batches.push_back(static_cast<std::size_t>(to_uint("check", "batches", s)));
      }
    }
  }

  MethodSettings base;
  base.gamma = cfg.problem.gamma;
  base.mu = cfg.problem.mu;
  if (auto d = tree.get_child_optional("defaults")) apply(base, method_bindings(), "defaults", *d);

  std::map<Method, const pt::ptree*> sections;
  for (const auto& [key, node] : tree) {
    if (known.count(key)) continue;
    Method m;
    try {
      m = parse_method(key);
    } catch (const ConfigError&) {
      throw ConfigError("config: unknown section [" + key + "]");
    }
    sections[m] = &node;
  }
  std::set<Method> listed;
  for (const auto& name : method_names) {
    const Method m = parse_method(name);
    if (!listed.insert(m).second) throw ConfigError("config: method '" + name + "' listed twice");
    MethodSettings s = base;
    s.method = m;
    if (auto it = sections.find(m); it != sections.end()) {
      apply(s, method_bindings(), method_name(m), *it->second);
    }
    cfg.methods.push_back(s);
  }
  for (const auto& [m, node] : sections) {
    if (!listed.count(m)) {
      throw ConfigError("config: section [" + method_name(m) + "] names a method that is not listed");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string write_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  emit(os, "problem", cfg.problem, problem_bindings());
  std::vector<std::string> names;
  for (const auto& m : cfg.methods) names.push_back(method_name(m.method));
  std::vector<std::string> seeds;
  for (auto s : cfg.seeds) seeds.push_back(std::to_string(s));
  os << "[experiment]\n"
     << "methods = " << join(names) << "\n"
     << "seeds = " << join(seeds) << "\n"
     << "output = " << cfg.output << "\n"
     << "workers = " << cfg.workers << "\n\n";
  emit(os, "check", cfg.check, check_bindings());
  std::vector<std::string> batches;
  for (auto b : cfg.check.batches) batches.push_back(std::to_string(b));
  // Append the list-valued key to the check section written above.
  std::string text = os.str();
  const std::string marker = "[check]\n";
  const auto at = text.find(marker);
  text.insert(at + marker.size(), "batches = " + join(batches) + "\n");
  std::ostringstream rest;
  for (const auto& m : cfg.methods) emit(rest, method_name(m.method), m, method_bindings());
  return text + rest.str();
}

namespace {

Vector random_start(std::size_t d, double radius, std::uint64_t seed) {
  Sampler s(seed);
  Vector v(d);
  for (std::size_t j = 0; j < d; ++j) v[j] = s.normal();
  const double nrm = norm(v);
  if (nrm > 0.0) v *= radius / nrm;
  return v;
}

BuiltProblem from_piecewise(const PiecewiseInstance& inst, const ProblemSpec& spec) {
  BuiltProblem out;
  auto model = piecewise_objective(inst, spec.normalize);
  out.model = model;
  out.y0 = random_start(inst.d, spec.init_scale, spec.init_seed);
  const bool noisy = std::any_of(inst.offsets.begin(), inst.offsets.end(),
                                 [](double o) { return o != 0.0; });
  if (!noisy) {
    out.x_star = Vector(inst.d);
    out.f_star = 0.0;
    out.interpolating = true;
  }
  return out;
}

BuiltProblem from_glm(const GlmInstance& inst, const ProblemSpec& spec) {
  BuiltProblem out;
  out.model = std::make_shared<GlmModel>(inst);
  out.y0 = random_start(inst.d, spec.init_scale, spec.init_seed);
  out.x_star = inst.w_star;
  out.interpolating = true;
  return out;
}

BuiltProblem from_lds(const LdsInstance& inst, const ProblemSpec& spec) {
  BuiltProblem out;
  auto shared = std::make_shared<const LdsInstance>(inst);
  out.model = std::make_shared<LdsModel>(shared, spec.L > 0.0 ? spec.L : 1.0);
  out.y0 = perturbed_init(inst, spec.init_scale, spec.init_seed).to_vector();
  if (inst.noise_std == 0.0) {
    out.interpolating = true;
  }
  out.gamma_known = false;
  return out;
}

}  // namespace

BuiltProblem build_problem(const ProblemSpec& spec) {
  BuiltProblem out;
  const std::string& k = spec.kind;
  if (k == "piecewise") {
    out = from_piecewise(generate_piecewise(spec.n, spec.d, spec.gamma, spec.mu, spec.seed,
                                            spec.label_noise),
                         spec);
  } else if (k == "glm") {
    out = from_glm(generate_glm(spec.n, spec.d, parse_link(spec.link), spec.seed), spec);
  } else if (k == "lds") {
    out = from_lds(generate_lds(spec.N, spec.d, spec.T, spec.noise, spec.seed), spec);
  } else if (k == "quadratic") {
    out.model = std::make_shared<SeparableQuadratic>(SeparableQuadratic::isotropic(spec.d));
    out.y0 = random_start(spec.d, spec.init_scale, spec.init_seed);
    out.x_star = Vector(spec.d);
    out.interpolating = true;
  } else if (k == "csv") {
    const CsvDataset data = load_csv(spec.path, spec.label_column);
    PiecewiseInstance inst;
    inst.n = data.rows;
    inst.d = data.cols;
    inst.a = data.features;
    inst.b = data.labels;
    inst.gamma = spec.gamma;
    inst.mu = spec.mu;
    inst.offsets.assign(inst.n, 0.0);
    out = from_piecewise(inst, spec);
  } else if (k == "instance") {
    const ProblemInstance inst = load_instance(spec.path);
    if (const auto* p = std::get_if<PiecewiseInstance>(&inst)) out = from_piecewise(*p, spec);
    if (const auto* g = std::get_if<GlmInstance>(&inst)) out = from_glm(*g, spec);
    if (const auto* l = std::get_if<LdsInstance>(&inst)) out = from_lds(*l, spec);
  } else {
    throw ConfigError("[problem] kind: unknown problem kind '" + k + "'");
  }
  out.L = spec.L > 0.0 ? spec.L : out.model->smoothness();
  return out;
}

RunConfig make_run_config(const MethodSettings& m, const BuiltProblem& p, std::uint64_t seed) {
  RunConfig c;
  c.method = m.method;
  c.qp = QuasarParams{m.gamma, m.mu, 1.0, m.L > 0.0 ? m.L : p.L};
  c.eps = m.eps;
  c.horizon = m.horizon;
  c.q = m.q;
  c.p = m.p;
  c.seed = seed;
  c.sigma = m.sigma;
  if (m.R > 0.0) c.R = m.R;
  c.sgd_stepsize = m.sgd_stepsize;
  c.restart_heuristic = m.restart;
  c.x_star = p.x_star;
  c.f_star = p.f_star;
  c.energy_tracking = p.x_star.has_value();
  c.max_stages = m.max_stages;
  c.stage_horizon = m.stage_horizon;
  if (m.qasgd_switch > 0) c.qasgd_switch = m.qasgd_switch;
  c.rho_sgc = m.rho_sgc;
  c.record_every = std::max<std::size_t>(m.record_every, 1);
  return c;
}

RunOutcome execute_run(const BuiltProblem& p, const MethodSettings& m, std::uint64_t seed) {
  RunOutcome out;
  out.method = m.method;
  out.seed = seed;
  FiniteSumObjective f(p.model);
  const RunConfig cfg = make_run_config(m, p, seed);
  f.set_smoothness(cfg.qp.L);
  try {
    RunResult r = run_method(f, p.y0, cfg);
    out.trace = std::move(r.trace);
  } catch (const DivergenceError& e) {
    out.trace = e.trace();
    out.status = "diverged";
    out.message = e.what();
  } catch (const SearchFailure& e) {
    out.status = "search-failure";
    out.message = e.what();
  } catch (const LdsDivergence& e) {
    out.status = "diverged";
    out.message = e.what();
  }
  out.trace.status = out.status;
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename onto '" + path + "'");
  }
}

namespace {

std::uint64_t total_evals(const TraceRow& r) { return r.fn_evals + r.grad_evals; }

}  // namespace

std::string summary_csv(const std::vector<RunOutcome>& runs, const ExperimentConfig& cfg,
                        double f_star) {
  std::ostringstream os;
  os << "method,seeds,ok_runs,final_gap_mean,final_gap_min,final_gap_max,evals_mean,"
        "iterations_mean,status\n";
  for (const auto& m : cfg.methods) {
    std::vector<const RunOutcome*> mine;
    for (const auto& r : runs) {
      if (r.method == m.method) mine.push_back(&r);
    }
    double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
    double evals = 0.0, iters = 0.0;
    std::size_t ok = 0;
    std::set<std::string> statuses;
    for (const RunOutcome* r : mine) {
      statuses.insert(r->status);
      if (r->status == "ok") ++ok;
      const double gap = (r->trace.rows.empty() ? r->trace.initial_fval : r->trace.rows.back().fval) - f_star;
      sum += gap;
      lo = std::min(lo, gap);
      hi = std::max(hi, gap);
      if (!r->trace.rows.empty()) {
        evals += static_cast<double>(total_evals(r->trace.rows.back()));
        iters += static_cast<double>(r->trace.rows.size());
      }
    }
    const double cnt = static_cast<double>(std::max<std::size_t>(mine.size(), 1));
    std::vector<std::string> st(statuses.begin(), statuses.end());
    std::string status;
    for (std::size_t i = 0; i < st.size(); ++i) status += (i ? "|" : "") + st[i];
    os << method_name(m.method) << ',' << mine.size() << ',' << ok << ',' << format_double(sum / cnt)
       << ',' << format_double(lo) << ',' << format_double(hi) << ',' << format_double(evals / cnt)
       << ',' << format_double(iters / cnt) << ',' << status << '\n';
  }
  return os.str();
}

std::string band_csv(const std::vector<const RunOutcome*>& runs, double f_star) {
  std::ostringstream os;
  os << "row,k,gap_mean,gap_min,gap_max,evals_mean\n";
  if (runs.empty()) return os.str();
  std::size_t len = std::numeric_limits<std::size_t>::max();
  for (const RunOutcome* r : runs) len = std::min(len, r->trace.rows.size());
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo, ev = 0.0;
    for (const RunOutcome* r : runs) {
      const TraceRow& row = r->trace.rows[i];
      const double gap = row.fval - f_star;
      sum += gap;
      lo = std::min(lo, gap);
      hi = std::max(hi, gap);
      ev += static_cast<double>(total_evals(row));
    }
    const double cnt = static_cast<double>(runs.size());
    os << i + 1 << ',' << runs.front()->trace.rows[i].k << ',' << format_double(sum / cnt) << ','
       << format_double(lo) << ',' << format_double(hi) << ',' << format_double(ev / cnt) << '\n';
  }
  return os.str();
}

std::string plot_script(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "# gnuplot -p plot.gp\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set logscale y\n"
     << "set terminal pngcairo size 1200,480\n"
     << "set output 'convergence.png'\n"
     << "set multiplot layout 1,2\n";
  auto series = [&](const std::string& xcol, const std::string& xlabel) {
    os << "set xlabel '" << xlabel << "'\nset ylabel 'f(y) - f*'\nplot \\\n";
    for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
      const std::string name = method_name(cfg.methods[i].method);
      const std::string file = "band_" + name + ".csv";
      os << "  '" << file << "' using " << xcol << ":4:5 with filledcurves fs transparent solid 0.2 notitle, \\\n"
         << "  '" << file << "' using " << xcol << ":3 with lines title '" << name << "'"
         << (i + 1 < cfg.methods.size() ? ", \\\n" : "\n");
    }
  };
  series("1", "iterations");
  series("6", "function and gradient evaluations");
  os << "unset multiplot\n";
  return os.str();
}

std::size_t worker_count(std::size_t configured) {
  std::size_t w = configured;
  if (const char* env = std::getenv("QUASAR_OPT_WORKERS")) {
    const std::string s(env);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) w = w ? std::min(w, v) : v;
  }
  if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
  return w;
}

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

ExperimentConfig load_resolved(const std::string& config_path) {
  ExperimentConfig cfg = load_config(config_path);
  const fs::path base = fs::absolute(config_path).parent_path();
  cfg.output = resolve(base, cfg.output).string();
  if (!cfg.problem.path.empty()) cfg.problem.path = resolve(base, cfg.problem.path).string();
  return cfg;
}

}  // namespace

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  BuiltProblem problem;
  try {
    cfg = load_resolved(config_path);
    if (cfg.methods.empty()) throw ConfigError("[experiment] methods: no methods listed");
    if (cfg.seeds.empty()) throw ConfigError("[experiment] seeds: no seeds listed");
    problem = build_problem(cfg.problem);
    for (const auto& m : cfg.methods) make_run_config(m, problem, 0).validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  struct Job {
    std::size_t method;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    for (auto s : cfg.seeds) jobs.push_back({m, s});
  }
  std::vector<RunOutcome> results(jobs.size());
  std::vector<std::string> failures(jobs.size());
  std::error_code ec;
  fs::create_directories(cfg.output, ec);
  if (ec) {
    err << "error: cannot create output directory '" << cfg.output << "'\n";
    return 1;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      try {
        results[j] = execute_run(problem, cfg.methods[jobs[j].method], jobs[j].seed);
        const std::string name = "trace_" + method_name(results[j].method) + "_seed" +
                                 std::to_string(jobs[j].seed) + ".csv";
        write_file_atomic((fs::path(cfg.output) / name).string(), trace_csv(results[j].trace));
      } catch (const std::exception& e) {
        failures[j] = e.what();
      }
    }
  };
  const std::size_t nw = std::min(worker_count(cfg.workers), jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < nw; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = 0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!failures[j].empty()) {
      err << "error: " << method_name(cfg.methods[jobs[j].method].method) << " seed "
          << jobs[j].seed << ": " << failures[j] << "\n";
      code = 1;
    }
  }
  if (code != 0) return code;
  try {
    const fs::path dir(cfg.output);
    write_file_atomic((dir / "summary.csv").string(), summary_csv(results, cfg, problem.f_star));
    for (const auto& m : cfg.methods) {
      std::vector<const RunOutcome*> mine;
      for (const auto& r : results) {
        if (r.method == m.method) mine.push_back(&r);
      }
      write_file_atomic((dir / ("band_" + method_name(m.method) + ".csv")).string(),
                        band_csv(mine, problem.f_star));
    }
    write_file_atomic((dir / "plot.gp").string(), plot_script(cfg));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  for (const auto& r : results) {
    out << method_name(r.method) << " seed " << r.seed << ": " << r.status;
    if (!r.trace.rows.empty()) out << " final f=" << format_double(r.trace.rows.back().fval);
    out << "\n";
  }
  return 0;
}

std::vector<CheckReport> run_checks(const ExperimentConfig& cfg, const BuiltProblem& p) {
  const CheckSpec& c = cfg.check;
  const ComponentModel& f = *p.model;
  const MirrorMap h = MirrorMap::euclidean();
  std::vector<CheckReport> out;
  const std::size_t d = f.dim();
  const Vector center = p.x_star ? *p.x_star
                                 : (cfg.problem.kind == "lds" || (cfg.problem.kind == "instance" && !p.gamma_known)
                                        ? p.y0
                                        : Vector(d));
  // LDS: the true parameters stand in for x*.
  std::optional<Vector> x_star = p.x_star;
  if (!x_star && !p.gamma_known && p.interpolating) {
    const auto* lds = dynamic_cast<const LdsModel*>(p.model.get());
    if (lds) x_star = LdsModelParams::from_system(lds->instance().truth).to_vector();
  }
  const SampleBall ball{x_star ? *x_star : center, c.radius};
  const bool measured_only = !p.gamma_known;

  if (x_star) {
    CheckReport q = check_quasar(f, *x_star, c.gamma, c.mu, h, ball, c.samples, c.seed);
    q.gating = !measured_only && p.interpolating;
    out.push_back(q);
    CheckReport g = check_quasar_growth(f, *x_star, c.gamma, c.mu, h, ball, c.samples, c.seed + 1);
    if (measured_only) g.gating = false;
    out.push_back(g);
    CheckReport bg = check_bounded_gradient(f, *x_star, c.sigma, c.mu, ball,
                                            std::min<std::size_t>(c.samples, 1000), c.seed + 2);
    if (measured_only) bg.gating = false;
    out.push_back(bg);
  }
  CheckReport bv = check_bounded_variance(f, c.sigma, ball, std::min<std::size_t>(c.samples, 1000),
                                          c.seed + 3);
  if (measured_only) bv.gating = false;
  out.push_back(bv);

  if (x_star && p.interpolating) {
    Sampler s(c.seed + 4);
    std::vector<VariancePair> pairs;
    for (std::size_t k = 0; k < c.pairs; ++k) {
      Vector x = sample_in_ball(ball, s);
      Vector a = sample_in_ball(ball, s);
      pairs.push_back({std::move(x), std::move(a)});
    }
    Vector g;
    const double f_star = mean_value_grad(f, *x_star, g);
    for (std::size_t b : c.batches) {
      if (b < 1 || b > f.size()) continue;
      CheckReport vr = check_variance_bound(f, f_star, p.L, pairs, b);
      if (measured_only) vr.gating = false;
      out.push_back(vr);
    }
  }

  CheckReport kappa = check_kappa(QuasarParams{c.gamma, c.mu, 1.0, p.L});
  out.push_back(kappa);

  Sampler s(c.seed + 5);
  std::vector<Vector> smooth_pts, knot_pts;
  const auto* pw = dynamic_cast<const PiecewiseModel*>(p.model.get());
  const SampleBall fd_ball{ball.center, measured_only ? 0.1 : std::min(c.radius, 3.0)};
  for (std::size_t k = 0; k < c.fd_points; ++k) {
    Vector x = sample_in_ball(fd_ball, s);
    if (pw && pw->knot_distance(x.span()) < 1e-3) {
      knot_pts.push_back(std::move(x));
    } else {
      smooth_pts.push_back(std::move(x));
    }
  }
  out.push_back(finite_diff_check(mean_oracle(f), smooth_pts, 1e-6, 1e-5, "finite_diff"));
  if (!knot_pts.empty()) {
    out.push_back(finite_diff_check(mean_oracle(f), knot_pts, 1e-6, 1e-4, "finite_diff_knots"));
  }
  return out;
}

int cmd_check(const std::string& config_path, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  BuiltProblem problem;
  try {
    cfg = load_resolved(config_path);
    problem = build_problem(cfg.problem);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  std::vector<CheckReport> reports;
  try {
    reports = run_checks(cfg, problem);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  bool ok = true;
  for (const auto& r : reports) {
    out << r.block() << "\n";
    if (r.gating && r.applicable && !r.pass) ok = false;
  }
  for (const auto& r : reports) out << r.summary_line() << "\n";
  return ok ? 0 : 1;
}

}  // namespace quasar
