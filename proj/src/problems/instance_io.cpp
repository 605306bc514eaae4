#include "quasar/problems/instance_io.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "quasar/errors.hpp"
#include "quasar/problems/csv.hpp"

namespace quasar {

using nlohmann::json;

std::string instance_kind(const ProblemInstance& inst) {
  switch (inst.index()) {
    case 0: return "lds";
    case 1: return "glm";
    default: return "piecewise";
  }
}

namespace {

json to_json(const LdsInstance& x) {
  return json{{"kind", "lds"},
              {"d", x.truth.d},
              {"A", x.truth.A},
              {"B", x.truth.B},
              {"C", x.truth.C},
              {"D", x.truth.D},
              {"N", x.N},
              {"T", x.T},
              {"T1", x.T1},
              {"noise_std", x.noise_std},
              {"seed", x.seed},
              {"inputs", x.inputs},
              {"outputs", x.outputs}};
}

json to_json(const GlmInstance& x) {
  return json{{"kind", "glm"},          {"n", x.n},         {"d", x.d},
              {"link", link_name(x.link)}, {"seed", x.seed}, {"X", x.X},
              {"w_star", x.w_star.coords()}, {"y", x.y}};
}

json to_json(const PiecewiseInstance& x) {
  return json{{"kind", "piecewise"}, {"n", x.n},       {"d", x.d},
              {"gamma", x.gamma},    {"mu", x.mu},     {"seed", x.seed},
              {"a", x.a},            {"b", x.b},       {"offsets", x.offsets}};
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError("instance", std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError("instance", std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string serialize_instance(const ProblemInstance& inst) {
  const json j = std::visit([](const auto& x) { return to_json(x); }, inst);
  return j.dump(1) + "\n";
}

ProblemInstance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("instance", e.what());
  }
  const auto kind = field<std::string>(j, "kind");
  if (kind == "lds") {
    LdsInstance x;
    x.truth.d = field<std::size_t>(j, "d");
    x.truth.A = field<std::vector<double>>(j, "A");
    x.truth.B = field<std::vector<double>>(j, "B");
    x.truth.C = field<std::vector<double>>(j, "C");
    x.truth.D = field<double>(j, "D");
    x.N = field<std::size_t>(j, "N");
    x.T = field<std::size_t>(j, "T");
    x.T1 = field<std::size_t>(j, "T1");
    x.noise_std = field<double>(j, "noise_std");
    x.seed = field<std::uint64_t>(j, "seed");
    x.inputs = field<std::vector<std::vector<double>>>(j, "inputs");
    x.outputs = field<std::vector<std::vector<double>>>(j, "outputs");
    const std::size_t d = x.truth.d;
    if (x.truth.A.size() != d * d || x.truth.B.size() != d || x.truth.C.size() != d ||
        x.inputs.size() != x.N || x.outputs.size() != x.N) {
      throw ParseError("instance", "lds shapes are inconsistent");
    }
    return x;
  }
  if (kind == "glm") {
    GlmInstance x;
    x.n = field<std::size_t>(j, "n");
    x.d = field<std::size_t>(j, "d");
    x.link = parse_link(field<std::string>(j, "link"));
    x.seed = field<std::uint64_t>(j, "seed");
    x.X = field<std::vector<double>>(j, "X");
    x.w_star = Vector(field<std::vector<double>>(j, "w_star"));
    x.y = field<std::vector<double>>(j, "y");
    if (x.X.size() != x.n * x.d || x.w_star.size() != x.d || x.y.size() != x.n) {
      throw ParseError("instance", "glm shapes are inconsistent");
    }
    return x;
  }
  if (kind == "piecewise") {
    PiecewiseInstance x;
    x.n = field<std::size_t>(j, "n");
    x.d = field<std::size_t>(j, "d");
    x.gamma = field<double>(j, "gamma");
    x.mu = field<double>(j, "mu");
    x.seed = field<std::uint64_t>(j, "seed");
    x.a = field<std::vector<double>>(j, "a");
    x.b = field<std::vector<double>>(j, "b");
    x.offsets = field<std::vector<double>>(j, "offsets");
    if (x.a.size() != x.n * x.d || x.b.size() != x.n || x.offsets.size() != x.n) {
      throw ParseError("instance", "piecewise shapes are inconsistent");
    }
    return x;
  }
  throw ParseError("instance", "unknown kind '" + kind + "'");
}

void save_instance(const std::string& path, const ProblemInstance& inst) {
  namespace fs = std::filesystem;
  const std::string text = serialize_instance(inst);
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot rename to '" + path + "': " + ec.message());
  }
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

}  // namespace quasar
