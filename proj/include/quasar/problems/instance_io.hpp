#pragma once

#include <string>
#include <variant>

#include "quasar/problems/glm.hpp"
#include "quasar/problems/lds.hpp"
#include "quasar/problems/piecewise.hpp"

namespace quasar {

using ProblemInstance = std::variant<LdsInstance, GlmInstance, PiecewiseInstance>;

std::string instance_kind(const ProblemInstance& inst);

// Self-describing JSON document; doubles round-trip exactly.
std::string serialize_instance(const ProblemInstance& inst);
ProblemInstance parse_instance(const std::string& text);

// Writes through a temporary file and a rename.
void save_instance(const std::string& path, const ProblemInstance& inst);
ProblemInstance load_instance(const std::string& path);

}  // namespace quasar
