#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quasar/linesearch.hpp"

namespace quasar {

// One record per iteration, describing the state after the update.
struct TraceRow {
  std::size_t stage = 0;
  std::size_t k = 0;
  double fval = 0.0;
  std::optional<double> tau;
  std::size_t batch = 0;
  std::uint64_t fn_evals = 0;
  std::uint64_t grad_evals = 0;
  std::optional<double> energy;
  ExitBranch branch = ExitBranch::kNone;
  double iterate_norm = 0.0;
};

struct Trace {
  std::vector<TraceRow> rows;
  double initial_fval = 0.0;
  std::optional<double> initial_energy;
  // Objective at the start of each stage, followed by the final objective.
  std::vector<double> stage_fvals;
  std::string status = "ok";
  std::vector<std::string> notes;

  bool empty() const noexcept { return rows.empty(); }
};

inline constexpr const char* kTraceHeader =
    "stage,k,fval,tau,batch,fn_evals,grad_evals,energy,branch";

// Shortest round-trip formatting; identical across runs and platforms.
std::string format_double(double v);

void write_trace_csv(std::ostream& out, const Trace& trace);
std::string trace_csv(const Trace& trace);

}  // namespace quasar
