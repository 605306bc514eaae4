#include "quasar/trace.hpp"

#include <charconv>
#include <ostream>
#include <sstream>

namespace quasar {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kTraceHeader << '\n';
  for (const TraceRow& r : trace.rows) {
    out << r.stage << ',' << r.k << ',' << format_double(r.fval) << ',';
    if (r.tau) out << format_double(*r.tau);
    out << ',' << r.batch << ',' << r.fn_evals << ',' << r.grad_evals << ',';
    if (r.energy) out << format_double(*r.energy);
    out << ',' << branch_name(r.branch) << '\n';
  }
}

std::string trace_csv(const Trace& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

}  // namespace quasar
