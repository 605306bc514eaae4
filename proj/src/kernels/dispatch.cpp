#include <cstdlib>
#include <string>

#include "quasar/kernels.hpp"

namespace quasar::kernels {

#if defined(QUASAR_HAVE_AVX2_TU)
const KernelTable& avx2_kernels();
#endif

const KernelTable* avx2_table() {
#if defined(QUASAR_HAVE_AVX2_TU)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

Isa select_isa() {
  if (const char* forced = std::getenv("QUASAR_OPT_ISA")) {
    if (std::string(forced) == "scalar") return Isa::kScalar;
  }
  return avx2_table() != nullptr ? Isa::kAvx2 : Isa::kScalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& table =
      active_isa() == Isa::kAvx2 ? *avx2_table() : scalar_table();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace quasar::kernels
