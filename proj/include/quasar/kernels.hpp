#pragma once

// Dense double-precision arithmetic kernels used by every inner loop in the
// library. Each kernel has a portable scalar reference implementation and, on
// x86-64, an AVX2/FMA variant. The variant is chosen once at runtime from CPU
// capabilities; QUASAR_OPT_ISA=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace quasar::kernels {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out = alpha * x + beta * y  (out may alias x or y)
  void (*axpby)(double alpha, const double* x, double beta, const double* y, double* out,
                std::size_t n);
  // y = A x, A row-major rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y += A^T x
  void (*gemv_t_acc)(const double* a, std::size_t rows, std::size_t cols, const double* x,
                     double* y);
  // A += alpha * u v^T
  void (*rank1_acc)(double alpha, const double* u, std::size_t rows, const double* v,
                    std::size_t cols, double* a);
};

const KernelTable& scalar_table();

// nullptr when the AVX2 translation unit is not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table();

Isa active_isa();
const KernelTable& active();
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void axpby(double alpha, std::span<const double> x, double beta,
                  std::span<const double> y, std::span<double> out) {
  active().axpby(alpha, x.data(), beta, y.data(), out.data(), x.size());
}

}  // namespace quasar::kernels
