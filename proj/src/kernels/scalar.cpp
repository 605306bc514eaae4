#include "quasar/kernels.hpp"

namespace quasar::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpby_scalar(double alpha, const double* x, double beta, const double* y, double* out,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x,
                 double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * cols, x, cols);
}

void gemv_t_acc_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x,
                       double* y) {
  for (std::size_t r = 0; r < rows; ++r) axpy_scalar(x[r], a + r * cols, y, cols);
}

void rank1_acc_scalar(double alpha, const double* u, std::size_t rows, const double* v,
                      std::size_t cols, double* a) {
  for (std::size_t r = 0; r < rows; ++r) axpy_scalar(alpha * u[r], v, a + r * cols, cols);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{dot_scalar,         squared_distance_scalar, axpy_scalar,
                                 axpby_scalar,       gemv_scalar,             gemv_t_acc_scalar,
                                 rank1_acc_scalar};
  return table;
}

}  // namespace quasar::kernels
