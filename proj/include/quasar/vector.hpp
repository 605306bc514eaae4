#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace quasar {

// Dense real coordinate vector. Points, iterates and gradients all use it.
// Construction from external data rejects NaN/Inf; binary operations require
// equal dimensions and throw std::invalid_argument otherwise.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0);
  Vector(std::initializer_list<double> coords);
  explicit Vector(std::vector<double> coords);

  static Vector zeros(std::size_t dim) { return Vector(dim); }

  std::size_t size() const noexcept { return coords_.size(); }
  bool empty() const noexcept { return coords_.empty(); }

  double& operator[](std::size_t i) noexcept { return coords_[i]; }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }

  double* data() noexcept { return coords_.data(); }
  const double* data() const noexcept { return coords_.data(); }

  std::span<double> span() noexcept { return coords_; }
  std::span<const double> span() const noexcept { return coords_; }
  const std::vector<double>& coords() const noexcept { return coords_; }

  bool all_finite() const noexcept;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s) noexcept;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> coords_;
};

void require_same_dim(const Vector& a, const Vector& b);

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector v);

double dot(const Vector& a, const Vector& b);
double squared_norm(const Vector& v);
double norm(const Vector& v);
double squared_distance(const Vector& a, const Vector& b);

// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);

// (1 - t) * from + t * to
Vector interpolate(const Vector& from, const Vector& to, double t);

}  // namespace quasar
