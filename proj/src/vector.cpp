#include "quasar/vector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "quasar/kernels.hpp"

namespace quasar {

namespace {

void require_finite(const std::vector<double>& coords) {
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!std::isfinite(coords[i])) {
      throw std::invalid_argument("Vector: non-finite coordinate at index " + std::to_string(i));
    }
  }
}

}  // namespace

Vector::Vector(std::size_t dim, double fill) : coords_(dim, fill) {
  if (!std::isfinite(fill)) throw std::invalid_argument("Vector: non-finite fill value");
}

Vector::Vector(std::initializer_list<double> coords) : coords_(coords) { require_finite(coords_); }

Vector::Vector(std::vector<double> coords) : coords_(std::move(coords)) { require_finite(coords_); }

bool Vector::all_finite() const noexcept {
  for (double c : coords_) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_dim(*this, other);
  kernels::axpy(1.0, other.span(), span());
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_dim(*this, other);
  kernels::axpy(-1.0, other.span(), span());
  return *this;
}

Vector& Vector::operator*=(double s) noexcept {
  for (double& c : coords_) c *= s;
  return *this;
}

void require_same_dim(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector v) { return v *= s; }

double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  return kernels::dot(a.span(), b.span());
}

double squared_norm(const Vector& v) { return kernels::dot(v.span(), v.span()); }

double norm(const Vector& v) { return std::sqrt(squared_norm(v)); }

double squared_distance(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  return kernels::squared_distance(a.span(), b.span());
}

void axpy(double alpha, const Vector& x, Vector& y) {
  require_same_dim(x, y);
  kernels::axpy(alpha, x.span(), y.span());
}

Vector interpolate(const Vector& from, const Vector& to, double t) {
  require_same_dim(from, to);
  Vector out(from.size());
  kernels::axpby(1.0 - t, from.span(), t, to.span(), out.span());
  return out;
}

}  // namespace quasar
