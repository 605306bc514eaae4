#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "quasar/mirror.hpp"
#include "quasar/vector.hpp"

namespace {

using quasar::MirrorMap;
using quasar::Vector;

Vector random_vector(std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Vector v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = nd(rng);
  return v;
}

TEST(Vector, RejectsNonFinite) {
  EXPECT_THROW(Vector({1.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
  EXPECT_THROW(Vector(std::vector<double>{std::numeric_limits<double>::infinity()}),
               std::invalid_argument);
}

TEST(Vector, DimensionMismatchThrows) {
  Vector a{1.0, 2.0};
  Vector b{1.0};
  EXPECT_THROW(a + b, std::invalid_argument);
  EXPECT_THROW(quasar::dot(a, b), std::invalid_argument);
  EXPECT_THROW(quasar::bregman(MirrorMap::euclidean(), a, b), std::invalid_argument);
}

TEST(Vector, Arithmetic) {
  Vector a{1.0, 2.0, 3.0};
  Vector b{4.0, 5.0, 6.0};
  EXPECT_EQ(a + b, (Vector{5.0, 7.0, 9.0}));
  EXPECT_EQ(b - a, (Vector{3.0, 3.0, 3.0}));
  EXPECT_DOUBLE_EQ(quasar::dot(a, b), 32.0);
  EXPECT_DOUBLE_EQ(quasar::squared_distance(a, b), 27.0);
  EXPECT_EQ(quasar::interpolate(a, b, 0.0), a);
  EXPECT_EQ(quasar::interpolate(a, b, 1.0), b);
}

TEST(Bregman, Examples) {
  const MirrorMap e = MirrorMap::euclidean();
  EXPECT_DOUBLE_EQ(quasar::bregman(e, Vector{3.0, 0.0}, Vector{1.0, 0.0}), 2.0);
  EXPECT_DOUBLE_EQ(quasar::bregman(e, Vector{0.3, -2.0}, Vector{0.3, -2.0}), 0.0);
  const MirrorMap w = MirrorMap::diagonal(Vector{2.0, 1.0});
  EXPECT_DOUBLE_EQ(quasar::bregman(w, Vector{1.0, 1.0}, Vector{0.0, 0.0}), 1.5);
  EXPECT_DOUBLE_EQ(w.mu_bar(), 1.0);
}

TEST(Bregman, StrongConvexityLowerBound) {
  std::mt19937_64 rng(3);
  const MirrorMap maps[] = {MirrorMap::euclidean(),
                            MirrorMap::diagonal(Vector{0.5, 2.0, 3.0, 1.5})};
  for (const MirrorMap& h : maps) {
    for (int t = 0; t < 1000; ++t) {
      Vector x = random_vector(4, rng, 3.0);
      Vector y = random_vector(4, rng, 3.0);
      EXPECT_GE(quasar::bregman(h, x, y) + 1e-12,
                0.5 * h.mu_bar() * quasar::squared_distance(x, y));
      EXPECT_EQ(quasar::bregman(h, x, x), 0.0);
    }
  }
}

TEST(MirrorMap, InverseGradientRoundTrip) {
  std::mt19937_64 rng(4);
  const MirrorMap h = MirrorMap::diagonal(Vector{0.25, 4.0, 1.0});
  for (int t = 0; t < 200; ++t) {
    Vector x = random_vector(3, rng, 5.0);
    Vector back = h.inv_grad(h.grad(x));
    EXPECT_LE(quasar::norm(back - x), 1e-10 * std::max(1.0, quasar::norm(x)));
  }
  EXPECT_THROW(MirrorMap::diagonal(Vector{1.0, 0.0}), std::invalid_argument);
}

TEST(MirrorStep, Examples) {
  const MirrorMap e = MirrorMap::euclidean();
  EXPECT_EQ(quasar::mirror_step(e, Vector{1.0, 0.0}, Vector{5.0, 5.0}, Vector{2.0, 0.0}, 0.0, 2.0),
            (Vector{0.0, 0.0}));
  EXPECT_EQ(quasar::mirror_step(e, Vector{2.0, 0.0}, Vector{0.0, 0.0}, Vector{0.0, 0.0}, 1.0, 1.0),
            (Vector{1.0, 0.0}));
  EXPECT_EQ(quasar::mirror_step(e, Vector{4.0, 0.0}, Vector{0.0, 0.0}, Vector{4.0, 0.0}, 1.0, 3.0),
            (Vector{2.0, 0.0}));
}

TEST(MirrorStep, RejectsBadWeights) {
  const MirrorMap e = MirrorMap::euclidean();
  Vector z{1.0};
  EXPECT_THROW(quasar::mirror_step(e, z, z, z, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(quasar::mirror_step(e, z, z, z, -1.0, 1.0), std::invalid_argument);
}

TEST(MirrorStep, AlphaZeroIsExactGradientStep) {
  std::mt19937_64 rng(5);
  const MirrorMap e = MirrorMap::euclidean();
  for (int t = 0; t < 100; ++t) {
    Vector z = random_vector(5, rng);
    Vector g = random_vector(5, rng);
    const double beta = 0.1 + std::abs(random_vector(1, rng)[0]);
    Vector expected = z;
    for (std::size_t i = 0; i < 5; ++i) expected[i] = z[i] - g[i] / beta;
    EXPECT_EQ(quasar::mirror_step(e, z, random_vector(5, rng), g, 0.0, beta), expected);
  }
}

// Gradient descent on the mirror objective with a small fixed step as an independent minimizer.
TEST(MirrorStep, MatchesNumericMinimizer) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> pos(0.1, 3.0);
  const MirrorMap e = MirrorMap::euclidean();
  for (int t = 0; t < 50; ++t) {
    Vector z = random_vector(3, rng);
    Vector x = random_vector(3, rng);
    Vector g = random_vector(3, rng);
    const double alpha = pos(rng);
    const double beta = pos(rng);
    Vector u = z;
    const double step = 0.5 / (alpha + beta);
    for (int it = 0; it < 400; ++it) {
      Vector grad = g + beta * (u - z) + alpha * (u - x);
      quasar::axpy(-step, grad, u);
    }
    Vector closed = quasar::mirror_step(e, z, x, g, alpha, beta);
    EXPECT_LE(quasar::norm(closed - u), 1e-8);
  }
}

TEST(MirrorStep, StationarityForDiagonalMap) {
  std::mt19937_64 rng(7);
  const MirrorMap h = MirrorMap::diagonal(Vector{0.5, 2.0, 1.0});
  for (int t = 0; t < 50; ++t) {
    Vector z = random_vector(3, rng);
    Vector x = random_vector(3, rng);
    Vector g = random_vector(3, rng);
    const double alpha = 0.7;
    const double beta = 1.3;
    Vector u = quasar::mirror_step(h, z, x, g, alpha, beta);
    Vector hu = h.grad(u);
    Vector station = g + beta * (hu - h.grad(z)) + alpha * (hu - h.grad(x));
    EXPECT_LE(quasar::norm(station), 1e-8);
  }
}

TEST(GdStep, Examples) {
  EXPECT_EQ(quasar::gd_step(Vector{1.0, 1.0}, Vector{1.0, 0.0}, 0.5), (Vector{0.5, 1.0}));
  EXPECT_EQ(quasar::gd_step(Vector{1.0, 1.0}, Vector{3.0, 7.0}, 0.0), (Vector{1.0, 1.0}));
  EXPECT_EQ(quasar::gd_step(Vector{0.0, 0.0}, Vector{2.0, -2.0}, 1.0), (Vector{-2.0, 2.0}));
}

}  // namespace
