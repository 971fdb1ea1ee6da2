#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "kropina/jet.hpp"

using kropina::Jet2;
using kropina::jet2_eval;

TEST(Jet2, SquareHasExactDerivatives) {
  const std::array<double, 1> p{3.0};
  const auto j = jet2_eval<1>([](auto in) { return in[0] * in[0]; }, p, {0});
  EXPECT_DOUBLE_EQ(j.value, 9.0);
  EXPECT_DOUBLE_EQ(j.grad[0], 6.0);
  EXPECT_DOUBLE_EQ(j.hess[0][0], 2.0);
}

TEST(Jet2, ProductHasUnitMixedPartial) {
  const std::array<double, 2> p{2.0, 5.0};
  const auto j = jet2_eval<2>([](auto in) { return in[0] * in[1]; }, p, {0, 1});
  EXPECT_DOUBLE_EQ(j.value, 10.0);
  EXPECT_DOUBLE_EQ(j.grad[0], 5.0);
  EXPECT_DOUBLE_EQ(j.grad[1], 2.0);
  EXPECT_DOUBLE_EQ(j.hess[0][1], 1.0);
  EXPECT_DOUBLE_EQ(j.hess[1][0], 1.0);
  EXPECT_DOUBLE_EQ(j.hess[0][0], 0.0);
}

TEST(Jet2, InactiveInputsAreConstants) {
  const std::array<double, 3> p{2.0, 7.0, 5.0};
  const auto j = jet2_eval<1>([](auto in) { return in[0] * in[1] * in[2]; }, p, {1});
  EXPECT_DOUBLE_EQ(j.value, 70.0);
  EXPECT_DOUBLE_EQ(j.grad[0], 10.0);
  EXPECT_DOUBLE_EQ(j.hess[0][0], 0.0);
}

TEST(Jet2, RejectsNonSmoothPoints) {
  const std::array<double, 1> zero{0.0};
  EXPECT_THROW(jet2_eval<1>([](auto in) { return sqrt(in[0]); }, zero, {0}), kropina::Error);
  const std::array<double, 1> neg{-1.0};
  EXPECT_THROW(jet2_eval<1>([](auto in) { return log(in[0]); }, neg, {0}), kropina::Error);
  EXPECT_THROW(jet2_eval<1>([](auto in) { return 1.0 / in[0]; }, zero, {0}), kropina::Error);
}

TEST(Jet2, RejectsBadActiveSets) {
  const std::array<double, 2> p{1.0, 2.0};
  EXPECT_THROW(jet2_eval<2>([](auto in) { return in[0]; }, p, {0, 0}), kropina::Error);
  EXPECT_THROW(jet2_eval<1>([](auto in) { return in[0]; }, p, {2}), kropina::Error);
}

namespace {

// Composed test functions exercising every elementary operation.
template <class T>
T composed(std::span<const T> v) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  const T& a = v[0];
  const T& b = v[1];
  const T& c = v[2];
  return exp(-a * a / 3.0) * sin(a + 2.0 * b) + sqrt(1.0 + b * b + c * c) / (2.0 + cos(c)) +
         log(3.0 + a * b * c * c) - (a - c) / (1.5 + sin(b) * sin(b));
}

double composed_d(std::span<const double> v) { return composed<double>(v); }

}  // namespace

// Central differences with step 1e-5 as the independent oracle.
TEST(Jet2, AgreesWithCentralDifferences) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double h = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    std::array<double, 3> p{U(rng), U(rng), U(rng)};
    const auto j = jet2_eval<3>([](auto in) { return composed(in); }, p, {0, 1, 2});
    for (std::size_t i = 0; i < 3; ++i) {
      auto pp = p, pm = p;
      pp[i] += h;
      pm[i] -= h;
      const double g = (composed_d(pp) - composed_d(pm)) / (2 * h);
      EXPECT_NEAR(j.grad[i], g, 1e-6 * std::max(1.0, std::abs(g)));
      for (std::size_t k = 0; k < 3; ++k) {
        auto a = p, b = p, c = p, d = p;
        a[i] += h, a[k] += h;
        b[i] += h, b[k] -= h;
        c[i] -= h, c[k] += h;
        d[i] -= h, d[k] -= h;
        const double hk = (composed_d(a) - composed_d(b) - composed_d(c) + composed_d(d)) / (4 * h * h);
        EXPECT_NEAR(j.hess[i][k], hk, 1e-6 * std::max(1.0, std::abs(hk)) + 2e-5)
            << "trial " << trial << " entry " << i << k;
      }
    }
  }
}

TEST(Jet2, HessianIsExactlySymmetric) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, 3> p{U(rng), U(rng), U(rng)};
    const auto j = jet2_eval<3>([](auto in) { return composed(in); }, p, {0, 1, 2});
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(j.hess[i][k], j.hess[k][i]);
  }
}
