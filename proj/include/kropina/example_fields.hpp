#pragma once

/// Planar Euclidean sea with the rotating unit wind
///   W(x, y) = (cos(x + y), sin(x + y)),
/// the Gaussian speed profile
///   |U(x, y)| = 2/3 exp(-y^2 sin^2(x + y) / pi) + 1/3   in (1/3, 1],
/// and the scaled wind W~ = |U| W.

#include <numbers>

#include "kropina/chart.hpp"
#include "kropina/navigation.hpp"

namespace kropina::example {

template <class T>
T speed(const Vec<T, 2>& p) {
  using std::exp;
  using std::sin;
  const T s = sin(p[0] + p[1]);
  return (2.0 / 3.0) * exp(-(p[1] * p[1] * s * s) / std::numbers::pi) + 1.0 / 3.0;
}

template <class T>
Vec<T, 2> unit_wind(const Vec<T, 2>& p) {
  using std::cos;
  using std::sin;
  return {cos(p[0] + p[1]), sin(p[0] + p[1])};
}

template <class T>
Vec<T, 2> scaled_wind(const Vec<T, 2>& p) {
  const T s = speed(p);
  const auto w = unit_wind(p);
  return {s * w[0], s * w[1]};
}

inline ScalarField<2> speed_field() {
  return ScalarField<2>([](const auto& p) { return speed(p); });
}

inline VectorField<2> unit_wind_field() {
  return VectorField<2>([](const auto& p) { return unit_wind(p); });
}

inline VectorField<2> scaled_wind_field() {
  return VectorField<2>([](const auto& p) { return scaled_wind(p); });
}

/// Navigation data of the original problem: unit wind, unit speed.
inline NavigationData<2> original_navigation() {
  return {euclidean_metric<2>(), unit_wind_field(), constant_scalar<2>(1.0)};
}

/// Navigation data with the space-dependent speed |U| and wind W~ = |U| W.
inline NavigationData<2> generalized_navigation() {
  return {euclidean_metric<2>(), scaled_wind_field(), speed_field()};
}

/// Unit wind scaled by a constant speed c, |U| = c.
inline NavigationData<2> constant_speed_navigation(double c) {
  VectorField<2> wind([c](const auto& p) {
    auto w = unit_wind(p);
    return Vec<scalar_of<decltype(p)>, 2>{c * w[0], c * w[1]};
  });
  return {euclidean_metric<2>(), std::move(wind), constant_scalar<2>(c)};
}

inline KropinaMetric<2> original_metric() { return KropinaMetric<2>(original_navigation()); }
inline KropinaMetric<2> generalized_metric() { return KropinaMetric<2>(generalized_navigation()); }

/// Closed-form F~(x, y; u, v) as printed for the generalized example, written
/// independently of the navigation-data route:
///   3 (u^2 + v^2) E / (2 (E + 2) (u cos + v sin)),  E = exp(y^2 sin^2(x+y) / pi).
inline double generalized_closed_form(double x, double y, double u, double v) {
  const double s = std::sin(x + y), c = std::cos(x + y);
  const double e = std::exp(y * y * s * s / std::numbers::pi);
  return 3.0 * (u * u + v * v) * e / (2.0 * (e + 2.0) * (u * c + v * s));
}

/// Closed-form F(x, y; u, v) = (u^2 + v^2) / (2 (u cos(x+y) + v sin(x+y))).
inline double original_closed_form(double x, double y, double u, double v) {
  return (u * u + v * v) / (2.0 * (u * std::cos(x + y) + v * std::sin(x + y)));
}

}  // namespace kropina::example
