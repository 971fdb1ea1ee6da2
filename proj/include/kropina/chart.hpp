#pragma once

/// Riemannian primitives on a single coordinate chart.
///
/// Fields (metric, wind, speed) are closed-form callables written once as
/// generic lambdas; SmoothField instantiates them for plain doubles and for
/// the Jet2<2N> scalars used by the spray, so the same expression feeds both
/// evaluation and differentiation.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>

#include "kropina/error.hpp"
#include "kropina/jet.hpp"

namespace kropina {

template <class T, std::size_t N>
using Vec = std::array<T, N>;

template <class T, std::size_t N>
using Mat = std::array<std::array<T, N>, N>;

/// Scalar type of an array-like argument; handy inside generic field lambdas.
template <class A>
using scalar_of = std::remove_cvref_t<decltype(std::declval<A>()[0])>;

/// Jet type carried through fields: derivatives in (x, y) jointly.
template <std::size_t N>
using FieldJet = Jet2<2 * N>;

template <std::size_t N>
struct ChartPoint {
  Vec<double, N> coords{};

  double operator[](std::size_t i) const { return coords[i]; }
  bool finite() const {
    for (double c : coords)
      if (!std::isfinite(c)) return false;
    return true;
  }
};

template <std::size_t N>
struct TangentVector {
  ChartPoint<N> base;
  Vec<double, N> comps{};
};

struct ScalarKind {
  template <class T>
  using type = T;
};
template <std::size_t N>
struct VectorKind {
  template <class T>
  using type = Vec<T, N>;
};
template <std::size_t N>
struct MatrixKind {
  template <class T>
  using type = Mat<T, N>;
};

template <std::size_t N, class Kind>
class SmoothField {
 public:
  static constexpr std::size_t dimension = N;
  template <class T>
  using result_t = typename Kind::template type<T>;

  template <class Fn>
    requires(!std::is_base_of_v<SmoothField, std::remove_cvref_t<Fn>>)
  explicit SmoothField(Fn f) : real_(f), jet_(std::move(f)) {}

  result_t<double> operator()(const Vec<double, N>& x) const { return real_(x); }
  result_t<double> operator()(const ChartPoint<N>& x) const { return real_(x.coords); }
  result_t<FieldJet<N>> operator()(const Vec<FieldJet<N>, N>& x) const { return jet_(x); }

 private:
  std::function<result_t<double>(const Vec<double, N>&)> real_;
  std::function<result_t<FieldJet<N>>(const Vec<FieldJet<N>, N>&)> jet_;
};

template <std::size_t N>
using ScalarField = SmoothField<N, ScalarKind>;

template <std::size_t N>
using VectorField = SmoothField<N, VectorKind<N>>;

/// h_ij(x). Symmetry and positive definiteness are checked where queried
/// through at(); the raw call operators do no checking.
template <std::size_t N>
class ChartMetric : public SmoothField<N, MatrixKind<N>> {
 public:
  using SmoothField<N, MatrixKind<N>>::SmoothField;
  using SmoothField<N, MatrixKind<N>>::operator();

  Mat<double, N> at(const ChartPoint<N>& x) const;
};

// ---------------------------------------------------------------------------
// Generic algebra shared by the double and jet paths.

template <class T, std::size_t N>
T inner(const Mat<T, N>& h, const Vec<T, N>& y, const Vec<T, N>& z) {
  T acc(0.0);
  for (std::size_t i = 0; i < N; ++i) {
    T row(0.0);
    for (std::size_t j = 0; j < N; ++j) row = row + h[i][j] * z[j];
    acc = acc + y[i] * row;
  }
  return acc;
}

template <class T, std::size_t N>
Vec<T, N> lower_index(const Mat<T, N>& h, const Vec<T, N>& y) {
  Vec<T, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    T s(0.0);
    for (std::size_t j = 0; j < N; ++j) s = s + h[i][j] * y[j];
    out[i] = s;
  }
  return out;
}

template <std::size_t N>
Vec<double, N> scaled(const Vec<double, N>& v, double s) {
  Vec<double, N> r = v;
  for (double& c : r) c *= s;
  return r;
}

/// Pivots of the unpivoted LU factorisation; the k-th leading principal
/// minor is the product of the first k pivots, so all minors are positive
/// iff all pivots are.
template <std::size_t N>
Vec<double, N> leading_pivots(Mat<double, N> a) {
  Vec<double, N> piv{};
  for (std::size_t k = 0; k < N; ++k) {
    piv[k] = a[k][k];
    if (!(piv[k] > 0.0)) {
      for (std::size_t r = k + 1; r < N; ++r) piv[r] = 0.0;
      return piv;
    }
    for (std::size_t i = k + 1; i < N; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < N; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return piv;
}

template <std::size_t N>
bool is_positive_definite(const Mat<double, N>& a) {
  for (double p : leading_pivots(a))
    if (!(p > 0.0)) return false;
  return true;
}

template <std::size_t N>
std::string format_point(const ChartPoint<N>& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < N; ++i) {
    if (i) s += ", ";
    s += std::to_string(x.coords[i]);
  }
  return s + ")";
}

template <std::size_t N>
Mat<double, N> ChartMetric<N>::at(const ChartPoint<N>& x) const {
  if (!x.finite()) throw Error(ErrorKind::usage, "non-finite chart point");
  Mat<double, N> h = (*this)(x.coords);
  double scale = 0.0;
  for (std::size_t i = 0; i < N; ++i) scale = std::max(scale, std::abs(h[i][i]));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(h[i][j] - h[j][i]) > 1e-14 * std::max(scale, 1.0))
        throw Error(ErrorKind::data, "metric not symmetric at " + format_point(x));
  if (!is_positive_definite(h))
    throw Error(ErrorKind::data, "metric not positive definite at " + format_point(x));
  return h;
}

// ---------------------------------------------------------------------------
// Runtime-sized entry points (dimension checked).

template <std::size_t N>
double metric_inner(const ChartMetric<N>& h, const ChartPoint<N>& x, std::span<const double> y,
                    std::span<const double> z) {
  if (y.size() != N || z.size() != N)
    throw Error(ErrorKind::usage, "tangent vector dimension does not match chart dimension");
  Vec<double, N> yy{}, zz{};
  std::copy(y.begin(), y.end(), yy.begin());
  std::copy(z.begin(), z.end(), zz.begin());
  return inner(h.at(x), yy, zz);
}

template <std::size_t N>
double metric_norm(const ChartMetric<N>& h, const ChartPoint<N>& x, std::span<const double> y) {
  const double q = metric_inner(h, x, y, y);
  return std::sqrt(std::max(q, 0.0));
}

// ---------------------------------------------------------------------------
// Common closed-form fields.

template <std::size_t N>
ChartMetric<N> euclidean_metric() {
  return ChartMetric<N>([](const auto& x) {
    using T = scalar_of<decltype(x)>;
    Mat<T, N> h{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) h[i][j] = T(i == j ? 1.0 : 0.0);
    return h;
  });
}

template <std::size_t N>
ScalarField<N> constant_scalar(double c) {
  return ScalarField<N>([c](const auto& x) { return scalar_of<decltype(x)>(c); });
}

template <std::size_t N>
VectorField<N> constant_vector(Vec<double, N> v) {
  return VectorField<N>([v](const auto& x) {
    using T = scalar_of<decltype(x)>;
    Vec<T, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = T(v[i]);
    return out;
  });
}

/// The metric |u|^-2 h, conformal to h.
template <std::size_t N>
ChartMetric<N> conformally_scaled(const ChartMetric<N>& h, const ScalarField<N>& speed) {
  return ChartMetric<N>([h, speed](const auto& x) {
    auto m = h(x);
    const auto s = speed(x);
    const auto inv2 = 1.0 / (s * s);
    for (auto& row : m)
      for (auto& e : row) e = e * inv2;
    return m;
  });
}

}  // namespace kropina
