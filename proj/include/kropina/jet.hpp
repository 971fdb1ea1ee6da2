#pragma once

/// Second-order forward-mode differentiation.
///
/// A Jet2<M> carries a truncated Taylor polynomial of degree two in M active
/// directions: value, gradient and (symmetric) Hessian. Arithmetic and the
/// elementary functions propagate all three channels exactly, so derivatives
/// are correct to rounding, not to a step size.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kropina/error.hpp"

namespace kropina {

template <std::size_t M>
struct Jet2 {
  static constexpr std::size_t directions = M;

  double value = 0.0;
  std::array<double, M> grad{};
  std::array<std::array<double, M>, M> hess{};

  constexpr Jet2() = default;
  constexpr Jet2(double v) : value(v) {}  // NOLINT: constants promote implicitly

  /// Independent variable seeded along direction `dir`.
  static constexpr Jet2 variable(double v, std::size_t dir) {
    Jet2 j(v);
    j.grad[dir] = 1.0;
    return j;
  }

  Jet2& operator+=(const Jet2& o) {
    value += o.value;
    for (std::size_t i = 0; i < M; ++i) {
      grad[i] += o.grad[i];
      for (std::size_t k = 0; k < M; ++k) hess[i][k] += o.hess[i][k];
    }
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    value -= o.value;
    for (std::size_t i = 0; i < M; ++i) {
      grad[i] -= o.grad[i];
      for (std::size_t k = 0; k < M; ++k) hess[i][k] -= o.hess[i][k];
    }
    return *this;
  }
  Jet2& operator*=(double s) {
    value *= s;
    for (std::size_t i = 0; i < M; ++i) {
      grad[i] *= s;
      for (std::size_t k = 0; k < M; ++k) hess[i][k] *= s;
    }
    return *this;
  }
  Jet2& operator+=(double s) {
    value += s;
    return *this;
  }
};

namespace detail {

// Chain rule for a scalar function with derivatives d1 = f'(a), d2 = f''(a).
template <std::size_t M>
Jet2<M> compose(const Jet2<M>& a, double f, double d1, double d2) {
  Jet2<M> r(f);
  for (std::size_t i = 0; i < M; ++i) r.grad[i] = d1 * a.grad[i];
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t k = i; k < M; ++k)
      r.hess[k][i] = r.hess[i][k] = d1 * a.hess[i][k] + d2 * a.grad[i] * a.grad[k];
  return r;
}

}  // namespace detail

inline double value_of(double v) { return v; }
template <std::size_t M>
double value_of(const Jet2<M>& j) {
  return j.value;
}

template <std::size_t M>
Jet2<M> operator-(Jet2<M> a) {
  a *= -1.0;
  return a;
}

template <std::size_t M>
Jet2<M> operator+(Jet2<M> a, const Jet2<M>& b) {
  return a += b;
}
template <std::size_t M>
Jet2<M> operator+(Jet2<M> a, double b) {
  return a += b;
}
template <std::size_t M>
Jet2<M> operator+(double a, Jet2<M> b) {
  return b += a;
}

template <std::size_t M>
Jet2<M> operator-(Jet2<M> a, const Jet2<M>& b) {
  return a -= b;
}
template <std::size_t M>
Jet2<M> operator-(Jet2<M> a, double b) {
  return a += -b;
}
template <std::size_t M>
Jet2<M> operator-(double a, const Jet2<M>& b) {
  return -b + a;
}

template <std::size_t M>
Jet2<M> operator*(const Jet2<M>& a, const Jet2<M>& b) {
  Jet2<M> r(a.value * b.value);
  for (std::size_t i = 0; i < M; ++i) r.grad[i] = a.value * b.grad[i] + b.value * a.grad[i];
  // Upper triangle mirrored so the Hessian stays exactly symmetric.
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t k = i; k < M; ++k)
      r.hess[k][i] = r.hess[i][k] = a.value * b.hess[i][k] + b.value * a.hess[i][k] +
                                    (a.grad[i] * b.grad[k] + b.grad[i] * a.grad[k]);
  return r;
}
template <std::size_t M>
Jet2<M> operator*(Jet2<M> a, double s) {
  return a *= s;
}
template <std::size_t M>
Jet2<M> operator*(double s, Jet2<M> a) {
  return a *= s;
}

template <std::size_t M>
Jet2<M> reciprocal(const Jet2<M>& a) {
  if (a.value == 0.0) throw Error(ErrorKind::evaluation, "division by zero in jet arithmetic");
  const double inv = 1.0 / a.value;
  return detail::compose(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

template <std::size_t M>
Jet2<M> operator/(const Jet2<M>& a, const Jet2<M>& b) {
  return a * reciprocal(b);
}
template <std::size_t M>
Jet2<M> operator/(Jet2<M> a, double s) {
  return a *= 1.0 / s;
}
template <std::size_t M>
Jet2<M> operator/(double s, const Jet2<M>& a) {
  return s * reciprocal(a);
}

template <std::size_t M>
Jet2<M> exp(const Jet2<M>& a) {
  const double e = std::exp(a.value);
  return detail::compose(a, e, e, e);
}

template <std::size_t M>
Jet2<M> sin(const Jet2<M>& a) {
  const double s = std::sin(a.value);
  return detail::compose(a, s, std::cos(a.value), -s);
}

template <std::size_t M>
Jet2<M> cos(const Jet2<M>& a) {
  const double c = std::cos(a.value);
  return detail::compose(a, c, -std::sin(a.value), -c);
}

template <std::size_t M>
Jet2<M> sqrt(const Jet2<M>& a) {
  if (!(a.value > 0.0))
    throw Error(ErrorKind::evaluation, "sqrt of non-positive value " + std::to_string(a.value));
  const double s = std::sqrt(a.value);
  return detail::compose(a, s, 0.5 / s, -0.25 / (s * a.value));
}

template <std::size_t M>
Jet2<M> log(const Jet2<M>& a) {
  if (!(a.value > 0.0))
    throw Error(ErrorKind::evaluation, "log of non-positive value " + std::to_string(a.value));
  const double inv = 1.0 / a.value;
  return detail::compose(a, std::log(a.value), inv, -inv * inv);
}

/// Value, gradient and Hessian of `f` at `point` with respect to the inputs
/// listed in `active`; the remaining inputs are held constant.
///
/// `f` receives a span of Jet2<M> and must be built from arithmetic and the
/// elementary functions above (call them unqualified so ADL finds them).
template <std::size_t M, class Fn>
Jet2<M> jet2_eval(Fn&& f, std::span<const double> point, const std::array<std::size_t, M>& active) {
  std::vector<Jet2<M>> inputs(point.begin(), point.end());
  for (std::size_t d = 0; d < M; ++d) {
    if (active[d] >= point.size())
      throw Error(ErrorKind::usage, "active index " + std::to_string(active[d]) + " out of range");
    for (std::size_t e = 0; e < d; ++e)
      if (active[e] == active[d]) throw Error(ErrorKind::usage, "duplicate active index");
    inputs[active[d]] = Jet2<M>::variable(point[active[d]], d);
  }
  return f(std::span<const Jet2<M>>(inputs));
}

}  // namespace kropina
