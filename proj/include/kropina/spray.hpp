#pragma once

/// Fundamental tensor and geodesic spray of a 1-homogeneous metric.
///
///   g_ij = 1/2 d^2 F^2 / dy^i dy^j
///   G^i  = 1/4 g^il ( d^2 F^2 / dy^l dx^k  y^k  -  dF^2/dx^l )
///
/// Geodesics solve x'' + 2 G(x, x') = 0. All derivatives come from one
/// Jet2<2N> evaluation of F^2 seeded in x and y jointly.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>

#include "kropina/chart.hpp"
#include "kropina/error.hpp"
#include "kropina/jet.hpp"

namespace kropina {

/// Anything that evaluates F(x, y) for doubles and field jets, checks its
/// own domain, and names the Riemannian metric used to normalise y.
template <class M>
concept FinslerMetric = requires(const M& m, const Vec<double, M::dimension>& x,
                                 const Vec<FieldJet<M::dimension>, M::dimension>& xj,
                                 const ChartPoint<M::dimension>& p) {
  { m.evaluate(x, x) } -> std::convertible_to<double>;
  { m.evaluate(xj, xj) } -> std::same_as<FieldJet<M::dimension>>;
  m.require_domain(p, x);
  { m.chart_metric() } -> std::convertible_to<const ChartMetric<M::dimension>&>;
};

/// F(x, y) = |y|_h. Used to check the spray machinery in the quadratic case.
template <std::size_t N>
class RiemannianNorm {
 public:
  static constexpr std::size_t dimension = N;

  explicit RiemannianNorm(ChartMetric<N> h) : h_(std::move(h)) {}

  const ChartMetric<N>& chart_metric() const { return h_; }

  template <class T>
  T evaluate(const Vec<T, N>& x, const Vec<T, N>& y) const {
    using std::sqrt;
    return sqrt(inner(h_(x), y, y));
  }

  void require_domain(const ChartPoint<N>& x, const Vec<double, N>& y) const {
    for (double c : y)
      if (c != 0.0) return;
    throw Error(ErrorKind::domain, "zero tangent vector at " + format_point(x));
  }

  double operator()(const ChartPoint<N>& x, const Vec<double, N>& y) const {
    require_domain(x, y);
    return evaluate(x.coords, y);
  }

 private:
  ChartMetric<N> h_;
};

template <std::size_t N>
struct FundamentalTensor {
  Mat<double, N> g{};
  double min_eigenvalue = 0.0;
  double condition = 0.0;
};

template <std::size_t N>
struct SprayCoefficients {
  Vec<double, N> G{};
  double condition = 0.0;  // of g at the normalised direction
};

/// Refuse to invert g beyond this condition number.
inline constexpr double kMaxCondition = 1e12;

namespace detail {

/// F^2 as a jet in (x^1..x^N, y^1..y^N).
template <FinslerMetric Metric>
auto energy_jet(const Metric& m, const Vec<double, Metric::dimension>& x,
                const Vec<double, Metric::dimension>& y) {
  constexpr std::size_t N = Metric::dimension;
  using J = FieldJet<N>;
  Vec<J, N> xj{}, yj{};
  for (std::size_t i = 0; i < N; ++i) {
    xj[i] = J::variable(x[i], i);
    yj[i] = J::variable(y[i], N + i);
  }
  const J f = m.evaluate(xj, yj);
  return f * f;
}

template <std::size_t N>
using EigenMat = Eigen::Matrix<double, static_cast<int>(N), static_cast<int>(N)>;

template <std::size_t N>
FundamentalTensor<N> tensor_from_jet(const FieldJet<N>& e, const ChartPoint<N>& x) {
  FundamentalTensor<N> out;
  EigenMat<N> gm;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      out.g[i][j] = 0.5 * e.hess[N + i][N + j];
      gm(static_cast<int>(i), static_cast<int>(j)) = out.g[i][j];
    }
  Eigen::SelfAdjointEigenSolver<EigenMat<N>> es(gm, Eigen::EigenvaluesOnly);
  const auto ev = es.eigenvalues();
  out.min_eigenvalue = ev(0);
  out.condition = ev(static_cast<int>(N) - 1) / ev(0);
  if (!(ev(0) > 0.0) || !std::isfinite(ev(static_cast<int>(N) - 1)))
    throw Error(ErrorKind::degeneracy, "fundamental tensor not positive definite at " + format_point(x));
  return out;
}

}  // namespace detail

template <FinslerMetric Metric>
FundamentalTensor<Metric::dimension> fundamental_tensor(const Metric& m, const ChartPoint<Metric::dimension>& x,
                                                        const Vec<double, Metric::dimension>& y) {
  m.require_domain(x, y);
  return detail::tensor_from_jet(detail::energy_jet(m, x.coords, y), x);
}

/// Spray coefficients G(x, y). Evaluated at y / |y|_h and rescaled by |y|_h^2.
template <FinslerMetric Metric>
SprayCoefficients<Metric::dimension> spray(const Metric& m, const ChartPoint<Metric::dimension>& x,
                                           const Vec<double, Metric::dimension>& y) {
  constexpr std::size_t N = Metric::dimension;
  m.require_domain(x, y);
  const double norm = std::sqrt(inner(m.chart_metric().at(x), y, y));
  const auto yn = scaled(y, 1.0 / norm);

  const auto e = detail::energy_jet(m, x.coords, yn);
  const auto gt = detail::tensor_from_jet(e, x);
  if (gt.condition > kMaxCondition)
    throw Error(ErrorKind::degeneracy,
                "fundamental tensor condition " + std::to_string(gt.condition) + " at " + format_point(x));

  detail::EigenMat<N> gm;
  Eigen::Matrix<double, static_cast<int>(N), 1> rhs;
  for (std::size_t l = 0; l < N; ++l) {
    double mixed = 0.0;
    for (std::size_t k = 0; k < N; ++k) mixed += e.hess[N + l][k] * yn[k];
    rhs(static_cast<int>(l)) = mixed - e.grad[l];
    for (std::size_t j = 0; j < N; ++j) gm(static_cast<int>(l), static_cast<int>(j)) = gt.g[l][j];
  }
  const Eigen::Matrix<double, static_cast<int>(N), 1> sol = gm.llt().solve(rhs);

  SprayCoefficients<N> out;
  out.condition = gt.condition;
  for (std::size_t i = 0; i < N; ++i) out.G[i] = 0.25 * sol(static_cast<int>(i)) * norm * norm;
  return out;
}

template <std::size_t N>
struct PhaseDerivative {
  Vec<double, N> velocity{};
  Vec<double, N> acceleration{};
};

/// First-order reduction (x, v)' = (v, -2 G(x, v)).
template <FinslerMetric Metric>
PhaseDerivative<Metric::dimension> geodesic_rhs(const Metric& m, const ChartPoint<Metric::dimension>& x,
                                                const Vec<double, Metric::dimension>& v) {
  const auto s = spray(m, x, v);
  PhaseDerivative<Metric::dimension> d;
  d.velocity = v;
  for (std::size_t i = 0; i < Metric::dimension; ++i) d.acceleration[i] = -2.0 * s.G[i];
  return d;
}

}  // namespace kropina
