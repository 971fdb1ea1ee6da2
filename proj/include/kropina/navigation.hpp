#pragma once

/// Navigation data (h, |u|, W~) under a strong wind |W~|_h = |u|_h, the
/// Kropina metric it induces, and the correspondence with Kropina data
/// (a~_ij, b~_i) including the optional conformal factor e^{-k~}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kropina/chart.hpp"
#include "kropina/error.hpp"

namespace kropina {

template <std::size_t N>
struct NavigationData {
  ChartMetric<N> h;
  VectorField<N> wind;   // W~
  ScalarField<N> speed;  // |u(x)|_h
};

/// Relative tolerance of the strong-wind constraint |W~|_h = |u|.
inline constexpr double kNormTolerance = 1e-10;

/// Scale-aware conic-domain guard: beta > eps |y|_h |W~|_h.
inline constexpr double kDomainEpsilon = 1e-12;

// ---------------------------------------------------------------------------
// Validation

struct PointViolation {
  std::vector<double> coords;
  std::string what;
  double magnitude = 0.0;
};

struct ValidationReport {
  bool passed = true;
  std::size_t points_checked = 0;
  double max_norm_mismatch = 0.0;  // max | |W~|_h - |u| | / |u|
  double min_speed = std::numeric_limits<double>::infinity();
  double max_speed = -std::numeric_limits<double>::infinity();
  double min_wind_norm = std::numeric_limits<double>::infinity();
  std::vector<PointViolation> violations;
};

template <std::size_t N>
ValidationReport validate(const NavigationData<N>& nav, std::span<const ChartPoint<N>> points) {
  if (points.empty()) throw Error(ErrorKind::usage, "validation needs at least one sample point");
  ValidationReport rep;
  auto flag = [&rep](const ChartPoint<N>& x, std::string what, double mag) {
    rep.passed = false;
    rep.violations.push_back({std::vector<double>(x.coords.begin(), x.coords.end()), std::move(what), mag});
  };
  for (const auto& x : points) {
    ++rep.points_checked;
    Mat<double, N> h;
    try {
      h = nav.h.at(x);
    } catch (const Error& e) {
      flag(x, e.what(), 0.0);
      continue;
    }
    const double s = nav.speed(x);
    const auto w = nav.wind(x);
    const double wn = std::sqrt(std::max(inner(h, w, w), 0.0));
    rep.min_speed = std::min(rep.min_speed, s);
    rep.max_speed = std::max(rep.max_speed, s);
    rep.min_wind_norm = std::min(rep.min_wind_norm, wn);
    if (!std::isfinite(s) || !(s > 0.0) || s > 1.0) {
      flag(x, "speed outside (0, 1]", s);
      continue;
    }
    if (!(wn > 0.0)) {
      flag(x, "wind vanishes", wn);
      continue;
    }
    const double mismatch = std::abs(wn - s) / s;
    rep.max_norm_mismatch = std::max(rep.max_norm_mismatch, mismatch);
    if (!(mismatch <= kNormTolerance)) flag(x, "|W~|_h differs from |u|", mismatch);
  }
  return rep;
}

/// Throws a data error naming the first offending point.
template <std::size_t N>
void require_valid(const NavigationData<N>& nav, std::span<const ChartPoint<N>> points) {
  const auto rep = validate(nav, points);
  if (rep.passed) return;
  const auto& v = rep.violations.front();
  std::string at = "(";
  for (std::size_t i = 0; i < v.coords.size(); ++i) at += (i ? ", " : "") + std::to_string(v.coords[i]);
  throw Error(ErrorKind::data, v.what + " at " + at + ")");
}

// ---------------------------------------------------------------------------
// Kropina metric

/// |y|^2 / (2 h(y, w)); shared by every code path that produces a Kropina value.
template <class T, std::size_t N>
T kropina_value(const Mat<T, N>& h, const Vec<T, N>& y, const Vec<T, N>& w) {
  return inner(h, y, y) / (2.0 * inner(h, y, w));
}

template <std::size_t N>
class KropinaMetric {
 public:
  static constexpr std::size_t dimension = N;

  explicit KropinaMetric(NavigationData<N> nav) : nav_(std::move(nav)) {}

  const NavigationData<N>& navigation() const { return nav_; }
  const ChartMetric<N>& chart_metric() const { return nav_.h; }

  /// Raw F~(x, y) for any scalar type; no domain checks.
  template <class T>
  T evaluate(const Vec<T, N>& x, const Vec<T, N>& y) const {
    return kropina_value(nav_.h(x), y, nav_.wind(x));
  }

  double beta(const ChartPoint<N>& x, const Vec<double, N>& y) const {
    return 2.0 * inner(nav_.h.at(x), y, nav_.wind(x));
  }

  /// beta / (|y|_h |W~|_h); the cosine-like margin the domain guard compares.
  double domain_margin(const ChartPoint<N>& x, const Vec<double, N>& y) const {
    const auto h = nav_.h.at(x);
    const auto w = nav_.wind(x);
    const double yn = std::sqrt(inner(h, y, y));
    const double wn = std::sqrt(inner(h, w, w));
    if (!(yn > 0.0) || !(wn > 0.0)) return 0.0;
    return 2.0 * inner(h, y, w) / (yn * wn);
  }

  bool in_domain(const ChartPoint<N>& x, const Vec<double, N>& y, double eps = kDomainEpsilon) const {
    return domain_margin(x, y) > eps;
  }

  void require_domain(const ChartPoint<N>& x, const Vec<double, N>& y) const {
    bool zero = true;
    for (double c : y) zero = zero && c == 0.0;
    if (zero) throw Error(ErrorKind::domain, "zero tangent vector at " + format_point(x));
    if (!in_domain(x, y))
      throw Error(ErrorKind::domain, "tangent vector outside the conic domain beta > 0 at " + format_point(x));
  }

  /// F~(x, y) with domain checks.
  double operator()(const ChartPoint<N>& x, const Vec<double, N>& y) const {
    require_domain(x, y);
    return kropina_value(nav_.h.at(x), y, nav_.wind(x));
  }
  double operator()(const TangentVector<N>& v) const { return (*this)(v.base, v.comps); }

  /// The metric F of the unit wind W = W~ / |u| with unit speed.
  KropinaMetric unit_wind() const {
    const auto w = nav_.wind;
    const auto s = nav_.speed;
    VectorField<N> unit([w, s](const auto& x) {
      auto v = w(x);
      const auto c = s(x);
      for (auto& e : v) e = e / c;
      return v;
    });
    return KropinaMetric(NavigationData<N>{nav_.h, std::move(unit), constant_scalar<N>(1.0)});
  }

 private:
  NavigationData<N> nav_;
};

// ---------------------------------------------------------------------------
// Translated-indicatrix equation for general (|u|, W)

enum class IndicatrixBranch { randers, kropina, supercritical };

inline std::string_view to_string(IndicatrixBranch b) {
  switch (b) {
    case IndicatrixBranch::randers: return "randers";
    case IndicatrixBranch::kropina: return "kropina";
    case IndicatrixBranch::supercritical: return "supercritical";
  }
  return "unknown";
}

struct IndicatrixSolution {
  double value = 0.0;
  IndicatrixBranch branch = IndicatrixBranch::kropina;
};

/// Solves (|u|^2 - |W|^2) F^2 + 2 h(y, W) F - |y|^2 = 0 for the travel-time
/// metric value F(x, y). The wind and speed need not satisfy the strong-wind
/// constraint; when they do (to kNormTolerance) the equation is linear and
/// the Kropina value is returned.
template <std::size_t N>
IndicatrixSolution solve_indicatrix(const NavigationData<N>& nav, const ChartPoint<N>& x,
                                    const Vec<double, N>& y) {
  bool zero = true;
  for (double c : y) zero = zero && c == 0.0;
  if (zero) throw Error(ErrorKind::domain, "zero tangent vector at " + format_point(x));

  const auto h = nav.h.at(x);
  const auto w = nav.wind(x);
  const double s = nav.speed(x);
  const double wn = std::sqrt(inner(h, w, w));
  const double b = inner(h, y, w);
  const double c = inner(h, y, y);

  if (std::abs(wn - s) <= kNormTolerance * s) {
    if (!(2.0 * b > kDomainEpsilon * std::sqrt(c) * wn))
      throw Error(ErrorKind::domain, "tangent vector outside the conic domain beta > 0 at " + format_point(x));
    return {kropina_value(h, y, w), IndicatrixBranch::kropina};
  }

  const double a = s * s - wn * wn;
  const double disc = b * b + a * c;
  if (a > 0.0) return {c / (b + std::sqrt(disc)), IndicatrixBranch::randers};

  // Wind stronger than the ship: only a cone of directions is reachable and
  // the smaller positive root is the first arrival.
  if (!(b > 0.0) || disc < 0.0)
    throw Error(ErrorKind::no_solution, "no positive root of the indicatrix equation at " + format_point(x));
  return {c / (b + std::sqrt(disc)), IndicatrixBranch::supercritical};
}

// ---------------------------------------------------------------------------
// Conformal relations

struct ConformalComparison {
  double f_tilde = 0.0;  // F~(x, y)
  double f_unit = 0.0;   // F(x, y) for W = W~/|u|
  double ratio = 0.0;    // F~ / F, equals 1/|u(x)|
};

template <std::size_t N>
ConformalComparison conformal_compare(const KropinaMetric<N>& k, const ChartPoint<N>& x,
                                      const Vec<double, N>& y) {
  const double ft = k(x, y);
  const auto& nav = k.navigation();
  const auto w = scaled(nav.wind(x), 1.0 / nav.speed(x));
  const double f = kropina_value(nav.h.at(x), y, w);
  return {ft, f, ft / f};
}

struct ConformalSea {
  double f_hat = 0.0;          // Kropina value under h^ = |u|^-2 h
  double f_tilde = 0.0;        // Kropina value under h
  double hat_wind_norm = 0.0;  // h^(W~, W~), equal to 1
};

template <std::size_t N>
ConformalSea conformal_sea_check(const NavigationData<N>& nav, const ChartPoint<N>& x,
                                 const Vec<double, N>& y) {
  const KropinaMetric<N> tilde(nav);
  const double ft = tilde(x, y);
  const auto hat = conformally_scaled(nav.h, nav.speed).at(x);
  const auto w = nav.wind(x);
  return {kropina_value(hat, y, w), ft, inner(hat, w, w)};
}

/// Radius of the tangent-space indicatrix {F = 1} along the h-unit direction d.
template <class Metric, std::size_t N>
double indicatrix_radius(const Metric& metric, const ChartPoint<N>& x, const Vec<double, N>& d) {
  return 1.0 / metric(x, d);
}

// ---------------------------------------------------------------------------
// Kropina data

namespace detail {

/// Solves A z = r by Gaussian elimination with partial pivoting on the value part.
template <class T, std::size_t N>
Vec<T, N> solve_linear(Mat<T, N> a, Vec<T, N> r) {
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < N; ++i)
      if (std::abs(value_of(a[i][k])) > std::abs(value_of(a[p][k]))) p = i;
    if (value_of(a[p][k]) == 0.0) throw Error(ErrorKind::data, "singular metric matrix");
    std::swap(a[k], a[p]);
    std::swap(r[k], r[p]);
    for (std::size_t i = k + 1; i < N; ++i) {
      const T f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < N; ++j) a[i][j] = a[i][j] - f * a[k][j];
      r[i] = r[i] - f * r[k];
    }
  }
  Vec<T, N> z{};
  for (std::size_t kk = N; kk-- > 0;) {
    T s = r[kk];
    for (std::size_t j = kk + 1; j < N; ++j) s = s - a[kk][j] * z[j];
    z[kk] = s / a[kk][kk];
  }
  return z;
}

}  // namespace detail

template <std::size_t N>
using CovectorField = VectorField<N>;

template <std::size_t N>
struct KropinaData {
  ChartMetric<N> a;     // a~_ij
  CovectorField<N> b;   // b~_i
  ScalarField<N> b2;    // a~^ij b~_i b~_j
  ScalarField<N> k;     // conformal exponent k~ (zero when no factor is applied)

  /// alpha~^2 / beta~ with the scale-aware domain guard.
  double operator()(const ChartPoint<N>& x, const Vec<double, N>& y) const {
    const auto am = a.at(x);
    const auto bv = b(x);
    double beta = 0.0;
    for (std::size_t i = 0; i < N; ++i) beta += bv[i] * y[i];
    const double alpha2 = inner(am, y, y);
    if (!(beta > kDomainEpsilon * std::sqrt(alpha2) * std::sqrt(b2(x))))
      throw Error(ErrorKind::domain, "tangent vector outside the conic domain beta > 0 at " + format_point(x));
    return alpha2 / beta;
  }
};

/// (a~, b~) = (e^{-k} h, 2 e^{-k} W~_flat); without k the factor is one.
template <std::size_t N>
KropinaData<N> to_kropina_data(const NavigationData<N>& nav,
                               const std::optional<ScalarField<N>>& k = std::nullopt) {
  const ScalarField<N> kk = k ? *k : constant_scalar<N>(0.0);
  const auto h = nav.h;
  const auto w = nav.wind;
  ChartMetric<N> a([h, kk](const auto& x) {
    using std::exp;
    auto m = h(x);
    const auto f = exp(-kk(x));
    for (auto& row : m)
      for (auto& e : row) e = e * f;
    return m;
  });
  CovectorField<N> b([h, w, kk](const auto& x) {
    using std::exp;
    auto low = lower_index(h(x), w(x));
    const auto f = 2.0 * exp(-kk(x));
    for (auto& e : low) e = e * f;
    return low;
  });
  ScalarField<N> b2([a, b](const auto& x) {
    const auto bv = b(x);
    const auto raised = detail::solve_linear(a(x), bv);
    auto s = bv[0] * raised[0];
    for (std::size_t i = 1; i < N; ++i) s = s + bv[i] * raised[i];
    return s;
  });
  return {std::move(a), std::move(b), std::move(b2), kk};
}

/// k~ = 2 ln(2|u| / b~); for |u| = 1 this is ln(4 / b^2).
inline double conformal_exponent(double speed, double b2) {
  if (!(b2 > 0.0)) throw Error(ErrorKind::data, "singular Kropina data: b~ vanishes");
  return 2.0 * std::log(2.0 * speed / std::sqrt(b2));
}

/// Inverse correspondence: h = e^{k} a~, W~_i = e^{k} b~_i / 2, |u| = e^{k/2} b~ / 2.
template <std::size_t N>
NavigationData<N> from_kropina_data(const KropinaData<N>& data) {
  const auto a = data.a;
  const auto b = data.b;
  const auto b2 = data.b2;
  const auto kk = data.k;
  auto guard = [](double v) {
    if (!(v > 0.0)) throw Error(ErrorKind::data, "singular Kropina data: b~ vanishes");
  };
  ChartMetric<N> h([a, kk](const auto& x) {
    using std::exp;
    auto m = a(x);
    const auto f = exp(kk(x));
    for (auto& row : m)
      for (auto& e : row) e = e * f;
    return m;
  });
  // W~^i = h^ij W~_j = a~^ij b~_j / 2; the conformal factors cancel.
  VectorField<N> wind([a, b, b2, guard](const auto& x) {
    guard(value_of(b2(x)));
    auto up = detail::solve_linear(a(x), b(x));
    for (auto& e : up) e = e * 0.5;
    return up;
  });
  ScalarField<N> speed([b2, kk, guard](const auto& x) {
    using std::exp;
    using std::sqrt;
    const auto bb = b2(x);
    guard(value_of(bb));
    return 0.5 * exp(0.5 * kk(x)) * sqrt(bb);
  });
  return {std::move(h), std::move(wind), std::move(speed)};
}

// ---------------------------------------------------------------------------
// Headings (planar charts)

/// h-unit vector at angle phi, measured in the h-orthonormal frame obtained
/// by Gram-Schmidt from the coordinate basis; (cos phi, sin phi) for Euclidean h.
inline Vec<double, 2> unit_heading(const Mat<double, 2>& h, double phi) {
  const double n1 = std::sqrt(h[0][0]);
  const Vec<double, 2> e1{1.0 / n1, 0.0};
  const double proj = h[1][0] * e1[0];
  Vec<double, 2> e2{-proj * e1[0], 1.0};
  const double n2 = std::sqrt(inner(h, e2, e2));
  e2 = scaled(e2, 1.0 / n2);
  const double c = std::cos(phi), s = std::sin(phi);
  return {c * e1[0] + s * e2[0], c * e1[1] + s * e2[1]};
}

/// Resultant ground velocity W~(x) + |u(x)| e(phi) of a ship steering heading phi.
inline Vec<double, 2> resultant_velocity(const NavigationData<2>& nav, const ChartPoint<2>& x, double phi) {
  const auto e = unit_heading(nav.h.at(x), phi);
  const auto w = nav.wind(x);
  const double s = nav.speed(x);
  return {w[0] + s * e[0], w[1] + s * e[1]};
}

}  // namespace kropina
