#pragma once

/// Adaptive integration of the geodesic phase flow.
///
/// Dormand-Prince 5(4) with PI step control and its continuous extension.
/// Output is emitted on a fixed time grid (independent of internal steps).
/// A step whose stages leave the conic domain, or whose end state falls below
/// the boundary guard, is halved until the step size collapses; the
/// trajectory then ends with reason domain_boundary.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kropina/chart.hpp"
#include "kropina/error.hpp"
#include "kropina/navigation.hpp"
#include "kropina/spray.hpp"

namespace kropina {

template <std::size_t N>
struct GeodesicState {
  double t = 0.0;
  ChartPoint<N> x;
  Vec<double, N> v{};
};

enum class TerminalReason { time_limit, domain_boundary, step_failure };

inline std::string_view to_string(TerminalReason r) {
  switch (r) {
    case TerminalReason::time_limit: return "time-limit";
    case TerminalReason::domain_boundary: return "domain-boundary";
    case TerminalReason::step_failure: return "step-failure";
  }
  return "unknown";
}

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.25;
  double t_end = 10.0;
  double boundary_epsilon = 1e-9;  // stop when beta < eps |v|_h |W~|_h
  double output_stride = 0.01;
  std::size_t max_steps = 5'000'000;

  void check() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw Error(ErrorKind::usage, "tolerances must be positive");
    if (!(max_step > 0.0)) throw Error(ErrorKind::usage, "max_step must be positive");
    if (!(output_stride > 0.0)) throw Error(ErrorKind::usage, "output stride must be positive");
    if (!(t_end > 0.0)) throw Error(ErrorKind::usage, "t_end must be positive");
  }
};

template <std::size_t N>
struct Trajectory {
  std::vector<GeodesicState<N>> samples;
  std::vector<double> f_values;  // F(x(t), x'(t)) per sample
  std::vector<double> beta;      // beta(x(t), x'(t)) per sample (NaN if the metric has none)
  TerminalReason terminal_reason = TerminalReason::time_limit;
  std::string message;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  double end_time() const { return samples.empty() ? 0.0 : samples.back().t; }

  /// max_t |F(x'(t)) - F(x'(0))|
  double max_speed_drift() const {
    double d = 0.0;
    for (double f : f_values) d = std::max(d, std::abs(f - f_values.front()));
    return d;
  }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  // Continuous extension (Shampine).
  static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                          d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                          d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
};

template <std::size_t D>
using Phase = std::array<double, D>;

template <std::size_t D>
struct DenseStep {
  Phase<D> r1, r2, r3, r4, r5;

  Phase<D> at(double theta) const {
    const double t1 = 1.0 - theta;
    Phase<D> out;
    for (std::size_t i = 0; i < D; ++i)
      out[i] = r1[i] + theta * (r2[i] + t1 * (r3[i] + theta * (r4[i] + t1 * r5[i])));
    return out;
  }
};

template <class Metric>
auto phase_rhs(const Metric& m, const Phase<2 * Metric::dimension>& y) {
  constexpr std::size_t N = Metric::dimension;
  ChartPoint<N> x;
  Vec<double, N> v;
  for (std::size_t i = 0; i < N; ++i) {
    x.coords[i] = y[i];
    v[i] = y[N + i];
  }
  const auto d = geodesic_rhs(m, x, v);
  Phase<2 * N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = d.velocity[i];
    out[N + i] = d.acceleration[i];
  }
  return out;
}

template <class Metric>
double boundary_margin(const Metric& m, const ChartPoint<Metric::dimension>& x,
                       const Vec<double, Metric::dimension>& v) {
  if constexpr (requires { m.domain_margin(x, v); })
    return m.domain_margin(x, v);
  else
    return std::numeric_limits<double>::infinity();
}

template <class Metric>
double beta_of(const Metric& m, const ChartPoint<Metric::dimension>& x, const Vec<double, Metric::dimension>& v) {
  if constexpr (requires { m.beta(x, v); })
    return m.beta(x, v);
  else
    return std::numeric_limits<double>::quiet_NaN();
}

template <class Metric>
GeodesicState<Metric::dimension> unpack(double t, const Phase<2 * Metric::dimension>& y) {
  constexpr std::size_t N = Metric::dimension;
  GeodesicState<N> s;
  s.t = t;
  for (std::size_t i = 0; i < N; ++i) {
    s.x.coords[i] = y[i];
    s.v[i] = y[N + i];
  }
  return s;
}

}  // namespace detail

/// Integrates the geodesic through `initial` up to cfg.t_end.
template <FinslerMetric Metric>
Trajectory<Metric::dimension> integrate(const Metric& m, const GeodesicState<Metric::dimension>& initial,
                                        const IntegratorConfig& cfg) {
  constexpr std::size_t N = Metric::dimension;
  constexpr std::size_t D = 2 * N;
  using detail::Dopri5;
  using P = detail::Phase<D>;
  cfg.check();

  if (!initial.x.finite()) throw Error(ErrorKind::usage, "non-finite initial position");
  m.require_domain(initial.x, initial.v);
  if (!(detail::boundary_margin(m, initial.x, initial.v) > cfg.boundary_epsilon))
    throw Error(ErrorKind::domain, "initial velocity at the conic-domain boundary");

  Trajectory<N> traj;
  auto emit = [&](const GeodesicState<N>& s) {
    traj.samples.push_back(s);
    traj.f_values.push_back(m(s.x, s.v));
    traj.beta.push_back(detail::beta_of(m, s.x, s.v));
  };

  P y{};
  for (std::size_t i = 0; i < N; ++i) {
    y[i] = initial.x.coords[i];
    y[N + i] = initial.v[i];
  }
  const double t0 = initial.t;
  const double t_end = t0 + cfg.t_end;
  const double stride = cfg.output_stride;
  // Output grid t0 + k * stride, closed by t_end itself.
  std::vector<double> out_times;
  {
    const auto count = static_cast<std::size_t>(std::floor(cfg.t_end / stride + 1e-9));
    for (std::size_t k = 0; k <= count; ++k) out_times.push_back(t0 + static_cast<double>(k) * stride);
    if (t_end - out_times.back() > 1e-9 * stride)
      out_times.push_back(t_end);
    else
      out_times.back() = t_end;
  }
  const std::size_t last_index = out_times.size() - 1;
  auto grid_t = [&](std::size_t k) { return out_times[k]; };

  emit(detail::unpack<Metric>(t0, y));
  std::size_t next_out = 1;

  auto scale = [&](const P& a, const P& b, std::size_t i) {
    return cfg.abs_tol + cfg.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
  };

  P k1 = detail::phase_rhs(m, y);
  double h;
  {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      const double sk = scale(y, y, i);
      d0 += (y[i] / sk) * (y[i] / sk);
      d1 += (k1[i] / sk) * (k1[i] / sk);
    }
    d0 = std::sqrt(d0 / D);
    d1 = std::sqrt(d1 / D);
    h = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, cfg.max_step, cfg.t_end});
  }

  const double h_min = 1e-13 * std::max(1.0, std::abs(t_end));
  double t = t0;
  double err_old = 1e-4;
  bool reject_streak = false;
  bool hit_boundary = false;
  std::size_t steps = 0;

  while (t < t_end) {
    if (++steps > cfg.max_steps) {
      traj.terminal_reason = TerminalReason::step_failure;
      traj.message = "step budget exhausted";
      break;
    }
    if (t + h > t_end || t_end - (t + h) < h_min) h = t_end - t;

    P k2, k3, k4, k5, k6, k7, y_new, y_err;
    bool stage_failed = false;
    bool non_finite = false;
    try {
      P s;
      for (std::size_t i = 0; i < D; ++i) s[i] = y[i] + h * Dopri5::a21 * k1[i];
      k2 = detail::phase_rhs(m, s);
      for (std::size_t i = 0; i < D; ++i) s[i] = y[i] + h * (Dopri5::a31 * k1[i] + Dopri5::a32 * k2[i]);
      k3 = detail::phase_rhs(m, s);
      for (std::size_t i = 0; i < D; ++i)
        s[i] = y[i] + h * (Dopri5::a41 * k1[i] + Dopri5::a42 * k2[i] + Dopri5::a43 * k3[i]);
      k4 = detail::phase_rhs(m, s);
      for (std::size_t i = 0; i < D; ++i)
        s[i] = y[i] + h * (Dopri5::a51 * k1[i] + Dopri5::a52 * k2[i] + Dopri5::a53 * k3[i] + Dopri5::a54 * k4[i]);
      k5 = detail::phase_rhs(m, s);
      for (std::size_t i = 0; i < D; ++i)
        s[i] = y[i] + h * (Dopri5::a61 * k1[i] + Dopri5::a62 * k2[i] + Dopri5::a63 * k3[i] + Dopri5::a64 * k4[i] +
                           Dopri5::a65 * k5[i]);
      k6 = detail::phase_rhs(m, s);
      for (std::size_t i = 0; i < D; ++i)
        y_new[i] = y[i] + h * (Dopri5::a71 * k1[i] + Dopri5::a73 * k3[i] + Dopri5::a74 * k4[i] +
                               Dopri5::a75 * k5[i] + Dopri5::a76 * k6[i]);
      k7 = detail::phase_rhs(m, y_new);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::domain && e.kind() != ErrorKind::degeneracy && e.kind() != ErrorKind::evaluation)
        throw;
      stage_failed = true;
    }

    double err = 0.0;
    if (!stage_failed) {
      for (std::size_t i = 0; i < D; ++i) {
        y_err[i] = h * (Dopri5::e1 * k1[i] + Dopri5::e3 * k3[i] + Dopri5::e4 * k4[i] + Dopri5::e5 * k5[i] +
                        Dopri5::e6 * k6[i] + Dopri5::e7 * k7[i]);
        const double r = y_err[i] / scale(y, y_new, i);
        err += r * r;
        non_finite = non_finite || !std::isfinite(y_new[i]);
      }
      err = std::sqrt(err / D);
      non_finite = non_finite || !std::isfinite(err);
    }

    bool at_boundary = stage_failed;
    if (!stage_failed && !non_finite) {
      const auto s_new = detail::unpack<Metric>(t + h, y_new);
      at_boundary = !(detail::boundary_margin(m, s_new.x, s_new.v) > cfg.boundary_epsilon);
    }

    if (at_boundary || non_finite) {
      hit_boundary = hit_boundary || at_boundary;
      ++traj.rejected_steps;
      h *= 0.5;
      if (h < h_min) {
        traj.terminal_reason = non_finite && !hit_boundary ? TerminalReason::step_failure
                                                           : TerminalReason::domain_boundary;
        traj.message = non_finite ? "non-finite state" : "conic-domain boundary reached";
        break;
      }
      continue;
    }

    // PI step-size control (Hairer's dopri5 constants).
    constexpr double beta = 0.04, safe = 0.9, fac_min = 0.2, fac_max = 10.0;
    const double expo = 0.2 - beta * 0.75;
    const double fac11 = std::pow(err, expo);

    if (err > 1.0) {
      ++traj.rejected_steps;
      h /= std::min(1.0 / fac_min, fac11 / safe);
      reject_streak = true;
      if (h < h_min) {
        traj.terminal_reason = TerminalReason::step_failure;
        traj.message = "step size collapsed";
        break;
      }
      continue;
    }

    // Accepted: emit grid points inside (t, t + h].
    ++traj.accepted_steps;
    detail::DenseStep<D> dense;
    for (std::size_t i = 0; i < D; ++i) {
      const double ydiff = y_new[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      dense.r1[i] = y[i];
      dense.r2[i] = ydiff;
      dense.r3[i] = bspl;
      dense.r4[i] = ydiff - h * k7[i] - bspl;
      dense.r5[i] = h * (Dopri5::d1 * k1[i] + Dopri5::d3 * k3[i] + Dopri5::d4 * k4[i] + Dopri5::d5 * k5[i] +
                         Dopri5::d6 * k6[i] + Dopri5::d7 * k7[i]);
    }
    const double t_new = t + h;
    while (next_out <= last_index && grid_t(next_out) <= t_new + 1e-12 * std::max(1.0, std::abs(t_new))) {
      const double tk = grid_t(next_out);
      const double theta = std::clamp((tk - t) / h, 0.0, 1.0);
      const P yk = (next_out == last_index && tk >= t_new) ? y_new : dense.at(theta);
      emit(detail::unpack<Metric>(tk, yk));
      ++next_out;
    }

    t = t_new;
    y = y_new;
    k1 = k7;
    hit_boundary = false;

    double fac = fac11 / std::pow(err_old, beta);
    fac = std::max(1.0 / fac_max, std::min(1.0 / fac_min, fac / safe));
    double h_new = h / fac;
    if (reject_streak) h_new = std::min(h_new, h);
    reject_streak = false;
    err_old = std::max(err, 1e-4);
    h = std::min(h_new, cfg.max_step);
  }

  if (traj.terminal_reason != TerminalReason::time_limit && t > traj.samples.back().t + 1e-12)
    emit(detail::unpack<Metric>(t, y));
  return traj;
}

// ---------------------------------------------------------------------------
// Travel time

/// Integral of f over the abscissae t by composite Simpson on consecutive
/// interval pairs (non-uniform spacing allowed); an odd final interval uses
/// the quadratic through the last three samples.
inline double simpson(const std::vector<double>& t, const std::vector<double>& f) {
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * (t[1] - t[0]) * (f[0] + f[1]);
  double acc = 0.0;
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    const double h0 = t[i + 1] - t[i], h1 = t[i + 2] - t[i + 1];
    const double hs = h0 + h1;
    acc += hs / 6.0 * ((2.0 - h1 / h0) * f[i] + hs * hs / (h0 * h1) * f[i + 1] + (2.0 - h0 / h1) * f[i + 2]);
  }
  if (i + 1 < n) {
    const double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
    acc += f[i + 1] * (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1)) +
           f[i] * (h1 * h1 + 3.0 * h1 * h0) / (6.0 * h0) - f[i - 1] * h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
  }
  return acc;
}

/// F-length of the sampled curve, i.e. the time the ship needs to follow it.
template <FinslerMetric Metric>
double travel_time(const Metric& m, const Trajectory<Metric::dimension>& traj) {
  std::vector<double> t, f;
  t.reserve(traj.samples.size());
  f.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    t.push_back(s.t);
    f.push_back(m(s.x, s.v));
  }
  return simpson(t, f);
}

// ---------------------------------------------------------------------------
// Planar shooting

struct ShootingConfig {
  double phi_min = -std::numbers::pi + 1e-3;
  double phi_max = std::numbers::pi - 1e-3;
  std::size_t scan_samples = 90;
  double tolerance = 1e-6;  // miss distance accepted as a hit
  double t_max = 12.0;
  std::size_t max_iterations = 100;
  IntegratorConfig integrator{};
};

struct ShootingResult {
  double phi0 = 0.0;
  double travel_time = 0.0;
  double miss = 0.0;
};

namespace detail {

struct ClosestApproach {
  bool valid = false;
  double t = 0.0;
  double signed_miss = 0.0;
};

/// Cubic Hermite interpolation of a planar trajectory between two samples.
inline std::array<double, 4> hermite(const GeodesicState<2>& a, const GeodesicState<2>& b, double s) {
  const double h = b.t - a.t;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  const double d00 = 6 * s2 - 6 * s, d10 = 3 * s2 - 4 * s + 1, d01 = -6 * s2 + 6 * s, d11 = 3 * s2 - 2 * s;
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 2; ++i) {
    out[i] = h00 * a.x.coords[i] + h10 * h * a.v[i] + h01 * b.x.coords[i] + h11 * h * b.v[i];
    out[2 + i] = (d00 * a.x.coords[i] + d01 * b.x.coords[i]) / h + d10 * a.v[i] + d11 * b.v[i];
  }
  return out;
}

inline ClosestApproach closest_approach(const Trajectory<2>& traj, const ChartPoint<2>& target) {
  const auto& s = traj.samples;
  ClosestApproach ca;
  if (s.size() < 3) return ca;
  auto d2 = [&](std::size_t k) {
    const double dx = s[k].x.coords[0] - target.coords[0], dy = s[k].x.coords[1] - target.coords[1];
    return dx * dx + dy * dy;
  };
  std::size_t best = 0;
  for (std::size_t k = 1; k < s.size(); ++k)
    if (d2(k) < d2(best)) best = k;
  if (best == 0 || best + 1 == s.size()) return ca;  // no interior minimum

  // Golden-section search on the Hermite interpolant over [t_{k-1}, t_{k+1}].
  auto dist2_at = [&](double tau) {
    const std::size_t k = tau <= s[best].t ? best - 1 : best;
    const double u = (tau - s[k].t) / (s[k + 1].t - s[k].t);
    const auto p = hermite(s[k], s[k + 1], u);
    const double dx = p[0] - target.coords[0], dy = p[1] - target.coords[1];
    return std::make_pair(dx * dx + dy * dy, p);
  };
  double lo = s[best - 1].t, hi = s[best + 1].t;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = dist2_at(c).first, fd = dist2_at(d).first;
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      hi = d, d = c, fd = fc;
      c = hi - g * (hi - lo);
      fc = dist2_at(c).first;
    } else {
      lo = c, c = d, fc = fd;
      d = lo + g * (hi - lo);
      fd = dist2_at(d).first;
    }
  }
  const double tau = 0.5 * (lo + hi);
  const auto [dd, p] = dist2_at(tau);
  const double cross = p[2] * (target.coords[1] - p[1]) - p[3] * (target.coords[0] - p[0]);
  ca.valid = true;
  ca.t = tau - s.front().t;
  ca.signed_miss = (cross >= 0.0 ? 1.0 : -1.0) * std::sqrt(dd);
  return ca;
}

}  // namespace detail

/// Finds the heading phi0 in [cfg.phi_min, cfg.phi_max] whose geodesic from
/// `start` passes within cfg.tolerance of `target`, and returns the earliest
/// such arrival. Throws a no_solution error when no heading in the scanned
/// fan reaches the target.
inline ShootingResult shoot_to_target(const KropinaMetric<2>& k, const ChartPoint<2>& start,
                                      const ChartPoint<2>& target, const ShootingConfig& cfg) {
  const double sep = std::hypot(target.coords[0] - start.coords[0], target.coords[1] - start.coords[1]);
  if (!(sep > 0.0)) throw Error(ErrorKind::usage, "target coincides with start");
  IntegratorConfig icfg = cfg.integrator;
  icfg.t_end = cfg.t_max;

  auto probe = [&](double phi) -> detail::ClosestApproach {
    const auto v = resultant_velocity(k.navigation(), start, phi);
    if (!k.in_domain(start, v, 1e-6)) return {};
    try {
      const auto traj = integrate(k, GeodesicState<2>{0.0, start, v}, icfg);
      return detail::closest_approach(traj, target);
    } catch (const Error&) {
      return {};
    }
  };

  const std::size_t n = std::max<std::size_t>(cfg.scan_samples, 2);
  std::vector<double> phis(n);
  std::vector<detail::ClosestApproach> probes(n);
  for (std::size_t i = 0; i < n; ++i) {
    phis[i] = cfg.phi_min + (cfg.phi_max - cfg.phi_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    probes[i] = probe(phis[i]);
  }

  std::optional<ShootingResult> best;
  auto consider = [&](double phi, const detail::ClosestApproach& ca) {
    if (!ca.valid || std::abs(ca.signed_miss) > cfg.tolerance) return;
    if (!best || ca.t < best->travel_time) best = ShootingResult{phi, ca.t, std::abs(ca.signed_miss)};
  };

  for (std::size_t i = 0; i < n; ++i) consider(phis[i], probes[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& pa = probes[i];
    const auto& pb = probes[i + 1];
    if (!pa.valid || !pb.valid) continue;
    if ((pa.signed_miss > 0.0) == (pb.signed_miss > 0.0)) continue;
    // Illinois-modified regula falsi on the signed miss distance.
    double a = phis[i], b = phis[i + 1];
    double fa = pa.signed_miss, fb = pb.signed_miss;
    int side = 0;
    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
      double c = (a * fb - b * fa) / (fb - fa);
      if (!(c > std::min(a, b) && c < std::max(a, b))) c = 0.5 * (a + b);
      const auto pc = probe(c);
      if (!pc.valid) break;
      if (std::abs(pc.signed_miss) <= cfg.tolerance) {
        consider(c, pc);
        break;
      }
      if ((pc.signed_miss > 0.0) == (fb > 0.0)) {
        b = c, fb = pc.signed_miss;
        if (side == -1) fa *= 0.5;
        side = -1;
      } else {
        a = c, fa = pc.signed_miss;
        if (side == 1) fb *= 0.5;
        side = 1;
      }
      if (std::abs(b - a) < 1e-15) break;  // sign flip without a hit: a fold, not a crossing
    }
  }
  if (!best) throw Error(ErrorKind::no_solution, "target not reached by any heading of the scanned fan");
  return *best;
}

}  // namespace kropina
