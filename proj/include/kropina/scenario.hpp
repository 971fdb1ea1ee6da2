#pragma once

/// The planar example: explicit geodesic systems as printed (kept as
/// reference oracles for the spray), initial conditions steered by the
/// heading phi0, and the experiment generators (fans, isochrones, reachable
/// sets, travel-time comparisons).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "kropina/chart.hpp"
#include "kropina/error.hpp"
#include "kropina/integrator.hpp"
#include "kropina/navigation.hpp"
#include "kropina/example_fields.hpp"
#include "kropina/planar.hpp"
#include "kropina/spray.hpp"

namespace kropina {

// ---------------------------------------------------------------------------
// Explicit geodesic systems

/// Acceleration from an explicit system, with the bracketed terms kept
/// separately so a disagreement can be traced to individual terms.
struct ExplicitAcceleration {
  Vec<double, 2> acceleration{};
  double prefactor_x = 0.0;  // acceleration[0] = prefactor_x * sum(x_terms)
  double prefactor_y = 0.0;
  std::vector<std::pair<std::string, double>> x_terms;
  std::vector<std::pair<std::string, double>> y_terms;
};

namespace detail {

inline double term_sum(const std::vector<std::pair<std::string, double>>& terms) {
  double s = 0.0;
  for (const auto& [name, v] : terms) s += v;
  return s;
}

inline void require_moving(const GeodesicState<2>& s) {
  if (!(s.v[0] * s.v[0] + s.v[1] * s.v[1] > 0.0))
    throw Error(ErrorKind::domain, "explicit system is singular at zero velocity");
}

}  // namespace detail

/// Geodesic equations of F = (u^2 + v^2) / (2 (u cos(x+y) + v sin(x+y))), solved for (x'', y'').
inline ExplicitAcceleration explicit_rhs_original(const GeodesicState<2>& st) {
  detail::require_moving(st);
  const double x = st.x[0], y = st.x[1];
  const double a = st.v[0], b = st.v[1];  // x', y'
  const double s = std::sin(x + y), c = std::cos(x + y), s2 = std::sin(2.0 * (x + y));
  const double a2 = a * a, b2 = b * b, a3 = a2 * a, b3 = b2 * b, a4 = a2 * a2, b4 = b2 * b2;
  const double S = a2 + b2;

  ExplicitAcceleration out;
  out.x_terms = {
      {"sin^2", (4 * a3 * b + 4 * a2 * b2 - a4 + b4) * s * s},
      {"sin2 quartic", 0.5 * (a4 + b4) * s2},
      {"sin2 mixed", a * b * (-3 * a * b + 2 * a2 - 2 * b2) * s2},
      {"cos^2", 2 * b2 * (2 * a * b - a2 + b2) * c * c},
  };
  out.y_terms = {
      {"sin^2 + sin2 mixed", a * (2 * a * (2 * a * b + a2 - b2) * s * s + b * (-3 * a * b - 2 * a2 + 2 * b2) * s2)},
      {"cos^2", (4 * a2 * b2 + 4 * a * b3 + a4 - b4) * c * c},
      {"sin2 quartic", 0.5 * (a4 + b4) * s2},
  };
  out.prefactor_x = -1.0 / (2.0 * S);
  out.prefactor_y = 1.0 / (2.0 * S);
  out.acceleration = {out.prefactor_x * detail::term_sum(out.x_terms),
                      out.prefactor_y * detail::term_sum(out.y_terms)};
  return out;
}

/// Geodesic equations of the generalized metric with |U| = 2/3 exp(-y^2 sin^2(x+y)/pi) + 1/3.
inline ExplicitAcceleration explicit_rhs_generalized(const GeodesicState<2>& st) {
  detail::require_moving(st);
  constexpr double pi = std::numbers::pi;
  const double x = st.x[0], y = st.x[1];
  const double a = st.v[0], b = st.v[1];
  const double s = std::sin(x + y), c = std::cos(x + y), s2 = std::sin(2.0 * (x + y));
  const double a2 = a * a, b2 = b * b, a3 = a2 * a, b3 = b2 * b, a4 = a2 * a2, b4 = b2 * b2;
  const double S = a2 + b2;
  const double E = std::exp(y * y * s * s / pi);
  const double E2 = E + 2.0;
  const double sn2 = s * s, sn4 = sn2 * sn2, cs2 = c * c, cs3 = cs2 * c;

  ExplicitAcceleration out;
  out.x_terms = {
      {"sin^4", 16 * y * a * b3 * sn4},
      {"sin^2", -pi * (-4 * a3 * b - 4 * a2 * b2 + a4 - b4) * E2 * sn2},
      {"sin2 bracket",
       s2 * (pi * ((2 * a3 * b - 3 * a2 * b2 - 2 * a * b3) * E2 + a4 + b4) -
             y * (-4 * (y + 1) * a3 * b - 6 * y * a2 * b2 + 4 * y * a * b3 + y * a4 + y * b4) * s2)},
      {"sin cos^3", 8 * y * y * a2 * (2 * a * b + a2 - b2) * s * cs3},
      {"cos^2", 2 * pi * b2 * (2 * a * b - a2 + b2) * E2 * cs2},
      {"half sin2 bracket",
       0.5 * s2 *
           (4 * y * (2 * (2 * y + 3) * a2 * b2 + 4 * y * a * b3 + (y - 1) * a4 - (y + 1) * b4) * sn2 +
            pi * (a4 + b4) * E)},
  };
  out.y_terms = {
      {"sin^4", -8 * y * b2 * (b2 - a2) * sn4},
      {"sin^2", 2 * pi * a2 * (2 * a * b + a2 - b2) * E2 * sn2},
      {"sin2 bracket",
       s2 * (pi * ((-2 * a3 * b - 3 * a2 * b2 + 2 * a * b3) * E2 + a4 + b4) +
             y * (4 * y * a3 * b - 2 * (3 * y + 2) * a2 * b2 - 4 * y * a * b3 + (y + 1) * a4 + (y - 1) * b4) * s2)},
      {"sin cos^3", 4 * y * y * (-4 * a3 * b - 4 * a2 * b2 + a4 - b4) * s * cs3},
      {"cos^2", pi * (4 * a2 * b2 + 4 * a * b3 + a4 - b4) * E2 * cs2},
      {"half sin2 bracket",
       0.5 * s2 * (pi * (a4 + b4) * E - 8 * y * b * (-y * a2 * b + 2 * (y + 1) * a * b2 - 2 * a3 + y * b3) * sn2)},
  };
  const double D = 2.0 * pi * S * E2;
  out.prefactor_x = -1.0 / D;
  out.prefactor_y = 1.0 / D;
  out.acceleration = {out.prefactor_x * detail::term_sum(out.x_terms),
                      out.prefactor_y * detail::term_sum(out.y_terms)};
  return out;
}

enum class ExampleMetric { original, generalized };

inline std::string_view to_string(ExampleMetric m) {
  return m == ExampleMetric::original ? "original" : "generalized";
}

struct SprayDiscrepancy {
  GeodesicState<2> state;
  Vec<double, 2> spray_acceleration{};
  ExplicitAcceleration explicit_form;
  double rel_error = 0.0;
};

struct SprayOracleReport {
  ExampleMetric metric = ExampleMetric::original;
  std::size_t states = 0;
  double max_rel_error = 0.0;
  double tolerance = 1e-8;
  std::vector<SprayDiscrepancy> discrepancies;  // states beyond tolerance, with per-term breakdown
  bool agrees() const { return discrepancies.empty(); }
};

/// Random admissible phase points for the example: positions in [-r, r]^2,
/// headings away from the excluded one, unit-F speed scaled randomly.
inline std::vector<GeodesicState<2>> random_admissible_states(ExampleMetric which, std::size_t count,
                                                              std::uint64_t seed, double r = 3.0) {
  const auto nav = which == ExampleMetric::original ? example::original_navigation() : example::generalized_navigation();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-r, r);
  std::uniform_real_distribution<double> ang(-0.9 * std::numbers::pi, 0.9 * std::numbers::pi);
  std::uniform_real_distribution<double> mag(0.25, 4.0);
  std::vector<GeodesicState<2>> out;
  out.reserve(count);
  while (out.size() < count) {
    const ChartPoint<2> x{{pos(rng), pos(rng)}};
    const auto w = nav.wind(x);
    const double heading = std::atan2(w[1], w[0]) + ang(rng);
    auto v = resultant_velocity(nav, x, heading);
    v = scaled(v, mag(rng));
    out.push_back({0.0, x, v});
  }
  return out;
}

/// Compares -2G from the differentiated metric with the explicit system at
/// each state; states beyond `tol` are reported with the explicit terms.
inline SprayOracleReport compare_spray_with_explicit(ExampleMetric which, const std::vector<GeodesicState<2>>& states,
                                                     double tol = 1e-8) {
  const auto metric = which == ExampleMetric::original ? example::original_metric() : example::generalized_metric();
  SprayOracleReport rep;
  rep.metric = which;
  rep.tolerance = tol;
  for (const auto& st : states) {
    const auto d = geodesic_rhs(metric, st.x, st.v);
    const auto ex = which == ExampleMetric::original ? explicit_rhs_original(st) : explicit_rhs_generalized(st);
    const double scale = std::max(std::hypot(d.acceleration[0], d.acceleration[1]),
                                  1e-3 * (st.v[0] * st.v[0] + st.v[1] * st.v[1]));
    const double err =
        std::hypot(d.acceleration[0] - ex.acceleration[0], d.acceleration[1] - ex.acceleration[1]) / scale;
    ++rep.states;
    rep.max_rel_error = std::max(rep.max_rel_error, err);
    if (!(err <= tol)) rep.discrepancies.push_back({st, d.acceleration, ex, err});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Scenarios

/// A planar sea with its generalized data (h, W~, |u|) and the original
/// data built from the normalised wind W = W~/|u| at unit speed.
struct Scenario {
  std::string id;
  NavigationData<2> generalized;
  NavigationData<2> original;
  ChartPoint<2> origin{{0.0, 0.0}};

  KropinaMetric<2> metric(ExampleMetric which) const {
    return KropinaMetric<2>(which == ExampleMetric::original ? original : generalized);
  }
};

inline Scenario example_scenario() {
  return {"example", example::generalized_navigation(), example::original_navigation(), {{0.0, 0.0}}};
}

/// Uniform wind (w, 0) with ship speed w; the original problem has w = 1.
inline Scenario constant_wind_scenario(double w = 1.0) {
  if (!(w > 0.0 && w <= 1.0)) throw Error(ErrorKind::data, "constant wind speed must lie in (0, 1]");
  return {"constant-wind",
          {euclidean_metric<2>(), constant_vector<2>({w, 0.0}), constant_scalar<2>(w)},
          {euclidean_metric<2>(), constant_vector<2>({1.0, 0.0}), constant_scalar<2>(1.0)},
          {{0.0, 0.0}}};
}

/// The example's rotating unit wind with a constant ship speed c.
inline Scenario constant_speed_scenario(double c) {
  if (!(c > 0.0 && c <= 1.0)) throw Error(ErrorKind::data, "constant ship speed must lie in (0, 1]");
  return {"constant-speed", example::constant_speed_navigation(c), example::original_navigation(), {{0.0, 0.0}}};
}

// ---------------------------------------------------------------------------
// Initial conditions

/// x'(0) = W~(x0) + |u(x0)| e(phi0); at the example's origin (1 + cos phi0, sin phi0).
/// Headings whose resultant velocity leaves the conic domain (u = -W~) are excluded.
inline GeodesicState<2> initial_state(const NavigationData<2>& nav, double phi0, const ChartPoint<2>& origin,
                                      double boundary_epsilon = 1e-9) {
  const auto v = resultant_velocity(nav, origin, phi0);
  const KropinaMetric<2> k(nav);
  if (!k.in_domain(origin, v, boundary_epsilon))
    throw Error(ErrorKind::excluded_heading,
                "heading phi0 = " + std::to_string(phi0) + " steers against the wind; resultant velocity vanishes");
  return {0.0, origin, v};
}

// ---------------------------------------------------------------------------
// Fans

struct FanSpec {
  ChartPoint<2> origin{{0.0, 0.0}};
  double phi_start = 0.0;
  double phi_step = std::numbers::pi / 8.0;
  std::size_t count = 16;
  double t_end = 10.0;
  ExampleMetric metric = ExampleMetric::generalized;

  double phi(std::size_t k) const { return phi_start + static_cast<double>(k) * phi_step; }
};

/// Headings covering [0, 2 pi) with the given increment.
inline std::size_t full_turn_count(double step) {
  return static_cast<std::size_t>(std::llround(2.0 * std::numbers::pi / step));
}

struct Ray {
  std::size_t id = 0;
  double phi0 = 0.0;
  Trajectory<2> trajectory;
};

struct SkippedHeading {
  double phi0 = 0.0;
  std::string reason;
};

struct Fan {
  FanSpec spec;
  std::vector<Ray> rays;
  std::vector<SkippedHeading> skipped;

  std::map<TerminalReason, std::size_t> terminal_tally() const {
    std::map<TerminalReason, std::size_t> t;
    for (const auto& r : rays) ++t[r.trajectory.terminal_reason];
    return t;
  }
};

namespace detail {

/// Runs fn(i) for i in [0, n) on the available hardware threads; results are
/// indexed, so ordering never depends on scheduling.
template <class Fn>
auto parallel_map(std::size_t n, Fn&& fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::optional<R>> slots(n);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) slots[i].emplace(fn(i));
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w)
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < n; i += workers) slots[i].emplace(fn(i));
      }));
    for (auto& j : jobs) j.get();
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace detail

/// One geodesic per admissible heading; excluded headings are recorded, not thrown.
inline Fan generate_fan(const Scenario& sc, const FanSpec& spec, const IntegratorConfig& base) {
  IntegratorConfig cfg = base;
  cfg.t_end = spec.t_end;
  const auto& nav = spec.metric == ExampleMetric::original ? sc.original : sc.generalized;
  const KropinaMetric<2> k(nav);

  struct Outcome {
    std::optional<Trajectory<2>> traj;
    std::string reason;
  };
  auto outcomes = detail::parallel_map(spec.count, [&](std::size_t i) -> Outcome {
    try {
      const auto init = initial_state(nav, spec.phi(i), spec.origin, cfg.boundary_epsilon);
      return {integrate(k, init, cfg), {}};
    } catch (const Error& e) {
      return {std::nullopt, e.what()};
    }
  });

  Fan fan;
  fan.spec = spec;
  for (std::size_t i = 0; i < spec.count; ++i) {
    if (outcomes[i].traj)
      fan.rays.push_back({fan.rays.size(), spec.phi(i), std::move(*outcomes[i].traj)});
    else
      fan.skipped.push_back({spec.phi(i), outcomes[i].reason});
  }
  return fan;
}

// ---------------------------------------------------------------------------
// Isochrones

/// Position (and velocity) of a trajectory at time t, by cubic Hermite
/// interpolation between output samples; nullopt past its end.
inline std::optional<GeodesicState<2>> state_at(const Trajectory<2>& traj, double t) {
  const auto& s = traj.samples;
  if (s.empty() || t < s.front().t - 1e-12 || t > s.back().t + 1e-12) return std::nullopt;
  auto it = std::lower_bound(s.begin(), s.end(), t, [](const GeodesicState<2>& a, double tt) { return a.t < tt; });
  if (it == s.end()) it = std::prev(s.end());
  if (std::abs(it->t - t) <= 1e-12) return *it;
  if (it == s.begin()) return *it;
  const auto& b = *it;
  const auto& a = *std::prev(it);
  const auto p = detail::hermite(a, b, (t - a.t) / (b.t - a.t));
  return GeodesicState<2>{t, ChartPoint<2>{{p[0], p[1]}}, {p[2], p[3]}};
}

struct Isochrone {
  double t = 0.0;
  ExampleMetric metric = ExampleMetric::generalized;
  std::vector<ChartPoint<2>> points;  // ordered by phi0
  std::vector<double> phi0;
  std::vector<std::size_t> ray_ids;
  std::size_t excluded = 0;  // rays that ended before t
};

inline std::vector<Isochrone> isochrones_from_fan(const Fan& fan, const std::vector<double>& t_values) {
  std::vector<Isochrone> out;
  for (double t : t_values) {
    Isochrone iso;
    iso.t = t;
    iso.metric = fan.spec.metric;
    for (const auto& r : fan.rays) {
      const auto s = state_at(r.trajectory, t);
      if (!s) {
        ++iso.excluded;
        continue;
      }
      iso.points.push_back(s->x);
      iso.phi0.push_back(r.phi0);
      iso.ray_ids.push_back(r.id);
    }
    out.push_back(std::move(iso));
  }
  return out;
}

inline std::vector<Isochrone> generate_isochrone(const Scenario& sc, const std::vector<double>& t_values, FanSpec spec,
                                                 const IntegratorConfig& cfg) {
  double horizon = 0.0;
  for (double t : t_values) {
    if (!(t > 0.0)) throw Error(ErrorKind::usage, "isochrone times must be positive");
    horizon = std::max(horizon, t);
  }
  spec.t_end = std::max(spec.t_end, horizon);
  return isochrones_from_fan(generate_fan(sc, spec, cfg), t_values);
}

inline std::vector<planar::Point> as_polygon(const Isochrone& iso) {
  std::vector<planar::Point> poly;
  for (const auto& p : iso.points) poly.push_back({p[0], p[1]});
  return poly;
}

/// Points of `inner` lying outside the closed polyline of `outer` by more than tol.
inline std::size_t nesting_violations(const Isochrone& inner, const Isochrone& outer, double tol) {
  const auto poly = as_polygon(outer);
  std::size_t bad = 0;
  for (const auto& p : inner.points)
    if (!planar::contains(poly, {p[0], p[1]}, tol)) ++bad;
  return bad;
}

// ---------------------------------------------------------------------------
// Reachable set

struct ReachableSet {
  std::vector<planar::Point> cloud;
  std::vector<std::vector<planar::Point>> boundary;
  double alpha_radius = 0.0;
  std::map<TerminalReason, std::size_t> terminal_tally;
  std::size_t rays = 0;
};

/// Union of the fan's trajectory points (decimated by `cloud_every` output
/// samples) with its alpha-shape boundary. The disc radius is twice the
/// median nearest-neighbour spacing of the ray endpoints.
inline ReachableSet reachable_set(const Fan& fan, std::size_t cloud_every = 10) {
  ReachableSet rs;
  rs.rays = fan.rays.size();
  rs.terminal_tally = fan.terminal_tally();
  if (fan.rays.empty()) return rs;
  cloud_every = std::max<std::size_t>(cloud_every, 1);

  std::vector<planar::Point> ends;
  for (const auto& r : fan.rays) {
    const auto& s = r.trajectory.samples;
    for (std::size_t k = 0; k < s.size(); k += cloud_every) rs.cloud.push_back({s[k].x[0], s[k].x[1]});
    if ((s.size() - 1) % cloud_every != 0) rs.cloud.push_back({s.back().x[0], s.back().x[1]});
    ends.push_back({s.back().x[0], s.back().x[1]});
  }
  rs.alpha_radius = 2.0 * planar::median_nearest_spacing(ends);
  if (rs.alpha_radius > 0.0) rs.boundary = planar::alpha_shape_boundary(rs.cloud, rs.alpha_radius);
  return rs;
}

// ---------------------------------------------------------------------------
// Travel-time comparison

struct ComparisonRow {
  ChartPoint<2> target;
  std::optional<ShootingResult> original;     // under F
  std::optional<ShootingResult> generalized;  // under F~
  std::string excluded_reason;

  bool complete() const { return original && generalized; }
  double delta() const { return generalized->travel_time - original->travel_time; }
};

inline std::vector<ComparisonRow> compare_travel_times(const Scenario& sc, const ChartPoint<2>& start,
                                                       const std::vector<ChartPoint<2>>& targets,
                                                       const ShootingConfig& cfg) {
  const auto korig = sc.metric(ExampleMetric::original);
  const auto kgen = sc.metric(ExampleMetric::generalized);
  return detail::parallel_map(targets.size(), [&](std::size_t i) {
    ComparisonRow row;
    row.target = targets[i];
    try {
      row.original = shoot_to_target(korig, start, targets[i], cfg);
      row.generalized = shoot_to_target(kgen, start, targets[i], cfg);
    } catch (const Error& e) {
      row.excluded_reason = e.what();
    }
    return row;
  });
}

/// Targets taken on the F~ fan at time t: positions of `count` rays spread over the fan.
inline std::vector<ChartPoint<2>> targets_on_fan(const Fan& fan, double t, std::size_t count) {
  std::vector<ChartPoint<2>> out;
  if (fan.rays.empty() || count == 0) return out;
  const std::size_t n = fan.rays.size();
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t idx = (j * n) / count;
    if (const auto s = state_at(fan.rays[idx].trajectory, t)) out.push_back(s->x);
  }
  return out;
}

}  // namespace kropina
