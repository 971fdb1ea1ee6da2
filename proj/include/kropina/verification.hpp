#pragma once

/// The invariant suite behind `verify` and the acceptance binary. Each check
/// returns one pass/fail record; thresholds are fixed here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kropina/experiments.hpp"
#include "kropina/io.hpp"
#include "kropina/navigation.hpp"
#include "kropina/example_fields.hpp"
#include "kropina/scenario.hpp"

namespace kropina::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::filesystem::path work_dir = std::filesystem::temp_directory_path() / "kropina-verify";
  std::optional<std::filesystem::path> snapshot;  // endpoint snapshot to regress against
  bool write_snapshot = false;                    // record a fresh snapshot instead of comparing
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

template <class Fn>
CriterionResult timed(int id, std::string name, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = fn();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("unexpected error: ") + e.what();
  }
  r.id = id;
  r.name = std::move(name);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

// Margin below which F~(W~ + |u| e) = 1 cannot be resolved in double precision:
// the rounding of y is amplified roughly by 1 / margin^2 near the excluded heading.
inline constexpr double kIndicatrixConditioningFloor = 0.05;

inline CriterionResult spray_oracle() {
  return detail::timed(1, "spray matches explicit geodesic systems", [] {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    r.passed = true;
    std::string d;
    std::uint64_t seed = 1001;
    for (auto m : {ExampleMetric::original, ExampleMetric::generalized}) {
      const auto rep = compare_spray_with_explicit(m, random_admissible_states(m, 200, seed++), 1e-8);
      r.passed = r.passed && rep.agrees() && rep.states == 200;
      d += std::string(to_string(m)) + ": 200 states, max rel " + detail::sci(rep.max_rel_error);
      if (!rep.agrees()) {
        const auto& w = rep.discrepancies.front();
        d += " (" + std::to_string(rep.discrepancies.size()) + " discrepant; first at x = " +
             detail::sci(w.state.x[0]) + "," + detail::sci(w.state.x[1]) + ", terms:";
        for (const auto& [n, v] : w.explicit_form.x_terms) d += " " + n + "=" + detail::sci(v);
        d += ")";
      }
      d += "; ";
    }
    const double secs = detail::seconds_since(t0);
    r.passed = r.passed && secs < 10.0;
    r.detail = d + "tol 1e-08, " + detail::sci(secs) + " s (limit 10 s)";
    return r;
  });
}

inline CriterionResult indicatrix_condition() {
  return detail::timed(2, "unit-time indicatrix F~(W~ + |u| e) = 1", [] {
    const auto nav = example::generalized_navigation();
    const KropinaMetric<2> k(nav);
    std::mt19937_64 rng(2002);
    std::uniform_real_distribution<double> pos(-4.0, 4.0);
    double worst = 0.0, worst_all = 0.0;
    std::size_t checked = 0, skipped = 0, outside = 0;
    for (int i = 0; i < 50; ++i) {
      const ChartPoint<2> x{{pos(rng), pos(rng)}};
      for (int j = 0; j < 64; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / 64.0;
        const auto y = resultant_velocity(nav, x, phi);
        if (!k.in_domain(x, y)) {
          ++outside;
          continue;
        }
        const double err = std::abs(k(x, y) - 1.0);
        worst_all = std::max(worst_all, err);
        if (k.domain_margin(x, y) < kIndicatrixConditioningFloor) {
          ++skipped;
          continue;
        }
        worst = std::max(worst, err);
        ++checked;
      }
    }
    CriterionResult r;
    r.passed = worst <= 1e-12 && checked > 0;
    r.detail = std::to_string(checked) + " of 3200 pairs, max |F~ - 1| " + detail::sci(worst) + " (tol 1e-12); " +
               std::to_string(skipped) + " pairs below margin " + detail::sci(kIndicatrixConditioningFloor) +
               " skipped (max err there " + detail::sci(worst_all) + "), " + std::to_string(outside) +
               " outside the domain";
    return r;
  });
}

inline CriterionResult conformality() {
  return detail::timed(3, "conformality F~ |u| = F and conformal sea", [] {
    const auto nav = example::generalized_navigation();
    const KropinaMetric<2> kt(nav);
    const auto states = random_admissible_states(ExampleMetric::generalized, 1000, 3003, 4.0);
    double worst = 0.0, worst_sea = 0.0;
    for (const auto& st : states) {
      const auto c = conformal_compare(kt, st.x, st.v);
      worst = std::max(worst, std::abs(c.f_tilde * nav.speed(st.x) - c.f_unit) / c.f_unit);
      const auto s = conformal_sea_check(nav, st.x, st.v);
      worst_sea = std::max(worst_sea, std::abs(s.f_hat - s.f_tilde) / s.f_tilde);
    }
    CriterionResult r;
    r.passed = worst <= 1e-12 && worst_sea <= 1e-14;
    r.detail = "1000 states: max rel |F~|u| - F| " + detail::sci(worst) + " (tol 1e-12), max rel |F^ - F~| " +
               detail::sci(worst_sea) + " (tol 1e-14)";
    return r;
  });
}

inline CriterionResult constant_speed() {
  return detail::timed(4, "constant Finsler speed along the two-metric fan", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sc = example_scenario();
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    double drift = 0.0;
    std::size_t rays = 0;
    for (auto m : {ExampleMetric::original, ExampleMetric::generalized}) {
      FanSpec spec;
      spec.phi_step = std::numbers::pi / 8;
      spec.count = 16;
      spec.t_end = 10.0;
      spec.metric = m;
      const auto fan = generate_fan(sc, spec, cfg);
      for (const auto& ray : fan.rays) {
        drift = std::max(drift, ray.trajectory.max_speed_drift());
        if (ray.trajectory.terminal_reason == TerminalReason::time_limit) ++rays;
      }
    }
    const double secs = detail::seconds_since(t0);
    CriterionResult r;
    r.passed = rays == 30 && drift <= 1e-6 && secs < 30.0;
    r.detail = std::to_string(rays) + " of 30 rays reach t = 10, max drift " + detail::sci(drift) +
               " (tol 1e-06), " + detail::sci(secs) + " s (limit 30 s)";
    return r;
  });
}

inline CriterionResult travel_time_comparison() {
  return detail::timed(5, "generalized travel time never shorter", [] {
    const auto sc = example_scenario();
    FanSpec spec;
    spec.phi_step = std::numbers::pi / 8;
    spec.count = 16;
    spec.t_end = 3.0;
    spec.metric = ExampleMetric::generalized;
    const auto targets = targets_on_fan(generate_fan(sc, spec, IntegratorConfig{}), 3.0, 15);
    ShootingConfig sh;
    sh.t_max = 5.0;
    const auto rows = compare_travel_times(sc, sc.origin, targets, sh);
    std::size_t complete = 0, holds = 0;
    double worst_gap = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
      if (!row.complete()) continue;
      ++complete;
      const double gap = row.generalized->travel_time - row.original->travel_time;
      worst_gap = std::min(worst_gap, gap);
      if (gap >= -1e-6) ++holds;
    }

    // Constant |U| = 1/2: the same paths, twice the time.
    const auto half = constant_speed_scenario(0.5);
    spec.t_end = 2.0;
    const auto shared = targets_on_fan(generate_fan(half, spec, IntegratorConfig{}), 2.0, 4);
    sh.t_max = 4.0;
    const auto hrows = compare_travel_times(half, half.origin, shared, sh);
    double worst_ratio = 0.0, worst_heading = 0.0;
    std::size_t hcomplete = 0;
    for (const auto& row : hrows) {
      if (!row.complete()) continue;
      ++hcomplete;
      worst_ratio = std::max(worst_ratio, std::abs(row.generalized->travel_time / row.original->travel_time - 2.0));
      worst_heading = std::max(worst_heading, std::abs(row.generalized->phi0 - row.original->phi0));
    }
    CriterionResult r;
    r.passed = complete >= 8 && holds == complete && hcomplete == hrows.size() && hcomplete >= 1 &&
               worst_ratio <= 1e-4;
    r.detail = std::to_string(holds) + " of " + std::to_string(complete) + " complete targets (" +
               std::to_string(rows.size()) + " sampled) satisfy T~ >= T - 1e-06, min T~ - T " +
               detail::sci(worst_gap) + "; |U| = 1/2: " + std::to_string(hcomplete) + " targets, max |T~/T - 2| " +
               detail::sci(worst_ratio) + " (tol 1e-04), max heading gap " + detail::sci(worst_heading);
    return r;
  });
}

inline CriterionResult isochrone_nesting() {
  return detail::timed(6, "isochrone nesting and indicatrix similarity", [] {
    const auto sc = example_scenario();
    const std::vector<double> ts{1.0, 2.0, 3.0};
    FanSpec spec;
    spec.phi_step = std::numbers::pi / 180;
    spec.count = full_turn_count(spec.phi_step);
    spec.t_end = 3.0;
    spec.metric = ExampleMetric::generalized;
    const auto gen = generate_isochrone(sc, ts, spec, IntegratorConfig{});
    spec.metric = ExampleMetric::original;
    const auto orig = generate_isochrone(sc, ts, spec, IntegratorConfig{});
    std::size_t violations = 0, points = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      violations += nesting_violations(gen[i], orig[i], 1e-9);
      points += gen[i].points.size();
    }

    const auto kt = example::generalized_metric();
    const auto k = example::original_metric();
    const auto speed = example::speed_field();
    std::mt19937_64 rng(6006);
    std::uniform_real_distribution<double> pos(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const ChartPoint<2> x{{pos(rng), pos(rng)}};
      const auto w = sc.generalized.wind(x);
      const double wa = std::atan2(w[1], w[0]);
      for (int j = 0; j < 64; ++j) {
        // 64 directions spread over the open half-plane where the indicatrix is met.
        const double a = wa - 1.5 + 3.0 * j / 63.0;
        const Vec<double, 2> d{std::cos(a), std::sin(a)};
        worst = std::max(worst, std::abs(indicatrix_radius(kt, x, d) / indicatrix_radius(k, x, d) - speed(x)));
      }
    }
    CriterionResult r;
    r.passed = violations == 0 && points > 0 && worst <= 1e-10;
    r.detail = std::to_string(violations) + " of " + std::to_string(points) +
               " generalized isochrone points outside (t = 1, 2, 3); similarity ratio max |r - |u|| " +
               detail::sci(worst) + " at 20 x 64 (tol 1e-10)";
    return r;
  });
}

inline CriterionResult kropina_round_trip() {
  return detail::timed(7, "Kropina data round trip", [] {
    const auto nav = example::generalized_navigation();
    const ScalarField<2> kf([](const auto& p) {
      using std::cos;
      return 0.25 * cos(p[0] - p[1]) + 0.1 * p[0];
    });
    const KropinaMetric<2> k(nav);
    const KropinaMetric<2> plain(from_kropina_data(to_kropina_data(nav)));
    const KropinaMetric<2> factored(from_kropina_data(to_kropina_data<2>(nav, kf)));
    const auto unit = to_kropina_data(example::original_navigation());
    const auto constant = to_kropina_data(constant_wind_scenario(1.0).generalized);
    double worst = 0.0, worst_b2 = 0.0;
    for (const auto& st : random_admissible_states(ExampleMetric::generalized, 300, 7007, 4.0)) {
      const double f = k(st.x, st.v);
      worst = std::max({worst, std::abs(plain(st.x, st.v) - f) / f, std::abs(factored(st.x, st.v) - f) / f});
      worst_b2 = std::max({worst_b2, std::abs(unit.b2(st.x) - 4.0), std::abs(constant.b2(st.x) - 4.0)});
    }
    CriterionResult r;
    r.passed = worst <= 1e-12 && worst_b2 <= 1e-14;
    r.detail = "300 states: max rel metric error " + detail::sci(worst) + " (tol 1e-12); unit speed max |b^2 - 4| " +
               detail::sci(worst_b2);
    return r;
  });
}

inline CriterionResult excluded_heading() {
  return detail::timed(8, "excluded heading at the origin", [] {
    const auto nav = example::generalized_navigation();
    const ChartPoint<2> o{{0.0, 0.0}};
    CriterionResult r;
    std::string rejected = "not rejected";
    bool ok_reject = false;
    try {
      initial_state(nav, std::numbers::pi, o);
    } catch (const Error& e) {
      ok_reject = e.kind() == ErrorKind::excluded_heading;
      rejected = std::string(to_string(e.kind()));
    }
    const auto s = initial_state(nav, 0.0, o);
    r.passed = ok_reject && s.v[0] == 2.0 && s.v[1] == 0.0;
    r.detail = "phi0 = pi: " + rejected + "; phi0 = 0: v = (" + io::fmt17(s.v[0]) + ", " + io::fmt17(s.v[1]) + ")";
    return r;
  });
}

inline CriterionResult local_minimality() {
  return detail::timed(9, "fixed-endpoint perturbations do not shorten geodesics", [] {
    const auto nav = example::generalized_navigation();
    const KropinaMetric<2> k(nav);
    constexpr double T = 2.0, pi = std::numbers::pi;
    const std::vector<double> headings{0.0, pi / 4, pi / 2, -pi / 4, -pi / 2};
    std::vector<Trajectory<2>> geos;
    IntegratorConfig cfg;
    cfg.t_end = T;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    for (double phi : headings) geos.push_back(integrate(k, initial_state(nav, phi, {{0.0, 0.0}}), cfg));

    auto length = [&](const Trajectory<2>& g, const std::array<Vec<double, 2>, 3>& c) {
      std::vector<double> ts, fs;
      for (const auto& s : g.samples) {
        ChartPoint<2> x = s.x;
        Vec<double, 2> v = s.v;
        for (std::size_t m = 0; m < 3; ++m) {
          const double w = (m + 1) * pi / T;
          for (std::size_t i = 0; i < 2; ++i) {
            x.coords[i] += c[m][i] * std::sin(w * s.t);
            v[i] += c[m][i] * w * std::cos(w * s.t);
          }
        }
        ts.push_back(s.t);
        fs.push_back(k(x, v));
      }
      return simpson(ts, fs);
    };

    std::mt19937_64 rng(9009);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double worst_decrease = -std::numeric_limits<double>::infinity();
    double min_increase = std::numeric_limits<double>::infinity();
    bool reached = true;
    for (const auto& g : geos) reached = reached && g.terminal_reason == TerminalReason::time_limit;
    for (int trial = 0; trial < 50; ++trial) {
      const auto& g = geos[trial % geos.size()];
      std::array<Vec<double, 2>, 3> c{};
      double norm = 0.0;
      for (auto& ck : c) {
        ck = {coef(rng), coef(rng)};
        norm += std::hypot(ck[0], ck[1]);
      }
      for (auto& ck : c) ck = scaled(ck, 1e-3 / norm);  // sup |delta| <= 1e-3
      const std::array<Vec<double, 2>, 3> zero{};
      const double base = length(g, zero);
      const double pert = length(g, c);
      worst_decrease = std::max(worst_decrease, base - pert);
      min_increase = std::min(min_increase, pert - base);
    }
    CriterionResult r;
    r.passed = reached && worst_decrease <= 1e-9;
    r.detail = "50 trials on 5 geodesics of length 2: max decrease " + detail::sci(worst_decrease) +
               " (tol 1e-09), min increase " + detail::sci(min_increase);
    return r;
  });
}

// ---------------------------------------------------------------------------
// Reproduction artifacts

struct SnapshotRow {
  std::string artifact;
  std::string key;
  double x = 0.0, y = 0.0;
};

namespace detail {

inline std::vector<std::vector<std::string>> csv_body(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (!line.empty()) rows.push_back(io::detail::split_csv_line(line));
  }
  return rows;
}

/// Endpoints (or isochrone points) recorded per artifact file.
inline std::vector<SnapshotRow> snapshot_rows(const std::filesystem::path& dir, const std::string& file) {
  std::vector<SnapshotRow> out;
  const auto text = io::read_text(dir / file);
  if (file.find("trajectories_") != std::string::npos) {
    std::map<std::size_t, io::TrajectoryRow> last;
    for (const auto& r : io::parse_trajectory_csv(text)) last[r.ray_id] = r;
    for (const auto& [id, r] : last) out.push_back({file, "ray" + std::to_string(id), r.x, r.y});
  } else if (file.find("isochrones_") != std::string::npos) {
    for (const auto& c : csv_body(text)) out.push_back({file, "t" + c[0] + "/ray" + c[1], std::stod(c[3]), std::stod(c[4])});
  } else if (file.find("reachable_endpoints") != std::string::npos) {
    for (const auto& c : csv_body(text)) out.push_back({file, "ray" + c[0], std::stod(c[3]), std::stod(c[4])});
  }
  return out;
}

inline std::string format_snapshot(const std::vector<SnapshotRow>& rows) {
  std::string s = "artifact,key,x,y\n";
  for (const auto& r : rows) s += r.artifact + ',' + r.key + ',' + io::fmt17(r.x) + ',' + io::fmt17(r.y) + '\n';
  return s;
}

inline std::vector<SnapshotRow> parse_snapshot(const std::string& text) {
  std::vector<SnapshotRow> rows;
  for (const auto& c : csv_body(text)) {
    if (c.size() != 4) throw Error(ErrorKind::data, "malformed snapshot row");
    rows.push_back({c[0], c[1], std::stod(c[2]), std::stod(c[3])});
  }
  return rows;
}

}  // namespace detail

/// Runs every figure parameter set twice, checks the files are byte-identical
/// and regresses endpoint coordinates against the recorded snapshot.
inline CriterionResult reproduction_artifacts(const Options& opt, bool spray_ok) {
  return detail::timed(10, "figure artifacts deterministic and snapshot-stable", [&] {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path a = opt.work_dir / "run_a", b = opt.work_dir / "run_b";
    fs::remove_all(a);
    fs::remove_all(b);
    std::size_t files = 0, mismatched = 0, svgs = 0;
    std::vector<SnapshotRow> rows;
    std::vector<std::string> failures;
    for (const auto& fig : figure_runs()) {
      const auto cfg = resolve(fig.config);
      const auto sa = run_experiment(cfg, a);
      run_experiment(cfg, b);
      if (sa.numerical_failure) failures.push_back(fig.id + ": " + sa.failure);
      for (const auto& f : sa.outputs) {
        ++files;
        if (f.ends_with(".svg")) ++svgs;
        if (io::read_text(a / f) != io::read_text(b / f)) ++mismatched;
        for (auto& r : detail::snapshot_rows(a, f)) rows.push_back(std::move(r));
      }
    }

    CriterionResult r;
    std::string snap;
    bool snap_ok = false;
    if (opt.write_snapshot) {
      if (!spray_ok) {
        snap = "snapshot not written: spray oracle failing";
      } else if (!opt.snapshot) {
        snap = "snapshot not written: no path";
      } else {
        io::write_text(*opt.snapshot, detail::format_snapshot(rows));
        snap = "snapshot written with " + std::to_string(rows.size()) + " rows";
        snap_ok = true;
      }
    } else if (!opt.snapshot || !fs::exists(*opt.snapshot)) {
      snap = "no snapshot to compare against";
    } else {
      const auto ref = detail::parse_snapshot(io::read_text(*opt.snapshot));
      std::map<std::pair<std::string, std::string>, std::pair<double, double>> want;
      for (const auto& s : ref) want[{s.artifact, s.key}] = {s.x, s.y};
      std::size_t missing = 0;
      double worst = 0.0;
      for (const auto& s : rows) {
        const auto it = want.find({s.artifact, s.key});
        if (it == want.end()) {
          ++missing;
          continue;
        }
        const auto [x, y] = it->second;
        worst = std::max({worst, std::abs(s.x - x) / (1.0 + std::abs(x)), std::abs(s.y - y) / (1.0 + std::abs(y))});
      }
      snap_ok = missing == 0 && rows.size() == ref.size() && worst <= 1e-8;
      snap = std::to_string(rows.size()) + " endpoints vs " + std::to_string(ref.size()) + " recorded, " +
             std::to_string(missing) + " unmatched, max rel deviation " + detail::sci(worst) + " (tol 1e-08)";
    }
    r.passed = mismatched == 0 && files > 0 && svgs == figure_runs().size() && failures.empty() && snap_ok;
    r.detail = std::to_string(figure_runs().size()) + " parameter sets, " + std::to_string(files) + " files (" +
               std::to_string(svgs) + " SVG), " + std::to_string(mismatched) + " differ between runs; " + snap +
               "; " + detail::sci(detail::seconds_since(t0)) + " s";
    for (const auto& f : failures) r.detail += "; " + f;
    return r;
  });
}

inline std::vector<CriterionResult> run_all(const Options& opt) {
  std::vector<CriterionResult> out;
  out.push_back(spray_oracle());
  out.push_back(indicatrix_condition());
  out.push_back(conformality());
  out.push_back(constant_speed());
  out.push_back(travel_time_comparison());
  out.push_back(isochrone_nesting());
  out.push_back(kropina_round_trip());
  out.push_back(excluded_heading());
  out.push_back(local_minimality());
  out.push_back(reproduction_artifacts(opt, out.front().passed));
  return out;
}

inline std::string format_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %2d %-55s ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
  return std::string(head) + r.detail;
}

inline std::string format_table(const std::vector<CriterionResult>& rs) {
  std::string s;
  std::size_t passed = 0;
  for (const auto& r : rs) {
    s += format_line(r) + '\n';
    passed += r.passed;
  }
  s += std::to_string(passed) + "/" + std::to_string(rs.size()) + " criteria passed\n";
  return s;
}

}  // namespace kropina::verify
