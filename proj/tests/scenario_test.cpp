#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "kropina/scenario.hpp"

using namespace kropina;

namespace {

constexpr double pi = std::numbers::pi;

FanSpec fan_spec(double step, std::size_t count, double t_end, ExampleMetric m) {
  FanSpec s;
  s.phi_step = step;
  s.count = count;
  s.t_end = t_end;
  s.metric = m;
  return s;
}

}  // namespace

TEST(ExplicitSystem, HandEvaluatedOriginState) {
  const auto a = explicit_rhs_original({0.0, {{0.0, 0.0}}, {2.0, 0.0}});
  EXPECT_EQ(a.acceleration[0], 0.0);
  EXPECT_EQ(a.acceleration[1], 2.0);
  EXPECT_EQ(a.x_terms.size(), 4u);
  EXPECT_EQ(a.y_terms.size(), 3u);
}

TEST(ExplicitSystem, ZeroVelocityIsSingular) {
  EXPECT_THROW(explicit_rhs_original({0.0, {{0.0, 0.0}}, {0.0, 0.0}}), Error);
  EXPECT_THROW(explicit_rhs_generalized({0.0, {{0.0, 0.0}}, {0.0, 0.0}}), Error);
}

TEST(ExplicitSystem, TwoHomogeneous) {
  for (const auto& st : random_admissible_states(ExampleMetric::generalized, 100, 61)) {
    const GeodesicState<2> doubled{0.0, st.x, scaled(st.v, 2.0)};
    for (auto rhs : {explicit_rhs_original, explicit_rhs_generalized}) {
      const auto a = rhs(st).acceleration;
      const auto b = rhs(doubled).acceleration;
      EXPECT_LE(std::hypot(b[0] - 4 * a[0], b[1] - 4 * a[1]), 1e-12 * 4 * (1.0 + std::hypot(a[0], a[1])));
    }
  }
}

TEST(ExplicitSystem, GeneralizedReducesWhereSpeedIsOne) {
  // y = 0 and sin(x + y) = 0: the speed factor is one there.
  for (int k = -3; k <= 3; ++k) {
    for (const Vec<double, 2>& v : {Vec<double, 2>{1.0, 0.3}, Vec<double, 2>{0.4, -0.9}, Vec<double, 2>{2.0, 0.0}}) {
      const GeodesicState<2> st{0.0, {{k * pi, 0.0}}, v};
      const auto a = explicit_rhs_original(st).acceleration;
      const auto b = explicit_rhs_generalized(st).acceleration;
      EXPECT_NEAR(a[0], b[0], 1e-12 * (1.0 + std::abs(a[0])));
      EXPECT_NEAR(a[1], b[1], 1e-12 * (1.0 + std::abs(a[1])));
    }
  }
}

TEST(ExplicitSystem, AgreesWithSprayOnRandomStates) {
  for (auto m : {ExampleMetric::original, ExampleMetric::generalized}) {
    const auto rep = compare_spray_with_explicit(m, random_admissible_states(m, 200, 67));
    EXPECT_EQ(rep.states, 200u);
    EXPECT_TRUE(rep.agrees()) << to_string(m) << " max rel error " << rep.max_rel_error;
    EXPECT_LE(rep.max_rel_error, 1e-8);
  }
}

TEST(ExplicitSystem, DiscrepancyReportCarriesTerms) {
  // A tolerance below rounding forces every state into the report.
  const auto states = random_admissible_states(ExampleMetric::generalized, 5, 71);
  const auto rep = compare_spray_with_explicit(ExampleMetric::generalized, states, 0.0);
  ASSERT_FALSE(rep.discrepancies.empty());
  EXPECT_EQ(rep.discrepancies.front().explicit_form.x_terms.size(), 6u);
  EXPECT_EQ(rep.discrepancies.front().explicit_form.y_terms.size(), 6u);
}

TEST(InitialState, HeadingsAtOrigin) {
  const auto nav = example::generalized_navigation();
  const ChartPoint<2> o{{0.0, 0.0}};
  const auto s0 = initial_state(nav, 0.0, o);
  EXPECT_EQ(s0.v[0], 2.0);
  EXPECT_EQ(s0.v[1], 0.0);
  const auto s1 = initial_state(nav, pi / 2, o);
  EXPECT_NEAR(s1.v[0], 1.0, 1e-15);
  EXPECT_NEAR(s1.v[1], 1.0, 1e-15);
  try {
    initial_state(nav, pi, o);
    FAIL() << "expected excluded heading";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::excluded_heading);
  }
}

TEST(Fan, FigureTwoHasFifteenRaysPerMetric) {
  const auto sc = example_scenario();
  for (auto m : {ExampleMetric::original, ExampleMetric::generalized}) {
    const auto fan = generate_fan(sc, fan_spec(pi / 8, 16, 10.0, m), IntegratorConfig{});
    EXPECT_EQ(fan.rays.size(), 15u);
    ASSERT_EQ(fan.skipped.size(), 1u);
    EXPECT_DOUBLE_EQ(fan.skipped.front().phi0, pi);
    std::set<std::size_t> ids;
    for (const auto& r : fan.rays) {
      ids.insert(r.id);
      EXPECT_LE(r.trajectory.max_speed_drift(), 1e-6);
    }
    EXPECT_EQ(ids.size(), 15u);
    for (std::size_t i = 1; i < fan.rays.size(); ++i) EXPECT_LT(fan.rays[i - 1].phi0, fan.rays[i].phi0);
  }
}

TEST(Fan, FigureThreeLeftHasThirtyFiveRays) {
  const auto fan = generate_fan(example_scenario(), fan_spec(pi / 18, full_turn_count(pi / 18), 3.0,
                                                           ExampleMetric::generalized),
                                IntegratorConfig{});
  EXPECT_EQ(fan.rays.size(), 35u);
}

TEST(Fan, SingleRayMatchesDirectIntegration) {
  const auto sc = example_scenario();
  const auto fan = generate_fan(sc, fan_spec(pi / 8, 1, 2.0, ExampleMetric::generalized), IntegratorConfig{});
  ASSERT_EQ(fan.rays.size(), 1u);
  IntegratorConfig cfg;
  cfg.t_end = 2.0;
  const auto direct = integrate(sc.metric(ExampleMetric::generalized), {0.0, {{0.0, 0.0}}, {2.0, 0.0}}, cfg);
  ASSERT_EQ(direct.samples.size(), fan.rays[0].trajectory.samples.size());
  EXPECT_EQ(direct.samples.back().x[0], fan.rays[0].trajectory.samples.back().x[0]);
  EXPECT_EQ(direct.samples.back().x[1], fan.rays[0].trajectory.samples.back().x[1]);
}

TEST(Isochrone, ConstantWindIsTranslatedCircle) {
  const auto sc = constant_wind_scenario(0.5);
  const auto isos = generate_isochrone(sc, {1.0, 2.5}, fan_spec(pi / 12, 24, 0.0, ExampleMetric::generalized),
                                       IntegratorConfig{});
  ASSERT_EQ(isos.size(), 2u);
  for (const auto& iso : isos) {
    EXPECT_EQ(iso.points.size(), 23u);
    EXPECT_EQ(iso.excluded, 0u);
    for (const auto& p : iso.points) EXPECT_NEAR(std::hypot(p[0] - 0.5 * iso.t, p[1]), 0.5 * iso.t, 1e-9);
  }
}

TEST(Isochrone, GeneralizedInsideOriginal) {
  const auto sc = example_scenario();
  const std::vector<double> ts{1.0, 2.0, 3.0};
  const auto spec = fan_spec(pi / 36, 72, 3.0, ExampleMetric::generalized);
  auto spec_o = spec;
  spec_o.metric = ExampleMetric::original;
  const auto gen = generate_isochrone(sc, ts, spec, IntegratorConfig{});
  const auto orig = generate_isochrone(sc, ts, spec_o, IntegratorConfig{});
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_EQ(gen[i].points.size(), 71u);
    EXPECT_EQ(nesting_violations(gen[i], orig[i], 1e-9), 0u) << "t = " << ts[i];
  }
}

TEST(Reachable, EmptySweepGivesEmptyCloud) {
  Fan fan;
  const auto rs = reachable_set(fan);
  EXPECT_TRUE(rs.cloud.empty());
  EXPECT_TRUE(rs.boundary.empty());
}

TEST(Reachable, ConstantWindStaysDownwind) {
  const auto sc = constant_wind_scenario(1.0);
  const auto fan =
      generate_fan(sc, fan_spec(pi / 36, 72, 4.0, ExampleMetric::generalized), IntegratorConfig{});
  const auto rs = reachable_set(fan);
  ASSERT_FALSE(rs.cloud.empty());
  for (const auto& p : rs.cloud) EXPECT_GE(p.x, -1e-12);
  ASSERT_FALSE(rs.boundary.empty());
  EXPECT_GT(rs.alpha_radius, 0.0);
  EXPECT_EQ(rs.terminal_tally.at(TerminalReason::time_limit), 71u);
  // Every trajectory point lies on or inside the outer boundary.
  std::size_t longest = 0;
  for (std::size_t i = 1; i < rs.boundary.size(); ++i)
    if (rs.boundary[i].size() > rs.boundary[longest].size()) longest = i;
  for (const auto& p : rs.cloud) EXPECT_TRUE(planar::contains(rs.boundary[longest], p, 0.5 * rs.alpha_radius));
}

TEST(Compare, GeneralizedNeverFaster) {
  const auto sc = example_scenario();
  const auto fan = generate_fan(sc, fan_spec(pi / 8, 16, 3.0, ExampleMetric::generalized), IntegratorConfig{});
  const auto targets = targets_on_fan(fan, 3.0, 8);
  ASSERT_EQ(targets.size(), 8u);
  ShootingConfig cfg;
  cfg.t_max = 5.0;
  const auto rows = compare_travel_times(sc, {{0.0, 0.0}}, targets, cfg);
  std::size_t complete = 0;
  for (const auto& r : rows) {
    if (!r.complete()) continue;
    ++complete;
    EXPECT_GE(r.generalized->travel_time, r.original->travel_time - 1e-6);
  }
  EXPECT_GE(complete, 6u);
}

TEST(Compare, ConstantSpeedScalesTravelTime) {
  const ChartPoint<2> target{{1.2, 0.9}};
  ShootingConfig cfg;
  cfg.t_max = 8.0;
  std::vector<double> times;
  for (double c : {1.0 / 3.0, 2.0 / 3.0, 1.0}) {
    const auto rows = compare_travel_times(constant_speed_scenario(c), {{0.0, 0.0}}, {target}, cfg);
    ASSERT_TRUE(rows[0].complete()) << rows[0].excluded_reason;
    EXPECT_NEAR(rows[0].generalized->travel_time / rows[0].original->travel_time, 1.0 / c, 1e-4);
    times.push_back(rows[0].generalized->travel_time);
  }
  EXPECT_GE(times[0], times[1]);
  EXPECT_GE(times[1], times[2]);
}

TEST(Compare, UnitSpeedVariantCoincides) {
  ShootingConfig cfg;
  cfg.t_max = 5.0;
  const auto rows = compare_travel_times(constant_speed_scenario(1.0), {{0.0, 0.0}}, {{{1.5, 0.5}}}, cfg);
  ASSERT_TRUE(rows[0].complete());
  EXPECT_NEAR(rows[0].delta(), 0.0, 1e-6);
}
