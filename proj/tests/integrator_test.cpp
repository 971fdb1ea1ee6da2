#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "kropina/integrator.hpp"
#include "kropina/navigation.hpp"
#include "kropina/example_fields.hpp"

using namespace kropina;

namespace {

constexpr double pi = std::numbers::pi;

KropinaMetric<2> constant_wind() {
  return KropinaMetric<2>(
      NavigationData<2>{euclidean_metric<2>(), constant_vector<2>({1.0, 0.0}), constant_scalar<2>(1.0)});
}

IntegratorConfig with_end(double t) {
  IntegratorConfig c;
  c.t_end = t;
  return c;
}

}  // namespace

TEST(Integrate, StraightLineUnderConstantWind) {
  const auto traj = integrate(constant_wind(), {0.0, {{0.0, 0.0}}, {2.0, 0.0}}, with_end(5.0));
  ASSERT_EQ(traj.samples.size(), 501u);
  EXPECT_EQ(traj.terminal_reason, TerminalReason::time_limit);
  EXPECT_NEAR(traj.samples.back().x[0], 10.0, 1e-12);
  EXPECT_EQ(traj.samples.back().x[1], 0.0);
  EXPECT_EQ(traj.samples.back().t, 5.0);
  for (std::size_t i = 1; i < traj.samples.size(); ++i) EXPECT_GT(traj.samples[i].t, traj.samples[i - 1].t);
  EXPECT_NEAR(travel_time(constant_wind(), traj), 5.0, 1e-12);
}

TEST(Integrate, OutputGridIndependentOfInternalSteps) {
  auto cfg = with_end(1.0);
  const auto a = integrate(example::generalized_metric(), {0.0, {{0.0, 0.0}}, {2.0, 0.0}}, cfg);
  cfg.max_step = 0.01;
  const auto b = integrate(example::generalized_metric(), {0.0, {{0.0, 0.0}}, {2.0, 0.0}}, cfg);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].t, b.samples[i].t);
    EXPECT_NEAR(a.samples[i].x[0], b.samples[i].x[0], 1e-8);
  }
}

TEST(Integrate, ConstantFinslerSpeedOnExample) {
  const auto k = example::generalized_metric();
  const auto traj = integrate(k, {0.0, {{0.0, 0.0}}, {2.0, 0.0}}, with_end(10.0));
  EXPECT_EQ(traj.terminal_reason, TerminalReason::time_limit);
  EXPECT_NEAR(traj.f_values.front(), 1.0, 1e-15);
  EXPECT_LE(traj.max_speed_drift(), 1e-6);
  EXPECT_NEAR(travel_time(k, traj), 10.0, 1e-5);
}

TEST(Integrate, OriginalFanStaysFiniteAndInside) {
  const auto k = example::original_metric();
  const auto nav = example::original_navigation();
  int rays = 0;
  for (int i = 0; i < 16; ++i) {
    const double phi = i * pi / 8;
    const auto v = resultant_velocity(nav, {{0.0, 0.0}}, phi);
    if (!k.in_domain({{0.0, 0.0}}, v, 1e-9)) continue;
    const auto traj = integrate(k, {0.0, {{0.0, 0.0}}, v}, with_end(10.0));
    EXPECT_EQ(traj.terminal_reason, TerminalReason::time_limit) << "phi0 = " << phi;
    EXPECT_TRUE(traj.samples.back().x.finite());
    ++rays;
  }
  EXPECT_EQ(rays, 15);
}

TEST(Integrate, RejectsInitialStateOutsideDomain) {
  EXPECT_THROW(integrate(constant_wind(), {0.0, {{0.0, 0.0}}, {-1.0, 0.0}}, with_end(1.0)), Error);
  EXPECT_THROW(integrate(constant_wind(), {0.0, {{0.0, 0.0}}, {0.0, 0.0}}, with_end(1.0)), Error);
  IntegratorConfig bad;
  bad.rel_tol = 0.0;
  EXPECT_THROW(integrate(constant_wind(), {0.0, {{0.0, 0.0}}, {1.0, 0.0}}, bad), Error);
}

TEST(Integrate, StopsAtDomainBoundary) {
  // Circular wind around the origin: a geodesic heading inward loses margin.
  const NavigationData<2> nav{euclidean_metric<2>(), VectorField<2>([](const auto& p) {
                                using std::sqrt;
                                const auto r = sqrt(p[0] * p[0] + p[1] * p[1]);
                                return Vec<scalar_of<decltype(p)>, 2>{-p[1] / r, p[0] / r};
                              }),
                              constant_scalar<2>(1.0)};
  const KropinaMetric<2> k(nav);
  const auto traj = integrate(k, {0.0, {{1.0, 0.0}}, {-0.99, 0.2}}, with_end(20.0));
  EXPECT_NE(traj.terminal_reason, TerminalReason::time_limit);
  EXPECT_LT(traj.end_time(), 20.0);
  for (double b : traj.beta) EXPECT_GT(b, 0.0);
}

TEST(Integrate, TolerancesHalvedConverge) {
  const auto k = example::generalized_metric();
  const GeodesicState<2> init{0.0, {{0.0, 0.0}}, resultant_velocity(example::generalized_navigation(), {{0.0, 0.0}}, 1.0)};
  auto cfg = with_end(10.0);
  cfg.rel_tol = 1e-9;
  cfg.abs_tol = 1e-11;
  const auto a = integrate(k, init, cfg);
  cfg.rel_tol *= 0.5;
  cfg.abs_tol *= 0.5;
  const auto b = integrate(k, init, cfg);
  const double d = std::hypot(a.samples.back().x[0] - b.samples.back().x[0], a.samples.back().x[1] - b.samples.back().x[1]);
  const double scale = 1.0 + std::hypot(b.samples.back().x[0], b.samples.back().x[1]);
  EXPECT_LE(d, 10.0 * 1e-9 * scale);
}

TEST(Integrate, ReversedVelocityIsNotARetrace) {
  // Non-reversible metric: the reversed end velocity is either outside the
  // domain or produces a different track.
  const auto k = example::original_metric();
  const auto nav = example::original_navigation();
  int excluded = 0, different = 0;
  for (int i = 1; i < 16; ++i) {
    if (i == 8) continue;
    const auto v = resultant_velocity(nav, {{0.0, 0.0}}, i * pi / 8);
    const auto fwd = integrate(k, {0.0, {{0.0, 0.0}}, v}, with_end(2.0));
    const auto& end = fwd.samples.back();
    const Vec<double, 2> rv{-end.v[0], -end.v[1]};
    if (!k.in_domain(end.x, rv, 1e-9)) {
      ++excluded;
      continue;
    }
    const auto back = integrate(k, {0.0, end.x, rv}, with_end(2.0));
    if (std::hypot(back.samples.back().x[0], back.samples.back().x[1]) > 1e-3) ++different;
  }
  EXPECT_EQ(excluded + different, 14);
  EXPECT_GT(excluded, 0);
}

TEST(TravelTime, ReparameterizationInvariant) {
  const auto k = example::generalized_metric();
  const GeodesicState<2> init{0.0, {{0.0, 0.0}}, {2.0, 0.0}};
  const auto a = integrate(k, init, with_end(4.0));
  const auto b = integrate(k, {0.0, init.x, {4.0, 0.0}}, with_end(2.0));
  EXPECT_NEAR(travel_time(k, a), 4.0, 1e-6);
  EXPECT_NEAR(travel_time(k, b), travel_time(k, a), 1e-6);
  EXPECT_NEAR(b.samples.back().x[0], a.samples.back().x[0], 1e-7);
}

TEST(TravelTime, SimpsonExactForCubics) {
  std::vector<double> t{0.0, 0.1, 0.35, 0.4, 0.8, 1.0, 1.3};  // odd interval count
  std::vector<double> f;
  for (double s : t) f.push_back(2 * s * s - s + 3);
  const double exact = 2.0 / 3 * std::pow(1.3, 3) - 0.5 * 1.3 * 1.3 + 3 * 1.3;
  EXPECT_NEAR(simpson(t, f), exact, 1e-13);
  t.pop_back();
  f.pop_back();
  EXPECT_NEAR(simpson(t, f), 2.0 / 3 - 0.5 + 3, 1e-13);
  EXPECT_EQ(simpson({0.0}, {1.0}), 0.0);
}

TEST(Shooting, ConstantWindTarget) {
  ShootingConfig cfg;
  cfg.t_max = 8.0;
  const auto r = shoot_to_target(constant_wind(), {{0.0, 0.0}}, {{10.0, 0.0}}, cfg);
  EXPECT_NEAR(r.phi0, 0.0, 1e-6);
  EXPECT_NEAR(r.travel_time, 5.0, 1e-6);
  EXPECT_LE(r.miss, 1e-6);
}

TEST(Shooting, DeadZoneBehindShip) {
  ShootingConfig cfg;
  cfg.t_max = 8.0;
  try {
    shoot_to_target(constant_wind(), {{0.0, 0.0}}, {{-1.0, 0.0}}, cfg);
    FAIL() << "expected no_solution";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_solution);
  }
  EXPECT_THROW(shoot_to_target(constant_wind(), {{0.0, 0.0}}, {{0.0, 0.0}}, cfg), Error);
}

TEST(Shooting, RecoversExampleHeading) {
  const auto k = example::generalized_metric();
  const auto traj = integrate(k, {0.0, {{0.0, 0.0}}, {2.0, 0.0}}, with_end(3.0));
  const auto target = traj.samples.back().x;
  ShootingConfig cfg;
  cfg.t_max = 5.0;
  const auto r = shoot_to_target(k, {{0.0, 0.0}}, target, cfg);
  EXPECT_NEAR(r.phi0, 0.0, 1e-6);
  EXPECT_NEAR(r.travel_time, 3.0, 1e-5);
}
