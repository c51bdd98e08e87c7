#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sdiov/errors.hpp"
#include "sdiov/pid.hpp"
#include "sdiov/rng.hpp"

using namespace sdiov;

namespace {

PidState make(double kp, double ki, double kd, double sp, double dt = 1.0) {
  PidState s;
  s.gains = {kp, ki, kd};
  s.setpoint = sp;
  s.dt = dt;
  return s;
}

}  // namespace

TEST_CASE("zero error on first call gives zero control") {
  auto [s, u] = pid_step(make(0.5, 0.1, 0.05, 0.5), 0.5);
  CHECK(u == 0.0);
  CHECK(s.primed);
}

TEST_CASE("pure proportional") {
  auto [s, u] = pid_step(make(1, 0, 0, 0.6), 0.4);
  CHECK(u == doctest::Approx(0.2));
}

TEST_CASE("five steps match the hand recursion") {
  const double kp = 0.5, ki = 0.1, kd = 0.05, dt = 1.0;
  PidState s = make(kp, ki, kd, 0.5, dt);
  double integral = 0, prev = 0;
  for (int k = 0; k < 5; ++k) {
    const double e = 0.5 - 0.3;
    integral += e * dt;
    const double d = k == 0 ? 0.0 : (e - prev) / dt;
    const double expect = kp * e + ki * integral + kd * d;
    prev = e;
    auto [next, u] = pid_step(s, 0.3);
    s = next;
    CHECK(std::abs(u - expect) < 1e-12);
  }
}

TEST_CASE("threshold filter") {
  CHECK(apply_threshold_filter(0.5, 0.1) == doctest::Approx(0.6));
  CHECK(apply_threshold_filter(0.75, 0.2) == 0.8);
  CHECK(apply_threshold_filter(0.25, -0.3) == 0.2);
}

TEST_CASE("threshold filter stays in band for random inputs") {
  Rng rng(3);
  double th = 0.5;
  for (int i = 0; i < 100000; ++i) {
    th = apply_threshold_filter(th, 4.0 * rng.normal());
    REQUIRE(th >= 0.2);
    REQUIRE(th <= 0.8);
  }
  CHECK(apply_threshold_filter(0.5, 1e300) == 0.8);
  CHECK(apply_threshold_filter(0.5, -1e300) == 0.2);
  CHECK(apply_threshold_filter(0.5, NAN) == 0.5);
}

TEST_CASE("default gains settle the test plant") {
  PidState s;
  s.setpoint = 0.5;
  CHECK(closed_loop_settles(FirstOrderPlant{5.0, 0.0}, s));
}

TEST_CASE("zero gains never settle") {
  CHECK_FALSE(closed_loop_settles(FirstOrderPlant{5.0, 0.0}, make(0, 0, 0, 0.5)));
}

TEST_CASE("very high proportional gain oscillates out of band") {
  CHECK_FALSE(closed_loop_settles(FirstOrderPlant{5.0, 0.0}, make(50, 0, 0, 0.5)));
}

TEST_CASE("integral action removes steady-state error") {
  PidState s = make(0.5, 0.1, 0.05, 0.5);
  FirstOrderPlant p{5.0, 0.0};
  for (int k = 0; k < 2000; ++k) {
    auto [next, u] = pid_step(s, p.x);
    s = next;
    p.step(u, s.dt);
  }
  CHECK(std::abs(p.x - 0.5) < 1e-3);

  // Without it a proportional loop keeps an offset.
  PidState q = make(0.5, 0.0, 0.0, 0.5);
  FirstOrderPlant r{5.0, 0.0};
  for (int k = 0; k < 2000; ++k) {
    auto [next, u] = pid_step(q, r.x);
    q = next;
    r.step(u, q.dt);
  }
  CHECK(std::abs(r.x - 0.5) > 0.1);
}

TEST_CASE("integral is clamped under sustained saturation and recovers") {
  PidState s = make(0.5, 0.1, 0.05, 0.6);
  for (int k = 0; k < 1000; ++k) {
    s = pid_step(s, 0.0).first;
    REQUIRE(std::abs(s.integral) <= s.integral_limit);
  }
  CHECK(s.integral == s.integral_limit);
  int steps = 0;
  while (s.integral > 0 && steps < 1000) {
    s = pid_step(s, 1.0).first;
    ++steps;
  }
  // 10 / 0.4 per step, give or take rounding
  CHECK(steps >= 25);
  CHECK(steps <= 26);
}

TEST_CASE("pid_step is deterministic") {
  PidState s = make(0.5, 0.1, 0.05, 0.6);
  s = pid_step(s, 0.2).first;
  auto a = pid_step(s, 0.7);
  auto b = pid_step(s, 0.7);
  CHECK(a.second == b.second);
  CHECK(a.first.integral == b.first.integral);
}

TEST_CASE("direct action flips the error sign") {
  PidState s = make(1, 0, 0, 0.6);
  s.action = PidAction::Direct;
  CHECK(pid_step(s, 0.9).second == doctest::Approx(0.3));
}

TEST_CASE("held integral keeps its value") {
  PidState s = make(0.5, 0.1, 0, 0.6);
  s.integral = 2.0;
  auto [next, u] = pid_step(s, 0.2, true);
  CHECK(next.integral == 2.0);
  CHECK(u == doctest::Approx(0.5 * 0.4 + 0.1 * 2.0));
}

TEST_CASE("saturation test looks at the bound the error pushes toward") {
  PidState s = make(0.5, 0.1, 0, 0.6);
  CHECK(threshold_saturated(s, 0.8, 0.2));   // positive error, top bound
  CHECK_FALSE(threshold_saturated(s, 0.8, 0.9));
  CHECK(threshold_saturated(s, 0.2, 0.9));   // negative error, bottom bound
  CHECK_FALSE(threshold_saturated(s, 0.5, 0.2));
}

TEST_CASE("validate rejects bad parameters") {
  PidState s;
  s.dt = 0;
  CHECK_THROWS_AS(validate(s), ValidationError);
  s = PidState{};
  s.gains.kp = -1;
  CHECK_THROWS_AS(validate(s), ValidationError);
  s = PidState{};
  s.integral_limit = 0;
  CHECK_THROWS_AS(validate(s), ValidationError);
}
