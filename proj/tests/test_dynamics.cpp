#include <doctest.h>

#include "finauv/dynamics.hpp"
#include "finauv/rng.hpp"

using namespace finauv;

namespace {

ThetaVector random_theta(Rng& rng) {
  ThetaVector t;
  for (int i = 0; i < kNumTheta; ++i) t(i) = rng.uniform(-2.0, 2.0);
  return t;
}

Twist random_twist(Rng& rng) {
  Twist nu;
  for (int i = 0; i < 3; ++i) {
    nu.v(i) = rng.gaussian();
    nu.w(i) = rng.gaussian();
  }
  return nu;
}

UnitQuaternion random_quat(Rng& rng) {
  return UnitQuaternion{rng.gaussian(),
                        Vec3{rng.gaussian(), rng.gaussian(), rng.gaussian()}}
      .normalized();
}

}  // namespace

TEST_CASE("model_matrices zero theta and restoring example") {
  const Twist nu = Twist::from_stacked((Vec6() << 1, -1, 0.5, 0.2, -0.3, 0.1).finished());
  const ModelMatrices zero = model_matrices(ThetaVector::Zero(), nu,
                                            UnitQuaternion::identity());
  CHECK(zero.M.norm() == 0.0);
  CHECK(zero.C.norm() == 0.0);
  CHECK(zero.D.norm() == 0.0);
  CHECK(zero.g.norm() == 0.0);

  ThetaVector buoy = ThetaVector::Zero();
  buoy(0) = 1.0;
  const ModelMatrices mm = model_matrices(buoy, nu, UnitQuaternion::identity());
  Vec6 expected;
  expected << 0, 0, -1, 0, 0, 0;
  CHECK((mm.g - expected).norm() < 1e-12);
}

TEST_CASE("Coriolis energy property on 1000 random draws") {
  Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    const ThetaVector theta = random_theta(rng);
    const Twist nu = random_twist(rng);
    const ModelMatrices mm = model_matrices(theta, nu, random_quat(rng));
    const Vec6 nu6 = nu.stacked();
    REQUIRE(std::abs(nu6.dot(mm.C * nu6)) < 1e-9);
    REQUIRE((mm.M - mm.M.transpose()).norm() < 1e-14);
  }
}

TEST_CASE("dynamics_deriv equilibrium and restoring cancellation") {
  PlantState s;
  const ThetaVector theta = theta_default_start();

  const StateDeriv rest = dynamics_deriv(s, theta, Wrench{});
  CHECK(rest.pose_rate.norm() < 1e-12);
  CHECK(rest.twist_rate.norm() < 1e-12);

  ThetaVector heavy = theta;
  heavy(0) = 3.0;
  heavy(2) = 0.4;
  const ModelMatrices mm = model_matrices(heavy, s.twist, s.pose.q);
  const StateDeriv cancel = dynamics_deriv(s, heavy, Wrench::from_stacked(mm.g));
  CHECK(cancel.twist_rate.norm() < 1e-12);
}

TEST_CASE("pure surge reduction") {
  ThetaVector theta = ThetaVector::Zero();
  theta(4) = 10.0;    // surge inertia
  theta(11) = -2.0;   // surge linear damping
  // Positive-definite filler so the plant check passes.
  theta(5) = theta(6) = theta(7) = theta(8) = theta(9) = 1.0;

  PlantState s;
  s.twist.v.x() = 0.7;
  Wrench tau;
  tau.f.x() = 1.3;
  const StateDeriv d = dynamics_deriv(s, theta, tau);
  CHECK(d.twist_rate(0) == doctest::Approx((1.3 + theta(11) * 0.7) / 10.0));
  CHECK(d.twist_rate.tail<5>().norm() < 1e-12);
}

TEST_CASE("singular inertia reported") {
  PlantState s;
  CHECK_THROWS_AS(dynamics_deriv(s, ThetaVector::Zero(), Wrench{}), ModelError);
}

TEST_CASE("rk4 zero dynamics and constant-velocity advance") {
  const ThetaVector theta = theta_default_start();
  PlantState s;
  const PlantState unchanged = rk4_step(s, theta, Wrench{}, 0.01);
  CHECK((unchanged.pose.p - s.pose.p).norm() < 1e-15);
  CHECK(std::abs(unchanged.pose.q.mu - 1.0) < 1e-15);

  // Choose tau so nudot = 0 at v = [1,0,0]: tau = C nu + D nu + g.
  PlantState cruise;
  cruise.twist.v.x() = 1.0;
  const ModelMatrices mm = model_matrices(theta, cruise.twist, cruise.pose.q);
  const Vec6 nu = cruise.twist.stacked();
  const Wrench tau = Wrench::from_stacked(mm.C * nu + mm.D * nu + mm.g);
  const PlantState moved = rk4_step(cruise, theta, tau, 0.1);
  CHECK(moved.pose.p.x() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(std::abs(moved.pose.p.y()) < 1e-12);
  CHECK((moved.twist.v - cruise.twist.v).norm() < 1e-12);
}

TEST_CASE("rk4 fourth-order convergence on a 10 s surge maneuver") {
  const ThetaVector theta = theta_default_start();
  Wrench tau;
  tau.f = Vec3{2.0, 0.5, -0.3};
  tau.m = Vec3{0.05, -0.04, 0.08};

  auto integrate = [&](double dt) {
    PlantState s;
    const int n = static_cast<int>(std::lround(10.0 / dt));
    for (int i = 0; i < n; ++i) s = rk4_step(s, theta, tau, dt);
    return s;
  };

  const PlantState ref = integrate(1e-4);
  auto err = [&](double dt) {
    const PlantState s = integrate(dt);
    return (s.pose.p - ref.pose.p).norm() + (s.twist.stacked() - ref.twist.stacked()).norm();
  };

  const double e1 = err(0.04);
  const double e2 = err(0.02);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.8);
  // Halving dt cuts the error by roughly 16x.
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.35));
}

TEST_CASE("quaternion norm drift over 1e5 steps") {
  const ThetaVector theta = theta_default_start();
  Wrench tau;
  tau.m = Vec3{0.02, 0.01, -0.03};
  PlantState s;
  for (int i = 0; i < 100000; ++i) {
    s = rk4_step(s, theta, tau, 0.01);
  }
  CHECK(std::abs(s.pose.q.norm() - 1.0) < 1e-9);
}

TEST_CASE("non-finite state aborts") {
  ThetaVector theta = theta_default_start();
  PlantState s;
  s.twist.v.x() = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(rk4_step(s, theta, Wrench{}, 0.01), EpisodeAbort);
}

TEST_CASE("plant theta validation") {
  ThetaVector bad = theta_default_start();
  bad(5) = -1.0;
  CHECK_THROWS_AS(validate_plant_theta(bad), ModelError);
  bad = theta_default_start();
  bad(12) = 0.5;
  CHECK_THROWS_AS(validate_plant_theta(bad), ModelError);
}
