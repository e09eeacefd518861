#include <doctest.h>

#include "finauv/controller.hpp"
#include "finauv/episode.hpp"
#include "finauv/rng.hpp"

using namespace finauv;

namespace {

UnitQuaternion random_quat(Rng& rng) {
  return UnitQuaternion{rng.gaussian(),
                        Vec3{rng.gaussian(), rng.gaussian(), rng.gaussian()}}
      .normalized();
}

Vec6 random_vec6(Rng& rng, double s) {
  Vec6 v;
  for (int i = 0; i < 6; ++i) v(i) = s * rng.gaussian();
  return v;
}

}  // namespace

TEST_CASE("config_error identities and group cancellation") {
  Rng rng(41);
  Pose pose;
  pose.p = Vec3{0.4, -0.2, 1.1};
  pose.q = random_quat(rng);

  const ConfigError same = config_error(pose, pose);
  CHECK(same.p_e.norm() < 1e-12);
  CHECK(std::abs(std::abs(same.q_e.mu) - 1.0) < 1e-12);

  // Displacement of +x in the desired frame shows up as +x in p_e.
  Pose desired = pose;
  Pose displaced = desired;
  displaced.p = desired.p + quat_to_rot(desired.q) * Vec3{1.0, 0.0, 0.0};
  const ConfigError err = config_error(displaced, desired);
  CHECK((err.p_e - Vec3{1.0, 0.0, 0.0}).norm() < 1e-12);

  const UnitQuaternion dq = random_quat(rng);
  Pose rotated = desired;
  rotated.q = quat_mul(desired.q, dq);
  const ConfigError qerr = config_error(rotated, desired);
  CHECK(std::abs(qerr.q_e.mu - dq.mu) < 1e-12);
  CHECK((qerr.q_e.eps - dq.eps).norm() < 1e-12);
}

TEST_CASE("reference_velocity basics and left-inverse consistency") {
  Vec6 nu_r, nu_r_dot;
  reference_velocity(Vec7::Zero(), Vec7::Zero(), UnitQuaternion::identity(), nu_r,
                     nu_r_dot);
  CHECK(nu_r.norm() == 0.0);

  Vec7 rate = Vec7::Zero();
  rate(0) = 1.0;
  reference_velocity(rate, Vec7::Zero(), UnitQuaternion::identity(), nu_r, nu_r_dot);
  CHECK(nu_r(0) == doctest::Approx(1.0));
  CHECK(nu_r.tail<5>().norm() < 1e-12);

  Rng rng(43);
  for (int i = 0; i < 200; ++i) {
    const UnitQuaternion q_d = random_quat(rng);
    // Consistent rates: etadot in the range of J(q_d).
    const Vec6 nu = random_vec6(rng, 1.0);
    const Vec7 etadot = pose_jacobian(q_d).J * nu;
    reference_velocity(etadot, Vec7::Zero(), q_d, nu_r, nu_r_dot);
    REQUIRE((pose_jacobian(q_d).J * nu_r - etadot).norm() < 1e-9);
  }
}

TEST_CASE("potential minimum and the worked example") {
  ControllerGains gains;
  ConfigError err;
  double v = -1.0;
  Vec6 dv;
  potential_and_gradient(err, 1, gains, v, dv);
  CHECK(v == doctest::Approx(0.0));
  CHECK(dv.norm() < 1e-12);

  gains.K_p = Vec3{2.0, 1.0, 1.0};
  gains.k = 1.0;
  err.p_e = Vec3{1.0, 0.0, 0.0};
  potential_and_gradient(err, 1, gains, v, dv);
  CHECK(v == doctest::Approx(1.0));
  CHECK(dv(0) == doctest::Approx(2.0));
}

TEST_CASE("gradient matches finite differences along error flow directions") {
  ControllerGains gains;
  Rng rng(47);
  const double step = 1e-6;
  for (int trial = 0; trial < 300; ++trial) {
    ConfigError err;
    err.p_e = Vec3{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    err.q_e = random_quat(rng);
    const int h = (rng.uniform() < 0.5) ? 1 : -1;
    const Vec6 nu_e = random_vec6(rng, 1.0).normalized();

    double v0 = 0.0;
    Vec6 dv;
    potential_and_gradient(err, h, gains, v0, dv);

    // Flow the error state: pdot_e = v_e, qdot_e = T(q_e) w_e.
    auto flow = [&](double s) {
      ConfigError moved = err;
      moved.p_e += s * nu_e.head<3>();
      const Vec4 dq = rate_matrix(err.q_e) * nu_e.tail<3>();
      moved.q_e.mu = err.q_e.mu + s * dq(0);
      moved.q_e.eps = err.q_e.eps + s * dq.tail<3>();
      double v = 0.0;
      Vec6 unused;
      potential_and_gradient(moved, h, gains, v, unused);
      return v;
    };
    const double fd = (flow(step) - flow(-step)) / (2.0 * step);
    REQUIRE(std::abs(fd - dv.dot(nu_e)) < 1e-5);
  }
}

TEST_CASE("hysteretic switching") {
  ControllerGains gains;  // varsigma = 0.1
  ConfigError err;

  err.q_e = UnitQuaternion{0.5, Vec3{0, 0, std::sqrt(0.75)}};
  bool jumped = false;
  CHECK(hybrid_flow_or_jump(err, 1, gains, &jumped) == 1);
  CHECK_FALSE(jumped);

  err.q_e = UnitQuaternion{-0.15, Vec3{0, 0, std::sqrt(1 - 0.0225)}};
  CHECK(hybrid_flow_or_jump(err, 1, gains, &jumped) == -1);
  CHECK(jumped);

  // Immediately after the jump the state is deep inside the flow set.
  const int h_after = -1;
  CHECK(h_after * err.q_e.mu == doctest::Approx(0.15));
  CHECK(hybrid_flow_or_jump(err, h_after, gains, &jumped) == h_after);
  CHECK_FALSE(jumped);
}

TEST_CASE("no consecutive jumps without a band crossing") {
  ControllerGains gains;
  int h = 1;
  Rng rng(53);
  double mu = 0.5;
  bool armed = true;  // a jump is only legal after mu re-crossed the band
  int jumps = 0;
  for (int i = 0; i < 20000; ++i) {
    mu = std::clamp(mu + 0.03 * rng.gaussian(), -1.0, 1.0);
    ConfigError err;
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    err.q_e = UnitQuaternion{mu, Vec3{0, 0, s}};
    const int h_before = h;
    bool jumped = false;
    h = hybrid_flow_or_jump(err, h, gains, &jumped);
    if (jumped) {
      ++jumps;
      REQUIRE(armed);
      REQUIRE(h_before * mu <= -gains.hysteresis);
      armed = false;
    }
    if (h * mu >= gains.hysteresis) armed = true;
  }
  CHECK(jumps > 0);  // the walk actually exercised the switch
}

TEST_CASE("regressor: linearity, first column, oracle on 1000 draws") {
  Rng rng(59);

  {
    const UnitQuaternion q = random_quat(rng);
    const auto phi = regressor(ConfigError{}, Vec6::Zero(), Vec6::Zero(),
                               Vec6::Zero(), Vec6::Zero(), Vec6::Zero(),
                               Vec6::Zero(), q);
    CHECK((phi * ThetaVector::Zero()).norm() == 0.0);
    const Vec3 expected = -quat_to_rot(q).transpose() * Vec3{0, 0, 1};
    CHECK((phi.block<3, 1>(0, 0) - expected).norm() < 1e-12);
    CHECK(phi.block<3, 1>(3, 0).norm() < 1e-12);
  }

  for (int trial = 0; trial < 1000; ++trial) {
    ThetaVector theta;
    for (int i = 0; i < kNumTheta; ++i) theta(i) = rng.uniform(-3.0, 3.0);
    const UnitQuaternion q = random_quat(rng);
    const Vec6 nu = random_vec6(rng, 1.0);
    const Vec6 zeta = random_vec6(rng, 0.5);
    const Vec6 zeta_dot = random_vec6(rng, 0.5);
    const Vec6 nu_r = random_vec6(rng, 1.0);
    const Vec6 nu_r_dot = random_vec6(rng, 0.5);
    const Vec6 delta = nu - nu_r - zeta;

    const auto phi =
        regressor(ConfigError{}, zeta, zeta_dot, delta, nu, nu_r, nu_r_dot, q);

    // Independent oracle through the dynamics module.
    const Vec6 nu_m = nu_r + zeta;
    const Vec6 nu_m_dot = nu_r_dot + zeta_dot;
    const ModelMatrices mm = model_matrices(theta, Twist::from_stacked(nu), q);
    const Vec6 rhs = mm.M * nu_m_dot + mm.C * nu_m + mm.D * nu_m + mm.g;
    REQUIRE(((phi * theta) - rhs).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("controller_step: feedforward at exact tracking, gradient substitution") {
  ControllerGains gains;
  const double dt = 0.05;

  TrajectoryPoint target;
  target.eta_d.p = Vec3{0.5, 0.2, -0.1};
  target.eta_d.q = euler_to_quat(0.0, 0.1, 0.4);

  // Exact tracking: pose = desired, nu = nu_r = 0, zeta = 0, h matched.
  HybridControllerState state;
  const Pose pose = target.eta_d;
  const Twist twist;
  const Wrench tau = controller_step(pose, twist, target, state, gains, dt);
  const auto phi = regressor(ConfigError{}, Vec6::Zero(), Vec6::Zero(), Vec6::Zero(),
                             Vec6::Zero(), Vec6::Zero(), Vec6::Zero(), pose.q);
  CHECK((tau.stacked() - phi * theta_default_start()).norm() < 1e-9);

  // Position error only: tau = Phi theta - dV_q at the first tick (delta and
  // zeta start at zero; the regressor still sees zetadot = -Lambda^-1 dV_q).
  HybridControllerState s2;
  Pose off = target.eta_d;
  off.p += quat_to_rot(target.eta_d.q) * Vec3{0.2, 0.0, 0.0};
  const Wrench tau2 = controller_step(off, twist, target, s2, gains, dt);
  Vec6 dv;
  double v;
  potential_and_gradient(config_error(off, target.eta_d), 1, gains, v, dv);
  const Vec6 zeta_dot = -gains.Lambda.cwiseInverse().cwiseProduct(dv);
  const auto phi2 = regressor(ConfigError{}, Vec6::Zero(), zeta_dot, Vec6::Zero(),
                              Vec6::Zero(), Vec6::Zero(), Vec6::Zero(), off.q);
  CHECK((tau2.stacked() - (phi2 * theta_default_start() - dv)).norm() < 1e-9);
}

TEST_CASE("projection keeps theta_hat inside the inflated bounds") {
  ControllerGains gains;
  gains.Gamma.setConstant(1e-6);  // aggressive adaptation
  const double dt = 0.05;

  TrajectoryPoint target;
  HybridControllerState state;
  Rng rng(61);
  for (int i = 0; i < 4000; ++i) {
    Pose pose;
    pose.p = Vec3{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    pose.q = random_quat(rng);
    Twist twist;
    twist.v = 2.0 * Vec3{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    twist.w = 2.0 * Vec3{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    controller_step(pose, twist, target, state, gains, dt);
    for (int j = 0; j < kNumTheta; ++j) {
      REQUIRE(state.theta_hat(j) >=
              gains.theta_lower(j) - gains.theta_layer(j) - 1e-12);
      REQUIRE(state.theta_hat(j) <=
              gains.theta_upper(j) + gains.theta_layer(j) + 1e-12);
    }
  }
}

namespace {

/// Ideal-plant regulation loop: controller output applied directly (ZOH),
/// truth fed back, adaptation frozen at the true parameters.
struct RegulationRun {
  double final_pos_error{0.0};
  double total_yaw_travel{0.0};
  int jumps{0};
};

RegulationRun run_regulation(const Pose& start, const Pose& setpoint,
                             double duration) {
  const ThetaVector theta = theta_default_start();
  ControllerGains gains = default_controller_gains(AllocMethod::kProposed);
  gains.Gamma.setConstant(1e300);  // adaptation frozen

  PlantState ps;
  ps.pose = start;
  Plant plant(theta, ps);

  HybridControllerState state;
  state.theta_hat = theta;

  TrajectoryPoint target;
  target.eta_d = setpoint;

  const double dt = 0.01;
  const int ctrl_div = 5;
  Wrench tau;
  RegulationRun out;
  const int n = static_cast<int>(duration / dt);
  for (int k = 0; k < n; ++k) {
    if (k % ctrl_div == 0) {
      tau = controller_step(plant.state().pose, plant.state().twist, target, state,
                            gains, dt * ctrl_div);
    }
    out.total_yaw_travel += std::abs(plant.state().twist.w.z()) * dt;
    plant.step(tau, dt);
  }
  out.final_pos_error = (plant.state().pose.p - setpoint.p).norm();
  out.jumps = state.jump_count;
  return out;
}

}  // namespace

TEST_CASE("frozen-adaptation perfect-model regulation converges within 60 s") {
  Pose start;
  Pose goal;
  goal.p = Vec3{1.0, -0.5, 0.3};
  goal.q = euler_to_quat(0.0, 0.0, 0.5);
  const RegulationRun run = run_regulation(start, goal, 60.0);
  CHECK(run.final_pos_error < 1e-3);
}

TEST_CASE("no unwinding: pi + 0.2 yaw error resolves within pi + 0.3 of travel") {
  Pose start;
  start.q = euler_to_quat(0.0, 0.0, M_PI + 0.2);
  Pose goal;  // identity attitude
  const RegulationRun run = run_regulation(start, goal, 60.0);
  CHECK(run.total_yaw_travel <= M_PI + 0.3);
  CHECK(run.jumps <= 1);
}
