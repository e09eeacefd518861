#include "finauv/estimation.hpp"

#include <cmath>

namespace finauv {

ImuSample sample_imu_impl(const PlantState& truth, const SensorConfig& cfg, Rng& rng) {
  ImuSample s;
  const Vec3 euler = quat_to_euler(truth.pose.q);
  for (int i = 0; i < 3; ++i) {
    s.euler(i) = euler(i) + cfg.sigma_pose(3 + i) * rng.gaussian();
  }
  for (int i = 0; i < 3; ++i) {
    s.rates(i) = truth.twist.w(i) + cfg.sigma_rate * rng.gaussian();
  }
  return s;
}

ImuSample SensorSim::sample_imu(const PlantState& truth) {
  return sample_imu_impl(truth, cfg_, rng_);
}

Vec2 SensorSim::sample_position(const PlantState& truth) {
  return {truth.pose.p.x() + cfg_.sigma_pose(0) * rng_.gaussian(),
          truth.pose.p.y() + cfg_.sigma_pose(1) * rng_.gaussian()};
}

double SensorSim::sample_depth(const PlantState& truth) {
  return truth.pose.p.z() + cfg_.sigma_pose(2) * rng_.gaussian();
}

void ekf_predict(EkfState& state, const UnitQuaternion& q_input, double dt,
                 const Vec3& sigma_Q) {
  const Mat3 r = quat_to_rot(q_input);
  state.xi.head<3>() += r * state.xi.tail<3>() * dt;

  Mat6 a = Mat6::Identity();
  a.block<3, 3>(0, 3) = r * dt;
  Eigen::Matrix<double, 6, 3> w;
  w.block<3, 3>(0, 0) = r * (0.5 * dt * dt);
  w.block<3, 3>(3, 0) = Mat3::Identity() * dt;
  const Mat3 q_cov = sigma_Q.cwiseProduct(sigma_Q).asDiagonal();

  state.P = a * state.P * a.transpose() + w * q_cov * w.transpose();
  state.P = 0.5 * (state.P + state.P.transpose());
}

void ekf_correct(EkfState& state, const Eigen::VectorXd& z, MeasurementKind kind,
                 const Eigen::MatrixXd& R_meas) {
  const int m = (kind == MeasurementKind::kDepth) ? 1 : 2;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, 6);
  if (kind == MeasurementKind::kDepth) {
    h(0, 2) = 1.0;
  } else {
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;
  }
  const Eigen::MatrixXd s = h * state.P * h.transpose() + R_meas;
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw ModelError("ekf_correct: innovation covariance not positive definite");
  }
  const Eigen::MatrixXd k = state.P * h.transpose() * llt.solve(
      Eigen::MatrixXd::Identity(m, m));
  state.xi += k * (z - h * state.xi);
  state.P = (Mat6::Identity() - k * h) * state.P;
  state.P = 0.5 * (state.P + state.P.transpose());
}

void ekf_correct_depth(EkfState& state, double depth, const SensorConfig& cfg) {
  Eigen::VectorXd z(1);
  z << depth;
  Eigen::MatrixXd r(1, 1);
  r << cfg.sigma_R(2) * cfg.sigma_R(2);
  ekf_correct(state, z, MeasurementKind::kDepth, r);
}

void ekf_correct_planar(EkfState& state, const Vec2& xy, const SensorConfig& cfg) {
  Eigen::VectorXd z(2);
  z << xy.x(), xy.y();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(2, 2);
  r(0, 0) = cfg.sigma_R(0) * cfg.sigma_R(0);
  r(1, 1) = cfg.sigma_R(1) * cfg.sigma_R(1);
  ekf_correct(state, z, MeasurementKind::kPlanar, r);
}

}  // namespace finauv
