#pragma once

#include <optional>

#include "finauv/dynamics.hpp"
#include "finauv/math_core.hpp"
#include "finauv/rng.hpp"

namespace finauv {

struct SensorConfig {
  Vec6 sigma_pose{(Vec6() << 0.002, 0.002, 0.002, 0.0017, 0.0017, 0.0017).finished()};
  double sigma_rate{0.0017};  // gyro-equivalent body-rate noise [rad/s]
  double imu_rate_hz{100.0};
  double position_rate_hz{10.0};
  double depth_rate_hz{10.0};
  Vec3 sigma_Q{0.02, 0.02, 0.01};   // acceleration noise for the EKF prediction
  Vec3 sigma_R{0.002, 0.002, 0.002};  // [x, y, depth] measurement noise
};

struct ImuSample {
  Vec3 euler;   // noisy roll, pitch, yaw [rad]
  Vec3 rates;   // noisy body rates [rad/s]
};

/// Truth plus independent zero-mean white Gaussian noise per channel.
class SensorSim {
 public:
  SensorSim(const SensorConfig& cfg, Rng rng) : cfg_(cfg), rng_(rng) {}

  ImuSample sample_imu(const PlantState& truth);
  Vec2 sample_position(const PlantState& truth);
  double sample_depth(const PlantState& truth);

  const SensorConfig& config() const { return cfg_; }

 private:
  SensorConfig cfg_;
  Rng rng_;
};

struct EkfState {
  Vec6 xi{Vec6::Zero()};        // [p, v_body]
  Mat6 P{Mat6::Identity() * 0.01};
};

/// Constant-velocity prediction with attitude as a trusted input:
/// p+ = p + R(q) v dt, v+ = v, P+ = A P A^T + W Q W^T.
void ekf_predict(EkfState& state, const UnitQuaternion& q_input, double dt,
                 const Vec3& sigma_Q);

enum class MeasurementKind { kDepth, kPlanar };

/// Standard EKF correction; depth selects z (1x6 H), planar selects x, y
/// (2x6 H). P is re-symmetrized after the update. Throws ModelError on a
/// non-positive-definite innovation covariance.
void ekf_correct(EkfState& state, const Eigen::VectorXd& z, MeasurementKind kind,
                 const Eigen::MatrixXd& R_meas);

/// Depth/planar convenience wrappers using the configured sigma_R.
void ekf_correct_depth(EkfState& state, double depth, const SensorConfig& cfg);
void ekf_correct_planar(EkfState& state, const Vec2& xy, const SensorConfig& cfg);

}  // namespace finauv
