#include "finauv/episode.hpp"

#include <chrono>
#include <cmath>

namespace finauv {

ControllerGains default_controller_gains(AllocMethod method) {
  ControllerGains g;
  switch (method) {
    case AllocMethod::kProposed:
      g.K_p = Vec3{3.81, 3.39, 3.76};
      g.k = 3.93;
      g.K_d << 3.46, 4.59, 4.41, 2.01, 3.39, 4.68;
      break;
    case AllocMethod::kOptimization:
      g.K_p = Vec3{4.25, 3.04, 2.79};
      g.k = 4.14;
      g.K_d << 2.8, 4.0, 4.35, 1.89, 3.43, 3.7;
      break;
    case AllocMethod::kPseudoInverse:
      g.K_p = Vec3{17.45, 4.31, 7.41};
      g.k = 14.65;
      g.K_d << 16.02, 48.5, 8.83, 18.35, 6.07, 42.41;
      break;
  }
  return g;
}

CpgGains default_cpg_gains(AllocMethod method) {
  if (method == AllocMethod::kPseudoInverse) return {5.0, 2.0};
  return {10.0, 3.0};
}

void EpisodeConfig::use_method_defaults(AllocMethod method) {
  allocation.method = method;
  gains = default_controller_gains(method);
  cpg = default_cpg_gains(method);
}

namespace {

Vec7 pose_to_vec7(const Pose& pose) {
  Vec7 out;
  out << pose.p, pose.q.coeffs();
  return out;
}

/// Trailing one-oscillation-period moving average of the simulated wrench.
class WrenchAverager {
 public:
  WrenchAverager(double period, double dt)
      : capacity_(std::max(1, static_cast<int>(std::lround(period / dt)))) {}

  void push(const Vec6& tau) {
    if (static_cast<int>(buffer_.size()) < capacity_) {
      buffer_.push_back(tau);
      sum_ += tau;
    } else {
      sum_ += tau - buffer_[head_];
      buffer_[head_] = tau;
      head_ = (head_ + 1) % capacity_;
    }
  }

  Vec6 mean() const {
    if (buffer_.empty()) return Vec6::Zero();
    return sum_ / static_cast<double>(buffer_.size());
  }

 private:
  int capacity_;
  int head_{0};
  std::vector<Vec6> buffer_;
  Vec6 sum_{Vec6::Zero()};
};

}  // namespace

EpisodeRecord run_episode(const EpisodeConfig& cfg) {
  EpisodeRecord record;

  cfg.trajectory.validate();
  cfg.allocation.validate();
  cfg.gains.validate();
  cfg.geometry.validate();
  validate_plant_theta(cfg.theta_true);

  const double dt = 1.0 / cfg.plant_rate_hz;
  const double ctrl_dt = dt * cfg.controller_divisor;
  const int n_steps = static_cast<int>(std::lround(cfg.duration * cfg.plant_rate_hz));

  SensorConfig sensor_cfg = cfg.sensors;
  if (!cfg.noise_enabled) {
    sensor_cfg.sigma_pose.setZero();
    sensor_cfg.sigma_rate = 0.0;
  }
  SensorSim sensors(sensor_cfg, Rng::substream(cfg.seed, 0, 1));

  // Start on the trajectory: position and attitude of the initial setpoint.
  const Vec3 start_p{cfg.trajectory.x0, cfg.trajectory.y0, cfg.trajectory.z0};
  Guidance guidance(cfg.trajectory, start_p.head<2>());
  const Vec6 eta0 = guidance.initial_setpoint();

  PlantState init;
  init.pose.p = eta0.head<3>();
  init.pose.q = euler_to_quat(eta0(3), eta0(4), eta0(5));
  Plant plant(cfg.theta_true, init);

  EkfState ekf;
  ekf.xi.head<3>() = init.pose.p;
  ekf.P = Mat6::Identity() * 1e-4;

  ControllerGains gains = cfg.gains;
  if (cfg.freeze_adaptation) {
    // Gamma^-1 = 0: realized by an effectively infinite adaptation gain.
    gains.Gamma.setConstant(1e300);
  }
  HybridControllerState ctrl_state;
  ctrl_state.theta_hat = cfg.theta_true;

  std::array<CpgState, 4> cpg{};
  std::array<FinCommand, 4> cmd{};
  for (auto& c : cmd) c.omega = cfg.coeffs.omega_osc;
  AllocationResult prev_alloc;
  bool have_alloc = false;

  WrenchAverager tau_avg(2.0 * M_PI / cfg.coeffs.omega_osc, dt);
  ImuSample imu = sensors.sample_imu(plant.state());
  Wrench tau_des;

  try {
    for (int k = 0; k <= n_steps; ++k) {
      const double t = k * dt;
      imu = sensors.sample_imu(plant.state());

      if (k % cfg.fix_divisor == 0) {
        ekf_correct_planar(ekf, sensors.sample_position(plant.state()), sensor_cfg);
        ekf_correct_depth(ekf, sensors.sample_depth(plant.state()), sensor_cfg);
      }

      if (k % cfg.controller_divisor == 0) {
        Pose pose_hat;
        Twist twist_hat;
        if (cfg.perfect_state) {
          pose_hat = plant.state().pose;
          twist_hat = plant.state().twist;
        } else {
          pose_hat.p = ekf.xi.head<3>();
          pose_hat.q = euler_to_quat(imu.euler(0), imu.euler(1), imu.euler(2));
          twist_hat.v = ekf.xi.tail<3>();
          twist_hat.w = imu.rates;
        }

        const TrajectoryPoint target =
            guidance.step(t, pose_hat.p.head<2>(), ctrl_dt);
        tau_des = controller_step(pose_hat, twist_hat, target, ctrl_state, gains,
                                  ctrl_dt);

        const auto t0 = std::chrono::steady_clock::now();
        const AllocationResult alloc =
            allocate(cfg.allocation.method, tau_des, cfg.allocation, cfg.geometry,
                     have_alloc ? &prev_alloc : nullptr);
        const auto t1 = std::chrono::steady_clock::now();
        prev_alloc = alloc;
        have_alloc = true;

        for (int i = 0; i < 4; ++i) {
          cmd[i].amplitude = force_to_amplitude(alloc.f_th[i], cfg.coeffs,
                                                cfg.geometry);
          cmd[i].zero_direction = alloc.phi_0[i];
        }

        EpisodeRow row;
        row.t = t;
        row.eta_d = pose_to_vec7(target.eta_d);
        row.eta_true = pose_to_vec7(plant.state().pose);
        row.eta_hat = pose_to_vec7(pose_hat);
        row.nu = plant.state().twist.stacked();
        row.tau_des = tau_des.stacked();
        row.tau_sim = tau_avg.mean();
        for (int i = 0; i < 4; ++i) {
          row.fin_amp[i] = cmd[i].amplitude;
          row.fin_phi0[i] = cmd[i].zero_direction;
          row.fin_angle[i] = cpg[i].output_angle();
        }
        row.alloc_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        row.h = ctrl_state.h;
        record.rows.push_back(row);
      }

      if (k == n_steps) break;

      Wrench tau_plant;
      if (cfg.bypass_allocation) {
        tau_plant = tau_des;
      } else {
        std::array<std::pair<double, double>, 4> fin_states;
        for (int i = 0; i < 4; ++i) {
          const double prev_zd = cpg[i].zero_dir;
          const double angle = cpg_step(cpg[i], cmd[i], cfg.cpg, dt);
          record.fin_rotation[i] += std::abs(cpg[i].zero_dir - prev_zd);
          fin_states[i] = {angle, cpg[i].output_rate(cmd[i].omega)};
        }
        tau_plant = plant_wrench(fin_states, plant.state().twist, cfg.geometry,
                                 cfg.coeffs);
      }
      tau_avg.push(tau_plant.stacked());
      plant.step(tau_plant, dt);
      ekf_predict(ekf, cfg.perfect_state ? plant.state().pose.q
                                         : euler_to_quat(imu.euler(0), imu.euler(1),
                                                         imu.euler(2)),
                  dt, sensor_cfg.sigma_Q);
    }
  } catch (const std::exception& e) {
    record.failed = true;
    record.fail_message = e.what();
  }

  record.jump_count = ctrl_state.jump_count;
  return record;
}

}  // namespace finauv
