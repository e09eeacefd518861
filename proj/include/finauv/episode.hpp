#pragma once

#include <string>
#include <vector>

#include "finauv/actuation.hpp"
#include "finauv/allocation.hpp"
#include "finauv/controller.hpp"
#include "finauv/estimation.hpp"
#include "finauv/guidance.hpp"

namespace finauv {

/// Gains the simulation tables associate with each allocation method.
ControllerGains default_controller_gains(AllocMethod method);
CpgGains default_cpg_gains(AllocMethod method);

struct EpisodeConfig {
  TrajectoryParams trajectory{};
  AllocationConfig allocation{};
  ControllerGains gains{};
  CpgGains cpg{};
  ThetaVector theta_true{theta_default_start()};
  FinGeometry geometry{};
  FinHydroCoeffs coeffs{};
  SensorConfig sensors{};
  double duration{100.0};        // [s]
  std::uint64_t seed{0};
  double plant_rate_hz{100.0};
  int controller_divisor{5};     // controller/allocation at plant rate / 5
  int fix_divisor{10};           // position and depth fixes at plant rate / 10

  // Test hooks.
  bool noise_enabled{true};
  bool perfect_state{false};      // controller consumes truth
  bool bypass_allocation{false};  // tau_des applied directly to the plant
  bool freeze_adaptation{false};  // Gamma^-1 = 0

  /// Apply the per-method gain defaults from the simulation tables.
  void use_method_defaults(AllocMethod method);
};

struct EpisodeRow {
  double t{0.0};
  Vec7 eta_d{Vec7::Zero()};
  Vec7 eta_true{Vec7::Zero()};
  Vec7 eta_hat{Vec7::Zero()};
  Vec6 nu{Vec6::Zero()};
  Vec6 tau_des{Vec6::Zero()};
  Vec6 tau_sim{Vec6::Zero()};
  std::array<double, 4> fin_amp{};
  std::array<double, 4> fin_phi0{};
  std::array<double, 4> fin_angle{};
  double alloc_ms{0.0};
  int h{1};
};

struct EpisodeRecord {
  std::vector<EpisodeRow> rows;
  std::array<double, 4> fin_rotation{};  // accumulated |d zero_dir| per fin
  int jump_count{0};
  bool failed{false};
  std::string fail_message;
};

/// Closed loop: guidance -> controller -> allocation -> amplitude -> CPG ->
/// fin plant -> RK4 plant -> sensors -> EKF -> controller. Deterministic for
/// a given (config, seed); module aborts are caught and recorded as a partial
/// series with the failure flag set.
EpisodeRecord run_episode(const EpisodeConfig& cfg);

}  // namespace finauv
