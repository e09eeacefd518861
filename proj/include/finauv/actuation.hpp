#pragma once

#include <array>

#include "finauv/fin_plant.hpp"

namespace finauv {

constexpr double kAmplitudeMax = M_PI / 2;

/// Oscillation command for one fin.
struct FinCommand {
  double amplitude{0.0};      // A_osc [rad], in [0, kAmplitudeMax]
  double omega{4.0 * M_PI};   // oscillation rate [rad/s]
  double zero_direction{0.0}; // phi_0 [rad], pre-unwrapped by the allocator
};

/// Second-order oscillator state for one fin. Amplitude and zero-direction
/// are critically damped filters (double pole at -K/2); the phase is never
/// reset, so the output angle stays continuous across command switches.
struct CpgState {
  double phase{0.0};
  double amplitude{0.0};
  double amplitude_rate{0.0};
  double zero_dir{0.0};
  double zero_dir_rate{0.0};

  double output_angle() const { return zero_dir + amplitude * std::cos(phase); }
  double output_rate(double omega) const {
    return zero_dir_rate + amplitude_rate * std::cos(phase) -
           amplitude * omega * std::sin(phase);
  }
};

struct CpgGains {
  double K_amp{10.0};
  double K_zd{3.0};
};

/// Required per-fin thrust to oscillation amplitude,
/// A = arccos(1 - f / K) clamped to [0, kAmplitudeMax], K = 2 C_d rho S_f (r_c w)^2.
/// Negative thrust is rejected (allocation guarantees f >= 0).
double force_to_amplitude(double f_th, const FinHydroCoeffs& coeffs,
                          const FinGeometry& geom);

/// Inverse of force_to_amplitude on [0, kAmplitudeMax]: f = K (1 - cos A).
double amplitude_to_force(double amplitude, const FinHydroCoeffs& coeffs,
                          const FinGeometry& geom);

/// Advance one oscillator by dt (explicit Euler) and return the fin angle.
double cpg_step(CpgState& state, const FinCommand& cmd, const CpgGains& gains,
                double dt);

}  // namespace finauv
