#include "finauv/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace finauv {

double force_to_amplitude(double f_th, const FinHydroCoeffs& coeffs,
                          const FinGeometry& geom) {
  if (f_th < 0.0) {
    throw std::invalid_argument("force_to_amplitude: thrust must be non-negative");
  }
  const double k = coeffs.thrust_scale(geom);
  const double arg = std::clamp(-f_th / k + 1.0, -1.0, 1.0);
  return std::min(std::acos(arg), kAmplitudeMax);
}

double amplitude_to_force(double amplitude, const FinHydroCoeffs& coeffs,
                          const FinGeometry& geom) {
  return coeffs.thrust_scale(geom) * (1.0 - std::cos(amplitude));
}

double cpg_step(CpgState& state, const FinCommand& cmd, const CpgGains& gains,
                double dt) {
  const double amp_acc =
      gains.K_amp * (gains.K_amp / 4.0 * (cmd.amplitude - state.amplitude) -
                     state.amplitude_rate);
  const double zd_acc =
      gains.K_zd * (gains.K_zd / 4.0 * (cmd.zero_direction - state.zero_dir) -
                    state.zero_dir_rate);
  state.phase += cmd.omega * dt;
  state.amplitude += dt * state.amplitude_rate;
  state.amplitude_rate += dt * amp_acc;
  state.zero_dir += dt * state.zero_dir_rate;
  state.zero_dir_rate += dt * zd_acc;
  return state.output_angle();
}

}  // namespace finauv
