#include <doctest.h>

#include "finauv/actuation.hpp"

using namespace finauv;

TEST_CASE("force_to_amplitude endpoints and round trip") {
  const FinGeometry geom;
  const FinHydroCoeffs coeffs;
  const double k = coeffs.thrust_scale(geom);

  CHECK(force_to_amplitude(0.0, coeffs, geom) == doctest::Approx(0.0));
  CHECK(k == doctest::Approx(15.114).epsilon(1e-4));
  CHECK(force_to_amplitude(k, coeffs, geom) == doctest::Approx(M_PI / 2));
  // Above the image bound the amplitude saturates instead of erroring.
  CHECK(force_to_amplitude(3.0 * k, coeffs, geom) == doctest::Approx(M_PI / 2));
  CHECK_THROWS_AS(force_to_amplitude(-0.1, coeffs, geom), std::invalid_argument);

  CHECK(amplitude_to_force(M_PI / 3, coeffs, geom) ==
        doctest::Approx(0.5 * k).epsilon(1e-12));
  for (double f : {0.3, 1.7, 6.0, 14.9}) {
    const double a = force_to_amplitude(f, coeffs, geom);
    CHECK(amplitude_to_force(a, coeffs, geom) == doctest::Approx(f).epsilon(1e-9));
  }
}

TEST_CASE("force_to_amplitude is monotone non-decreasing on [0, K]") {
  const FinGeometry geom;
  const FinHydroCoeffs coeffs;
  const double k = coeffs.thrust_scale(geom);
  double prev = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double a = force_to_amplitude(k * i / 200.0, coeffs, geom);
    REQUIRE(a >= prev);
    prev = a;
  }
}

TEST_CASE("cpg fixed point and phase advance") {
  CpgState state;
  state.amplitude = 0.7;
  state.zero_dir = 0.3;
  FinCommand cmd;
  cmd.amplitude = 0.7;
  cmd.zero_direction = 0.3;
  const CpgGains gains;

  CpgState before = state;
  cpg_step(state, cmd, gains, 0.01);
  CHECK(state.amplitude == doctest::Approx(before.amplitude));
  CHECK(state.zero_dir == doctest::Approx(before.zero_dir));
  CHECK(state.amplitude_rate == doctest::Approx(0.0));
  CHECK(state.phase == doctest::Approx(before.phase + cmd.omega * 0.01));
}

TEST_CASE("cpg step response: no overshoot, settles per the critical envelope") {
  CpgState state;
  FinCommand cmd;
  cmd.amplitude = 1.0;
  cmd.zero_direction = -0.5;
  const CpgGains gains;  // K_amp = 10, K_zd = 3
  const double dt = 0.01;

  double max_amp = 0.0;
  double amp_at_12_over_k = 0.0;
  for (int i = 0; i < 2000; ++i) {
    cpg_step(state, cmd, gains, dt);
    max_amp = std::max(max_amp, state.amplitude);
    if (std::abs(i * dt - 12.0 / gains.K_amp) < dt / 2) {
      amp_at_12_over_k = state.amplitude;
    }
  }
  CHECK(max_amp <= cmd.amplitude + 1e-9);              // overshoot-free
  CHECK(std::abs(amp_at_12_over_k - cmd.amplitude) < 0.02 * cmd.amplitude);
  CHECK(state.zero_dir == doctest::Approx(cmd.zero_direction).epsilon(1e-3));
}

TEST_CASE("fin angle stays continuous across command switches") {
  CpgState state;
  FinCommand cmd;
  cmd.amplitude = 0.4;
  cmd.zero_direction = 0.0;
  const CpgGains gains;
  const double dt = 0.01;

  double prev_angle = state.output_angle();
  double max_step = 0.0;
  for (int i = 0; i < 600; ++i) {
    if (i == 300) {
      cmd.zero_direction = 2.5;  // discontinuous command
      cmd.amplitude = 1.2;
    }
    const double angle = cpg_step(state, cmd, gains, dt);
    max_step = std::max(max_step, std::abs(angle - prev_angle));
    prev_angle = angle;
  }
  // Rate is bounded by the filter states; a jump would show up as >> bound.
  const double rate_bound = 1.3 * (2.5 * gains.K_zd + 1.2 * cmd.omega + 1.2 * gains.K_amp);
  CHECK(max_step < rate_bound * dt);
}
