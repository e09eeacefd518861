#include <doctest.h>

#include <chrono>

#include "finauv/allocation.hpp"
#include "finauv/metrics.hpp"
#include "finauv/rng.hpp"

using namespace finauv;

namespace {

Wrench random_wrench(Rng& rng, double lin, double ang) {
  Wrench tau;
  for (int i = 0; i < 3; ++i) {
    tau.f(i) = rng.uniform(-lin, lin);
    tau.m(i) = rng.uniform(-ang, ang);
  }
  return tau;
}

}  // namespace

TEST_CASE("forward_wrench basics and matrix-form agreement") {
  const FinGeometry geom;

  AllocationResult idle;
  const Wrench zero = forward_wrench(idle, geom);
  CHECK(zero.f.norm() < 1e-15);
  CHECK(zero.m.norm() < 1e-15);

  AllocationResult heave;
  heave.f_th = {1.0, 1.0, 1.0, 1.0};
  heave.phi_0 = {M_PI / 2, M_PI / 2, M_PI / 2, M_PI / 2};
  const Vec6 tau = forward_wrench(heave, geom).stacked();
  Vec6 expected;
  expected << 0, 0, 4, 0, 0, 0;
  CHECK((tau - expected).norm() < 1e-12);

  Rng rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    AllocationResult r;
    for (int i = 0; i < 4; ++i) {
      r.f_th[i] = rng.uniform(0.0, 4.0);
      r.phi_0[i] = rng.uniform(-M_PI, M_PI);
    }
    const Vec6 a = forward_wrench(r, geom).stacked();
    const Vec6 b = forward_wrench_matrix(r, geom).stacked();
    REQUIRE((a - b).norm() < 1e-12);
  }
}

TEST_CASE("heaviside_gate branches") {
  CHECK(heaviside_gate(0.7, -3.0, 4) == 0.7);
  CHECK(heaviside_gate(1.0, +1.0, 2) == 2.0);
  CHECK(heaviside_gate(-1.0, +1.0, 2) == 0.0);
  CHECK(heaviside_gate(-1.0, -1.0, 2) == -2.0);
  CHECK(heaviside_gate(0.0, +1.0, 2) == 0.0);  // H(0) = 0
  CHECK(heaviside_gate(0.5, 0.0, 2) == 0.0);
}

TEST_CASE("pseudo-inverse: zero, heave example, exact roundtrip") {
  const FinGeometry geom;

  const AllocationResult at_zero = alloc_pseudo_inverse(Wrench{}, geom);
  for (int i = 0; i < 4; ++i) {
    CHECK(at_zero.f_th[i] == 0.0);
    CHECK(at_zero.phi_0[i] == 0.0);
  }

  Wrench heave;
  heave.f.z() = 4.0;
  const AllocationResult r = alloc_pseudo_inverse(heave, geom);
  for (int i = 0; i < 4; ++i) {
    CHECK(r.f_th[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.phi_0[i] == doctest::Approx(M_PI / 2).epsilon(1e-12));
  }

  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const Wrench tau = random_wrench(rng, 5.0, 1.0);
    const AllocationResult sol = alloc_pseudo_inverse(tau, geom);
    const Vec6 back = forward_wrench(sol, geom).stacked();
    REQUIRE((back - tau.stacked()).lpNorm<Eigen::Infinity>() < 1e-9);
    for (int i = 0; i < 4; ++i) REQUIRE(sol.f_th[i] >= 0.0);
  }
}

TEST_CASE("proposed: zero, pure surge pairing, compensation boundary") {
  const FinGeometry geom;
  AllocationConfig cfg;

  const AllocationResult at_zero = alloc_proposed(Wrench{}, cfg, geom);
  for (int i = 0; i < 4; ++i) CHECK(at_zero.f_th[i] == 0.0);

  // Pure surge, two fins: active pair thrust = sqrt(2), idle pair zero.
  Wrench surge;
  surge.f.x() = 2.0;
  const AllocationResult r = alloc_proposed(surge, cfg, geom);
  int active = 0;
  for (int i = 0; i < 4; ++i) {
    if (r.f_th[i] > 1e-12) {
      ++active;
      CHECK(r.f_th[i] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
      CHECK(std::abs(r.phi_0[i]) < 1e-12);
      CHECK(FinGeometry::sc[i] > 0);  // fins whose surge coefficient matches
    }
  }
  CHECK(active == 2);
  CHECK((forward_wrench(r, geom).stacked() - surge.stacked()).norm() < 1e-12);

  // |tau_z| = f_max contributes nothing to the compensation term.
  Wrench sat;
  sat.f.z() = cfg.f_th_max;
  const AllocationResult rs = alloc_proposed(sat, cfg, geom);
  // With zero horizontal demand the compensation is the only horizontal part;
  // at the boundary it vanishes, so each fin points straight to +-pi/2.
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(std::cos(rs.phi_0[i])) < 1e-12);
  }
}

TEST_CASE("proposed: exact roundtrip on 1000 random wrenches") {
  const FinGeometry geom;
  AllocationConfig cfg;
  Rng rng(13);
  AllocationResult prev;
  for (int trial = 0; trial < 1000; ++trial) {
    const Wrench tau = random_wrench(rng, 4.0, 0.8);
    const AllocationResult sol = alloc_proposed(tau, cfg, geom, &prev);
    prev = sol;
    const Vec6 back = forward_wrench(sol, geom).stacked();
    REQUIRE((back - tau.stacked()).lpNorm<Eigen::Infinity>() < 1e-9);
    for (int i = 0; i < 4; ++i) REQUIRE(sol.f_th[i] >= 0.0);
  }
}

TEST_CASE("proposed: n_d = 4 everywhere matches the pseudo-inverse plus compensation") {
  const FinGeometry geom;
  AllocationConfig cfg;
  cfg.n_d = {4, 4, 4, 4, 4, 4};
  cfg.alpha_comp = 0.0;
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Wrench tau = random_wrench(rng, 3.0, 0.5);
    const AllocationResult a = alloc_proposed(tau, cfg, geom);
    const AllocationResult b = alloc_pseudo_inverse(tau, geom);
    for (int i = 0; i < 4; ++i) {
      REQUIRE(a.f_th[i] == doctest::Approx(b.f_th[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("proposed: single-DOF sign flip keeps other fins' zero directions") {
  const FinGeometry geom;
  AllocationConfig cfg;

  Wrench tau;
  tau.f.x() = 1.0;
  tau.f.z() = 2.0;
  const AllocationResult before = alloc_proposed(tau, cfg, geom);
  tau.f.x() = -1.0;
  const AllocationResult after = alloc_proposed(tau, cfg, geom, &before);
  for (int i = 0; i < 4; ++i) {
    REQUIRE(std::abs(after.phi_0[i] - before.phi_0[i]) <= M_PI / 2 + 1e-12);
  }
}

TEST_CASE("optimization: zero wrench, heave optimum vs grid oracle") {
  const FinGeometry geom;
  AllocationConfig cfg;

  const AllocationResult at_zero = alloc_optimization(Wrench{}, cfg, geom);
  for (int i = 0; i < 4; ++i) CHECK(at_zero.f_th[i] < 1e-9);

  // Brute-force oracle over the symmetric candidate family (f, phi) shared by
  // all four fins: tau_z = 4 f sin(phi) = 4, J = 4 f^2, minimized at phi = pi/2.
  double best_cost = 1e300, best_phi = 0.0, best_f = 0.0;
  for (int pi = 1; pi < 400; ++pi) {
    const double phi = M_PI * pi / 400.0;
    if (std::sin(phi) < 1e-6) continue;
    const double f = 1.0 / std::sin(phi);
    if (f > cfg.f_th_max) continue;
    const double cost = 4.0 * f * f;
    if (cost < best_cost) {
      best_cost = cost;
      best_phi = phi;
      best_f = f;
    }
  }
  CHECK(best_phi == doctest::Approx(M_PI / 2).epsilon(1e-2));
  CHECK(best_f == doctest::Approx(1.0).epsilon(1e-4));

  Wrench heave;
  heave.f.z() = 4.0;
  const AllocationResult r = alloc_optimization(heave, cfg, geom);
  CHECK(r.feasible);
  double cost = 0.0;
  for (int i = 0; i < 4; ++i) cost += r.f_th[i] * r.f_th[i];
  CHECK(cost == doctest::Approx(best_cost).epsilon(1e-3));
  for (int i = 0; i < 4; ++i) {
    CHECK(r.f_th[i] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::sin(r.phi_0[i]) == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("optimization: residual contract on feasible random wrenches") {
  const FinGeometry geom;
  AllocationConfig cfg;
  Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    // Feasible by construction: wrench of a random realizable allocation.
    AllocationResult seedr;
    for (int i = 0; i < 4; ++i) {
      seedr.f_th[i] = rng.uniform(0.1, 2.0);
      seedr.phi_0[i] = rng.uniform(-M_PI, M_PI);
    }
    const Wrench tau = forward_wrench(seedr, geom);
    const AllocationResult sol = alloc_optimization(tau, cfg, geom);
    const Vec6 back = forward_wrench(sol, geom).stacked();
    REQUIRE((back - tau.stacked()).lpNorm<Eigen::Infinity>() <= 1e-4);
  }
}

TEST_CASE("median wall time: inv <= prop < opt / 10") {
  const FinGeometry geom;
  AllocationConfig cfg;
  Rng rng(23);
  std::vector<Wrench> taus;
  for (int i = 0; i < 64; ++i) taus.push_back(random_wrench(rng, 2.0, 0.4));

  auto time_method = [&](AllocMethod m, int reps) {
    std::vector<double> samples;
    AllocationResult prev;
    for (int r = 0; r < reps; ++r) {
      const Wrench& tau = taus[r % taus.size()];
      const auto t0 = std::chrono::steady_clock::now();
      const AllocationResult res = allocate(m, tau, cfg, geom, &prev);
      const auto t1 = std::chrono::steady_clock::now();
      prev = res;
      samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return median(std::move(samples));
  };

  // Warm up instruction caches before measuring.
  time_method(AllocMethod::kPseudoInverse, 256);
  time_method(AllocMethod::kProposed, 256);
  time_method(AllocMethod::kOptimization, 16);

  const double t_inv = time_method(AllocMethod::kPseudoInverse, 4096);
  const double t_prop = time_method(AllocMethod::kProposed, 4096);
  const double t_opt = time_method(AllocMethod::kOptimization, 256);
  CHECK(t_inv <= t_prop + 1e-6);
  CHECK(t_prop < t_opt / 10.0);
}
