#include "finauv/campaign.hpp"

#include <chrono>
#include <cmath>

namespace finauv {

TrajectoryParams sample_trajectory(const ParameterRanges& r, Rng& rng) {
  TrajectoryParams p;
  p.scenario = (rng.uniform() < 0.5) ? Scenario::k6T : Scenario::k3T2S;
  p.shape = (rng.uniform() < 0.5) ? TrajectoryShape::kEllipse
                                  : TrajectoryShape::kLissajous;
  p.A_x = rng.uniform(r.A_xy_min, r.A_xy_max);
  p.w_x = rng.uniform(r.w_min, r.w_max);
  p.A_y = rng.uniform(r.A_xy_min, r.A_xy_max);
  p.w_y = rng.uniform(r.w_min, r.w_max);
  p.A_z = rng.uniform(r.A_z_min, r.A_z_max);
  p.w_z = rng.uniform(r.w_min, r.w_max);
  p.c_phi = rng.uniform(r.c_phi_min, r.c_phi_max);
  p.l_x = rng.uniform(r.l_min, r.l_max);
  p.l_y = rng.uniform(r.l_min, r.l_max);
  p.x0 = r.x0;
  p.y0 = r.y0;
  p.z0 = r.z0;
  p.t_star = r.t_star;
  p.gamma1 = r.gamma1;
  p.gamma2 = r.gamma2;
  return p;
}

namespace {

void append_stats(MethodSummary& summary, double mw_limit) {
  auto collect = [&](auto field) {
    std::vector<double> v;
    v.reserve(summary.per_run.size());
    for (const auto& m : summary.per_run) v.push_back(field(m));
    return v;
  };
  const std::vector<std::pair<std::string, double MetricsReport::*>> fields = {
      {"RMSE_lin", &MetricsReport::rmse_lin}, {"RMSE_ang", &MetricsReport::rmse_ang},
      {"MEM_lin", &MetricsReport::mem_lin},   {"MEM_ang", &MetricsReport::mem_ang},
      {"MAW", &MetricsReport::maw},           {"MW", &MetricsReport::mw},
      {"MCT", &MetricsReport::mct_ms},        {"MAE_lin", &MetricsReport::mae_lin},
      {"MAE_ang", &MetricsReport::mae_ang},   {"fin_rotation", &MetricsReport::fin_rotation}};
  for (const auto& [name, ptr] : fields) {
    std::vector<double> v = collect([ptr](const MetricsReport& m) { return m.*ptr; });
    summary.stats[name] =
        MetricStat{median(v), iqr(v)};
  }
  int over = 0;
  for (const auto& m : summary.per_run) {
    if (m.mw > mw_limit) ++over;
  }
  summary.mw_over_limit_fraction =
      summary.per_run.empty() ? 0.0
                              : static_cast<double>(over) /
                                    static_cast<double>(summary.per_run.size());
}

}  // namespace

CampaignSummary run_montecarlo(const CampaignOptions& opts, std::uint64_t seed) {
  CampaignSummary out;
  out.seed = seed;
  out.runs_requested = opts.n_runs;
  out.episode_duration = opts.episode_duration;

  std::vector<TrajectoryParams> draws;
  draws.reserve(opts.n_runs);
  for (int run = 0; run < opts.n_runs; ++run) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(run), 0xA11);
    draws.push_back(sample_trajectory(opts.ranges, rng));
  }

  for (AllocMethod method : opts.methods) {
    MethodSummary summary;
    summary.method = method;
    for (int run = 0; run < opts.n_runs; ++run) {
      EpisodeConfig cfg = opts.base;
      cfg.trajectory = draws[run];
      cfg.use_method_defaults(method);
      cfg.duration = opts.episode_duration;
      cfg.seed = Rng::substream(seed, static_cast<std::uint64_t>(run),
                                0xE0 + static_cast<std::uint64_t>(method))
                     .next_u64();
      ++summary.runs;
      const EpisodeRecord record = run_episode(cfg);
      if (record.failed || record.rows.empty()) {
        ++summary.failures;
        continue;
      }
      summary.per_run.push_back(compute_metrics(record, cfg.geometry));
    }
    append_stats(summary, opts.mw_limit);
    out.methods.push_back(std::move(summary));
  }
  return out;
}

std::vector<BenchResult> alloc_bench(const std::vector<AllocMethod>& methods,
                                     const BenchOptions& opts) {
  std::vector<BenchResult> results;
  const double dt = 1.0 / opts.base.plant_rate_hz;
  const int n_steps =
      static_cast<int>(std::lround(opts.duration * opts.base.plant_rate_hz));

  for (AllocMethod method : methods) {
    EpisodeConfig cfg = opts.base;
    cfg.use_method_defaults(method);

    BenchResult res;
    res.method = method;

    std::array<CpgState, 4> cpg{};
    std::array<FinCommand, 4> cmd{};
    for (auto& c : cmd) c.omega = cfg.coeffs.omega_osc;
    AllocationResult prev;
    bool have_prev = false;
    const Twist at_rest;

    // Reuse the episode averaging convention: trailing oscillation period.
    const int window = std::max(1, static_cast<int>(std::lround(
                                       2.0 * M_PI / cfg.coeffs.omega_osc / dt)));
    std::vector<Vec6> ring;
    Vec6 ring_sum = Vec6::Zero();
    int head = 0;

    EpisodeRecord& record = res.record;
    for (int k = 0; k <= n_steps; ++k) {
      const double t = k * dt;
      const int segment_idx = static_cast<int>(std::floor(t / opts.segment));
      const double sign = (segment_idx % 2 == 0) ? 1.0 : -1.0;
      const Wrench tau_des = Wrench::from_stacked(sign * opts.tau_profile);

      if (k % cfg.controller_divisor == 0) {
        const auto t0 = std::chrono::steady_clock::now();
        const AllocationResult alloc = allocate(method, tau_des, cfg.allocation,
                                                cfg.geometry,
                                                have_prev ? &prev : nullptr);
        const auto t1 = std::chrono::steady_clock::now();
        prev = alloc;
        have_prev = true;
        for (int i = 0; i < 4; ++i) {
          cmd[i].amplitude = force_to_amplitude(alloc.f_th[i], cfg.coeffs,
                                                cfg.geometry);
          cmd[i].zero_direction = alloc.phi_0[i];
        }

        EpisodeRow row;
        row.t = t;
        row.tau_des = tau_des.stacked();
        row.tau_sim = ring.empty() ? Vec6::Zero()
                                   : Vec6(ring_sum / static_cast<double>(ring.size()));
        for (int i = 0; i < 4; ++i) {
          row.fin_amp[i] = cmd[i].amplitude;
          row.fin_phi0[i] = cmd[i].zero_direction;
          row.fin_angle[i] = cpg[i].output_angle();
        }
        row.alloc_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        record.rows.push_back(row);
      }
      if (k == n_steps) break;

      std::array<std::pair<double, double>, 4> fin_states;
      for (int i = 0; i < 4; ++i) {
        const double prev_zd = cpg[i].zero_dir;
        const double angle = cpg_step(cpg[i], cmd[i], cfg.cpg, dt);
        record.fin_rotation[i] += std::abs(cpg[i].zero_dir - prev_zd);
        fin_states[i] = {angle, cpg[i].output_rate(cmd[i].omega)};
      }
      const Wrench tau_sim =
          plant_wrench(fin_states, at_rest, cfg.geometry, cfg.coeffs);
      if (static_cast<int>(ring.size()) < window) {
        ring.push_back(tau_sim.stacked());
        ring_sum += tau_sim.stacked();
      } else {
        ring_sum += tau_sim.stacked() - ring[head];
        ring[head] = tau_sim.stacked();
        head = (head + 1) % window;
      }
    }

    const MetricsReport metrics = compute_metrics(record, cfg.geometry);
    res.mae_lin = metrics.mae_lin;
    res.mae_ang = metrics.mae_ang;
    res.mct_ms = metrics.mct_ms;
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace finauv
