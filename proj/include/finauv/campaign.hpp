#pragma once

#include <map>
#include <vector>

#include "finauv/metrics.hpp"

namespace finauv {

/// Uniform sampling bounds for the Monte Carlo trajectory draws.
struct ParameterRanges {
  double A_xy_min{0.5}, A_xy_max{2.5};
  double w_min{0.01}, w_max{0.05};
  double l_min{0.5}, l_max{2.0};
  double A_z_min{0.1}, A_z_max{0.5};
  double c_phi_min{0.05}, c_phi_max{0.15};
  double x0{0.3}, y0{0.3}, z0{0.3};
  double t_star{0.1};
  double gamma1{7.0}, gamma2{1.0};
};

/// Draw scenario, shape and trajectory parameters for one run.
TrajectoryParams sample_trajectory(const ParameterRanges& ranges, Rng& rng);

struct MetricStat {
  double median{0.0};
  double iqr{0.0};
};

struct MethodSummary {
  AllocMethod method{AllocMethod::kProposed};
  int runs{0};
  int failures{0};
  std::map<std::string, MetricStat> stats;
  double mw_over_limit_fraction{0.0};  // fraction of runs with MW > 12.5 N
  std::vector<MetricsReport> per_run;
};

struct CampaignSummary {
  std::vector<MethodSummary> methods;
  std::uint64_t seed{0};
  int runs_requested{0};
  double episode_duration{0.0};
};

struct CampaignOptions {
  int n_runs{20};
  double episode_duration{100.0};
  std::vector<AllocMethod> methods{AllocMethod::kPseudoInverse,
                                   AllocMethod::kOptimization,
                                   AllocMethod::kProposed};
  ParameterRanges ranges{};
  EpisodeConfig base{};  // gains/allocation are overridden per method
  double mw_limit{12.5};
};

/// Per-run trajectory draws are shared across methods (paired comparison);
/// episode substreams derive from (seed, run, method). Failed episodes are
/// counted and excluded from the medians.
CampaignSummary run_montecarlo(const CampaignOptions& opts, std::uint64_t seed);

struct BenchResult {
  AllocMethod method;
  double mae_lin{0.0};
  double mae_ang{0.0};
  double mct_ms{0.0};
  EpisodeRecord record;
};

struct BenchOptions {
  double duration{40.0};
  double segment{5.0};  // sign-flip period of the wrench profile
  Vec6 tau_profile{(Vec6() << 0.5, 0.5, 0.5, 0.2, 0.2, 0.2).finished()};
  EpisodeConfig base{};
};

/// Open-loop benchmark: allocation + CPG + fin plant with the body held at
/// rest; the desired wrench flips sign every `segment` seconds.
std::vector<BenchResult> alloc_bench(const std::vector<AllocMethod>& methods,
                                     const BenchOptions& opts);

}  // namespace finauv
