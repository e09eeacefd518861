#pragma once

#include "finauv/episode.hpp"

namespace finauv {

struct GaParams {
  int max_iterations{50};
  int population{20};
  double mutation_prob{0.45};
  double elitism_ratio{0.01};
  double crossover_prob{0.5};
  double parents_portion{0.25};
};

struct GaGenomeBounds {
  double lo{0.1};
  double hi{50.0};
};

struct GaResult {
  Vec3 K_p{};
  double k{0.0};
  Vec6 K_d{};
  double best_cost{0.0};
  std::vector<double> cost_history;  // best-so-far per generation, non-increasing
};

/// Accumulate sum( e^T diag(q) e + r tau_sim^T tau_sim ) and the sample count
/// over a record, with e the 6-dim Euler-form desired-vs-estimated error.
void tracking_cost_terms(const EpisodeRecord& record, const Vec6& q_diag,
                         double r_weight, double& acc, double& count);

/// Tracking/effort cost over a chained ellipse + Lissajous reference:
/// Upsilon = sqrt( (1/N) sum( e^T Q e + tau_sim^T R tau_sim ) ),
/// Q = diag(100,100,100,50,50,50), R = 0.5 I.
double ga_cost(const EpisodeConfig& base, const Vec3& K_p, double k, const Vec6& K_d,
               double segment_duration);

/// Genetic search over [K_p(3), k, K_d(6)] within the genome bounds.
GaResult ga_tune(const GaGenomeBounds& bounds, const GaParams& params,
                 const EpisodeConfig& base, std::uint64_t seed,
                 double segment_duration = 40.0);

}  // namespace finauv
