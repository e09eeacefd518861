#include "finauv/ga.hpp"

#include <algorithm>
#include <cmath>

namespace finauv {

namespace {

constexpr int kGenes = 10;  // K_p(3), k, K_d(6)

// Runs one segment and accumulates its cost terms; failures poison the sum.
bool episode_cost_terms(const EpisodeConfig& cfg, double& acc, double& count) {
  const EpisodeRecord record = run_episode(cfg);
  if (record.failed || record.rows.empty()) return false;
  Vec6 q_diag;
  q_diag << 100.0, 100.0, 100.0, 50.0, 50.0, 50.0;
  tracking_cost_terms(record, q_diag, 0.5, acc, count);
  return true;
}

}  // namespace

void tracking_cost_terms(const EpisodeRecord& record, const Vec6& q_diag,
                         double r_weight, double& acc, double& count) {
  for (const EpisodeRow& row : record.rows) {
    const Vec3 p_e = row.eta_d.head<3>() - row.eta_hat.head<3>();
    const UnitQuaternion qd =
        UnitQuaternion{row.eta_d(3), row.eta_d.segment<3>(4)}.normalized();
    const UnitQuaternion qh =
        UnitQuaternion{row.eta_hat(3), row.eta_hat.segment<3>(4)}.normalized();
    const Vec3 ed = quat_to_euler(qd);
    const Vec3 eh = quat_to_euler(qh);
    Vec6 e;
    e << p_e, wrap_angle(ed(0) - eh(0)), wrap_angle(ed(1) - eh(1)),
        wrap_angle(ed(2) - eh(2));
    acc += e.dot(q_diag.cwiseProduct(e)) + r_weight * row.tau_sim.squaredNorm();
  }
  count += static_cast<double>(record.rows.size());
}

double ga_cost(const EpisodeConfig& base, const Vec3& K_p, double k, const Vec6& K_d,
               double segment_duration) {
  EpisodeConfig cfg = base;
  cfg.gains.K_p = K_p;
  cfg.gains.k = k;
  cfg.gains.K_d = K_d;
  cfg.duration = segment_duration;

  double acc = 0.0, count = 0.0;
  cfg.trajectory.shape = TrajectoryShape::kEllipse;
  const bool ok_e = episode_cost_terms(cfg, acc, count);
  cfg.trajectory.shape = TrajectoryShape::kLissajous;
  const bool ok_l = episode_cost_terms(cfg, acc, count);
  if (!ok_e || !ok_l) return 1e9;
  return std::sqrt(acc / count);
}

GaResult ga_tune(const GaGenomeBounds& bounds, const GaParams& params,
                 const EpisodeConfig& base, std::uint64_t seed,
                 double segment_duration) {
  Rng rng = Rng::substream(seed, 0, 0x6A);

  using Genome = std::array<double, kGenes>;
  auto evaluate = [&](const Genome& g) {
    return ga_cost(base, Vec3{g[0], g[1], g[2]}, g[3],
                   (Vec6() << g[4], g[5], g[6], g[7], g[8], g[9]).finished(),
                   segment_duration);
  };

  std::vector<Genome> pop(params.population);
  std::vector<double> cost(params.population);
  for (auto& g : pop) {
    for (double& x : g) x = rng.uniform(bounds.lo, bounds.hi);
  }
  for (int i = 0; i < params.population; ++i) cost[i] = evaluate(pop[i]);

  const int n_elite = std::max(
      1, static_cast<int>(params.elitism_ratio * params.population));
  const int n_parents = std::max(
      2, static_cast<int>(params.parents_portion * params.population));

  GaResult result;
  auto record_best = [&]() {
    int best = 0;
    for (int i = 1; i < params.population; ++i) {
      if (cost[i] < cost[best]) best = i;
    }
    const double c = cost[best];
    if (result.cost_history.empty() || c < result.cost_history.back()) {
      result.cost_history.push_back(c);
    } else {
      result.cost_history.push_back(result.cost_history.back());
    }
    return best;
  };
  record_best();

  for (int gen = 0; gen < params.max_iterations; ++gen) {
    std::vector<int> order(params.population);
    for (int i = 0; i < params.population; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return cost[a] < cost[b]; });

    std::vector<Genome> next;
    next.reserve(params.population);
    for (int e = 0; e < n_elite; ++e) next.push_back(pop[order[e]]);

    while (static_cast<int>(next.size()) < params.population) {
      const Genome& pa = pop[order[static_cast<int>(rng.uniform(0, n_parents))]];
      const Genome& pb = pop[order[static_cast<int>(rng.uniform(0, n_parents))]];
      Genome child = pa;
      if (rng.uniform() < params.crossover_prob) {
        for (int g = 0; g < kGenes; ++g) {
          if (rng.uniform() < 0.5) child[g] = pb[g];
        }
      }
      for (int g = 0; g < kGenes; ++g) {
        if (rng.uniform() < params.mutation_prob) {
          child[g] = rng.uniform(bounds.lo, bounds.hi);
        }
      }
      next.push_back(child);
    }
    pop = std::move(next);
    for (int i = 0; i < params.population; ++i) cost[i] = evaluate(pop[i]);
    record_best();
  }

  int best = 0;
  for (int i = 1; i < params.population; ++i) {
    if (cost[i] < cost[best]) best = i;
  }
  // The history is best-so-far; the final population's best may tie it.
  const Genome& g = pop[best];
  result.K_p = Vec3{g[0], g[1], g[2]};
  result.k = g[3];
  result.K_d << g[4], g[5], g[6], g[7], g[8], g[9];
  result.best_cost = std::min(cost[best], result.cost_history.back());
  return result;
}

}  // namespace finauv
