// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include "rankpoison/baselines.hpp"

#include <random>
#include <vector>

#include "rankpoison/aggregate.hpp"
#include "rankpoison/errors.hpp"

namespace rankpoison {

const char* to_string(BaselineStrategy strategy) {
  switch (strategy) {
    case BaselineStrategy::random:
      return "random";
    case BaselineStrategy::naive:
      return "naive";
    case BaselineStrategy::probabilistic:
      return "probabilistic";
  }
  throw ConfigurationError("unknown baseline strategy");
}

double weight_change(const VectorXd& a, const VectorXd& b) {
  if (a.size() != b.size()) {
    throw DimensionError("weight vectors disagree on edge count");
  }
  return (a - b).cwiseAbs().sum();
}

BaselineRun run_baseline(const PairwiseDataset& visible,
                         const VectorXd& target_scores, long long budget,
                         const BaselineConfig& cfg) {
  const int n = visible.n;
  if (target_scores.size() != n) {
    throw DimensionError("target scores disagree with candidate count");
  }
  if (target_scores.minCoeff() <= 0.0) {
    throw InvalidDistributionError(
        "baseline target scores must be strictly positive");
  }
  if (cfg.threshold <= 0.0 || cfg.threshold >= 1.0) {
    throw ConfigurationError("baseline threshold must lie in (0, 1)");
  }

  BaselineRun run;
  run.weights = visible.weights;
  if (budget <= 0) {
    return run;
  }

  // Resolve each edge's push direction once; only the random strategy keeps
  // consulting the generator inside the loop.
  const int N = edge_count(n);
  std::vector<int> fixed_step(N, 0);
  if (cfg.strategy != BaselineStrategy::random) {
    const Ranking order = ranking_from_scores(target_scores);
    std::vector<int> position(n + 1, 0);
    for (int r = 0; r < n; ++r) {
      position[order[r]] = r;
    }
    for (int m = 0; m < N; ++m) {
      const auto [i, j] = edge_endpoints(m + 1, n);
      if (cfg.strategy == BaselineStrategy::naive) {
        fixed_step[m] = position[i] < position[j] ? 1 : -1;
      } else {
        const double preference =
            target_scores[i - 1] /
            (target_scores[i - 1] + target_scores[j - 1]);
        if (preference > cfg.threshold) {
          fixed_step[m] = 1;
        } else if (preference < cfg.threshold) {
          fixed_step[m] = -1;
        }
      }
    }
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> coin(-1, 1);

  while (run.budget_used < budget) {
    bool applied_any = false;
    for (int m = 0; m < N && run.budget_used < budget; ++m) {
      ++run.interactions;
      const int step = cfg.strategy == BaselineStrategy::random
                           ? coin(rng)
                           : fixed_step[m];
      if (step > 0) {
        run.weights[m] += 1.0;
      } else if (step < 0 && run.weights[m] >= 1.0) {
        run.weights[m] -= 1.0;
      } else {
        continue;
      }
      ++run.budget_used;
      applied_any = true;
    }
    if (!applied_any) {
      break;
    }
  }
  return run;
}

}  // namespace rankpoison
