// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include "rankpoison/simulate.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "rankpoison/aggregate.hpp"

namespace rankpoison {

namespace {

std::vector<std::pair<int, int>> unordered_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

// Index of the first cumulative weight above the coin; rows of `cdf` are
// running sums of a probability vector.
int draw_from_row(const MatrixXd& cdf, int row, double coin) {
  const int n = static_cast<int>(cdf.cols());
  for (int k = 0; k < n; ++k) {
    if (coin < cdf(row, k)) return k;
  }
  return n - 1;
}

}  // namespace

PairwiseDataset simulate_btl(const SimulationSpec& spec) {
  if (spec.n < 2) throw InvalidSizeError("simulate_btl: need n >= 2");
  if (spec.samples < 0) {
    throw ConfigurationError("simulate_btl: samples must be >= 0");
  }
  VectorXd scores = spec.true_scores;
  if (scores.size() == 0) {
    scores = VectorXd::LinSpaced(spec.n, 1.0, spec.n);
    scores /= scores.sum();
  }
  if (scores.size() != spec.n) {
    throw DimensionError("simulate_btl: score length mismatch");
  }
  if ((scores.array() <= 0.0).any()) {
    throw InvalidDistributionError(
        "simulate_btl: strengths must be strictly positive");
  }

  const auto pairs = unordered_pairs(spec.n);
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<size_t> pick_pair(0, pairs.size() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  PairwiseDataset d(spec.n, VectorXd::Zero(edge_count(spec.n)));
  for (long s = 0; s < spec.samples; ++s) {
    const auto [i, j] = pairs[pick_pair(rng)];
    const double p_i = scores[i - 1] / (scores[i - 1] + scores[j - 1]);
    if (coin(rng) < p_i) {
      d.at(i, j) += 1.0;
    } else {
      d.at(j, i) += 1.0;
    }
  }
  return d;
}

HiddenSplit hide_mass(const PairwiseDataset& d, double fraction,
                      std::uint64_t seed) {
  if (fraction < 0.0 || fraction >= 1.0) {
    throw ConfigurationError("hide_mass: fraction must be in [0, 1)");
  }
  HiddenSplit split;
  split.visible = d;
  split.hidden = VectorXd::Zero(d.weights.size());
  long long to_hide = std::llround(fraction * d.total());

  const auto pairs = unordered_pairs(d.n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  while (to_hide > 0) {
    std::vector<size_t> stocked;
    for (size_t p = 0; p < pairs.size(); ++p) {
      const auto [i, j] = pairs[p];
      if (split.visible(i, j) + split.visible(j, i) >= 1.0) stocked.push_back(p);
    }
    if (stocked.empty()) break;
    std::uniform_int_distribution<size_t> pick(0, stocked.size() - 1);
    for (; to_hide > 0; --to_hide) {
      const auto [i, j] = pairs[stocked[pick(rng)]];
      const double forward = split.visible(i, j);
      const double pair_mass = forward + split.visible(j, i);
      if (pair_mass < 1.0) break;
      const bool take_forward = coin(rng) < forward / pair_mass;
      const int from = take_forward ? i : j;
      const int to = take_forward ? j : i;
      split.visible.at(from, to) -= 1.0;
      split.hidden[edge_index(from, to, d.n) - 1] += 1.0;
    }
  }
  return split;
}

double simulated_time_average_variance(const StochasticMatrix& chain,
                                       const VectorXd& f, int replicas,
                                       long steps, std::uint64_t seed) {
  const int n = chain.n();
  if (f.size() != n) {
    throw DimensionError("simulated_time_average_variance: length mismatch");
  }
  if (replicas < 2 || steps < 1) {
    throw ConfigurationError(
        "simulated_time_average_variance: need replicas >= 2, steps >= 1");
  }
  const VectorXd pi = chain.stationary.size() == n
                          ? chain.stationary
                          : stationary_distribution(chain);
  VectorXd centered = f.array() - pi.dot(f);
  const double variance = (pi.array() * centered.array().square()).sum();
  if (variance <= 1e-300) return 0.0;
  centered /= std::sqrt(variance);

  MatrixXd start_cdf(1, n);
  MatrixXd step_cdf(n, n);
  {
    double run = 0.0;
    for (int k = 0; k < n; ++k) {
      run += pi[k];
      start_cdf(0, k) = run;
    }
    for (int i = 0; i < n; ++i) {
      run = 0.0;
      for (int k = 0; k < n; ++k) {
        run += chain.entries(i, k);
        step_cdf(i, k) = run;
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  double mean_of_means = 0.0;
  double sq_of_means = 0.0;
  for (int r = 0; r < replicas; ++r) {
    int state = draw_from_row(start_cdf, 0, coin(rng));
    double running = 0.0;
    for (long t = 0; t < steps; ++t) {
      running += centered[state];
      state = draw_from_row(step_cdf, state, coin(rng));
    }
    const double mean = running / static_cast<double>(steps);
    mean_of_means += mean;
    sq_of_means += mean * mean;
  }
  mean_of_means /= replicas;
  sq_of_means /= replicas;
  const double var_between = (sq_of_means - mean_of_means * mean_of_means) *
                             replicas / (replicas - 1.0);
  return static_cast<double>(steps) * var_between;
}

}  // namespace rankpoison
