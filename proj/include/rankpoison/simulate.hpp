// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#pragma once

#include <cstdint>

#include "rankpoison/dataset.hpp"

namespace rankpoison {

struct SimulationSpec {
  int n = 10;
  // Bradley-Terry strengths; empty gives candidate i strength proportional
  // to i, so larger ids are stronger and the true ranking is n, n-1, ..., 1.
  VectorXd true_scores;
  long samples = 5000;
  std::uint64_t seed = 0;
};

// Draws pairwise comparisons from a Bradley-Terry model: each sample picks
// an unordered pair uniformly and lets i beat j with probability
// s_i / (s_i + s_j), adding one count to the winning direction.
PairwiseDataset simulate_btl(const SimulationSpec& spec);

// A dataset split into the part an adversary can observe and the part it
// cannot. visible.weights + hidden reassembles the original counts.
struct HiddenSplit {
  PairwiseDataset visible;
  VectorXd hidden;
};

// Moves round(fraction * total) counts from visible to hidden one unit at a
// time: each unit picks a pair uniformly among pairs with visible counts
// left, then a direction within the pair proportionally to its remaining
// counts, so hiding is blind to direction and spread across pairs.
HiddenSplit hide_mass(const PairwiseDataset& d, double fraction,
                      std::uint64_t seed);

// Monte-Carlo estimate of the scaled variance of chain time averages:
// replicas independent trajectories of `steps` steps, each started from a
// stationary draw, of the observable f recentered and rescaled to unit
// stationary variance; returns steps * Var(trajectory mean), the quantity
// asymptotic_variance predicts in the long-trajectory limit.
double simulated_time_average_variance(const StochasticMatrix& chain,
                                       const VectorXd& f, int replicas,
                                       long steps, std::uint64_t seed);

}  // namespace rankpoison
