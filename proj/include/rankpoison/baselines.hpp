// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#pragma once

#include <cstdint>

#include "rankpoison/dataset.hpp"

namespace rankpoison {

// Count-editing strategies the targeted attack is compared against. Each
// visits the directed edges round-robin and asks for a unit step:
//   random         uniform choice from {-1, 0, +1}
//   naive          +1 when the edge's winner should outrank its loser in the
//                  target ranking, -1 otherwise
//   probabilistic  sign of s_i / (s_i + s_j) - threshold under the target
//                  scores, so only confidently ordered pairs get pushed up
enum class BaselineStrategy { random, naive, probabilistic };

const char* to_string(BaselineStrategy strategy);

struct BaselineConfig {
  BaselineStrategy strategy = BaselineStrategy::random;
  // Minimum target preference before the probabilistic strategy adds count
  // mass to an edge; anything below pushes the edge down instead.
  double threshold = 0.6;
  std::uint64_t seed = 0;
};

struct BaselineRun {
  VectorXd weights;
  // Unit edits actually applied; at most the budget, and less when the
  // strategy saturates (keeps declining or hitting empty edges).
  long long budget_used = 0;
  // Edge visits, counted separately from applied edits.
  long long interactions = 0;
};

// L1 mass moved between two count vectors; matching this against the
// targeted attack's change gives every strategy the same budget.
double weight_change(const VectorXd& a, const VectorXd& b);

// Edits the visible counts toward target_scores one unit at a time under
// the given budget of applied edits. target_scores must be strictly
// positive (rank-derived scores work for any victim). A +1 step adds a
// count; a -1 step removes one when the edge has any; other steps leave the
// edge alone. A full pass that applies nothing ends the run early.
BaselineRun run_baseline(const PairwiseDataset& visible,
                         const VectorXd& target_scores, long long budget,
                         const BaselineConfig& cfg);

}  // namespace rankpoison
