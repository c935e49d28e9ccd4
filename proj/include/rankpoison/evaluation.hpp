// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#pragma once

#include "rankpoison/dataset.hpp"

namespace rankpoison {

// 1 / (position of target's winner inside observed), in {1, 1/2, ..., 1/n}.
// The attack succeeded fully when this is 1.
double reciprocal_rank(const Ranking& target, const Ranking& observed);

// Kendall rank correlation between two rankings of the same candidates:
// (concordant - discordant pairs) * 2 / (n(n-1)), in [-1, 1], +1 iff equal.
double kendall_tau(const Ranking& a, const Ranking& b);

// The adversary's target: promote the candidate at position t of the base
// ranking to first place and keep everything else in order.
Ranking build_target_ranking(const Ranking& base, int t);

// Positional scores for a ranking when only the order is known: position p
// receives (n - p + 1) / (n(n+1)/2), so the output lies on the simplex and
// re-ranking it reproduces pi.
VectorXd scores_from_ranking(const Ranking& pi);

}  // namespace rankpoison
