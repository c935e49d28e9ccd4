// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#pragma once

#include "rankpoison/dataset.hpp"

namespace rankpoison {

struct HodgeConfig {
  // Tikhonov parameter of the regularized normal equations. Small enough
  // that the regularized and minimal-norm rankings coincide on typical data.
  double lambda0 = 1e-6;
};

struct SpectralConfig {
  // L1 stationarity tolerance and iteration cap for the power method.
  double tol = 1e-10;
  long max_iter = 100000;
};

// HodgeRank: scores are the weighted least-squares fit of score differences
// to the edge flow y (default all-ones), i.e. of
// minimize sum_m w_m (y_m - (C theta)_m)^2.
//
// This is the minimal-norm solution pinv(C' W C) * C' W y, which sums to
// zero on a connected comparison graph. The sign convention is checked
// against the data: whenever a candidate beats every other candidate on
// pair majorities, it must carry the largest score; if not, the scores are
// negated and *sign_flipped reports the flip.
VectorXd hodgerank_minimal_norm(const PairwiseDataset& d,
                                const VectorXd& y = VectorXd(),
                                bool* sign_flipped = nullptr);

// Tikhonov-regularized HodgeRank: the unique solution of
// (C' W C + 2 lambda0 I) theta = C' W y.
VectorXd hodgerank_regularized(const PairwiseDataset& d,
                               const VectorXd& y = VectorXd(),
                               const HodgeConfig& cfg = HodgeConfig());

// Stationary distribution of a row-stochastic matrix: power iteration from
// the uniform distribution, with a dense left-eigenvector solve as fallback
// if the iteration has not met tol by max_iter. Raises
// NonUniqueStationaryError when the chain is reducible.
VectorXd stationary_distribution(const StochasticMatrix& P,
                                 const SpectralConfig& cfg = SpectralConfig());

// Rank Centrality: scores are the stationary distribution of the
// comparison random walk built by transition_matrix.
VectorXd rank_centrality(const PairwiseDataset& d,
                         const SpectralConfig& cfg = SpectralConfig());

// Candidates sorted by descending score; ties broken toward the smaller
// candidate index so rankings are deterministic.
Ranking ranking_from_scores(const VectorXd& theta);

// True when every positive off-diagonal entry chain connects all states
// (the walk can reach every state from every state).
bool is_irreducible(const MatrixXd& P);

}  // namespace rankpoison
