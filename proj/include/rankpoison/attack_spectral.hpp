// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#pragma once

#include <Eigen/Dense>

#include "rankpoison/aggregate.hpp"
#include "rankpoison/dataset.hpp"
#include "rankpoison/errors.hpp"

namespace rankpoison {

// Which family of comparison chains an inverse construction produces.
enum class ChainKind { reversible, irreversible };

const char* to_string(ChainKind kind);

// Builds a reversible random-walk chain whose stationary distribution equals
// theta (entrywise positive, summing to 1). The construction peels off the
// smallest-mass state, recurses on the renormalized remainder, and glues the
// levels together, which pins the whole spectrum: the second eigenvalue is
// -min(theta) / (1 - min(theta)), the smallest magnitude any reversible chain
// with this stationary distribution can reach.
StochasticMatrix reversible_inverse_eigen(const VectorXd& theta);

// Builds an irreversible chain with stationary distribution theta whose
// sampling efficiency beats every reversible chain: its worst-case asymptotic
// variance is (max(theta) - min(theta)) / (max(theta) + min(theta)). Rows are
// upper triangular except the last, which routes mass back to small states;
// a uniform theta degenerates to the n-cycle.
StochasticMatrix irreversible_inverse_eigen(const VectorXd& theta);

StochasticMatrix inverse_eigen(const VectorXd& theta, ChainKind kind);

// Second largest eigenvalue of reversible_inverse_eigen(theta) in closed
// form: -min(theta) / (1 - min(theta)).
double reversible_second_eigenvalue(const VectorXd& theta);

// Asymptotic variance of the Markov-chain time average of f on an
// irreducible chain: with f recentered to mean 0 and rescaled to unit
// variance under the stationary distribution, returns 2 <Z f, f> - 1 where
// Z = (I - P + 1 pi^T)^{-1} is the fundamental matrix. A constant f has
// variance 0. Uses chain.stationary when present, otherwise computes it.
double asymptotic_variance(const StochasticMatrix& chain, const VectorXd& f);

// Largest asymptotic variance over all unit-variance mean-zero f: the
// extreme eigenvalue of the symmetrized fundamental matrix restricted to the
// complement of sqrt(pi), as 2 lambda_max - 1.
double worst_case_variance(const StochasticMatrix& chain);

// Pair transition ratios of a chain, packed over unordered pairs (i, j),
// i < j, in lexicographic order: entry p is P_ij / (P_ij + P_ji), the share
// of the pair's off-diagonal mass that points from i to j. Uncompared pairs
// get 0.5.
VectorXd pair_ratios(const MatrixXd& entries);

// The comparison walk with the given pair transition ratios: entry (i, j)
// for i < j is ratios[p] / degree_scale, entry (j, i) is
// (1 - ratios[p]) / degree_scale, and the diagonal closes each row. This is
// the family of chains a victim can actually end up with, since aggregating
// comparison counts fixes every pair sum at 1 / degree_scale.
StochasticMatrix chain_from_pair_ratios(const VectorXd& ratios, int n,
                                        double degree_scale);

// Pair ratios closest to those of `entries` whose comparison walk keeps the
// stationary distribution theta. The global-balance equations are linear in
// the ratios, so this alternates least-squares steps onto them with
// clamping to [0, 1]. Ratios of a reversible chain already satisfy balance
// (they reduce to theta_j / (theta_i + theta_j)) and come back unchanged;
// irreversible constructions have uneven pair sums that aggregation would
// destroy, and this projection is what preserves their stationary ranking
// through the victim. balance_residual reports how well the returned ratios
// satisfy balance.
struct BalancedRatios {
  VectorXd ratios;
  double balance_residual = 0.0;
};

BalancedRatios balanced_pair_ratios(const MatrixXd& entries,
                                    const VectorXd& theta,
                                    int max_sweeps = 500);

// Comparison counts recovered from a transition matrix. For each unordered
// pair the victim's walk only keeps the ratio P_ij : P_ji, so the recovery
// splits the pair's count budget in that ratio: j beats i total * q times
// with q = P_ij / (P_ij + P_ji). When the pair sum already equals
// 1 / degree_scale the split uses q = degree_scale * P_ij exactly;
// otherwise the pair counts toward projected_pairs. Pairs with a zero
// budget or zero transition mass get zero counts. The recovered counts are
// real-valued; rounding them to integers is the submitter's concern.
struct Reconstruction {
  VectorXd weights;
  int projected_pairs = 0;
};

// pair_totals holds one count budget per unordered pair (i, j), i < j, in
// lexicographic order; the scalar overload spends the same budget on every
// pair.
Reconstruction reconstruct_weights(const MatrixXd& P, double degree_scale,
                                   const VectorXd& pair_totals);
Reconstruction reconstruct_weights(const MatrixXd& P, double degree_scale,
                                   double pair_total);

struct SpectralAttackConfig {
  ChainKind kind = ChainKind::reversible;

  // Infer hidden comparison counts before planning the visible replacement.
  // Leave false when the adversary observes the full dataset; subtracting a
  // phantom hidden estimate from the target reconstruction only distorts it.
  bool infer_hidden = false;

  // Degree scales for the two reconstructions; 0 picks n - 1, the scale the
  // victim will use once it sees the planted complete comparison graph.
  double d1 = 0.0;
  double d2 = 0.0;

  // Per-pair count budget for the hidden-data estimate; 0 copies each
  // pair's observed total so the estimate lives at the data's own scale.
  double pair_total_feedback = 0.0;

  // Per-pair count budget of the planted dataset; 0 copies each pair's
  // observed total (visible plus inferred hidden). Staying at the data's
  // own scale keeps the edit distance small; raise it when the planted
  // score gaps are too fine for per-pair rounding. In either mode pairs the
  // data never compared get the mean compared total.
  double pair_total_target = 0.0;
};

struct SpectralAttackResult {
  // Replacement counts for the edges the adversary controls.
  VectorXd w_k;
  // Inferred hidden counts (zero when infer_hidden is false).
  VectorXd w_u;
  // Fraction of the planned adjustment mass lost to clamping at zero; above
  // 0.5 the plan mostly asked for count removals that cannot be expressed.
  double clamped_mass = 0.0;
  bool heavy_clamping = false;
  int projected_pairs = 0;
  // Worst global-balance violation of the planted pair ratios.
  double balance_residual = 0.0;
};

// Plans poisoned comparison counts that steer the random-walk victim's
// stationary distribution toward theta_A. theta_R carries the adversary's
// estimate of the victim's current scores (exact or reconstructed from a
// leaked ranking); both score vectors must be positive distributions.
// Pipeline: build a chain for theta_R, balance its pair ratios, recover
// full-data counts, subtract the visible counts to estimate the hidden
// remainder w_u; do the same for theta_A to get target counts, subtract
// w_u, clamp at zero.
SpectralAttackResult attack_rank_centrality(const PairwiseDataset& visible,
                                            const VectorXd& theta_R,
                                            const VectorXd& theta_A,
                                            const SpectralAttackConfig& cfg);

}  // namespace rankpoison
