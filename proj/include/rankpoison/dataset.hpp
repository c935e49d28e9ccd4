// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rankpoison/errors.hpp"

namespace rankpoison {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// A ranking is a permutation of the 1-based candidate ids; order[0] is the
// top candidate.
using Ranking = std::vector<int>;

// Number of ordered candidate pairs for n candidates.
inline int edge_count(int n) { return n * (n - 1); }

// 1-based index of the directed edge (i, j) among the N = n(n-1) ordered
// pairs, enumerating each tail's head candidates in increasing order:
// m = (i-1)(n-1) + j - 1 for i < j, and (i-1)(n-1) + j for j < i.
int edge_index(int i, int j, int n);

// Inverse of edge_index: the (i, j) endpoints of edge m in [1, N].
std::pair<int, int> edge_endpoints(int m, int n);

// Pairwise comparison counts for n candidates, stored as a nonnegative
// vector over the N ordered edges: weights[edge_index(i,j,n)-1] counts how
// often i beat j. known_mask, when present, marks the edges whose counts an
// adversary can observe and replace; unmarked edges are hidden from it but
// still used by the aggregation victim.
struct PairwiseDataset {
  int n = 0;
  VectorXd weights;
  std::optional<std::vector<bool>> known_mask;

  PairwiseDataset() = default;
  PairwiseDataset(int n, VectorXd weights,
                  std::optional<std::vector<bool>> known_mask = std::nullopt);

  // Weight of the directed edge (i, j), 1-based candidates.
  double operator()(int i, int j) const {
    return weights[edge_index(i, j, n) - 1];
  }
  double& at(int i, int j) { return weights[edge_index(i, j, n) - 1]; }

  double total() const { return weights.sum(); }
};

// Accumulates per-voter judgments into pairwise counts. Each voter matrix Y
// is n x n, skew-symmetric, with Y(i,j) = 1 when the voter prefers i over j.
// A single judgment i > j therefore contributes one count through Y(i,j) = 1
// and one through Y(j,i) = -1, so w_ij grows by 2 per expressed preference.
PairwiseDataset weights_from_votes(int n,
                                   const std::vector<Eigen::MatrixXi>& votes);

// The N x n incidence matrix of the ordered-edge graph: row m for edge
// (i, j) has +1 at column i and -1 at column j, so (C theta)_m = th_i - th_j
// and C * ones = 0.
MatrixXd build_comparison_matrix(int n);

// Combinatorial graph Laplacian L0 = D - W of the directed weight matrix,
// with D the diagonal of out-degrees d_i = sum_j w_ij.
MatrixXd graph_laplacian(const PairwiseDataset& d);

// Divergence of the edge flow y under the comparison weights:
// div(y)_i = sum_j w_ij y_ij, summing over edges leaving i.
VectorXd divergence(const PairwiseDataset& d, const VectorXd& y);

// A row-stochastic matrix. stationary is filled in by code that knows or
// has computed the stationary distribution and is empty (size 0) otherwise.
struct StochasticMatrix {
  MatrixXd entries;
  VectorXd stationary;

  int n() const { return static_cast<int>(entries.rows()); }
};

// The degree scale used to slow the comparison random walk: the maximum
// number of distinct opponents any candidate was compared against (n-1 on a
// complete comparison graph). Returns 1 for data with no comparisons.
double default_degree_scale(const PairwiseDataset& d);

// Random-walk transition matrix of the comparison data. The walk moves
// toward winners: for a compared pair, P_ij is proportional to how often j
// beat i, P_ij = (1/d_max) * w_ji / (w_ij + w_ji); uncompared pairs get 0
// and the diagonal closes each row to exactly 1. Its stationary distribution
// then concentrates mass on strong candidates. d_max <= 0 selects
// default_degree_scale(d); a d_max that leaves some row's off-diagonal sum
// above 1 raises InvalidScaleError.
StochasticMatrix transition_matrix(const PairwiseDataset& d,
                                   double d_max = 0.0);

// Rounds w to integer counts summing approximately to total:
// round(total * w / sum(w)). Raises DegenerateWeightsError when sum(w) = 0.
VectorXd integerize_weights(const VectorXd& w, long long total);

// integerize_weights plus a resolution check: top1_of must map a weight
// vector to its aggregation's winning candidate, and the rounded vector must
// preserve the winner of the real-valued input, otherwise
// ResolutionTooCoarseError tells the caller to retry with a larger total.
VectorXd integerize_weights_checked(
    const VectorXd& w, long long total,
    const std::function<int(const VectorXd&)>& top1_of);

}  // namespace rankpoison
