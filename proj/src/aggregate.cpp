// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include "rankpoison/aggregate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace rankpoison {

namespace {

VectorXd ones_flow(const PairwiseDataset& d, const VectorXd& y) {
  if (y.size() == 0) return VectorXd::Ones(d.weights.size());
  if (y.size() != d.weights.size()) {
    throw DimensionError("edge flow length mismatch");
  }
  return y;
}

// Normal-equation pieces of the weighted least squares: K = C' W C is the
// Laplacian of the symmetrized pair totals, rhs = C' W y the net weighted
// flow into each candidate.
void normal_equations(const PairwiseDataset& d, const VectorXd& y, MatrixXd* K,
                      VectorXd* rhs) {
  const int n = d.n;
  *K = MatrixXd::Zero(n, n);
  *rhs = VectorXd::Zero(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      const int m = edge_index(i, j, n) - 1;
      const double w = d.weights[m];
      (*K)(i - 1, i - 1) += w;
      (*K)(j - 1, j - 1) += w;
      (*K)(i - 1, j - 1) -= w;
      (*K)(j - 1, i - 1) -= w;
      (*rhs)[i - 1] += w * y[m];
      (*rhs)[j - 1] -= w * y[m];
    }
  }
}

// Candidate that wins a strict pair majority against every other candidate,
// or 0 when no such candidate exists.
int majority_winner(const PairwiseDataset& d) {
  for (int i = 1; i <= d.n; ++i) {
    bool beats_all = true;
    for (int j = 1; j <= d.n && beats_all; ++j) {
      if (i != j && d(i, j) <= d(j, i)) beats_all = false;
    }
    if (beats_all) return i;
  }
  return 0;
}

}  // namespace

VectorXd hodgerank_minimal_norm(const PairwiseDataset& d, const VectorXd& y,
                                bool* sign_flipped) {
  const VectorXd flow = ones_flow(d, y);
  MatrixXd K;
  VectorXd rhs;
  normal_equations(d, flow, &K, &rhs);

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(K);
  const VectorXd& values = eig.eigenvalues();
  const double cutoff = 1e-12 * std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  VectorXd inverted = VectorXd::Zero(d.n);
  for (int k = 0; k < d.n; ++k) {
    if (values[k] > cutoff) inverted[k] = 1.0 / values[k];
  }
  VectorXd theta = eig.eigenvectors() *
                   (inverted.asDiagonal() * (eig.eigenvectors().transpose() * rhs));

  bool flipped = false;
  const int winner = majority_winner(d);
  if (winner > 0) {
    const Ranking pi = ranking_from_scores(theta);
    if (pi[0] != winner && ranking_from_scores(-theta)[0] == winner) {
      theta = -theta;
      flipped = true;
    }
  }
  if (sign_flipped) *sign_flipped = flipped;
  return theta;
}

VectorXd hodgerank_regularized(const PairwiseDataset& d, const VectorXd& y,
                               const HodgeConfig& cfg) {
  if (cfg.lambda0 <= 0.0) {
    throw ConfigurationError("hodgerank_regularized: lambda0 must be > 0");
  }
  const VectorXd flow = ones_flow(d, y);
  MatrixXd K;
  VectorXd rhs;
  normal_equations(d, flow, &K, &rhs);
  K.diagonal().array() += 2.0 * cfg.lambda0;
  return Eigen::LLT<MatrixXd>(K).solve(rhs);
}

bool is_irreducible(const MatrixXd& P) {
  const int n = static_cast<int>(P.rows());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (int j = 0; j < n; ++j) {
      if (i != j && P(i, j) > 0.0) reach[i][j] = true;
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!reach[i][j]) return false;
    }
  }
  return true;
}

VectorXd stationary_distribution(const StochasticMatrix& P,
                                 const SpectralConfig& cfg) {
  const int n = P.n();
  if (!is_irreducible(P.entries)) {
    throw NonUniqueStationaryError(
        "stationary_distribution: reducible chain has no unique stationary "
        "distribution");
  }
  VectorXd pi = VectorXd::Constant(n, 1.0 / n);
  for (long iter = 0; iter < cfg.max_iter; ++iter) {
    VectorXd next = P.entries.transpose() * pi;
    next /= next.sum();
    if ((next - pi).lpNorm<1>() <= cfg.tol) {
      return next;
    }
    pi = std::move(next);
  }

  // Periodic or slowly mixing chains may never contract in L1; fall back to
  // the eigenvector at eigenvalue 1 of the transposed matrix.
  Eigen::EigenSolver<MatrixXd> eig(P.entries.transpose());
  int best = 0;
  double best_gap = std::abs(eig.eigenvalues()[0] - std::complex<double>(1.0));
  for (int k = 1; k < n; ++k) {
    const double gap = std::abs(eig.eigenvalues()[k] - std::complex<double>(1.0));
    if (gap < best_gap) {
      best = k;
      best_gap = gap;
    }
  }
  VectorXd v = eig.eigenvectors().col(best).real();
  if (v.sum() < 0.0) v = -v;
  v = v.cwiseMax(0.0);
  const double sum = v.sum();
  if (sum <= 0.0 || best_gap > 1e-8) {
    throw NonUniqueStationaryError(
        "stationary_distribution: no eigenvector at eigenvalue 1");
  }
  return v / sum;
}

VectorXd rank_centrality(const PairwiseDataset& d, const SpectralConfig& cfg) {
  return stationary_distribution(transition_matrix(d), cfg);
}

Ranking ranking_from_scores(const VectorXd& theta) {
  Ranking order(theta.size());
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return theta[a - 1] > theta[b - 1];
  });
  return order;
}

}  // namespace rankpoison
