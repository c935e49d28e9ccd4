// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include "rankpoison/dataset.hpp"

#include <cmath>
#include <string>

namespace rankpoison {

int edge_index(int i, int j, int n) {
  if (i < 1 || i > n || j < 1 || j > n || i == j) {
    throw InvalidEdgeError("edge_index: invalid edge (" + std::to_string(i) +
                           ", " + std::to_string(j) + ") for n = " +
                           std::to_string(n));
  }
  return (i - 1) * (n - 1) + (i < j ? j - 1 : j);
}

std::pair<int, int> edge_endpoints(int m, int n) {
  const int N = edge_count(n);
  if (m < 1 || m > N) {
    throw InvalidEdgeError("edge_endpoints: index " + std::to_string(m) +
                           " outside [1, " + std::to_string(N) + "]");
  }
  const int i = (m - 1) / (n - 1) + 1;
  const int offset = m - (i - 1) * (n - 1);
  const int j = offset < i ? offset : offset + 1;
  return {i, j};
}

PairwiseDataset::PairwiseDataset(int n, VectorXd weights,
                                 std::optional<std::vector<bool>> known_mask)
    : n(n), weights(std::move(weights)), known_mask(std::move(known_mask)) {
  if (n < 2) {
    throw InvalidSizeError("PairwiseDataset: need at least 2 candidates");
  }
  if (this->weights.size() != edge_count(n)) {
    throw DimensionError("PairwiseDataset: expected " +
                         std::to_string(edge_count(n)) + " weights, got " +
                         std::to_string(this->weights.size()));
  }
  if ((this->weights.array() < 0.0).any()) {
    throw DimensionError("PairwiseDataset: negative weight");
  }
  if (this->known_mask &&
      this->known_mask->size() != static_cast<size_t>(edge_count(n))) {
    throw DimensionError("PairwiseDataset: known_mask length mismatch");
  }
}

PairwiseDataset weights_from_votes(int n,
                                   const std::vector<Eigen::MatrixXi>& votes) {
  VectorXd w = VectorXd::Zero(edge_count(n));
  for (size_t u = 0; u < votes.size(); ++u) {
    const Eigen::MatrixXi& Y = votes[u];
    if (Y.rows() != n || Y.cols() != n) {
      throw MalformedVoteError("weights_from_votes: voter " +
                               std::to_string(u + 1) + " matrix is not " +
                               std::to_string(n) + "x" + std::to_string(n));
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const int y = Y(i, j);
        if (y < -1 || y > 1 || y != -Y(j, i)) {
          throw MalformedVoteError("weights_from_votes: voter " +
                                   std::to_string(u + 1) +
                                   " judgment matrix is not skew-symmetric "
                                   "with entries in {-1, 0, 1}");
        }
      }
    }
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        const int m = edge_index(i, j, n) - 1;
        if (Y(i - 1, j - 1) > 0) w[m] += 1.0;
        if (Y(j - 1, i - 1) < 0) w[m] += 1.0;
      }
    }
  }
  return PairwiseDataset(n, std::move(w));
}

MatrixXd build_comparison_matrix(int n) {
  if (n < 2) {
    throw InvalidSizeError("build_comparison_matrix: need n >= 2");
  }
  MatrixXd C = MatrixXd::Zero(edge_count(n), n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      const int m = edge_index(i, j, n) - 1;
      C(m, i - 1) = 1.0;
      C(m, j - 1) = -1.0;
    }
  }
  return C;
}

MatrixXd graph_laplacian(const PairwiseDataset& d) {
  MatrixXd L = MatrixXd::Zero(d.n, d.n);
  for (int i = 1; i <= d.n; ++i) {
    double degree = 0.0;
    for (int j = 1; j <= d.n; ++j) {
      if (i == j) continue;
      const double w = d(i, j);
      L(i - 1, j - 1) = -w;
      degree += w;
    }
    L(i - 1, i - 1) = degree;
  }
  return L;
}

VectorXd divergence(const PairwiseDataset& d, const VectorXd& y) {
  if (y.size() != d.weights.size()) {
    throw DimensionError("divergence: edge flow has length " +
                         std::to_string(y.size()) + ", expected " +
                         std::to_string(d.weights.size()));
  }
  VectorXd div = VectorXd::Zero(d.n);
  for (int i = 1; i <= d.n; ++i) {
    for (int j = 1; j <= d.n; ++j) {
      if (i == j) continue;
      const int m = edge_index(i, j, d.n) - 1;
      div[i - 1] += d.weights[m] * y[m];
    }
  }
  return div;
}

double default_degree_scale(const PairwiseDataset& d) {
  int max_opponents = 1;
  for (int i = 1; i <= d.n; ++i) {
    int opponents = 0;
    for (int j = 1; j <= d.n; ++j) {
      if (i != j && d(i, j) + d(j, i) > 0.0) ++opponents;
    }
    max_opponents = std::max(max_opponents, opponents);
  }
  return static_cast<double>(max_opponents);
}

StochasticMatrix transition_matrix(const PairwiseDataset& d, double d_max) {
  const double scale = d_max > 0.0 ? d_max : default_degree_scale(d);
  MatrixXd P = MatrixXd::Zero(d.n, d.n);
  for (int i = 1; i <= d.n; ++i) {
    double off_diagonal = 0.0;
    for (int j = 1; j <= d.n; ++j) {
      if (i == j) continue;
      const double pair_total = d(i, j) + d(j, i);
      if (pair_total > 0.0) {
        P(i - 1, j - 1) = d(j, i) / (pair_total * scale);
        off_diagonal += P(i - 1, j - 1);
      }
    }
    if (off_diagonal > 1.0 + 1e-9) {
      throw InvalidScaleError(
          "transition_matrix: degree scale " + std::to_string(scale) +
          " leaves row " + std::to_string(i) + " with transition mass " +
          std::to_string(off_diagonal));
    }
    P(i - 1, i - 1) = std::max(0.0, 1.0 - off_diagonal);
  }
  return StochasticMatrix{std::move(P), VectorXd()};
}

VectorXd integerize_weights(const VectorXd& w, long long total) {
  const double sum = w.sum();
  if (sum <= 0.0) {
    throw DegenerateWeightsError("integerize_weights: zero total weight");
  }
  if (total <= 0) {
    throw ConfigurationError("integerize_weights: total must be positive");
  }
  VectorXd out(w.size());
  for (Eigen::Index m = 0; m < w.size(); ++m) {
    out[m] = std::llround(static_cast<double>(total) * w[m] / sum);
  }
  return out;
}

VectorXd integerize_weights_checked(
    const VectorXd& w, long long total,
    const std::function<int(const VectorXd&)>& top1_of) {
  VectorXd out = integerize_weights(w, total);
  if (top1_of && top1_of(out) != top1_of(w)) {
    throw ResolutionTooCoarseError(
        "integerize_weights: rounding at total " + std::to_string(total) +
        " changed the top candidate");
  }
  return out;
}

}  // namespace rankpoison
