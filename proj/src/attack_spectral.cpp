// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include "rankpoison/attack_spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace rankpoison {

namespace {

void validate_distribution(const VectorXd& theta) {
  if (theta.size() < 2) {
    throw InvalidSizeError("inverse construction: need at least 2 states");
  }
  if ((theta.array() <= 0.0).any()) {
    throw InvalidDistributionError(
        "inverse construction: scores must be strictly positive");
  }
  if (std::abs(theta.sum() - 1.0) > 1e-9) {
    throw InvalidDistributionError(
        "inverse construction: scores must sum to 1, got " +
        std::to_string(theta.sum()));
  }
}

// Indices of theta in ascending value order, ties toward smaller index.
std::vector<int> ascending_order(const VectorXd& theta) {
  std::vector<int> order(theta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return theta[a] < theta[b]; });
  return order;
}

// Relabels a matrix built over sorted states back to the original labels:
// sorted state a is original state order[a].
MatrixXd permute_back(const MatrixXd& sorted_matrix,
                      const std::vector<int>& order) {
  const int n = static_cast<int>(order.size());
  MatrixXd out(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      out(order[a], order[b]) = sorted_matrix(a, b);
    }
  }
  return out;
}

double close_row_entry(double deficit) {
  if (deficit < -1e-12) {
    throw InvalidDistributionError(
        "inverse construction: row overflows by " + std::to_string(-deficit));
  }
  return std::max(0.0, deficit);
}

MatrixXd fundamental_matrix(const MatrixXd& P, const VectorXd& pi) {
  const int n = static_cast<int>(P.rows());
  const MatrixXd A = MatrixXd::Identity(n, n) - P +
                     VectorXd::Ones(n) * pi.transpose();
  return A.partialPivLu().solve(MatrixXd::Identity(n, n));
}

VectorXd stationary_of(const StochasticMatrix& chain) {
  if (chain.stationary.size() == chain.entries.rows()) {
    return chain.stationary;
  }
  return stationary_distribution(chain);
}

}  // namespace

const char* to_string(ChainKind kind) {
  return kind == ChainKind::reversible ? "reversible" : "irreversible";
}

StochasticMatrix reversible_inverse_eigen(const VectorXd& theta) {
  validate_distribution(theta);
  const int n = static_cast<int>(theta.size());
  const std::vector<int> order = ascending_order(theta);

  VectorXd sub(n);
  for (int a = 0; a < n; ++a) sub[a] = theta[order[a]];
  sub /= sub.sum();

  // Level k pins state k against the renormalized remainder: from state k
  // the walk jumps into the remainder with its stationary profile, and the
  // remainder returns to k just often enough for balance. The remainder's
  // own block is the next level scaled by alpha.
  MatrixXd S = MatrixXd::Zero(n, n);
  double scale = 1.0;
  for (int k = 0; k + 1 < n; ++k) {
    const int remaining = n - k - 1;
    const double beta = 1.0 - sub[0];
    const double alpha = 1.0 - sub[0] / beta;
    VectorXd next = sub.tail(remaining) / beta;
    S.row(k).tail(remaining) = scale * next.transpose();
    S.col(k).tail(remaining).setConstant(scale * (1.0 - alpha));
    scale *= alpha;
    sub = std::move(next);
  }
  S(n - 1, n - 1) = close_row_entry(1.0 - S.row(n - 1).sum());

  StochasticMatrix chain;
  chain.entries = permute_back(S, order);
  chain.stationary = theta;
  return chain;
}

StochasticMatrix irreversible_inverse_eigen(const VectorXd& theta) {
  validate_distribution(theta);
  const int n = static_cast<int>(theta.size());
  const std::vector<int> order = ascending_order(theta);

  VectorXd t(n);
  for (int a = 0; a < n; ++a) t[a] = theta[order[a]];
  const double tmin = t[0];
  const double tmax = t[n - 1];
  const double head_tail = tmin + tmax;

  // Mass flows up the sorted states and the last row routes it back down,
  // so every cycle through the chain visits states in one rotational
  // direction. The attenuation factors (tmax - t_k) / (t_k + tmax) thin the
  // flow that skips over intermediate states.
  MatrixXd S = MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    S(i, i) = (t[i] - tmin) / (t[i] + tmax);
    double skip = 1.0;
    for (int j = i + 1; j + 1 < n; ++j) {
      S(i, j) = 2.0 * t[j] * head_tail / ((t[i] + tmax) * (t[j] + tmax)) * skip;
      skip *= (tmax - t[j]) / (t[j] + tmax);
    }
  }
  double skip = 1.0;
  for (int j = 0; j + 1 < n; ++j) {
    S(n - 1, j) = t[j] * head_tail / (tmax * (t[j] + tmax)) * skip;
    skip *= (tmax - t[j]) / (t[j] + tmax);
  }
  for (int i = 0; i < n; ++i) {
    S(i, n - 1) = close_row_entry(1.0 - S.row(i).head(n - 1).sum());
  }

  StochasticMatrix chain;
  chain.entries = permute_back(S, order);
  chain.stationary = theta;
  return chain;
}

StochasticMatrix inverse_eigen(const VectorXd& theta, ChainKind kind) {
  return kind == ChainKind::reversible ? reversible_inverse_eigen(theta)
                                       : irreversible_inverse_eigen(theta);
}

double reversible_second_eigenvalue(const VectorXd& theta) {
  validate_distribution(theta);
  const double tmin = theta.minCoeff();
  return -tmin / (1.0 - tmin);
}

double asymptotic_variance(const StochasticMatrix& chain, const VectorXd& f) {
  const int n = chain.n();
  if (f.size() != n) {
    throw DimensionError("asymptotic_variance: observable length mismatch");
  }
  const VectorXd pi = stationary_of(chain);
  VectorXd centered = f.array() - pi.dot(f);
  const double variance = (pi.array() * centered.array().square()).sum();
  if (variance <= 1e-300) return 0.0;
  centered /= std::sqrt(variance);
  const MatrixXd Z = fundamental_matrix(chain.entries, pi);
  return 2.0 * (pi.array() * (Z * centered).array() * centered.array()).sum() -
         1.0;
}

double worst_case_variance(const StochasticMatrix& chain) {
  const int n = chain.n();
  if (n < 2) throw InvalidSizeError("worst_case_variance: need n >= 2");
  const VectorXd pi = stationary_of(chain);
  const MatrixXd Z = fundamental_matrix(chain.entries, pi);

  // Symmetrize the fundamental matrix in the stationary inner product and
  // take its largest eigenvalue on the complement of the direction sqrt(pi)
  // (constants, which carry no variance).
  const VectorXd root = pi.cwiseSqrt();
  const MatrixXd S = 0.5 * (pi.asDiagonal() * Z +
                            Z.transpose() * pi.asDiagonal());
  const MatrixXd M = root.cwiseInverse().asDiagonal() * S *
                     root.cwiseInverse().asDiagonal();

  // Householder frame sending e1 to -sqrt(pi); columns 2..n then span the
  // complement.
  VectorXd v = root;
  v[0] += 1.0;
  const MatrixXd H = MatrixXd::Identity(n, n) -
                     (2.0 / v.squaredNorm()) * v * v.transpose();
  const MatrixXd Q = H.rightCols(n - 1);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(Q.transpose() * M * Q);
  return 2.0 * eig.eigenvalues().maxCoeff() - 1.0;
}

VectorXd pair_ratios(const MatrixXd& entries) {
  const int n = static_cast<int>(entries.rows());
  VectorXd q(n * (n - 1) / 2);
  int p = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++p) {
      const double s = entries(i, j) + entries(j, i);
      q[p] = s > 0.0 ? entries(i, j) / s : 0.5;
    }
  }
  return q;
}

StochasticMatrix chain_from_pair_ratios(const VectorXd& ratios, int n,
                                        double degree_scale) {
  if (ratios.size() != n * (n - 1) / 2) {
    throw DimensionError("chain_from_pair_ratios: ratio length mismatch");
  }
  if (degree_scale < n - 1) {
    throw InvalidScaleError(
        "chain_from_pair_ratios: degree scale below n - 1 overflows rows");
  }
  StochasticMatrix chain;
  chain.entries = MatrixXd::Zero(n, n);
  int p = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++p) {
      chain.entries(i, j) = ratios[p] / degree_scale;
      chain.entries(j, i) = (1.0 - ratios[p]) / degree_scale;
    }
  }
  for (int i = 0; i < n; ++i) {
    chain.entries(i, i) = 1.0 - chain.entries.row(i).sum();
  }
  return chain;
}

BalancedRatios balanced_pair_ratios(const MatrixXd& entries,
                                    const VectorXd& theta, int max_sweeps) {
  const int n = static_cast<int>(entries.rows());
  if (theta.size() != n) {
    throw DimensionError("balanced_pair_ratios: dimension mismatch");
  }
  validate_distribution(theta);
  const int pairs = n * (n - 1) / 2;

  // Stationarity of the ratio walk is linear in the ratios: state i needs
  // sum over its pairs of q(i -> j) (theta_i + theta_j) = 1 - theta_i, after
  // substituting q(j -> i) = 1 - q(i -> j). One equation per state, one
  // redundancy overall.
  MatrixXd A = MatrixXd::Zero(n, pairs);
  VectorXd c(n);
  {
    int p = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j, ++p) {
        A(i, p) += theta[i] + theta[j];
        A(j, p) -= theta[i] + theta[j];
      }
    }
    for (int i = 0; i < n; ++i) {
      double substituted = 0.0;
      for (int j = 0; j < i; ++j) substituted += theta[i] + theta[j];
      c[i] = 1.0 - theta[i] - substituted;
    }
  }

  BalancedRatios out;
  out.ratios = pair_ratios(entries);
  const auto gram = (A * A.transpose()).completeOrthogonalDecomposition();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const VectorXd violation = A * out.ratios - c;
    if (violation.cwiseAbs().maxCoeff() <= 1e-13) break;
    out.ratios -= A.transpose() * gram.solve(violation);
    out.ratios = out.ratios.cwiseMax(0.0).cwiseMin(1.0);
  }
  out.balance_residual = (A * out.ratios - c).cwiseAbs().maxCoeff();
  return out;
}

Reconstruction reconstruct_weights(const MatrixXd& P, double degree_scale,
                                   const VectorXd& pair_totals) {
  const int n = static_cast<int>(P.rows());
  if (P.cols() != n || n < 2) {
    throw DimensionError("reconstruct_weights: matrix must be square, n >= 2");
  }
  if (pair_totals.size() != n * (n - 1) / 2) {
    throw DimensionError("reconstruct_weights: pair total length mismatch");
  }
  if (degree_scale <= 0.0) {
    throw InvalidScaleError("reconstruct_weights: degree scale must be positive");
  }
  if ((pair_totals.array() < 0.0).any()) {
    throw InvalidScaleError("reconstruct_weights: pair totals must be >= 0");
  }
  Reconstruction rec;
  rec.weights = VectorXd::Zero(edge_count(n));
  int p = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j, ++p) {
      const double total = pair_totals[p];
      if (total <= 0.0) continue;
      const double toward_j = P(i - 1, j - 1);
      const double toward_i = P(j - 1, i - 1);
      const double pair_sum = toward_j + toward_i;
      if (pair_sum <= 0.0) continue;
      double q;
      if (std::abs(degree_scale * pair_sum - 1.0) <= 1e-9) {
        q = degree_scale * toward_j;
      } else {
        q = toward_j / pair_sum;
        ++rec.projected_pairs;
      }
      q = std::clamp(q, 0.0, 1.0);
      const double beats_i = total * q;
      rec.weights[edge_index(j, i, n) - 1] = beats_i;
      rec.weights[edge_index(i, j, n) - 1] = total - beats_i;
    }
  }
  return rec;
}

Reconstruction reconstruct_weights(const MatrixXd& P, double degree_scale,
                                   double pair_total) {
  if (pair_total <= 0.0) {
    throw InvalidScaleError("reconstruct_weights: pair total must be positive");
  }
  const int n = static_cast<int>(P.rows());
  return reconstruct_weights(
      P, degree_scale, VectorXd::Constant(n * (n - 1) / 2, pair_total));
}

namespace {

// Counts per unordered pair (i, j), i < j, in lexicographic order.
VectorXd unordered_pair_totals(const VectorXd& w, int n) {
  VectorXd totals(n * (n - 1) / 2);
  int p = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j, ++p) {
      totals[p] =
          w[edge_index(i, j, n) - 1] + w[edge_index(j, i, n) - 1];
    }
  }
  return totals;
}

// Replaces zero totals with the mean compared total, so planting covers the
// whole graph even when the observed one misses a few pairs.
VectorXd filled_pair_totals(const VectorXd& totals) {
  double mass = 0.0;
  int compared = 0;
  for (Eigen::Index p = 0; p < totals.size(); ++p) {
    if (totals[p] > 0.0) {
      mass += totals[p];
      ++compared;
    }
  }
  if (compared == 0) {
    throw DegenerateWeightsError(
        "attack_rank_centrality: no compared pairs to calibrate against");
  }
  const double mean = mass / compared;
  VectorXd out = totals;
  for (Eigen::Index p = 0; p < out.size(); ++p) {
    if (out[p] <= 0.0) out[p] = mean;
  }
  return out;
}

}  // namespace

SpectralAttackResult attack_rank_centrality(const PairwiseDataset& visible,
                                            const VectorXd& theta_R,
                                            const VectorXd& theta_A,
                                            const SpectralAttackConfig& cfg) {
  const int n = visible.n;
  if (theta_R.size() != n || theta_A.size() != n) {
    throw DimensionError("attack_rank_centrality: score length mismatch");
  }
  const int N = edge_count(n);
  const int pairs = n * (n - 1) / 2;
  // The planted data covers every pair, so the victim will rescale its walk
  // by n - 1 distinct opponents regardless of how sparse the visible data is.
  const double complete_scale = static_cast<double>(n - 1);

  SpectralAttackResult result;
  result.w_u = VectorXd::Zero(N);
  double clamped = 0.0;
  double planned = 0.0;

  const auto planted_counts = [&](const VectorXd& theta, double scale,
                                  const VectorXd& pair_totals) {
    const StochasticMatrix raw = inverse_eigen(theta, cfg.kind);
    const BalancedRatios balanced = balanced_pair_ratios(raw.entries, theta);
    result.balance_residual =
        std::max(result.balance_residual, balanced.balance_residual);
    const StochasticMatrix chain =
        chain_from_pair_ratios(balanced.ratios, n, scale);
    return reconstruct_weights(chain.entries, scale, pair_totals);
  };

  if (cfg.infer_hidden) {
    const VectorXd totals =
        cfg.pair_total_feedback > 0.0
            ? VectorXd::Constant(pairs, cfg.pair_total_feedback)
            : filled_pair_totals(unordered_pair_totals(visible.weights, n));
    const double d1 = cfg.d1 > 0.0 ? cfg.d1 : complete_scale;
    const Reconstruction full = planted_counts(theta_R, d1, totals);
    result.projected_pairs += full.projected_pairs;
    const VectorXd gap = full.weights - visible.weights;
    result.w_u = gap.cwiseMax(0.0);
    clamped += (result.w_u - gap).sum();
    planned += gap.cwiseAbs().sum();
  }

  const VectorXd target_totals =
      cfg.pair_total_target > 0.0
          ? VectorXd::Constant(pairs, cfg.pair_total_target)
          : filled_pair_totals(
                unordered_pair_totals(visible.weights + result.w_u, n));
  const double d2 = cfg.d2 > 0.0 ? cfg.d2 : complete_scale;
  const Reconstruction target = planted_counts(theta_A, d2, target_totals);
  result.projected_pairs += target.projected_pairs;
  const VectorXd plan = target.weights - result.w_u;
  result.w_k = plan.cwiseMax(0.0);
  clamped += (result.w_k - plan).sum();
  planned += plan.cwiseAbs().sum();

  result.clamped_mass = planned > 0.0 ? clamped / planned : 0.0;
  result.heavy_clamping = result.clamped_mass > 0.5;
  return result;
}

}  // namespace rankpoison
