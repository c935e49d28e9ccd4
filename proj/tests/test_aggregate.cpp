// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include <random>

#include "doctest.h"
#include "rankpoison/aggregate.hpp"
#include "rankpoison/dataset.hpp"

using namespace rankpoison;

namespace {

PairwiseDataset random_dataset(int n, std::mt19937_64& rng, double lo = 0.5,
                               double hi = 10.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  VectorXd w(edge_count(n));
  for (int m = 0; m < w.size(); ++m) w[m] = unif(rng);
  return PairwiseDataset(n, w);
}

// Independent dense solve of the regularized normal equations, assembled
// entry by entry from the raw counts.
VectorXd dense_normal_equations(const PairwiseDataset& d, double lambda0) {
  const int n = d.n;
  MatrixXd k = 2.0 * lambda0 * MatrixXd::Identity(n, n);
  VectorXd rhs = VectorXd::Zero(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      const double w = d(i, j);
      k(i - 1, i - 1) += w;
      k(j - 1, j - 1) += w;
      k(i - 1, j - 1) -= w;
      k(j - 1, i - 1) -= w;
      rhs(i - 1) += w;
      rhs(j - 1) -= w;
    }
  }
  return k.ldlt().solve(rhs);
}

// Stationary distribution through a dense eigen-decomposition of the
// transposed transition matrix, independent of the power iteration.
VectorXd dense_stationary(const StochasticMatrix& p) {
  const Eigen::EigenSolver<MatrixXd> eig(p.entries.transpose());
  int best = 0;
  for (int k = 1; k < p.n(); ++k) {
    if (std::abs(eig.eigenvalues()(k) - std::complex<double>(1.0, 0.0)) <
        std::abs(eig.eigenvalues()(best) - std::complex<double>(1.0, 0.0))) {
      best = k;
    }
  }
  VectorXd v = eig.eigenvectors().col(best).real();
  if (v.sum() < 0) v = -v;
  return v / v.sum();
}

}  // namespace

TEST_CASE("minimal-norm scores vanish on symmetric data") {
  const PairwiseDataset d(3, VectorXd::Ones(6));
  CHECK(hodgerank_minimal_norm(d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("minimal-norm scores split the fitted gap around zero") {
  PairwiseDataset d(2, VectorXd::Zero(2));
  d.at(1, 2) = 3;
  d.at(2, 1) = 1;
  const VectorXd theta = hodgerank_minimal_norm(d);
  CHECK(theta(0) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(theta(1) == doctest::Approx(-0.25).epsilon(1e-10));
  CHECK(std::abs(theta.sum()) < 1e-12);
}

TEST_CASE("scaling all weights preserves the least-squares ranking") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const PairwiseDataset d = random_dataset(n, rng);
    const PairwiseDataset scaled(n, 7.5 * d.weights);
    CHECK(ranking_from_scores(hodgerank_minimal_norm(d)) ==
          ranking_from_scores(hodgerank_minimal_norm(scaled)));
  }
}

TEST_CASE("tiny regularization reproduces the minimal-norm gap") {
  PairwiseDataset d(2, VectorXd::Zero(2));
  d.at(1, 2) = 3;
  d.at(2, 1) = 1;
  HodgeConfig cfg;
  cfg.lambda0 = 1e-12;
  const VectorXd theta = hodgerank_regularized(d, VectorXd(), cfg);
  CHECK(theta(0) - theta(1) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("regularized scores of all-zero weights are zero") {
  const PairwiseDataset d(4, VectorXd::Zero(12));
  CHECK(hodgerank_regularized(d).isZero(1e-15));
}

TEST_CASE("regularized scores satisfy their normal equations") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const PairwiseDataset d = random_dataset(n, rng);
    const VectorXd theta = hodgerank_regularized(d);
    const MatrixXd c = build_comparison_matrix(n);
    const VectorXd y = VectorXd::Ones(edge_count(n));
    const VectorXd residual =
        c.transpose() * d.weights.asDiagonal() * (c * theta - y) +
        2e-6 * theta;
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("least-squares solver matches a dense normal-equation oracle") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const PairwiseDataset d = random_dataset(n, rng, 0.0, 10.0);
    const VectorXd mine = hodgerank_regularized(d);
    const VectorXd oracle = dense_normal_equations(d, 1e-6);
    CHECK((mine - oracle).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("two-candidate walk scores recover the win rate") {
  PairwiseDataset d(2, VectorXd::Zero(2));
  d.at(1, 2) = 3;
  d.at(2, 1) = 1;
  const VectorXd theta = rank_centrality(d);
  CHECK(theta(0) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(theta(1) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("all-tied data gives uniform walk scores") {
  const PairwiseDataset d(5, 3.0 * VectorXd::Ones(20));
  const VectorXd theta = rank_centrality(d);
  CHECK((theta - VectorXd::Constant(5, 0.2)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("walk scores are a stationary fixed point") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const PairwiseDataset d = random_dataset(n, rng);
    const StochasticMatrix p = transition_matrix(d);
    const VectorXd theta = rank_centrality(d);
    CHECK((p.entries.transpose() * theta - theta).cwiseAbs().maxCoeff() <
          1e-9);
    CHECK(theta.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("walk scores match a dense left-eigenvector oracle") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const PairwiseDataset d = random_dataset(n, rng);
    const VectorXd mine = rank_centrality(d);
    const VectorXd oracle = dense_stationary(transition_matrix(d));
    CHECK((mine - oracle).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("disconnected comparison blocks have no unique walk score") {
  PairwiseDataset d(4, VectorXd::Zero(12));
  d.at(1, 2) = 1;
  d.at(2, 1) = 1;
  d.at(3, 4) = 1;
  d.at(4, 3) = 1;
  CHECK_THROWS_AS(rank_centrality(d), NonUniqueStationaryError);
}

TEST_CASE("ranking_from_scores sorts descending with index tie-breaks") {
  VectorXd theta(3);
  theta << 0.1, 0.9, 0.5;
  CHECK(ranking_from_scores(theta) == Ranking{2, 3, 1});
  CHECK(ranking_from_scores(VectorXd::Ones(4)) == Ranking{1, 2, 3, 4});
  CHECK(ranking_from_scores(theta) == ranking_from_scores(2.0 * theta));
}

namespace {

// Candidate that holds a strict pair majority against every opponent, or 0.
int pair_majority_winner(const PairwiseDataset& d) {
  for (int i = 1; i <= d.n; ++i) {
    bool wins_all = true;
    for (int j = 1; j <= d.n && wins_all; ++j) {
      if (i != j && d(i, j) <= d(j, i)) wins_all = false;
    }
    if (wins_all) return i;
  }
  return 0;
}

}  // namespace

TEST_CASE("least-squares winner matches the majority winner on evenly sampled data") {
  // When every pair carries the same comparison total, the least-squares
  // scores order candidates by net wins, so a candidate that wins every
  // pair majority on strength-consistent data must come out on top.
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> strength(0.1, 1.0);
  std::uniform_real_distribution<double> scale(2.0, 200.0);
  int found = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    VectorXd s(n);
    for (int i = 0; i < n; ++i) s[i] = strength(rng);
    const double total = scale(rng);
    VectorXd w(edge_count(n));
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        w[edge_index(i, j, n) - 1] = total * s[i - 1] / (s[i - 1] + s[j - 1]);
      }
    }
    const PairwiseDataset d(n, w);
    const int winner = pair_majority_winner(d);
    if (winner == 0) continue;
    ++found;
    CHECK(ranking_from_scores(hodgerank_minimal_norm(d))[0] == winner);
    CHECK(ranking_from_scores(hodgerank_regularized(d))[0] == winner);
  }
  CHECK(found > 250);
}

TEST_CASE("pair majorities alone do not determine the least-squares winner") {
  // The least-squares fit weighs victory margins, not just their signs:
  // candidate 1 edges out both rivals 51:49 while candidate 2 routs
  // candidate 3 with 95:5, and that one lopsided pair hands candidate 2
  // the top score even though candidate 1 wins every pair majority.
  VectorXd w(edge_count(3));
  w[edge_index(1, 2, 3) - 1] = 51;
  w[edge_index(2, 1, 3) - 1] = 49;
  w[edge_index(1, 3, 3) - 1] = 51;
  w[edge_index(3, 1, 3) - 1] = 49;
  w[edge_index(2, 3, 3) - 1] = 95;
  w[edge_index(3, 2, 3) - 1] = 5;
  const PairwiseDataset d(3, w);
  CHECK(pair_majority_winner(d) == 1);

  bool flipped = true;
  const VectorXd theta = hodgerank_minimal_norm(d, VectorXd(), &flipped);
  CHECK_FALSE(flipped);
  CHECK(ranking_from_scores(theta) == Ranking{2, 1, 3});
  CHECK(theta[1] > theta[0]);
  CHECK(theta.sum() == doctest::Approx(0.0).epsilon(1e-12));
}
