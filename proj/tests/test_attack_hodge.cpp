// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rankpoison/aggregate.hpp"
#include "rankpoison/attack_hodge.hpp"
#include "rankpoison/evaluation.hpp"
#include "rankpoison/simulate.hpp"

using namespace rankpoison;

namespace {

VectorXd random_weights(int n, std::mt19937_64& rng, double lo = 1.0,
                        double hi = 20.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  VectorXd w(edge_count(n));
  for (Eigen::Index m = 0; m < w.size(); ++m) w[m] = unif(rng);
  return w;
}

HodgeAttackProblem swap_top_two_problem(int n, const VectorXd& w_star) {
  const PairwiseDataset d(n, w_star);
  const VectorXd theta = hodgerank_regularized(d);
  const Ranking target = build_target_ranking(ranking_from_scores(theta), 2);
  HodgeAttackProblem p;
  p.n = n;
  p.w_k_star = w_star;
  p.theta_R = theta;
  p.theta_A = permute_target_scores(theta, target);
  return p;
}

// Global minimizer of 0.5||w - w*||^2 over {B w = b, w >= 0} by exhaustive
// face enumeration: every zero-set is tried, the equality-constrained
// minimizer on the remaining coordinates comes from its KKT system, and
// infeasible faces are discarded. The optimum lies on its own active-set
// face, where this construction reproduces it exactly.
double qp_oracle_distance(const MatrixXd& B, const VectorXd& b,
                          const VectorXd& w_star) {
  const int N = static_cast<int>(w_star.size());
  const double feas_tol = 1e-8 * (1.0 + b.norm());
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << N); ++mask) {
    std::vector<int> free_set;
    for (int i = 0; i < N; ++i) {
      if (mask & (1u << i)) free_set.push_back(i);
    }
    double zero_part = 0.0;
    for (int i = 0; i < N; ++i) {
      if (!(mask & (1u << i))) zero_part += w_star[i] * w_star[i];
    }
    if (free_set.empty()) {
      if (b.norm() <= feas_tol) best = std::min(best, std::sqrt(zero_part));
      continue;
    }
    const int nf = static_cast<int>(free_set.size());
    MatrixXd Bf(B.rows(), nf);
    VectorXd wf(nf);
    for (int k = 0; k < nf; ++k) {
      Bf.col(k) = B.col(free_set[k]);
      wf[k] = w_star[free_set[k]];
    }
    const VectorXd lambda =
        (Bf * Bf.transpose()).completeOrthogonalDecomposition().solve(
            Bf * wf - b);
    const VectorXd vf = wf - Bf.transpose() * lambda;
    if ((Bf * vf - b).norm() > feas_tol) continue;
    if (vf.minCoeff() < -1e-10) continue;
    best = std::min(best, std::sqrt((vf - wf).squaredNorm() + zero_part));
  }
  return best;
}

}  // namespace

TEST_CASE("constraint_operator reduces to -C' at theta=0, y=1") {
  const int n = 3;
  const MatrixXd C = build_comparison_matrix(n);
  const VectorXd y = VectorXd::Ones(edge_count(n));
  const ConstraintOperator op =
      constraint_operator(VectorXd::Zero(n), C, y, 1e-6);
  CHECK((op.B + C.transpose()).norm() == 0.0);
  CHECK(op.b.norm() == 0.0);
  CHECK(op.B.rows() == n);
  CHECK(op.B.cols() == edge_count(n));
}

TEST_CASE("constraint_operator matches the normal equations for any weights") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int N = edge_count(n);
    const MatrixXd C = build_comparison_matrix(n);
    VectorXd theta(n), y(N), w(N);
    for (int i = 0; i < n; ++i) theta[i] = gauss(rng);
    for (int m = 0; m < N; ++m) y[m] = gauss(rng);
    for (int m = 0; m < N; ++m) w[m] = std::abs(gauss(rng));
    const double lambda0 = 1e-6;
    const ConstraintOperator op = constraint_operator(theta, C, y, lambda0);
    const MatrixXd W = w.asDiagonal();
    const VectorXd direct = (C.transpose() * W * C +
                             2.0 * lambda0 * MatrixXd::Identity(n, n)) *
                                theta -
                            C.transpose() * W * y;
    CHECK((op.B * w - op.b - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
  }
}

TEST_CASE("constraint_operator is satisfied by the unpoisoned solution") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const VectorXd w = random_weights(n, rng);
    const PairwiseDataset d(n, w);
    const VectorXd theta = hodgerank_regularized(d);
    const MatrixXd C = build_comparison_matrix(n);
    const VectorXd y = VectorXd::Ones(edge_count(n));
    const ConstraintOperator op = constraint_operator(theta, C, y, 1e-6);
    CHECK((op.B * w - op.b).norm() <= 1e-9 * (1.0 + w.sum()));
  }
}

TEST_CASE("constraint_operator rejects mismatched shapes") {
  const MatrixXd C = build_comparison_matrix(3);
  const VectorXd y = VectorXd::Ones(edge_count(3));
  CHECK_THROWS_AS(constraint_operator(VectorXd::Zero(4), C, y, 1e-6),
                  DimensionError);
  CHECK_THROWS_AS(constraint_operator(VectorXd::Zero(3), C,
                                      VectorXd::Ones(5), 1e-6),
                  DimensionError);
}

TEST_CASE("attack_complete leaves already-optimal weights untouched") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const VectorXd w_star = random_weights(n, rng);
    HodgeAttackProblem p;
    p.n = n;
    p.w_k_star = w_star;
    p.theta_R = hodgerank_regularized(PairwiseDataset(n, w_star));
    p.theta_A = p.theta_R;
    const HodgeAttackResult res = attack_complete(p);
    CHECK(res.converged);
    CHECK((res.w_hat - w_star).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("attack_complete promotes the runner-up on a 3-candidate instance") {
  std::mt19937_64 rng(37);
  const VectorXd w_star = random_weights(3, rng);
  const HodgeAttackProblem p = swap_top_two_problem(3, w_star);
  const HodgeAttackResult res = attack_complete(p);
  CHECK(res.converged);
  CHECK(res.residual <= p.tol_residual);
  const Ranking achieved =
      ranking_from_scores(hodgerank_regularized(PairwiseDataset(3, res.w_hat)));
  CHECK(reciprocal_rank(ranking_from_scores(p.theta_A), achieved) == 1.0);
}

TEST_CASE("attack_complete satisfies the target constraint on random instances") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const VectorXd w_star = random_weights(n, rng);
    const HodgeAttackProblem p = swap_top_two_problem(n, w_star);
    const HodgeAttackResult res = attack_complete(p);
    CHECK(res.converged);
    CHECK(res.residual <= p.tol_residual);
    CHECK(res.w_hat.minCoeff() >= 0.0);
    const VectorXd rescored =
        hodgerank_regularized(PairwiseDataset(n, res.w_hat));
    CHECK((rescored - p.theta_A).cwiseAbs().maxCoeff() <= 1e-4);
    CHECK(ranking_from_scores(rescored) == ranking_from_scores(p.theta_A));
  }
}

TEST_CASE("attack_complete modification is globally minimal on small instances") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 2);
    const VectorXd w_star = random_weights(n, rng, 0.5, 8.0);
    const HodgeAttackProblem p = swap_top_two_problem(n, w_star);
    const HodgeAttackResult res = attack_complete(p);
    REQUIRE(res.converged);
    const MatrixXd C = build_comparison_matrix(n);
    const VectorXd y = VectorXd::Ones(edge_count(n));
    const ConstraintOperator op =
        constraint_operator(p.theta_A, C, y, p.lambda0);
    const double oracle = qp_oracle_distance(op.B, op.b, w_star);
    REQUIRE(std::isfinite(oracle));
    CHECK((res.w_hat - w_star).norm() <= oracle + 1e-6);
  }
}

TEST_CASE("attack_complete reports unsatisfiable targets") {
  std::mt19937_64 rng(47);
  const VectorXd w_star = random_weights(3, rng);
  HodgeAttackProblem p = swap_top_two_problem(3, w_star);
  // Every column of the constraint matrix sums to zero, so a target whose
  // entries do not cancel puts the right-hand side outside the column span.
  p.theta_A.array() += 1.0;
  p.max_iter = 2000;
  CHECK_THROWS_AS(attack_complete(p), InfeasibleTargetError);
}

TEST_CASE("attack rejects invalid configuration") {
  std::mt19937_64 rng(53);
  HodgeAttackProblem p = swap_top_two_problem(3, random_weights(3, rng));
  HodgeAttackProblem bad = p;
  bad.eta = 1.7;
  CHECK_THROWS_AS(attack_complete(bad), ConfigurationError);
  bad = p;
  bad.rho2 = 0.0;
  CHECK_THROWS_AS(attack_complete(bad), ConfigurationError);
  bad = p;
  bad.w_k_star = VectorXd::Ones(2);
  CHECK_THROWS_AS(attack_complete(bad), DimensionError);
  bad = p;
  bad.max_iter = 0;
  CHECK_THROWS_AS(attack_incomplete(bad), ConfigurationError);
}

TEST_CASE("attack_incomplete degenerates to attack_complete with nothing hidden") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const VectorXd w_star = random_weights(n, rng);
    const HodgeAttackProblem p = swap_top_two_problem(n, w_star);
    const HodgeAttackResult complete = attack_complete(p);
    const HodgeAttackResult incomplete = attack_incomplete(p);
    CHECK(incomplete.converged);
    CHECK((incomplete.w_hat - complete.w_hat).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(incomplete.w_u.cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("attack_incomplete succeeds with a fifth of the data hidden") {
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    SimulationSpec sim;
    sim.n = 10;
    sim.samples = 5000;
    sim.seed = seed;
    const PairwiseDataset full = simulate_btl(sim);
    const HiddenSplit split = hide_mass(full, 0.2, seed + 100);

    const VectorXd theta = hodgerank_regularized(full);
    const Ranking target = build_target_ranking(ranking_from_scores(theta), 2);
    HodgeAttackProblem p;
    p.n = sim.n;
    p.w_k_star = split.visible.weights;
    p.theta_R = theta;
    p.theta_A = permute_target_scores(theta, target);
    const HodgeAttackResult res = attack_incomplete(p);
    CHECK(res.converged);
    CHECK(res.residual <= p.tol_residual);
    CHECK(res.w_hat.minCoeff() >= 0.0);
    CHECK(res.w_u.minCoeff() >= 0.0);

    const VectorXd submitted = res.w_hat + split.hidden;
    const Ranking achieved = ranking_from_scores(
        hodgerank_regularized(PairwiseDataset(sim.n, submitted)));
    CHECK(reciprocal_rank(target, achieved) == 1.0);
  }
}

TEST_CASE("attack_incomplete iteration descends and its dual residual dies out") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 3);
    SimulationSpec sim;
    sim.n = n;
    sim.samples = 2000;
    sim.seed = 400 + trial;
    const PairwiseDataset full = simulate_btl(sim);
    const HiddenSplit split = hide_mass(full, 0.3, 500 + trial);

    const VectorXd theta = hodgerank_regularized(full);
    const Ranking target = build_target_ranking(ranking_from_scores(theta), 2);
    HodgeAttackProblem p;
    p.n = n;
    p.w_k_star = split.visible.weights;
    p.theta_R = theta;
    p.theta_A = permute_target_scores(theta, target);
    const HodgeAttackResult res = attack_incomplete(p);
    CHECK(res.converged);
    CHECK(res.trace.max_descent_violation <= 1e-10);

    const std::vector<double>& dual = res.trace.dual_res;
    if (dual.size() >= 8) {
      const size_t quarter = dual.size() / 4;
      double head = 0.0, tail = 0.0;
      for (size_t k = 0; k < quarter; ++k) head += dual[k];
      for (size_t k = dual.size() - quarter; k < dual.size(); ++k) {
        tail += dual[k];
      }
      CHECK(tail <= head);
    }
  }
}

TEST_CASE("permute_target_scores redistributes values along the target order") {
  VectorXd theta(3);
  theta << 0.5, 0.3, 0.2;
  const VectorXd redistributed = permute_target_scores(theta, Ranking{2, 1, 3});
  CHECK(redistributed[0] == 0.3);
  CHECK(redistributed[1] == 0.5);
  CHECK(redistributed[2] == 0.2);
  CHECK(permute_target_scores(theta, ranking_from_scores(theta)) == theta);
  CHECK_THROWS_AS(permute_target_scores(theta, Ranking{1, 2}), DimensionError);
}

TEST_CASE("permute_target_scores preserves the value multiset") {
  std::mt19937_64 rng(67);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 8);
    VectorXd theta(n);
    for (int i = 0; i < n; ++i) theta[i] = gauss(rng);
    Ranking target(n);
    std::iota(target.begin(), target.end(), 1);
    std::shuffle(target.begin(), target.end(), rng);
    const VectorXd out = permute_target_scores(theta, target);
    CHECK(ranking_from_scores(out) == target);
    std::vector<double> a(theta.data(), theta.data() + n);
    std::vector<double> b(out.data(), out.data() + n);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}
