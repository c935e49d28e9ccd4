// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#pragma once

#include "rankpoison/dataset.hpp"

namespace rankpoison {

// The victim's regularized optimality condition
//   (C' W C + 2 lambda0 I) theta = C' W y,   W = diag(w),
// rearranged to be affine in the weights: B(theta) w = b(theta) with
// B = C' diag(C theta - y) and b = -2 lambda0 theta. An attacker who can
// edit w searches inside this affine set.
struct ConstraintOperator {
  MatrixXd B;  // n x N
  VectorXd b;  // length n
};

ConstraintOperator constraint_operator(const VectorXd& theta,
                                       const MatrixXd& C, const VectorXd& y,
                                       double lambda0);

// Poisoning problem against the regularized least-squares ranker: find
// nonnegative weights, as close as possible to the observed ones in L2,
// whose aggregation equals theta_A.
//
// theta_R is the feedback the adversary has about the victim's current
// output (exact scores, or scores re-synthesized from the ranking); it only
// matters in the incomplete-information game, where it pins down the
// adversary's surrogate of the hidden data.
struct HodgeAttackProblem {
  int n = 0;
  VectorXd w_k_star;  // accessible weights, length n(n-1)
  VectorXd theta_R;   // victim feedback scores
  VectorXd theta_A;   // target scores
  VectorXd y;         // edge flow; empty selects all-ones
  double lambda0 = 1e-6;
  double rho1 = 1.0;   // penalty on the feedback-consistency constraint
  double rho2 = 1.0;   // penalty on the target constraint
  double gamma = 1.0;  // proximal weight of the hidden-surrogate step
  double eta = 1.0;    // dual step size, must stay in (0, (1+sqrt(5))/2)
  long max_iter = 20000;
  double tol_residual = 1e-8;
};

struct AdmmTrace {
  std::vector<double> primal_res;
  std::vector<double> dual_res;
  // Largest observed increase of the augmented Lagrangian across a primal
  // update (0 when every step descended, as the method guarantees).
  double max_descent_violation = 0.0;
};

struct HodgeAttackResult {
  VectorXd w_hat;  // poisoned replacement for the accessible weights
  VectorXd w_u;    // adversary's surrogate of the hidden data (never submitted)
  bool converged = false;
  double residual = 0.0;
  long iterations = 0;
  AdmmTrace trace;
};

// Complete information: the adversary sees all weights (nothing hidden) and
// solves  min 0.5||w - w*||^2  s.t.  B(theta_A) w = b(theta_A), w >= 0
// by two-block ADMM with a slack copy of w carrying the nonnegativity.
// Throws NoConvergenceError when the residual stays above tol_residual.
HodgeAttackResult attack_complete(const HodgeAttackProblem& p);

// Incomplete information: the victim also uses hidden weights w*_u the
// adversary can neither see nor touch. The adversary jointly searches a
// replacement w_k for the accessible part and a surrogate w_u >= 0 of the
// hidden part, subject to both consistency with the observed feedback,
//   B(theta_R) (w*_k + w_u) = b(theta_R),
// and the target condition on the submitted data,
//   B(theta_A) (w_k + w_u) = b(theta_A).
// Alternating minimization: a closed-form projected solve for w_k, a
// proximal projected solve for w_u, dual ascent on both multipliers. When
// no weights are hidden this reduces exactly to attack_complete. Throws
// InfeasibleTargetError when the residual plateaus above tolerance.
HodgeAttackResult attack_incomplete(const HodgeAttackProblem& p);

// Reassigns the value multiset of theta_R so the result ranks candidates in
// target order: the k-th largest value goes to target[k].
VectorXd permute_target_scores(const VectorXd& theta_R, const Ranking& target);

// Augmented Lagrangian of the incomplete-information problem at the given
// state; exposed so tests can verify the descent property of the iteration.
double augmented_lagrangian(const HodgeAttackProblem& p,
                            const ConstraintOperator& feedback,
                            const ConstraintOperator& target,
                            const VectorXd& w_k, const VectorXd& w_u,
                            const VectorXd& mu1, const VectorXd& mu2);

}  // namespace rankpoison
