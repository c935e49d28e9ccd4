// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include "rankpoison/attack_hodge.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <optional>

#include "rankpoison/aggregate.hpp"

namespace rankpoison {

namespace {

VectorXd flow_or_ones(const HodgeAttackProblem& p) {
  if (p.y.size() == 0) return VectorXd::Ones(edge_count(p.n));
  if (p.y.size() != edge_count(p.n)) {
    throw DimensionError("attack: edge flow length mismatch");
  }
  return p.y;
}

void validate(const HodgeAttackProblem& p) {
  if (p.n < 2) throw InvalidSizeError("attack: need n >= 2");
  if (p.w_k_star.size() != edge_count(p.n)) {
    throw DimensionError("attack: w_k_star length mismatch");
  }
  if (p.theta_A.size() != p.n || p.theta_R.size() != p.n) {
    throw DimensionError("attack: score vector length mismatch");
  }
  if (p.rho1 <= 0.0 || p.rho2 <= 0.0 || p.gamma <= 0.0) {
    throw ConfigurationError("attack: penalties and gamma must be positive");
  }
  if (p.eta <= 0.0 || p.eta >= (1.0 + std::sqrt(5.0)) / 2.0) {
    throw ConfigurationError(
        "attack: dual step eta outside the convergent range (0, (1+sqrt5)/2)");
  }
  if (p.max_iter < 1) throw ConfigurationError("attack: max_iter must be >= 1");
}

// Value of the quadratic subproblem 0.5 w'Hw - q'w.
double quadratic_value(const MatrixXd& H, const VectorXd& q,
                       const VectorXd& w) {
  return 0.5 * w.dot(H * w) - q.dot(w);
}

// Cyclic coordinate minimization of 0.5 w'Hw - q'w over w >= 0. Each single
// coordinate update is an exact clamped minimization, so the objective never
// increases from the starting point.
VectorXd clamped_coordinate_descent(const MatrixXd& H, const VectorXd& q,
                                    VectorXd w, int passes) {
  VectorXd g = H * w - q;
  for (int pass = 0; pass < passes; ++pass) {
    double moved = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double updated = std::max(0.0, w[i] - g[i] / H(i, i));
      const double step = updated - w[i];
      if (step != 0.0) {
        g += step * H.col(i);
        w[i] = updated;
        moved += std::abs(step);
      }
    }
    if (moved < 1e-14) break;
  }
  return w;
}

// Solves the subproblem via the factored unconstrained minimizer projected
// onto w >= 0, falling back to coordinate descent from `previous` whenever
// the projection lands above the previous objective value. The fallback
// keeps the overall iteration monotone in the augmented Lagrangian.
VectorXd projected_subproblem_step(const Eigen::LLT<MatrixXd>& factor,
                                   const MatrixXd& H, const VectorXd& q,
                                   const VectorXd& previous) {
  VectorXd proposal = factor.solve(q).cwiseMax(0.0);
  const double before = quadratic_value(H, q, previous);
  const double after = quadratic_value(H, q, proposal);
  const double slack = 1e-12 * (1.0 + std::abs(before));
  if (after <= before + slack) return proposal;
  return clamped_coordinate_descent(H, q, previous, 50);
}

// Exact finisher for a stalled splitting iteration: guess the active set
// from the current primal point, solve the equality-constrained proximal
// problem min 0.5 (v - ref)' D (v - ref) s.t. M v = c, v restricted to the
// inactive coordinates, through its KKT system, and accept the result only
// if it is feasible: nonnegative up to a clamp whose effect keeps the
// constraint residual within tol. First-order steps routinely stall a couple
// of orders above tol on these ill-scaled constraints while the active set
// has long since settled, which is exactly when this closed form lands.
std::optional<VectorXd> polish_attempt(const MatrixXd& M, const VectorXd& c,
                                       const VectorXd& ref,
                                       const VectorXd& metric,
                                       const VectorXd& current, double tol) {
  const Eigen::Index size = current.size();
  const double scale = 1.0 + current.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> free_set;
  free_set.reserve(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    if (current[i] > 1e-7 * scale) free_set.push_back(i);
  }
  if (free_set.empty()) return std::nullopt;

  const Eigen::Index nf = static_cast<Eigen::Index>(free_set.size());
  MatrixXd M_free(M.rows(), nf);
  VectorXd ref_free(nf);
  VectorXd inv_metric(nf);
  for (Eigen::Index k = 0; k < nf; ++k) {
    M_free.col(k) = M.col(free_set[k]);
    ref_free[k] = ref[free_set[k]];
    inv_metric[k] = 1.0 / metric[free_set[k]];
  }

  const MatrixXd gram =
      M_free * inv_metric.asDiagonal() * M_free.transpose();
  const VectorXd lambda = gram.completeOrthogonalDecomposition().solve(
      M_free * ref_free - c);
  VectorXd v_free = ref_free - inv_metric.asDiagonal() *
                                   (M_free.transpose() * lambda);
  if (v_free.minCoeff() < -1e-7 * scale) return std::nullopt;
  v_free = v_free.cwiseMax(0.0);

  VectorXd v = VectorXd::Zero(size);
  for (Eigen::Index k = 0; k < nf; ++k) v[free_set[k]] = v_free[k];
  if ((M * v - c).norm() > tol) return std::nullopt;
  return v;
}

[[noreturn]] void raise_attack_failure(const std::vector<double>& primal,
                                       double residual, long iterations) {
  // A residual still shrinking at the iteration cap is slow convergence; one
  // that has stalled signals an unsatisfiable target.
  const size_t checkpoint = primal.size() - primal.size() / 4 - 1;
  const bool plateaued =
      primal.size() >= 8 && primal.back() > 0.99 * primal[checkpoint];
  if (plateaued) {
    throw InfeasibleTargetError(
        "attack: residual plateaued at " + std::to_string(residual) +
        " (was " + std::to_string(primal[checkpoint]) +
        " a quarter of the run earlier); no nonnegative weights appear to "
        "satisfy the target constraints",
        residual, iterations);
  }
  throw NoConvergenceError(
      "attack: residual " + std::to_string(residual) +
      " above tolerance after " + std::to_string(iterations) + " iterations",
      residual, iterations);
}

}  // namespace

ConstraintOperator constraint_operator(const VectorXd& theta,
                                       const MatrixXd& C, const VectorXd& y,
                                       double lambda0) {
  if (C.rows() != y.size() || C.cols() != theta.size()) {
    throw DimensionError("constraint_operator: dimension mismatch");
  }
  ConstraintOperator op;
  op.B = C.transpose() * (C * theta - y).asDiagonal();
  op.b = -2.0 * lambda0 * theta;
  return op;
}

double augmented_lagrangian(const HodgeAttackProblem& p,
                            const ConstraintOperator& feedback,
                            const ConstraintOperator& target,
                            const VectorXd& w_k, const VectorXd& w_u,
                            const VectorXd& mu1, const VectorXd& mu2) {
  const VectorXd r1 = feedback.B * (p.w_k_star + w_u) - feedback.b;
  const VectorXd r2 = target.B * (w_k + w_u) - target.b;
  return 0.5 * (w_k - p.w_k_star).squaredNorm() + mu1.dot(r1) +
         0.5 * p.rho1 * r1.squaredNorm() + mu2.dot(r2) +
         0.5 * p.rho2 * r2.squaredNorm();
}

HodgeAttackResult attack_complete(const HodgeAttackProblem& p) {
  validate(p);
  const int N = edge_count(p.n);
  const MatrixXd C = build_comparison_matrix(p.n);
  const VectorXd y = flow_or_ones(p);
  const ConstraintOperator target = constraint_operator(p.theta_A, C, y,
                                                        p.lambda0);
  const double rho = p.rho2;

  // min 0.5||w - w*||^2 + g(x)  s.t.  B w = b, w = x, with g the indicator
  // of the nonnegative orthant. The w step is an unconstrained quadratic
  // whose matrix is factored once; the x step is a projection.
  const MatrixXd H = MatrixXd::Identity(N, N) * (1.0 + rho) +
                     rho * target.B.transpose() * target.B;
  const Eigen::LLT<MatrixXd> factor(H);

  VectorXd w = p.w_k_star;
  VectorXd x = p.w_k_star;
  VectorXd mu = VectorXd::Zero(p.n);
  VectorXd nu = VectorXd::Zero(N);
  const VectorXd metric = VectorXd::Ones(N);
  const double polish_trigger = 1e-3 * (1.0 + target.b.norm());

  HodgeAttackResult result;
  const auto finish = [&](const VectorXd& w_hat, double residual, long iter) {
    result.w_hat = w_hat;
    result.w_u = VectorXd::Zero(N);
    result.converged = true;
    result.residual = residual;
    result.iterations = iter;
    return result;
  };

  for (long iter = 1; iter <= p.max_iter; ++iter) {
    w = factor.solve(p.w_k_star + target.B.transpose() * (rho * target.b - mu) +
                     rho * x - nu);
    const VectorXd x_prev = std::move(x);
    x = (w + nu / rho).cwiseMax(0.0);
    const VectorXd constraint_gap = target.B * w - target.b;
    mu += p.eta * rho * constraint_gap;
    nu += p.eta * rho * (w - x);

    const double primal = std::max((target.B * x - target.b).norm(),
                                   (w - x).norm());
    result.trace.primal_res.push_back(primal);
    result.trace.dual_res.push_back(rho * (x - x_prev).norm());
    if (primal <= p.tol_residual) return finish(x, primal, iter);
    if (primal <= polish_trigger && iter % 50 == 0) {
      if (auto v = polish_attempt(target.B, target.b, p.w_k_star, metric, x,
                                  p.tol_residual)) {
        return finish(*v, (target.B * *v - target.b).norm(), iter);
      }
    }
  }
  if (auto v = polish_attempt(target.B, target.b, p.w_k_star, metric, x,
                              p.tol_residual)) {
    return finish(*v, (target.B * *v - target.b).norm(), p.max_iter);
  }
  raise_attack_failure(result.trace.primal_res,
                       result.trace.primal_res.back(), p.max_iter);
}

HodgeAttackResult attack_incomplete(const HodgeAttackProblem& p) {
  validate(p);
  const int N = edge_count(p.n);
  const MatrixXd C = build_comparison_matrix(p.n);
  const VectorXd y = flow_or_ones(p);
  const ConstraintOperator feedback = constraint_operator(p.theta_R, C, y,
                                                          p.lambda0);
  const ConstraintOperator target = constraint_operator(p.theta_A, C, y,
                                                        p.lambda0);

  const MatrixXd G_feedback = feedback.B.transpose() * feedback.B;
  const MatrixXd G_target = target.B.transpose() * target.B;
  const MatrixXd H_k = MatrixXd::Identity(N, N) + p.rho2 * G_target;
  const MatrixXd H_u = MatrixXd::Identity(N, N) / p.gamma +
                       p.rho1 * G_feedback + p.rho2 * G_target;
  const Eigen::LLT<MatrixXd> factor_k(H_k);
  const Eigen::LLT<MatrixXd> factor_u(H_u);

  // Residual of the feedback constraint splits into a constant part from the
  // observed weights plus the surrogate's contribution.
  const VectorXd feedback_offset = feedback.B * p.w_k_star - feedback.b;

  // The observed weights alone already explain the surrogate scores, so no
  // hidden mass needs to be inferred and the problem reduces to the
  // complete-information one.
  if (feedback_offset.norm() <= p.tol_residual) {
    return attack_complete(p);
  }

  VectorXd w_k = p.w_k_star;
  VectorXd w_u = VectorXd::Zero(N);
  VectorXd mu1 = VectorXd::Zero(p.n);
  VectorXd mu2 = VectorXd::Zero(p.n);

  // Stacked form of both constraints over v = [w_k; w_u], for the polish
  // step: target row block [B_A B_A] = b_A, feedback block [0 B_R] = -offset.
  MatrixXd stacked = MatrixXd::Zero(2 * p.n, 2 * N);
  stacked.block(0, 0, p.n, N) = target.B;
  stacked.block(0, N, p.n, N) = target.B;
  stacked.block(p.n, N, p.n, N) = feedback.B;
  VectorXd stacked_rhs(2 * p.n);
  stacked_rhs.head(p.n) = target.b;
  stacked_rhs.tail(p.n) = -feedback_offset;
  VectorXd stacked_metric(2 * N);
  stacked_metric.head(N).setOnes();
  stacked_metric.tail(N).setConstant(1.0 / p.gamma);
  const double polish_trigger = 1e-3 * (1.0 + stacked_rhs.norm());

  HodgeAttackResult result;
  const auto finish = [&](const VectorXd& wk, const VectorXd& wu,
                          double residual, long iter) {
    result.w_hat = wk;
    result.w_u = wu;
    result.converged = true;
    result.residual = residual;
    result.iterations = iter;
    return result;
  };
  const auto try_polish = [&]() -> std::optional<VectorXd> {
    VectorXd ref(2 * N), current(2 * N);
    ref << p.w_k_star, w_u;
    current << w_k, w_u;
    return polish_attempt(stacked, stacked_rhs, ref, stacked_metric, current,
                          p.tol_residual);
  };

  for (long iter = 1; iter <= p.max_iter; ++iter) {
    const double value_before =
        augmented_lagrangian(p, feedback, target, w_k, w_u, mu1, mu2);

    const VectorXd q_k =
        p.w_k_star - target.B.transpose() *
                         (mu2 + p.rho2 * (target.B * w_u - target.b));
    const VectorXd w_k_prev = w_k;
    w_k = projected_subproblem_step(factor_k, H_k, q_k, w_k);

    const VectorXd q_u =
        w_u / p.gamma -
        feedback.B.transpose() * (mu1 + p.rho1 * feedback_offset) -
        target.B.transpose() * (mu2 + p.rho2 * (target.B * w_k - target.b));
    const VectorXd w_u_prev = w_u;
    w_u = projected_subproblem_step(factor_u, H_u, q_u, w_u);

    const double value_after =
        augmented_lagrangian(p, feedback, target, w_k, w_u, mu1, mu2) +
        0.5 / p.gamma * (w_u - w_u_prev).squaredNorm();
    result.trace.max_descent_violation = std::max(
        result.trace.max_descent_violation, value_after - value_before);

    const VectorXd r1 = feedback.B * w_u + feedback_offset;
    const VectorXd r2 = target.B * (w_k + w_u) - target.b;
    mu1 += p.eta * p.rho1 * r1;
    mu2 += p.eta * p.rho2 * r2;

    const double primal = std::max(r1.norm(), r2.norm());
    result.trace.primal_res.push_back(primal);
    result.trace.dual_res.push_back(p.rho2 * (w_k - w_k_prev).norm() +
                                    p.rho1 * (w_u - w_u_prev).norm());
    if (primal <= p.tol_residual) return finish(w_k, w_u, primal, iter);
    if (primal <= polish_trigger && iter % 50 == 0) {
      if (auto v = try_polish()) {
        return finish(v->head(N), v->tail(N),
                      (stacked * *v - stacked_rhs).norm(), iter);
      }
    }
  }
  if (auto v = try_polish()) {
    return finish(v->head(N), v->tail(N), (stacked * *v - stacked_rhs).norm(),
                  p.max_iter);
  }
  raise_attack_failure(result.trace.primal_res,
                       result.trace.primal_res.back(), p.max_iter);
}

VectorXd permute_target_scores(const VectorXd& theta_R,
                               const Ranking& target) {
  const int n = static_cast<int>(theta_R.size());
  if (static_cast<int>(target.size()) != n) {
    throw DimensionError("permute_target_scores: ranking length mismatch");
  }
  std::vector<double> values(theta_R.data(), theta_R.data() + n);
  std::sort(values.begin(), values.end(), std::greater<double>());
  VectorXd out(n);
  for (int k = 0; k < n; ++k) {
    out[target[k] - 1] = values[k];
  }
  return out;
}

}  // namespace rankpoison
