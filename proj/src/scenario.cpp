// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include "rankpoison/scenario.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "rankpoison/attack_hodge.hpp"
#include "rankpoison/attack_spectral.hpp"
#include "rankpoison/baselines.hpp"
#include "rankpoison/errors.hpp"
#include "rankpoison/evaluation.hpp"
#include "rankpoison/simulate.hpp"

namespace rankpoison {

const char* to_string(Victim victim) {
  switch (victim) {
    case Victim::hodge:
      return "hodge";
    case Victim::spectral_reversible:
      return "spectral-reversible";
    case Victim::spectral_irreversible:
      return "spectral-irreversible";
  }
  throw ConfigurationError("unknown victim");
}

Victim victim_from_string(const std::string& name) {
  if (name == "hodge") return Victim::hodge;
  if (name == "spectral-reversible") return Victim::spectral_reversible;
  if (name == "spectral-irreversible") return Victim::spectral_irreversible;
  throw ConfigurationError(
      "unknown victim '" + name +
      "' (expected hodge, spectral-reversible or spectral-irreversible)");
}

const char* to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::complete_perfect:
      return "cp";
    case Scenario::incomplete_perfect:
      return "ip";
    case Scenario::complete_imperfect:
      return "ci";
  }
  throw ConfigurationError("unknown scenario");
}

Scenario scenario_from_string(const std::string& code) {
  if (code == "cp") return Scenario::complete_perfect;
  if (code == "ip") return Scenario::incomplete_perfect;
  if (code == "ci") return Scenario::complete_imperfect;
  throw ConfigurationError("unknown scenario '" + code +
                           "' (expected cp, ip or ci)");
}

namespace {

VectorXd victim_scores(const ScenarioSpec& spec, const PairwiseDataset& d) {
  if (spec.victim == Victim::hodge) {
    return hodgerank_regularized(d, VectorXd(), spec.hodge);
  }
  return rank_centrality(d, spec.spectral);
}

struct PlanOutcome {
  VectorXd plan;
  bool converged = false;
  double residual = 0.0;
  AdmmTrace trace;
};

// Real-valued poisoned counts for the accessible edges, before rounding.
PlanOutcome plan_attack(const ScenarioSpec& spec,
                        const PairwiseDataset& visible,
                        const VectorXd& theta_R, const VectorXd& theta_A) {
  PlanOutcome out;
  if (spec.victim == Victim::hodge) {
    HodgeAttackProblem p;
    p.n = visible.n;
    p.w_k_star = visible.weights;
    p.theta_R = theta_R;
    p.theta_A = theta_A;
    p.lambda0 = spec.hodge.lambda0;
    p.rho1 = spec.rho;
    p.rho2 = spec.rho;
    p.gamma = spec.gamma;
    p.eta = spec.eta;
    p.max_iter = spec.max_iter;
    p.tol_residual = spec.tol_residual;
    HodgeAttackResult res = spec.scenario == Scenario::incomplete_perfect
                                ? attack_incomplete(p)
                                : attack_complete(p);
    out.plan = std::move(res.w_hat);
    out.converged = res.converged;
    out.residual = res.residual;
    out.trace = std::move(res.trace);
    return out;
  }
  SpectralAttackConfig cfg;
  cfg.kind = spec.victim == Victim::spectral_irreversible
                 ? ChainKind::irreversible
                 : ChainKind::reversible;
  cfg.infer_hidden = spec.scenario == Scenario::incomplete_perfect;
  cfg.pair_total_target = spec.pair_total_target;
  SpectralAttackResult res =
      attack_rank_centrality(visible, theta_R, theta_A, cfg);
  out.plan = std::move(res.w_k);
  out.converged = !res.heavy_clamping;
  out.residual = res.balance_residual;
  return out;
}

struct Expressed {
  VectorXd weights;
  // Count mass the clamp at zero removed from the rounded candidate.
  double clamped_mass = 0.0;
};

// Integer counts expressing the planned perturbation plan - base. Rounding
// each count to the nearest integer can erase a sub-unit plan outright (and
// the attack with it), so the perturbation is doubled until the rounded
// counts reproduce the plan's winner; overshooting along the perturbation
// only widens the winner's margin. preserve_support keeps at least one
// count on every direction the plan uses, which the walk victims need to
// stay irreducible.
Expressed rounded_perturbation(const VectorXd& plan, const VectorXd& base,
                               double amplify, bool preserve_support) {
  Expressed out;
  out.weights = base + (amplify * (plan - base)).array().round().matrix();
  out.clamped_mass = 0.0 - out.weights.cwiseMin(0.0).sum();
  out.weights = out.weights.cwiseMax(0.0);
  if (preserve_support) {
    for (Eigen::Index m = 0; m < out.weights.size(); ++m) {
      if (plan[m] > 1e-9 && out.weights[m] < 1.0) out.weights[m] = 1.0;
    }
  }
  return out;
}

Expressed express_in_counts(const VectorXd& plan, const VectorXd& base,
                            bool preserve_support,
                            const std::function<int(const VectorXd&)>& top1_of) {
  const int expected = top1_of(plan);
  for (double amplify = 1.0; amplify <= 32.0; amplify *= 2.0) {
    Expressed cand =
        rounded_perturbation(plan, base, amplify, preserve_support);
    try {
      if (top1_of(cand.weights) == expected) return cand;
    } catch (const NonUniqueStationaryError&) {
    }
  }
  throw ResolutionTooCoarseError(
      "scenario: integer rounding loses the planned winner even at 32x "
      "amplification");
}

// Without feedback the rounding cannot be verified, so scale the biggest
// planned edit up to one count and hope the rest survives proportionally.
Expressed express_blind(const VectorXd& plan, const VectorXd& base,
                        bool preserve_support) {
  const double biggest = (plan - base).cwiseAbs().maxCoeff();
  const double amplify = biggest >= 1.0 || biggest <= 0.0 ? 1.0 : 1.0 / biggest;
  return rounded_perturbation(plan, base, amplify, preserve_support);
}

// Everything one attack against one dataset produces, shared by the trial
// loop and attack_dataset.
struct TargetedCase {
  PairwiseDataset visible;
  VectorXd hidden;
  Ranking target;
  VectorXd poisoned;
  bool converged = false;
  double residual = 0.0;
  double clamped_mass = 0.0;
  AdmmTrace trace;
};

TargetedCase run_targeted(const ScenarioSpec& spec, const PairwiseDataset& full,
                          std::uint64_t hide_seed) {
  TargetedCase out;
  const int n = full.n;

  const VectorXd clean_scores = victim_scores(spec, full);
  const Ranking clean_ranking = ranking_from_scores(clean_scores);
  out.target = build_target_ranking(clean_ranking, spec.target_position);

  out.visible = full;
  out.hidden = VectorXd::Zero(edge_count(n));
  if (spec.scenario == Scenario::incomplete_perfect) {
    HiddenSplit split = hide_mass(full, spec.hidden_fraction, hide_seed);
    out.visible = std::move(split.visible);
    out.hidden = std::move(split.hidden);
  }

  // The adversary's picture of the victim's output: the scores themselves
  // under perfect feedback, positional scores re-synthesized from the
  // leaked ranking otherwise. The least-squares victim centers its output,
  // so a synthesized stand-in has to be centered too.
  VectorXd theta_R = spec.scenario == Scenario::complete_imperfect
                         ? scores_from_ranking(clean_ranking)
                         : clean_scores;
  if (spec.victim == Victim::hodge &&
      spec.scenario == Scenario::complete_imperfect) {
    theta_R.array() -= theta_R.mean();
  }
  const VectorXd theta_A = permute_target_scores(theta_R, out.target);

  out.poisoned = out.visible.weights;
  const bool preserve_support = spec.victim != Victim::hodge;
  try {
    PlanOutcome planned = plan_attack(spec, out.visible, theta_R, theta_A);
    out.converged = planned.converged;
    out.residual = planned.residual;
    out.trace = std::move(planned.trace);
    Expressed expressed;
    if (spec.scenario == Scenario::incomplete_perfect) {
      // Verifying a rounding against the victim needs the hidden counts,
      // which this adversary does not have.
      expressed =
          express_blind(planned.plan, out.visible.weights, preserve_support);
    } else {
      const auto top1_of = [&](const VectorXd& w) {
        const PairwiseDataset probe(n, w + out.hidden);
        return ranking_from_scores(victim_scores(spec, probe))[0];
      };
      expressed = express_in_counts(planned.plan, out.visible.weights,
                                    preserve_support, top1_of);
    }
    out.poisoned = std::move(expressed.weights);
    out.clamped_mass = expressed.clamped_mass;
  } catch (const Error&) {
    out.poisoned = out.visible.weights;
    out.converged = false;
  }
  return out;
}

}  // namespace

std::vector<TrialRecord> run_scenario(const ScenarioSpec& spec) {
  if (spec.n < 2) {
    throw ConfigurationError("run_scenario: need at least 2 candidates");
  }
  if (spec.trials < 1) {
    throw ConfigurationError("run_scenario: need at least 1 trial");
  }
  if (spec.target_position < 1 || spec.target_position > spec.n) {
    throw ConfigurationError("run_scenario: target position out of range");
  }
  if (spec.scenario == Scenario::incomplete_perfect &&
      (spec.hidden_fraction <= 0.0 || spec.hidden_fraction >= 1.0)) {
    throw ConfigurationError(
        "run_scenario: hidden fraction must lie in (0, 1)");
  }

  std::vector<TrialRecord> records;
  std::mt19937_64 master(spec.seed);

  for (int trial = 0; trial < spec.trials; ++trial) {
    const std::uint64_t sim_seed = master();
    const std::uint64_t hide_seed = master();
    const std::uint64_t baseline_seeds[3] = {master(), master(), master()};

    SimulationSpec sim;
    sim.n = spec.n;
    sim.samples = spec.samples;
    sim.seed = sim_seed;
    const PairwiseDataset full = simulate_btl(sim);

    const TargetedCase tc = run_targeted(spec, full, hide_seed);

    const auto evaluate = [&](const VectorXd& accessible,
                              const char* strategy, bool strategy_converged) {
      TrialRecord rec;
      rec.trial = trial;
      rec.victim = spec.victim;
      rec.scenario = spec.scenario;
      rec.target_position = spec.target_position;
      rec.strategy = strategy;
      rec.delta = weight_change(accessible, tc.visible.weights);
      try {
        const PairwiseDataset submitted(spec.n, accessible + tc.hidden);
        const Ranking observed =
            ranking_from_scores(victim_scores(spec, submitted));
        rec.rrank = reciprocal_rank(tc.target, observed);
        rec.kendall = kendall_tau(tc.target, observed);
        rec.converged = strategy_converged;
      } catch (const Error&) {
        // Edits that break the victim outright (say, by disconnecting the
        // comparison walk) produced no ranking at all and score zero.
        rec.rrank = 0.0;
        rec.kendall = 0.0;
        rec.converged = false;
      }
      records.push_back(rec);
      return rec.delta;
    };

    const double delta = evaluate(tc.poisoned, "targeted", tc.converged);

    if (spec.with_baselines) {
      const long long budget = std::llround(delta);
      // Baselines get rank-derived positive scores: they need a target
      // preference for every pair, not the victim-specific score values.
      const VectorXd borda = scores_from_ranking(tc.target);
      const BaselineStrategy strategies[3] = {BaselineStrategy::random,
                                              BaselineStrategy::naive,
                                              BaselineStrategy::probabilistic};
      for (int k = 0; k < 3; ++k) {
        BaselineConfig cfg;
        cfg.strategy = strategies[k];
        cfg.seed = baseline_seeds[k];
        const BaselineRun run = run_baseline(tc.visible, borda, budget, cfg);
        evaluate(run.weights, to_string(strategies[k]), true);
      }
    }
  }
  return records;
}

AttackOutcome attack_dataset(const ScenarioSpec& spec,
                             const PairwiseDataset& data) {
  if (data.n < 2) {
    throw ConfigurationError("attack_dataset: need at least 2 candidates");
  }
  if (spec.target_position < 1 || spec.target_position > data.n) {
    throw ConfigurationError("attack_dataset: target position out of range");
  }
  if (spec.scenario == Scenario::incomplete_perfect &&
      (spec.hidden_fraction <= 0.0 || spec.hidden_fraction >= 1.0)) {
    throw ConfigurationError(
        "attack_dataset: hidden fraction must lie in (0, 1)");
  }

  TargetedCase tc = run_targeted(spec, data, spec.seed);

  AttackOutcome out;
  out.delta = weight_change(tc.poisoned, tc.visible.weights);
  out.converged = tc.converged;
  out.residual = tc.residual;
  out.clamped_mass = tc.clamped_mass;
  try {
    const PairwiseDataset submitted(data.n, tc.poisoned + tc.hidden);
    const Ranking observed =
        ranking_from_scores(victim_scores(spec, submitted));
    out.rrank = reciprocal_rank(tc.target, observed);
    out.kendall = kendall_tau(tc.target, observed);
  } catch (const Error&) {
    out.rrank = 0.0;
    out.kendall = 0.0;
    out.converged = false;
  }
  out.poisoned = PairwiseDataset(data.n, std::move(tc.poisoned));
  out.hidden = std::move(tc.hidden);
  out.target = std::move(tc.target);
  out.trace = std::move(tc.trace);
  return out;
}

std::vector<StrategySummary> summarize(
    const std::vector<TrialRecord>& records) {
  std::vector<StrategySummary> out;
  for (const TrialRecord& rec : records) {
    StrategySummary* bucket = nullptr;
    for (StrategySummary& existing : out) {
      if (existing.strategy == rec.strategy) {
        bucket = &existing;
        break;
      }
    }
    if (bucket == nullptr) {
      out.emplace_back();
      bucket = &out.back();
      bucket->strategy = rec.strategy;
    }
    ++bucket->trials;
    if (rec.rrank == 1.0) ++bucket->full_promotions;
    if (rec.kendall == 1.0) ++bucket->exact_orders;
    if (rec.converged) ++bucket->converged;
    bucket->mean_rrank += rec.rrank;
    bucket->mean_kendall += rec.kendall;
    bucket->mean_delta += rec.delta;
  }
  for (StrategySummary& bucket : out) {
    bucket.mean_rrank /= bucket.trials;
    bucket.mean_kendall /= bucket.trials;
    bucket.mean_delta /= bucket.trials;
  }
  return out;
}

}  // namespace rankpoison
