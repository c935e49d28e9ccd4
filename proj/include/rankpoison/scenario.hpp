// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rankpoison/aggregate.hpp"
#include "rankpoison/attack_hodge.hpp"
#include "rankpoison/dataset.hpp"

namespace rankpoison {

// Aggregation algorithm under attack. The two spectral entries share the
// same victim (the comparison random walk); they differ in which chain
// construction the adversary plants.
enum class Victim { hodge, spectral_reversible, spectral_irreversible };

const char* to_string(Victim victim);
Victim victim_from_string(const std::string& name);

// What the adversary knows:
//   cp  every comparison count, and the victim's numeric scores
//   ip  only part of the counts, and the victim's numeric scores
//   ci  every comparison count, but only the victim's ranking
enum class Scenario {
  complete_perfect,
  incomplete_perfect,
  complete_imperfect,
};

const char* to_string(Scenario scenario);
Scenario scenario_from_string(const std::string& code);

struct ScenarioSpec {
  Victim victim = Victim::hodge;
  Scenario scenario = Scenario::complete_perfect;
  int n = 10;
  // Position in the clean ranking whose candidate gets promoted to first.
  int target_position = 2;
  int trials = 50;
  long long samples = 5000;
  // Share of the comparison mass hidden from the adversary (ip only).
  double hidden_fraction = 0.2;
  std::uint64_t seed = 0;
  // Re-run every editing baseline at the budget the attack spent.
  bool with_baselines = true;

  HodgeConfig hodge;
  SpectralConfig spectral;

  // Solver knobs forwarded to the attack planners.
  double rho = 1.0;
  double gamma = 1.0;
  double eta = 1.0;
  long max_iter = 20000;
  double tol_residual = 1e-8;
  // 0 keeps the planted counts at the data's own per-pair scale.
  double pair_total_target = 0.0;
};

struct TrialRecord {
  int trial = 0;
  Victim victim = Victim::hodge;
  Scenario scenario = Scenario::complete_perfect;
  int target_position = 0;
  std::string strategy;
  double rrank = 0.0;
  double kendall = 0.0;
  // L1 distance between the original and submitted accessible counts.
  double delta = 0.0;
  bool converged = false;
};

struct StrategySummary {
  std::string strategy;
  int trials = 0;
  int full_promotions = 0;  // trials with rrank exactly 1
  int exact_orders = 0;     // trials with kendall exactly 1
  int converged = 0;
  double mean_rrank = 0.0;
  double mean_kendall = 0.0;
  double mean_delta = 0.0;
};

// One full experiment: per trial, draw a fresh comparison dataset, aggregate
// it, pick the target ranking, plan and integerize the poisoned counts, feed
// them (plus any hidden mass) back to the victim, and score the outcome.
// Baselines then edit the same data under the same L1 budget. A trial whose
// planner throws keeps its counts unmodified and records converged = false.
std::vector<TrialRecord> run_scenario(const ScenarioSpec& spec);

// One attack against caller-supplied comparison data instead of simulated
// trials. spec.n, trials and samples are ignored; under ip, spec.seed drives
// which counts get hidden from the adversary.
struct AttackOutcome {
  // Replacement counts for the edges the adversary touched (integerized).
  PairwiseDataset poisoned;
  // Counts the adversary never saw; the victim aggregates poisoned + hidden.
  VectorXd hidden;
  Ranking target;
  double delta = 0.0;
  double rrank = 0.0;
  double kendall = 0.0;
  bool converged = false;
  // Constraint residual of the planner (solver residual for the
  // least-squares victim, worst balance violation for the walk victims).
  double residual = 0.0;
  // Count mass the nonnegativity clamp removed while expressing the plan.
  double clamped_mass = 0.0;
  // Per-iteration solver residuals; empty for the spectral planners.
  AdmmTrace trace;
};

AttackOutcome attack_dataset(const ScenarioSpec& spec,
                             const PairwiseDataset& data);

// Per-strategy aggregates in first-seen order.
std::vector<StrategySummary> summarize(const std::vector<TrialRecord>& records);

}  // namespace rankpoison
