// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rankpoison/aggregate.hpp"
#include "rankpoison/errors.hpp"
#include "rankpoison/io.hpp"
#include "rankpoison/scenario.hpp"
#include "rankpoison/simulate.hpp"

namespace {

using namespace rankpoison;

// Shared input options: a comparison CSV by default, or a judgment CSV or a
// PrefLib election via --format.
struct InputOptions {
  std::string path;
  std::string format = "comparison";
  int n = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--input", path, "input data file")->required();
    cmd->add_option("--format", format,
                    "input kind: comparison (CSV i,j,count), annotation "
                    "(CSV voter,i,j,winner) or preflib (SOC/SOI ballots)")
        ->check(CLI::IsMember({"comparison", "annotation", "preflib"}));
    cmd->add_option(
        "--n", n,
        "candidate count when the data may omit trailing candidates");
  }

  PairwiseDataset load() const {
    if (format == "comparison") return read_comparison_csv(path, n);
    if (format == "annotation") return read_annotation_csv(path, n);
    return read_preflib_election(path).data;
  }
};

Victim parse_victim(const std::string& name) {
  if (name == "spectral") return Victim::spectral_reversible;
  return victim_from_string(name);
}

void print_scores(const VectorXd& scores, const Ranking& ranking) {
  std::printf("candidate,score\n");
  for (int i = 0; i < scores.size(); ++i) {
    std::printf("%d,%.12g\n", i + 1, scores[i]);
  }
  std::printf("ranking");
  for (std::size_t k = 0; k < ranking.size(); ++k) {
    std::printf("%s%d", k == 0 ? "," : ">", ranking[k]);
  }
  std::printf("\n");
}

int run_aggregate(const InputOptions& input, const std::string& victim) {
  const PairwiseDataset data = input.load();
  const VectorXd scores = victim == "hodge" ? hodgerank_regularized(data)
                                            : rank_centrality(data);
  print_scores(scores, ranking_from_scores(scores));
  return 0;
}

int run_simulate(const SimulationSpec& spec, const std::string& output) {
  const PairwiseDataset data = simulate_btl(spec);
  write_comparison_csv(output, data);
  std::printf("wrote %s: n=%d, %lld comparisons\n", output.c_str(), data.n,
              static_cast<long long>(data.total()));
  return 0;
}

int run_attack(const InputOptions& input, const ScenarioSpec& spec,
               const std::string& output, const std::string& report,
               const std::string& trace) {
  const PairwiseDataset data = input.load();
  const AttackOutcome out = attack_dataset(spec, data);
  write_comparison_csv(output, out.poisoned);
  if (!report.empty()) write_attack_report(report, out);
  if (!trace.empty()) write_residual_trace(trace, out.trace);
  std::printf("target");
  for (std::size_t k = 0; k < out.target.size(); ++k) {
    std::printf("%s%d", k == 0 ? "," : ">", out.target[k]);
  }
  std::printf("\nrrank,%.12g\nkendall,%.12g\ndelta,%.12g\nconverged,%d\n",
              out.rrank, out.kendall, out.delta, out.converged ? 1 : 0);
  return 0;
}

int run_evaluate(ScenarioSpec spec, const std::vector<std::string>& victims,
                 const std::vector<std::string>& scenarios,
                 const std::string& output) {
  std::vector<TrialRecord> all;
  for (const std::string& victim : victims) {
    for (const std::string& scenario : scenarios) {
      spec.victim = parse_victim(victim);
      spec.scenario = scenario_from_string(scenario);
      const std::vector<TrialRecord> records = run_scenario(spec);
      all.insert(all.end(), records.begin(), records.end());
      for (const StrategySummary& s : summarize(records)) {
        std::printf(
            "%s %s %-13s rrank=1 in %d/%d trials, mean rrank %.3f, mean "
            "kendall %.3f, mean delta %.1f\n",
            to_string(spec.victim), to_string(spec.scenario),
            s.strategy.c_str(), s.full_promotions, s.trials, s.mean_rrank,
            s.mean_kendall, s.mean_delta);
      }
    }
  }
  write_result_csv(output, all);
  std::printf("wrote %s: %zu rows\n", output.c_str(), all.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rankpoison: rank aggregation from pairwise comparisons, and targeted "
      "data-poisoning attacks against it"};
  app.require_subcommand(1);

  // simulate ---------------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate", "draw a Bradley-Terry comparison dataset and write it as "
                  "a comparison CSV");
  SimulationSpec sim;
  std::vector<double> sim_scores;
  std::string sim_output = "btl.csv";
  simulate->add_option("--n", sim.n, "candidate count")
      ->check(CLI::Range(2, 1000));
  simulate->add_option("--samples", sim.samples, "number of comparisons")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate
      ->add_option("--scores", sim_scores,
                   "true strengths, comma separated; default makes candidate "
                   "i's strength proportional to i")
      ->delimiter(',');
  simulate->add_option("--output", sim_output, "comparison CSV to write");

  // aggregate --------------------------------------------------------------
  auto* aggregate = app.add_subcommand(
      "aggregate", "aggregate comparison data and print scores and ranking");
  InputOptions agg_input;
  std::string agg_victim = "hodge";
  agg_input.attach(aggregate);
  aggregate
      ->add_option("--victim", agg_victim,
                   "aggregation method: hodge (regularized least squares) "
                   "or spectral (comparison random walk)")
      ->check(CLI::IsMember({"hodge", "spectral"}));

  // attack -----------------------------------------------------------------
  auto* attack = app.add_subcommand(
      "attack", "plan poisoned counts that promote a chosen candidate, and "
                "score them against the victim");
  InputOptions atk_input;
  ScenarioSpec atk;
  std::string atk_victim = "hodge";
  std::string atk_output = "poisoned.csv";
  std::string atk_report = "report.json";
  std::string atk_trace;
  atk_input.attach(attack);
  attack
      ->add_option("--victim", atk_victim,
                   "victim to attack: hodge, spectral-reversible or "
                   "spectral-irreversible (spectral = spectral-reversible)")
      ->check(CLI::IsMember({"hodge", "spectral", "spectral-reversible",
                             "spectral-irreversible"}));
  attack
      ->add_option("--scenario", atk.scenario,
                   "adversary knowledge: cp (sees all data and scores), ip "
                   "(part of the data is hidden), ci (sees data but only "
                   "the published ranking)")
      ->transform(
          CLI::CheckedTransformer(std::map<std::string, Scenario>{
              {"cp", Scenario::complete_perfect},
              {"ip", Scenario::incomplete_perfect},
              {"ci", Scenario::complete_imperfect}}));
  attack->add_option(
      "--target-t", atk.target_position,
      "clean-ranking position whose candidate gets promoted to first");
  attack->add_option("--hidden-fraction", atk.hidden_fraction,
                     "share of the comparison mass hidden under ip");
  attack->add_option("--seed", atk.seed, "RNG seed for the hidden split");
  attack->add_option("--pair-total", atk.pair_total_target,
                     "per-pair count budget of the planted data; 0 stays at "
                     "the data's own per-pair totals");
  attack->add_option("--max-iter", atk.max_iter, "solver iteration cap");
  attack->add_option("--tol", atk.tol_residual, "solver residual tolerance");
  attack->add_option("--output", atk_output,
                     "comparison CSV with the adversary's replacement "
                     "counts (hidden counts are not included)");
  attack->add_option("--report", atk_report,
                     "attack summary JSON; empty suppresses it");
  attack->add_option("--trace", atk_trace,
                     "solver residual CSV (meaningful for --victim hodge)");

  // evaluate ---------------------------------------------------------------
  auto* evaluate = app.add_subcommand(
      "evaluate", "run simulated attack experiments and write per-trial "
                  "metrics for the targeted attack and the editing "
                  "baselines");
  ScenarioSpec eva;
  std::vector<std::string> eva_victims = {"hodge", "spectral-reversible",
                                          "spectral-irreversible"};
  std::vector<std::string> eva_scenarios = {"cp", "ip", "ci"};
  std::string eva_output = "results.csv";
  bool eva_no_baselines = false;
  evaluate
      ->add_option("--victim", eva_victims,
                   "victims to evaluate (repeatable); default all three")
      ->delimiter(',')
      ->check(CLI::IsMember({"hodge", "spectral", "spectral-reversible",
                             "spectral-irreversible"}));
  evaluate
      ->add_option("--scenario", eva_scenarios,
                   "scenarios to evaluate (repeatable); default cp,ip,ci")
      ->delimiter(',')
      ->check(CLI::IsMember({"cp", "ip", "ci"}));
  evaluate->add_option("--trials", eva.trials, "trials per combination")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--n", eva.n, "candidate count")
      ->check(CLI::Range(2, 1000));
  evaluate->add_option("--samples", eva.samples,
                       "comparisons drawn per trial");
  evaluate->add_option("--target-t", eva.target_position,
                       "clean-ranking position promoted to first");
  evaluate->add_option("--hidden-fraction", eva.hidden_fraction,
                       "share of the comparison mass hidden under ip");
  evaluate->add_option("--seed", eva.seed, "master RNG seed");
  evaluate->add_option("--pair-total", eva.pair_total_target,
                       "per-pair count budget of the planted data");
  evaluate->add_flag("--no-baselines", eva_no_baselines,
                     "skip the Random/Naive/Probabilistic baselines");
  evaluate->add_option("--output", eva_output, "result CSV to write");

  // Every subcommand records its invocation for reproduction.
  std::string manifest;
  for (auto* cmd : {simulate, aggregate, attack, evaluate}) {
    cmd->add_option("--manifest", manifest,
                    "write the full command line to this JSON file");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (!manifest.empty()) {
      write_manifest(manifest, std::vector<std::string>(argv, argv + argc));
    }
    if (simulate->parsed()) {
      if (!sim_scores.empty()) {
        sim.true_scores = Eigen::Map<const VectorXd>(
            sim_scores.data(), static_cast<Eigen::Index>(sim_scores.size()));
      }
      return run_simulate(sim, sim_output);
    }
    if (aggregate->parsed()) return run_aggregate(agg_input, agg_victim);
    if (attack->parsed()) {
      atk.victim = parse_victim(atk_victim);
      return run_attack(atk_input, atk, atk_output, atk_report, atk_trace);
    }
    eva.with_baselines = !eva_no_baselines;
    return run_evaluate(eva, eva_victims, eva_scenarios, eva_output);
  } catch (const rankpoison::Error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
}
