// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rankpoison/aggregate.hpp"
#include "rankpoison/errors.hpp"
#include "rankpoison/evaluation.hpp"
#include "rankpoison/io.hpp"
#include "rankpoison/scenario.hpp"
#include "rankpoison/simulate.hpp"

namespace py = pybind11;
using namespace rankpoison;

namespace {

ScenarioSpec make_spec(const std::string& victim, const std::string& scenario,
                       int n, int target_t, int trials, long long samples,
                       double hidden_fraction, std::uint64_t seed,
                       bool with_baselines) {
  ScenarioSpec spec;
  spec.victim = victim_from_string(victim);
  spec.scenario = scenario_from_string(scenario);
  spec.n = n;
  spec.target_position = target_t;
  spec.trials = trials;
  spec.samples = samples;
  spec.hidden_fraction = hidden_fraction;
  spec.seed = seed;
  spec.with_baselines = with_baselines;
  return spec;
}

py::dict record_dict(const TrialRecord& rec) {
  py::dict d;
  d["trial"] = rec.trial;
  d["victim"] = to_string(rec.victim);
  d["scenario"] = to_string(rec.scenario);
  d["target_t"] = rec.target_position;
  d["strategy"] = rec.strategy;
  d["rrank"] = rec.rrank;
  d["kendall"] = rec.kendall;
  d["delta"] = rec.delta;
  d["converged"] = rec.converged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_rankpoison, m) {
  m.doc() =
      "Rank aggregation from pairwise comparisons and targeted "
      "data-poisoning attacks against it. Comparison data is a vector of "
      "n(n-1) counts over ordered candidate pairs; edge_index maps a pair "
      "to its slot.";

  py::register_exception<Error>(m, "RankpoisonError");

  m.def("edge_index", &edge_index, py::arg("i"), py::arg("j"), py::arg("n"),
        "1-based slot of the directed edge (i, j)");
  m.def(
      "edge_endpoints",
      [](int m_, int n) { return edge_endpoints(m_, n); }, py::arg("m"),
      py::arg("n"), "endpoints (i, j) of the 1-based edge slot m");

  m.def(
      "simulate_btl",
      [](int n, long samples, std::uint64_t seed, const VectorXd& scores) {
        SimulationSpec spec;
        spec.n = n;
        spec.samples = samples;
        spec.seed = seed;
        spec.true_scores = scores;
        return simulate_btl(spec).weights;
      },
      py::arg("n"), py::arg("samples") = 5000, py::arg("seed") = 0,
      py::arg("scores") = VectorXd(),
      "draw Bradley-Terry comparison counts; returns the n(n-1) weight "
      "vector");

  m.def(
      "hodgerank",
      [](int n, const VectorXd& weights) {
        return hodgerank_regularized(PairwiseDataset(n, weights));
      },
      py::arg("n"), py::arg("weights"),
      "regularized least-squares scores (sum approximately zero)");
  m.def(
      "rank_centrality",
      [](int n, const VectorXd& weights) {
        return rank_centrality(PairwiseDataset(n, weights));
      },
      py::arg("n"), py::arg("weights"),
      "stationary scores of the comparison random walk (simplex vector)");

  m.def("ranking_from_scores", &ranking_from_scores, py::arg("scores"),
        "candidates sorted by descending score, 1-based ids");
  m.def("reciprocal_rank", &reciprocal_rank, py::arg("target"),
        py::arg("observed"),
        "1 / position of the target's winner in the observed ranking");
  m.def("kendall_tau", &kendall_tau, py::arg("a"), py::arg("b"),
        "pairwise-concordance correlation of two rankings, in [-1, 1]");
  m.def("build_target_ranking", &build_target_ranking, py::arg("base"),
        py::arg("t"),
        "the base ranking with its t-th candidate promoted to first");

  m.def(
      "attack",
      [](int n, const VectorXd& weights, const std::string& victim,
         const std::string& scenario, int target_t, double hidden_fraction,
         std::uint64_t seed) {
        const ScenarioSpec spec =
            make_spec(victim, scenario, n, target_t, 1, 0, hidden_fraction,
                      seed, false);
        const AttackOutcome out =
            attack_dataset(spec, PairwiseDataset(n, weights));
        py::dict d;
        d["poisoned"] = out.poisoned.weights;
        d["hidden"] = out.hidden;
        d["target"] = out.target;
        d["delta"] = out.delta;
        d["rrank"] = out.rrank;
        d["kendall"] = out.kendall;
        d["converged"] = out.converged;
        d["residual"] = out.residual;
        d["clamped_mass"] = out.clamped_mass;
        return d;
      },
      py::arg("n"), py::arg("weights"), py::arg("victim") = "hodge",
      py::arg("scenario") = "cp", py::arg("target_t") = 2,
      py::arg("hidden_fraction") = 0.2, py::arg("seed") = 0,
      "plan poisoned counts for the given data and score them against the "
      "victim");

  m.def(
      "run_scenario",
      [](const std::string& victim, const std::string& scenario, int n,
         int target_t, int trials, long long samples, double hidden_fraction,
         std::uint64_t seed, bool with_baselines) {
        const ScenarioSpec spec =
            make_spec(victim, scenario, n, target_t, trials, samples,
                      hidden_fraction, seed, with_baselines);
        py::list rows;
        for (const TrialRecord& rec : run_scenario(spec)) {
          rows.append(record_dict(rec));
        }
        return rows;
      },
      py::arg("victim") = "hodge", py::arg("scenario") = "cp",
      py::arg("n") = 10, py::arg("target_t") = 2, py::arg("trials") = 50,
      py::arg("samples") = 5000, py::arg("hidden_fraction") = 0.2,
      py::arg("seed") = 0, py::arg("with_baselines") = true,
      "run simulated attack trials; returns one metrics dict per trial and "
      "strategy");

  m.def(
      "read_comparison_csv",
      [](const std::string& path, int n) {
        const PairwiseDataset d = read_comparison_csv(path, n);
        return py::make_tuple(d.n, d.weights);
      },
      py::arg("path"), py::arg("n") = 0,
      "load a comparison CSV; returns (n, weights)");
  m.def(
      "write_comparison_csv",
      [](const std::string& path, int n, const VectorXd& weights) {
        write_comparison_csv(path, PairwiseDataset(n, weights));
      },
      py::arg("path"), py::arg("n"), py::arg("weights"),
      "write comparison counts as CSV rows i,j,count");
}
