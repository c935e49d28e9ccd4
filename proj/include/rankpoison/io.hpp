// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#pragma once

#include <string>
#include <vector>

#include "rankpoison/dataset.hpp"
#include "rankpoison/scenario.hpp"

namespace rankpoison {

// Comparison CSV: header line "i,j,count", then one row per ordered pair
// that was compared, 1-based candidate ids, nonnegative counts. n = 0
// infers the candidate count from the largest id seen; pass n explicitly
// when trailing candidates might have no comparisons at all. Malformed rows
// raise ParseError naming the line.
PairwiseDataset read_comparison_csv(const std::string& path, int n = 0);

// Writes the rows with positive count, ordered by edge index.
void write_comparison_csv(const std::string& path, const PairwiseDataset& d);

// Annotation CSV: header "voter,i,j,winner", one judgment per row; winner
// must be i or j. Rows are grouped into one skew-symmetric judgment matrix
// per voter and accumulated with weights_from_votes, so a judgment adds two
// counts to its winning direction. A voter contradicting themselves on a
// pair raises MalformedVoteError.
PairwiseDataset read_annotation_csv(const std::string& path, int n = 0);

// An election read from a PrefLib strict-order file.
struct Election {
  PairwiseDataset data;
  long long ballots = 0;      // sum of ballot multiplicities
  long long comparisons = 0;  // sum over ballots of count * k(k-1)/2
};

// Reads a PrefLib SOC/SOI file: '#'-prefixed metadata lines (NUMBER
// ALTERNATIVES fixes the candidate count), then one ballot per line in the
// form "count: c1,c2,..." listing ranked candidates best first. A ballot
// ranking k of the candidates contributes count comparisons to each of its
// k(k-1)/2 ranked-above pairs; unranked candidates contribute nothing.
// Tied groups in braces and anything else malformed raise ParseError with
// the line number.
Election read_preflib_election(const std::string& path);

// Result CSV with header
// trial,victim,scenario,target_t,strategy,rrank,kendall,delta,converged.
void write_result_csv(const std::string& path,
                      const std::vector<TrialRecord>& records);

// Attack summary JSON with fields delta, rrank, kendall, converged,
// residual and clamped_mass.
void write_attack_report(const std::string& path, const AttackOutcome& out);

// Solver residual CSV with header iter,primal_residual,dual_residual; one
// row per recorded iteration.
void write_residual_trace(const std::string& path, const AdmmTrace& trace);

// Reproducibility manifest: the exact argv of an invocation, as JSON
// {"command": [...]}. Reruns of the recorded command reproduce every output
// byte for byte, so the manifest carries no clock or host state.
void write_manifest(const std::string& path,
                    const std::vector<std::string>& argv);

}  // namespace rankpoison
