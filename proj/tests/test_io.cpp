// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "rankpoison/io.hpp"
#include "rankpoison/simulate.hpp"

using namespace rankpoison;

namespace {

// Files live in a per-process scratch directory and are overwritten freely;
// every test names its own files so cases stay independent.
std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("rankpoison-io-" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_text(const std::string& name, const std::string& body) {
  const std::string path = (scratch_dir() / name).string();
  std::ofstream out(path);
  out << body;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string message_of(const std::function<void()>& call) {
  try {
    call();
  } catch (const Error& err) {
    return err.what();
  }
  return "";
}

}  // namespace

TEST_CASE("comparison CSV round-trips counts through disk") {
  SimulationSpec sim;
  sim.n = 7;
  sim.samples = 4000;
  sim.seed = 31;
  const PairwiseDataset original = simulate_btl(sim);

  const std::string path = (scratch_dir() / "roundtrip.csv").string();
  write_comparison_csv(path, original);
  const PairwiseDataset back = read_comparison_csv(path);
  CHECK(back.n == original.n);
  CHECK(back.weights == original.weights);
}

TEST_CASE("comparison CSV header is optional and duplicates accumulate") {
  const std::string with_header =
      write_text("header.csv", "i,j,count\n1,2,3\n2,1,1\n1,2,2\n");
  const std::string bare = write_text("bare.csv", "1,2,5\n2,1,1\n");
  const PairwiseDataset a = read_comparison_csv(with_header);
  const PairwiseDataset b = read_comparison_csv(bare);
  CHECK(a.n == 2);
  CHECK(a.weights == b.weights);
  CHECK(a.weights[edge_index(1, 2, 2) - 1] == 5.0);
  CHECK(a.weights[edge_index(2, 1, 2) - 1] == 1.0);
}

TEST_CASE("comparison CSV respects an explicit candidate count") {
  const std::string path = write_text("padded.csv", "1,2,4\n");
  const PairwiseDataset d = read_comparison_csv(path, 4);
  CHECK(d.n == 4);
  CHECK(d.weights.size() == edge_count(4));
  CHECK(d.weights.sum() == 4.0);
  CHECK_THROWS_AS(read_comparison_csv(write_text("over.csv", "1,5,2\n"), 3),
                  ParseError);
}

TEST_CASE("comparison CSV parse errors name the offending line") {
  const std::string bad_fields = write_text("fields.csv", "1,2,3\n4,5\n");
  CHECK(message_of([&] { read_comparison_csv(bad_fields); })
            .find(":2:") != std::string::npos);

  const std::string self_pair = write_text("self.csv", "i,j,count\n3,3,1\n");
  CHECK(message_of([&] { read_comparison_csv(self_pair); })
            .find(":2:") != std::string::npos);

  const std::string bad_count = write_text("count.csv", "1,2,-3\n");
  CHECK_THROWS_AS(read_comparison_csv(bad_count), ParseError);
  const std::string bad_id = write_text("id.csv", "0,2,3\n");
  CHECK_THROWS_AS(read_comparison_csv(bad_id), ParseError);
  const std::string empty = write_text("empty.csv", "\n\n");
  CHECK_THROWS_AS(read_comparison_csv(empty), ParseError);
  CHECK_THROWS_AS(read_comparison_csv((scratch_dir() / "absent.csv").string()),
                  ParseError);
}

TEST_CASE("annotation CSV doubles each judgment and groups voters") {
  const std::string path = write_text("votes.csv",
                                      "voter,i,j,winner\n"
                                      "a,1,2,1\n"
                                      "a,2,3,3\n"
                                      "b,1,2,1\n");
  const PairwiseDataset d = read_annotation_csv(path);
  CHECK(d.n == 3);
  CHECK(d.weights[edge_index(1, 2, 3) - 1] == 4.0);
  CHECK(d.weights[edge_index(3, 2, 3) - 1] == 2.0);
  CHECK(d.weights.sum() == 6.0);
}

TEST_CASE("annotation CSV ignores exact repeats but rejects contradictions") {
  const std::string repeat = write_text("repeat.csv",
                                        "voter,i,j,winner\n"
                                        "a,1,2,1\n"
                                        "a,2,1,1\n");
  const PairwiseDataset d = read_annotation_csv(repeat);
  CHECK(d.weights[edge_index(1, 2, 2) - 1] == 2.0);

  const std::string conflict = write_text("conflict.csv",
                                          "voter,i,j,winner\n"
                                          "a,1,2,1\n"
                                          "a,1,2,2\n");
  CHECK_THROWS_AS(read_annotation_csv(conflict), MalformedVoteError);
  CHECK(message_of([&] { read_annotation_csv(conflict); })
            .find(":3:") != std::string::npos);
}

TEST_CASE("annotation CSV rejects malformed judgment rows") {
  CHECK_THROWS_AS(
      read_annotation_csv(write_text("w.csv", "voter,i,j,winner\na,1,2,3\n")),
      ParseError);
  CHECK_THROWS_AS(
      read_annotation_csv(write_text("v.csv", "voter,i,j,winner\n,1,2,1\n")),
      ParseError);
  CHECK_THROWS_AS(
      read_annotation_csv(write_text("s.csv", "voter,i,j,winner\na,2,2,2\n")),
      ParseError);
  CHECK_THROWS_AS(
      read_annotation_csv(write_text("e.csv", "voter,i,j,winner\n")),
      ParseError);
}

TEST_CASE("preflib ballots expand into ranked-above pair counts") {
  const std::string path = write_text("toy.soc",
                                      "# FILE NAME: toy.soc\n"
                                      "# NUMBER ALTERNATIVES: 4\n"
                                      "\n"
                                      "3: 2,1,3\n"
                                      "1: 4,2\n");
  const Election e = read_preflib_election(path);
  CHECK(e.ballots == 4);
  CHECK(e.comparisons == 3 * 3 + 1);
  CHECK(e.data.n == 4);
  CHECK(e.data.weights[edge_index(2, 1, 4) - 1] == 3.0);
  CHECK(e.data.weights[edge_index(2, 3, 4) - 1] == 3.0);
  CHECK(e.data.weights[edge_index(1, 3, 4) - 1] == 3.0);
  CHECK(e.data.weights[edge_index(4, 2, 4) - 1] == 1.0);
  CHECK(e.data.weights.sum() == 10.0);
}

TEST_CASE("preflib candidate count falls back to the largest id seen") {
  const std::string path = write_text("bare.soi", "2: 3,1\n1: 1,2\n");
  const Election e = read_preflib_election(path);
  CHECK(e.data.n == 3);
  CHECK(e.ballots == 3);
  CHECK(e.comparisons == 3);
}

TEST_CASE("preflib parse errors carry the line number") {
  const std::string tied = write_text("tied.soc", "# x\n4: 1,{2,3}\n");
  CHECK(message_of([&] { read_preflib_election(tied); })
            .find(":2:") != std::string::npos);
  CHECK_THROWS_AS(read_preflib_election(tied), ParseError);

  CHECK_THROWS_AS(
      read_preflib_election(write_text("dup.soc", "1: 1,2,1\n")), ParseError);
  CHECK_THROWS_AS(
      read_preflib_election(write_text("noc.soc", "1,2,3\n")), ParseError);
  CHECK_THROWS_AS(
      read_preflib_election(write_text("mult.soc", "0: 1,2\n")), ParseError);
  CHECK_THROWS_AS(
      read_preflib_election(write_text("none.soc", "# only metadata\n")),
      ParseError);
  CHECK_THROWS_AS(read_preflib_election(write_text(
                      "overn.soc", "# NUMBER ALTERNATIVES: 2\n1: 1,3\n")),
                  ParseError);
}

TEST_CASE("result CSV prints one fixed-format row per record") {
  std::vector<TrialRecord> records(2);
  records[0].trial = 0;
  records[0].victim = Victim::hodge;
  records[0].scenario = Scenario::complete_perfect;
  records[0].target_position = 2;
  records[0].strategy = "targeted";
  records[0].rrank = 1.0;
  records[0].kendall = 1.0;
  records[0].delta = 42.0;
  records[0].converged = true;
  records[1].trial = 1;
  records[1].victim = Victim::spectral_irreversible;
  records[1].scenario = Scenario::complete_imperfect;
  records[1].target_position = 3;
  records[1].strategy = "random";
  records[1].rrank = 0.25;
  records[1].kendall = -0.5;
  records[1].delta = 10.5;
  records[1].converged = false;

  const std::string path = (scratch_dir() / "results.csv").string();
  write_result_csv(path, records);
  CHECK(slurp(path) ==
        "trial,victim,scenario,target_t,strategy,rrank,kendall,delta,"
        "converged\n"
        "0,hodge,cp,2,targeted,1,1,42,1\n"
        "1,spectral-irreversible,ci,3,random,0.25,-0.5,10.5,0\n");
}

TEST_CASE("attack report JSON exposes the outcome fields") {
  AttackOutcome out;
  out.delta = 12.5;
  out.rrank = 1.0;
  out.kendall = 0.75;
  out.converged = true;
  out.residual = 3e-9;
  out.clamped_mass = 0.0;

  const std::string path = (scratch_dir() / "report.json").string();
  write_attack_report(path, out);
  const nlohmann::json parsed = nlohmann::json::parse(slurp(path));
  CHECK(parsed.size() == 6);
  CHECK(parsed["delta"].get<double>() == 12.5);
  CHECK(parsed["rrank"].get<double>() == 1.0);
  CHECK(parsed["kendall"].get<double>() == 0.75);
  CHECK(parsed["converged"].get<bool>());
  CHECK(parsed["residual"].get<double>() == 3e-9);
  CHECK(parsed["clamped_mass"].get<double>() == 0.0);
}

TEST_CASE("residual trace CSV numbers iterations from one") {
  AdmmTrace trace;
  trace.primal_res = {0.5, 0.125};
  trace.dual_res = {0.25, 0.0625};
  const std::string path = (scratch_dir() / "trace.csv").string();
  write_residual_trace(path, trace);
  CHECK(slurp(path) ==
        "iter,primal_residual,dual_residual\n"
        "1,0.5,0.25\n"
        "2,0.125,0.0625\n");
}

TEST_CASE("manifest records the exact command line") {
  const std::string path = (scratch_dir() / "manifest.json").string();
  write_manifest(path, {"rankpoison", "attack", "--victim", "hodge"});
  const nlohmann::json parsed = nlohmann::json::parse(slurp(path));
  const std::vector<std::string> command =
      parsed.at("command").get<std::vector<std::string>>();
  CHECK(command ==
        std::vector<std::string>{"rankpoison", "attack", "--victim", "hodge"});
}

TEST_CASE("writers produce identical bytes on identical input") {
  SimulationSpec sim;
  sim.n = 5;
  sim.samples = 2000;
  sim.seed = 32;
  const PairwiseDataset d = simulate_btl(sim);
  const std::string first = (scratch_dir() / "det1.csv").string();
  const std::string second = (scratch_dir() / "det2.csv").string();
  write_comparison_csv(first, d);
  write_comparison_csv(second, d);
  CHECK(slurp(first) == slurp(second));
  CHECK_FALSE(slurp(first).empty());
}
