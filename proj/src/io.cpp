// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include "rankpoison/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rankpoison/errors.hpp"

namespace rankpoison {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(trim(s.substr(start)));
      return parts;
    }
    parts.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

[[noreturn]] void fail(const std::string& path, int line,
                       const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

int parse_candidate(const std::string& token, const std::string& path,
                    int line) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    fail(path, line, "expected a candidate id, got '" + token + "'");
  }
  if (used != token.size() || value < 1) {
    fail(path, line, "expected a candidate id, got '" + token + "'");
  }
  return value;
}

double parse_count(const std::string& token, const std::string& path,
                   int line) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    fail(path, line, "expected a count, got '" + token + "'");
  }
  if (used != token.size() || !(value >= 0) || !std::isfinite(value)) {
    fail(path, line, "expected a nonnegative count, got '" + token + "'");
  }
  return value;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw ParseError(path + ": cannot open");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out.is_open()) throw Error(path + ": cannot write");
  return out;
}

// Shortest decimal form that round-trips the value; integers print bare.
std::string format_number(double value) {
  if (value == std::floor(value) && std::abs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  double parsed = 0;
  std::sscanf(buffer, "%lf", &parsed);
  if (parsed == value) {
    for (int precision = 1; precision < 17; ++precision) {
      char shorter[32];
      std::snprintf(shorter, sizeof(shorter), "%.*g", precision, value);
      std::sscanf(shorter, "%lf", &parsed);
      if (parsed == value) return shorter;
    }
  }
  return buffer;
}

}  // namespace

PairwiseDataset read_comparison_csv(const std::string& path, int n) {
  std::ifstream in = open_input(path);

  struct Row {
    int i, j, line;
    double count;
  };
  std::vector<Row> rows;
  int max_id = 0;

  std::string text;
  int line = 0;
  bool saw_header = false;
  while (std::getline(in, text)) {
    ++line;
    const std::string stripped = trim(text);
    if (stripped.empty()) continue;
    const std::vector<std::string> parts = split(stripped, ',');
    if (!saw_header && line == 1 && parts.size() == 3 && parts[0] == "i" &&
        parts[1] == "j" && parts[2] == "count") {
      saw_header = true;
      continue;
    }
    if (parts.size() != 3) {
      fail(path, line, "expected 3 fields i,j,count, got " +
                           std::to_string(parts.size()));
    }
    Row row;
    row.i = parse_candidate(parts[0], path, line);
    row.j = parse_candidate(parts[1], path, line);
    row.count = parse_count(parts[2], path, line);
    row.line = line;
    if (row.i == row.j) fail(path, line, "a candidate cannot beat itself");
    max_id = std::max(max_id, std::max(row.i, row.j));
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError(path + ": no comparison rows");

  if (n == 0) n = max_id;
  if (n < 2) throw ParseError(path + ": need at least 2 candidates");

  VectorXd weights = VectorXd::Zero(edge_count(n));
  for (const Row& row : rows) {
    if (row.i > n || row.j > n) {
      fail(path, row.line,
           "candidate id exceeds the declared count " + std::to_string(n));
    }
    weights[edge_index(row.i, row.j, n) - 1] += row.count;
  }
  return PairwiseDataset(n, std::move(weights));
}

void write_comparison_csv(const std::string& path, const PairwiseDataset& d) {
  std::ofstream out = open_output(path);
  out << "i,j,count\n";
  for (int m = 1; m <= edge_count(d.n); ++m) {
    if (d.weights[m - 1] <= 0) continue;
    const auto [i, j] = edge_endpoints(m, d.n);
    out << i << "," << j << "," << format_number(d.weights[m - 1]) << "\n";
  }
}

PairwiseDataset read_annotation_csv(const std::string& path, int n) {
  std::ifstream in = open_input(path);

  struct Row {
    std::string voter;
    int i, j, winner, line;
  };
  std::vector<Row> rows;
  int max_id = 0;

  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    const std::string stripped = trim(text);
    if (stripped.empty()) continue;
    const std::vector<std::string> parts = split(stripped, ',');
    if (line == 1 && parts.size() == 4 && parts[0] == "voter" &&
        parts[1] == "i" && parts[2] == "j" && parts[3] == "winner") {
      continue;
    }
    if (parts.size() != 4) {
      fail(path, line, "expected 4 fields voter,i,j,winner, got " +
                           std::to_string(parts.size()));
    }
    Row row;
    row.voter = parts[0];
    row.i = parse_candidate(parts[1], path, line);
    row.j = parse_candidate(parts[2], path, line);
    row.winner = parse_candidate(parts[3], path, line);
    row.line = line;
    if (row.i == row.j) fail(path, line, "a candidate cannot beat itself");
    if (row.winner != row.i && row.winner != row.j) {
      fail(path, line, "winner must be one of the compared candidates");
    }
    if (row.voter.empty()) fail(path, line, "empty voter id");
    max_id = std::max(max_id, std::max(row.i, row.j));
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError(path + ": no judgment rows");

  if (n == 0) n = max_id;
  if (n < 2) throw ParseError(path + ": need at least 2 candidates");

  std::vector<Eigen::MatrixXi> votes;
  std::map<std::string, std::size_t> voter_slot;
  for (const Row& row : rows) {
    if (row.i > n || row.j > n) {
      fail(path, row.line,
           "candidate id exceeds the declared count " + std::to_string(n));
    }
    const auto [slot, fresh] = voter_slot.emplace(row.voter, votes.size());
    if (fresh) votes.push_back(Eigen::MatrixXi::Zero(n, n));
    Eigen::MatrixXi& judgment = votes[slot->second];
    const int winner = row.winner;
    const int loser = winner == row.i ? row.j : row.i;
    if (judgment(winner - 1, loser - 1) < 0) {
      throw MalformedVoteError(path + ":" + std::to_string(row.line) +
                               ": voter '" + row.voter +
                               "' contradicts an earlier judgment of this "
                               "pair");
    }
    judgment(winner - 1, loser - 1) = 1;
    judgment(loser - 1, winner - 1) = -1;
  }
  return weights_from_votes(n, votes);
}

Election read_preflib_election(const std::string& path) {
  std::ifstream in = open_input(path);

  Election election;
  int n = 0;
  std::vector<std::array<long long, 3>> pair_counts;  // i, j, count
  std::map<std::pair<int, int>, std::size_t> pair_slot;

  std::string text;
  int line = 0;
  int max_id = 0;
  while (std::getline(in, text)) {
    ++line;
    const std::string stripped = trim(text);
    if (stripped.empty()) continue;
    if (stripped[0] == '#') {
      const std::string key = "NUMBER ALTERNATIVES:";
      const auto pos = stripped.find(key);
      if (pos != std::string::npos) {
        const std::string value = trim(stripped.substr(pos + key.size()));
        try {
          n = std::stoi(value);
        } catch (const std::exception&) {
          fail(path, line, "unreadable NUMBER ALTERNATIVES value");
        }
        if (n < 1) fail(path, line, "NUMBER ALTERNATIVES must be positive");
      }
      continue;
    }
    if (stripped.find('{') != std::string::npos ||
        stripped.find('}') != std::string::npos) {
      fail(path, line, "tied ballot groups are not supported");
    }
    const auto colon = stripped.find(':');
    if (colon == std::string::npos) {
      fail(path, line, "expected 'count: c1,c2,...'");
    }
    const std::string head = trim(stripped.substr(0, colon));
    long long count = 0;
    try {
      std::size_t used = 0;
      count = std::stoll(head, &used);
      if (used != head.size()) throw std::invalid_argument(head);
    } catch (const std::exception&) {
      fail(path, line, "expected a ballot multiplicity, got '" + head + "'");
    }
    if (count < 1) fail(path, line, "ballot multiplicity must be positive");

    std::vector<int> order;
    for (const std::string& token : split(stripped.substr(colon + 1), ',')) {
      if (token.empty()) fail(path, line, "empty candidate entry");
      const int id = parse_candidate(token, path, line);
      for (const int seen : order) {
        if (seen == id) {
          fail(path, line,
               "candidate " + std::to_string(id) + " ranked twice");
        }
      }
      order.push_back(id);
      max_id = std::max(max_id, id);
    }
    if (order.empty()) fail(path, line, "ballot ranks no candidates");
    if (n > 0 && max_id > n) {
      fail(path, line, "candidate id exceeds NUMBER ALTERNATIVES");
    }

    election.ballots += count;
    const long long k = static_cast<long long>(order.size());
    election.comparisons += count * k * (k - 1) / 2;
    for (std::size_t a = 0; a < order.size(); ++a) {
      for (std::size_t b = a + 1; b < order.size(); ++b) {
        const auto key = std::make_pair(order[a], order[b]);
        const auto [slot, fresh] = pair_slot.emplace(key, pair_counts.size());
        if (fresh) pair_counts.push_back({order[a], order[b], 0});
        pair_counts[slot->second][2] += count;
      }
    }
  }
  if (election.ballots == 0) throw ParseError(path + ": no ballots");

  if (n == 0) n = max_id;
  if (n < 2) throw ParseError(path + ": need at least 2 candidates");

  VectorXd weights = VectorXd::Zero(edge_count(n));
  for (const auto& [i, j, count] : pair_counts) {
    weights[edge_index(static_cast<int>(i), static_cast<int>(j), n) - 1] +=
        static_cast<double>(count);
  }
  election.data = PairwiseDataset(n, std::move(weights));
  return election;
}

void write_result_csv(const std::string& path,
                      const std::vector<TrialRecord>& records) {
  std::ofstream out = open_output(path);
  out << "trial,victim,scenario,target_t,strategy,rrank,kendall,delta,"
         "converged\n";
  for (const TrialRecord& rec : records) {
    out << rec.trial << "," << to_string(rec.victim) << ","
        << to_string(rec.scenario) << "," << rec.target_position << ","
        << rec.strategy << "," << format_number(rec.rrank) << ","
        << format_number(rec.kendall) << "," << format_number(rec.delta)
        << "," << (rec.converged ? 1 : 0) << "\n";
  }
}

void write_attack_report(const std::string& path, const AttackOutcome& out) {
  nlohmann::json report;
  report["delta"] = out.delta;
  report["rrank"] = out.rrank;
  report["kendall"] = out.kendall;
  report["converged"] = out.converged;
  report["residual"] = out.residual;
  report["clamped_mass"] = out.clamped_mass;
  open_output(path) << report.dump(2) << "\n";
}

void write_residual_trace(const std::string& path, const AdmmTrace& trace) {
  std::ofstream out = open_output(path);
  out << "iter,primal_residual,dual_residual\n";
  const std::size_t rows =
      std::min(trace.primal_res.size(), trace.dual_res.size());
  for (std::size_t k = 0; k < rows; ++k) {
    out << (k + 1) << "," << format_number(trace.primal_res[k]) << ","
        << format_number(trace.dual_res[k]) << "\n";
  }
}

void write_manifest(const std::string& path,
                    const std::vector<std::string>& argv) {
  nlohmann::json manifest;
  manifest["command"] = argv;
  open_output(path) << manifest.dump(2) << "\n";
}

}  // namespace rankpoison
