// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#include "rankpoison/evaluation.hpp"

#include <algorithm>
#include <string>

namespace rankpoison {

namespace {

// positions[c-1] = 1-based position of candidate c inside pi.
std::vector<int> positions_of(const Ranking& pi, const char* caller) {
  const int n = static_cast<int>(pi.size());
  std::vector<int> pos(n, 0);
  for (int p = 0; p < n; ++p) {
    const int c = pi[p];
    if (c < 1 || c > n || pos[c - 1] != 0) {
      throw DimensionError(std::string(caller) + ": not a permutation of 1.." +
                           std::to_string(n));
    }
    pos[c - 1] = p + 1;
  }
  return pos;
}

}  // namespace

double reciprocal_rank(const Ranking& target, const Ranking& observed) {
  if (target.size() != observed.size() || target.empty()) {
    throw DimensionError("reciprocal_rank: candidate sets differ");
  }
  const std::vector<int> pos = positions_of(observed, "reciprocal_rank");
  positions_of(target, "reciprocal_rank");
  return 1.0 / pos[target[0] - 1];
}

double kendall_tau(const Ranking& a, const Ranking& b) {
  const int n = static_cast<int>(a.size());
  if (b.size() != a.size() || n < 2) {
    throw DimensionError("kendall_tau: need two rankings of the same n >= 2");
  }
  const std::vector<int> pa = positions_of(a, "kendall_tau");
  const std::vector<int> pb = positions_of(b, "kendall_tau");
  long agreement = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const long da = pa[i] - pa[j];
      const long db = pb[i] - pb[j];
      agreement += (da * db > 0) ? 1 : -1;
    }
  }
  return 2.0 * agreement / (static_cast<double>(n) * (n - 1));
}

Ranking build_target_ranking(const Ranking& base, int t) {
  const int n = static_cast<int>(base.size());
  positions_of(base, "build_target_ranking");
  if (t < 2 || t > n) {
    throw ConfigurationError("build_target_ranking: position t = " +
                             std::to_string(t) + " outside [2, " +
                             std::to_string(n) + "]");
  }
  Ranking target;
  target.reserve(n);
  target.push_back(base[t - 1]);
  for (int p = 0; p < n; ++p) {
    if (p != t - 1) target.push_back(base[p]);
  }
  return target;
}

VectorXd scores_from_ranking(const Ranking& pi) {
  const int n = static_cast<int>(pi.size());
  positions_of(pi, "scores_from_ranking");
  const double sum = n * (n + 1) / 2.0;
  VectorXd theta(n);
  for (int p = 0; p < n; ++p) {
    theta[pi[p] - 1] = (n - p) / sum;
  }
  return theta;
}

}  // namespace rankpoison
