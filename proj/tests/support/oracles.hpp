#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library paths being checked.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <utility>
#include <vector>

#include "fpx/generators.hpp"

namespace oracle {

/// Two-sided signed-rank p-value by enumerating all 2^n sign assignments of
/// the (average-tie) ranks of |d|, zeros removed.
inline double wilcoxon_bruteforce(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<double> d;
  for (auto [a, b] : pairs)
    if (a != b) d.push_back(a - b);
  const std::size_t n = d.size();
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) ++less;
      if (std::abs(d[j]) == std::abs(d[i])) ++equal;
    }
    rank[i] = less + (equal + 1) / 2;
  }
  double observed = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += rank[i];
    if (d[i] > 0) observed += rank[i];
  }
  const double tail = std::min(observed, total - observed);
  std::uint64_t hits = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) w += rank[i];
    if (w <= tail + 1e-9) ++hits;
  }
  return std::min(1.0, 2.0 * static_cast<double>(hits) / std::ldexp(1.0, static_cast<int>(n)));
}

/// Classic 1 - 6 sum d^2 / (n (n^2 - 1)); valid only without ties.
inline double spearman_tie_free(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto rank_of = [n](const std::vector<double>& v, std::size_t i) {
    double r = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (v[j] < v[i]) ++r;
    return r;
  };
  double sd2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = rank_of(x, i) - rank_of(y, i);
    sd2 += d * d;
  }
  const double nd = static_cast<double>(n);
  return 1 - 6 * sd2 / (nd * (nd * nd - 1));
}

/// ball[t] = number of nodes within graph distance t of `source`.
inline std::vector<std::size_t> bfs_ball_sizes(const fpx::Graph& g, fpx::Node source, std::size_t max_t) {
  std::vector<long> dist(g.n_nodes(), -1);
  std::queue<fpx::Node> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    for (auto v : g.neighbors(u))
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  std::vector<std::size_t> ball(max_t + 1, 0);
  for (auto d : dist)
    if (d >= 0)
      for (std::size_t t = static_cast<std::size_t>(d); t <= max_t; ++t) ++ball[t];
  return ball;
}

}  // namespace oracle
