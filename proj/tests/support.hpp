#pragma once

// Test-only oracles and statistics helpers. Nothing here calls into the code
// paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "currsim/dynamics.hpp"
#include "currsim/graph.hpp"

namespace currsim::testing {

// One-sided and two-sided standard normal critical values.
inline constexpr double kZOneSided01 = 2.326347874040841;  // P(Z > z) = 0.01
inline constexpr double kZTwoSided01 = 2.5758293035489004;  // P(|Z| > z) = 0.01

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t count = 0;
  double se() const { return count ? std::sqrt(variance / static_cast<double>(count)) : 0.0; }
};

template <class Range>
Moments moments(const Range& xs) {
  Moments m;
  for (double x : xs) {
    m.mean += x;
    ++m.count;
  }
  if (m.count == 0) return m;
  m.mean /= static_cast<double>(m.count);
  for (double x : xs) m.variance += (x - m.mean) * (x - m.mean);
  if (m.count > 1) m.variance /= static_cast<double>(m.count - 1);
  return m;
}

/// Two-sample Kolmogorov–Smirnov statistic sup |F_a - F_b|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / static_cast<double>(a.size()) -
                             static_cast<double>(j) / static_cast<double>(b.size())));
  }
  return d;
}

/// Asymptotic KS critical value at significance 0.01.
inline double ks_critical_01(std::size_t n, std::size_t m) {
  const auto dn = static_cast<double>(n);
  const auto dm = static_cast<double>(m);
  return 1.6276 * std::sqrt((dn + dm) / (dn * dm));
}

/// Social utility straight from the definition: each agent pays the weight of
/// every neighbour holding another currency. Walks the edge list so it shares
/// no code with the library's per-agent loop.
inline Utility brute_social_utility(const Graph& g, const CurrencyState& st) {
  Utility total = 0;
  for (auto [i, j] : g.edges()) {
    if (st.currencies[i] != st.currencies[j]) {
      total -= static_cast<Utility>(st.weights[i]) + static_cast<Utility>(st.weights[j]);
    }
  }
  return total;
}

/// Equilibrium test by counting, independent of MajorityRule.
inline bool brute_is_equilibrium(const Graph& g, const CurrencyState& st) {
  for (AgentId i = 0; i < g.size(); ++i) {
    const auto nbrs = g.neighbors(i);
    std::set<CurrencyId> held;
    for (AgentId j : nbrs) held.insert(st.currencies[j]);
    Utility own = 0;
    for (AgentId j : nbrs) own += st.currencies[j] == st.currencies[i] ? st.weights[j] : 0;
    for (CurrencyId c : held) {
      Utility t = 0;
      for (AgentId j : nbrs) t += st.currencies[j] == c ? st.weights[j] : 0;
      if (t > own) return false;
    }
  }
  return true;
}

inline std::size_t distinct_count(const CurrencyState& st) {
  return std::set<CurrencyId>(st.currencies.begin(), st.currencies.end()).size();
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (AgentId i = 0; i < n; ++i)
    for (AgentId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges);
}

/// Two triangles {0,1,2} and {3,4,5} bridged by edge 2-3.
inline Graph bridged_triangles() {
  const std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}};
  return Graph::from_edges(6, edges);
}

inline CurrencyState state_of(std::vector<CurrencyId> currencies, std::vector<Weight> weights = {}) {
  if (weights.empty()) weights.assign(currencies.size(), 1);
  return {std::move(currencies), std::move(weights)};
}

}  // namespace currsim::testing
