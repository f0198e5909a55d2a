#include "currsim/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "currsim/seeding.hpp"

namespace currsim {
namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

std::vector<std::uint8_t> block_communities(std::size_t n) {
  std::vector<std::uint8_t> labels(n, 1);
  std::fill_n(labels.begin(), community_zero_size(n), std::uint8_t{0});
  return labels;
}

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges,
                        std::vector<std::uint8_t> communities) {
  if (n == 0) throw std::invalid_argument("graph needs at least one agent");
  if (!communities.empty()) {
    if (communities.size() != n) throw std::invalid_argument("community label count differs from n");
    std::size_t zeros = 0;
    for (auto c : communities) {
      if (c > 1) throw std::invalid_argument("community labels must be 0 or 1");
      zeros += (c == 0);
    }
    if (zeros != community_zero_size(n)) {
      throw std::invalid_argument("community 0 must hold exactly ceil(n/2) agents");
    }
  }

  std::vector<std::size_t> degree(n, 0);
  for (auto [i, j] : edges) {
    if (i >= n || j >= n) throw std::invalid_argument("edge endpoint out of range");
    if (i == j) throw std::invalid_argument("self-loops are not allowed");
    ++degree[i];
    ++degree[j];
  }

  Graph g;
  g.offsets_.assign(n + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), g.offsets_.begin() + 1);
  g.adjacency_.resize(g.offsets_.back());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [i, j] : edges) {
    g.adjacency_[fill[i]++] = j;
    g.adjacency_[fill[j]++] = i;
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
    auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last) throw std::invalid_argument("duplicate edge");
  }
  g.communities_ = std::move(communities);
  return g;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (AgentId i = 0; i < size(); ++i) {
    for (AgentId j : neighbors(i)) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

Graph gen_er(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  check_probability(p, "p");
  Rng rng = make_rng(seed);
  std::vector<Edge> edges;
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j) {
      if (bernoulli(rng, p)) edges.emplace_back(i, j);
    }
  }
  return Graph::from_edges(n, edges);
}

Graph gen_two_community(std::size_t n, double p_intra, double p_inter, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("two-community graph needs n >= 2");
  check_probability(p_intra, "p_intra");
  check_probability(p_inter, "p_inter");
  auto labels = block_communities(n);
  Rng rng = make_rng(seed);
  std::vector<Edge> edges;
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j) {
      const double p = labels[i] == labels[j] ? p_intra : p_inter;
      if (bernoulli(rng, p)) edges.emplace_back(i, j);
    }
  }
  return Graph::from_edges(n, edges, std::move(labels));
}

Components connected_components(const Graph& g) {
  const std::size_t n = g.size();
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  Components out;
  out.label.assign(n, unset);
  std::vector<AgentId> stack;
  for (AgentId root = 0; root < n; ++root) {
    if (out.label[root] != unset) continue;
    const auto id = static_cast<std::uint32_t>(out.count++);
    out.label[root] = id;
    stack.push_back(root);
    while (!stack.empty()) {
      const AgentId v = stack.back();
      stack.pop_back();
      for (AgentId w : g.neighbors(v)) {
        if (out.label[w] == unset) {
          out.label[w] = id;
          stack.push_back(w);
        }
      }
    }
  }
  return out;
}

}  // namespace currsim
