#pragma once

// Random commercial-link graphs: G(n, p) and the two-community planted
// partition, plus connectivity queries and the edge-list text format.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace currsim {

using AgentId = std::uint32_t;
using Edge = std::pair<AgentId, AgentId>;

/// Raised when an edge-list or state snapshot cannot be parsed.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable undirected simple graph. Neighbor lists are sorted and stored
/// contiguously (CSR), so iteration order is deterministic.
///
/// Optional community labels are 0/1 with exactly ceil(n/2) agents labelled 0.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an undirected edge list. Rejects self-loops,
  /// out-of-range endpoints and duplicate edges (in either orientation).
  static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                          std::vector<std::uint8_t> communities = {});

  std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  std::span<const AgentId> neighbors(AgentId i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  std::size_t degree(AgentId i) const { return offsets_[i + 1] - offsets_[i]; }

  bool has_communities() const noexcept { return !communities_.empty(); }
  std::uint8_t community(AgentId i) const { return communities_.at(i); }
  std::span<const std::uint8_t> communities() const noexcept { return communities_; }

  /// All edges as (i, j) with i < j, in lexicographic order.
  std::vector<Edge> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<AgentId> adjacency_;
  std::vector<std::uint8_t> communities_;
};

/// Number of agents in community 0 of an n-agent two-community graph.
constexpr std::size_t community_zero_size(std::size_t n) noexcept { return (n + 1) / 2; }

/// Erdős–Rényi G(n, p): every unordered pair is linked independently with
/// probability p. Pairs are visited in lexicographic order, one Bernoulli draw
/// each, from a stream seeded by `seed`.
Graph gen_er(std::size_t n, double p, std::uint64_t seed);

/// Two communities by index block: agents [0, ceil(n/2)) form community 0.
/// Same-community pairs link with probability p_intra, cross pairs with p_inter.
Graph gen_two_community(std::size_t n, double p_intra, double p_inter, std::uint64_t seed);

struct Components {
  std::vector<std::uint32_t> label;  ///< component id per agent, numbered by first appearance
  std::size_t count = 0;
};

Components connected_components(const Graph& g);

/// Large-n mean link density of a two-community graph.
constexpr double mean_density(double p_intra, double p_inter) noexcept {
  return 0.5 * (p_intra + p_inter);
}

// Edge-list text format:
//   n <N>
//   communities <c_0 ... c_{N-1}>     (optional)
//   i j                               (one per edge, i < j, zero-based)
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

}  // namespace currsim
