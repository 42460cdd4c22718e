#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qanneal {

/// Occupation / spin configuration. Bit (i-1) holds vertex i (1-based):
/// 1 means the vertex is in V1, the site is occupied, the spin points up.
using Bits = std::uint64_t;

struct Edge {
  int u = 0;  // 1-based, u < v
  int v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple regular graph with 1-based vertices. Construction validates the
/// regularity and simplicity invariants and stores edges sorted.
class Graph {
 public:
  Graph(int n, int degree, std::uint64_t seed, std::vector<Edge> edges);

  int n() const noexcept { return n_; }
  int degree() const noexcept { return degree_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_;
  int degree_;
  std::uint64_t seed_;
  std::vector<Edge> edges_;
};

struct PartitionSolution {
  int min_cut = 0;
  std::vector<Bits> solutions;  // ascending
  std::size_t degeneracy() const noexcept { return solutions.size(); }
};

/// Random simple `degree`-regular graph by configuration-model stub pairing,
/// restarting on self-loops or multi-edges. Deterministic in `seed`.
Graph gen_regular_graph(int n, int degree, std::uint64_t seed);

/// Number of edges whose endpoints carry different bits.
int cut_size(const Graph& graph, Bits config);

/// Same, for a site-ordered string such as "0011" (leftmost char = vertex 1).
int cut_size(const Graph& graph, std::string_view config);

/// Exhaustive minimum bisection over all C(n, n/2) balanced configurations.
PartitionSolution solve_partition_bruteforce(const Graph& graph);

/// Parses a site-ordered 0/1 string; throws on other characters or n > 63.
Bits parse_bits(std::string_view text);

/// Site-ordered 0/1 string of the lowest `n` bits.
std::string format_bits(Bits config, int n);

Bits complement(Bits config, int n);

/// Well-known test graphs (seed 0).
Graph complete_graph_k4();
Graph prism_graph();
Graph complete_bipartite_k33();

}  // namespace qanneal
