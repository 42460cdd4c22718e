#include "qanneal/graph.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <random>
#include <stdexcept>

#include "qanneal/basis.hpp"

namespace qanneal {

namespace {

constexpr int kMaxPairingAttempts = 10000;

// Unbiased draw in [0, bound) that does not depend on the standard
// library's distribution implementation, so graphs are portable.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

Bits mask(int n) { return n >= 64 ? ~Bits{0} : (Bits{1} << n) - 1; }

}  // namespace

Graph::Graph(int n, int degree, std::uint64_t seed, std::vector<Edge> edges)
    : n_(n), degree_(degree), seed_(seed), edges_(std::move(edges)) {
  if (n < 1 || n > 63) throw std::invalid_argument("graph: vertex count must be in [1, 63]");
  std::vector<int> deg(static_cast<std::size_t>(n) + 1, 0);
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 1 || e.v > n) throw std::invalid_argument("graph: vertex id out of range");
    if (e.u == e.v) throw std::invalid_argument("graph: self-loop");
    ++deg[e.u];
    ++deg[e.v];
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("graph: duplicate edge");
  for (int v = 1; v <= n; ++v)
    if (deg[v] != degree)
      throw std::invalid_argument("graph: vertex " + std::to_string(v) + " has degree " +
                                  std::to_string(deg[v]) + ", expected " + std::to_string(degree));
}

Graph gen_regular_graph(int n, int degree, std::uint64_t seed) {
  if (degree < 1) throw std::invalid_argument("gen_regular_graph: degree must be positive");
  if ((static_cast<long>(n) * degree) % 2 != 0)
    throw std::invalid_argument("gen_regular_graph: n*degree must be even");
  if (n <= degree) throw std::invalid_argument("gen_regular_graph: need n > degree");
  if (n > 63) throw std::invalid_argument("gen_regular_graph: n must be at most 63");

  std::mt19937_64 rng(seed);
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * degree);
  std::vector<Edge> edges;
  std::vector<Bits> adjacency(static_cast<std::size_t>(n) + 1);

  for (int attempt = 0; attempt < kMaxPairingAttempts; ++attempt) {
    stubs.clear();
    for (int v = 1; v <= n; ++v) stubs.insert(stubs.end(), degree, v);
    for (std::size_t i = stubs.size() - 1; i > 0; --i)
      std::swap(stubs[i], stubs[bounded(rng, i + 1)]);

    edges.clear();
    std::fill(adjacency.begin(), adjacency.end(), 0);
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      int u = stubs[i];
      int v = stubs[i + 1];
      const Bits bit = Bits{1} << (v - 1);
      if (u == v || (adjacency[u] & bit)) {
        simple = false;
        break;
      }
      adjacency[u] |= bit;
      adjacency[v] |= Bits{1} << (u - 1);
      edges.push_back({std::min(u, v), std::max(u, v)});
    }
    if (simple) return Graph(n, degree, seed, std::move(edges));
  }
  throw std::runtime_error("gen_regular_graph: no simple pairing after " +
                           std::to_string(kMaxPairingAttempts) + " attempts");
}

int cut_size(const Graph& graph, Bits config) {
  if (config & ~mask(graph.n()))
    throw std::invalid_argument("cut_size: configuration has bits beyond vertex count");
  int cut = 0;
  for (const auto& e : graph.edges())
    cut += static_cast<int>(((config >> (e.u - 1)) ^ (config >> (e.v - 1))) & 1U);
  return cut;
}

int cut_size(const Graph& graph, std::string_view config) {
  if (static_cast<int>(config.size()) != graph.n())
    throw std::invalid_argument("cut_size: configuration length " + std::to_string(config.size()) +
                                " does not match vertex count " + std::to_string(graph.n()));
  return cut_size(graph, parse_bits(config));
}

PartitionSolution solve_partition_bruteforce(const Graph& graph) {
  if (graph.n() % 2 != 0)
    throw std::invalid_argument("solve_partition_bruteforce: vertex count must be even");
  const SectorBasis basis(graph.n(), graph.n() / 2);
  PartitionSolution result;
  result.min_cut = std::numeric_limits<int>::max();
  for (Bits state : basis.states()) {
    const int cut = cut_size(graph, state);
    if (cut < result.min_cut) {
      result.min_cut = cut;
      result.solutions.clear();
    }
    if (cut == result.min_cut) result.solutions.push_back(state);
  }
  return result;
}

Bits parse_bits(std::string_view text) {
  if (text.size() > 63) throw std::invalid_argument("parse_bits: more than 63 sites");
  Bits bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1')
      bits |= Bits{1} << i;
    else if (text[i] != '0')
      throw std::invalid_argument("parse_bits: expected only '0' and '1' in \"" +
                                  std::string(text) + "\"");
  }
  return bits;
}

std::string format_bits(Bits config, int n) {
  std::string out(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if ((config >> i) & 1U) out[static_cast<std::size_t>(i)] = '1';
  return out;
}

Bits complement(Bits config, int n) { return ~config & mask(n); }

Graph complete_graph_k4() {
  return Graph(4, 3, 0, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
}

Graph prism_graph() {
  return Graph(6, 3, 0, {{1, 2}, {2, 3}, {1, 3}, {4, 5}, {5, 6}, {4, 6}, {1, 4}, {2, 5}, {3, 6}});
}

Graph complete_bipartite_k33() {
  std::vector<Edge> edges;
  for (int a = 1; a <= 3; ++a)
    for (int b = 4; b <= 6; ++b) edges.push_back({a, b});
  return Graph(6, 3, 0, std::move(edges));
}

}  // namespace qanneal
