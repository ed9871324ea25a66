#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hrg/rng.hpp"

namespace hrg {

using Edge = std::pair<int, int>;  // always stored with first < second

// Undirected simple graph over dense vertex ids 0..n-1. Immutable after
// construction; adjacency lists are sorted.
class Graph {
 public:
  Graph() = default;

  // Validates endpoints, rejects self-loops, collapses duplicates.
  static Graph from_edges(int n, std::vector<Edge> edges);

  int vertex_count() const { return n_; }
  long long edge_count() const { return static_cast<long long>(edges_.size()); }

  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  bool has_edge(int i, int j) const;

  // Sorted lexicographically, i < j within each pair.
  const std::vector<Edge>& edges() const { return edges_; }

  bool operator==(const Graph& other) const = default;

 private:
  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<Edge> edges_;
};

// Graph parsed from an edge list, with the original vertex labels kept in
// first-appearance order (labels[id] is the label of vertex id).
struct ParsedGraph {
  Graph graph;
  std::vector<std::string> labels;
};

// One edge per non-comment line, two whitespace-separated labels. Directed
// inputs are symmetrized by construction (an unordered pair is one edge).
// Throws ParseError (with line number) on self-loops and malformed lines.
ParsedGraph parse_edge_list(std::string_view text);

std::string serialize_edge_list(const Graph& g, const std::vector<std::string>& labels);

// Integer labels "0".."n-1"; used for generated graphs.
std::vector<std::string> default_labels(int n);

enum class ClusteringKind { average_local, global_transitivity };

struct GraphStatistics {
  double mean_degree = 0.0;
  double clustering = 0.0;
  ClusteringKind clustering_kind = ClusteringKind::average_local;
  double mean_distance = 0.0;  // over connected pairs; 0 when undefined
  bool distance_defined = false;
  long long connected_pairs = 0;
  long long disconnected_pairs = 0;
  std::vector<long long> degree_histogram;    // index = degree
  std::vector<long long> distance_histogram;  // index = hop count, [0] unused
};

GraphStatistics graph_statistics(const Graph& g,
                                 ClusteringKind kind = ClusteringKind::average_local);

std::string statistics_to_json(const GraphStatistics& s, const Graph& g);

// Edge-removal split for link-prediction experiments: exactly
// round(fraction*m) edges removed, uniformly without replacement.
struct EdgeSplit {
  Graph observed;                  // same vertex set, surviving edges
  std::vector<Edge> removed;       // sorted
};

EdgeSplit remove_random_edges(const Graph& g, double fraction, std::uint64_t seed);

// G(n,p): each of the n(n-1)/2 pairs independently with probability p.
Graph generate_er_graph(int n, double p, std::uint64_t seed);

// Uniform stub matching; self-loops and multi-edges are discarded so the
// result is simple. Throws on odd degree sum.
Graph generate_configuration_model(const std::vector<int>& degrees, std::uint64_t seed);

// Discrete power law P(k) proportional to k^-alpha on [k_min, k_max]
// (k_max <= n-1); the sum is forced even by bumping one entry if needed.
std::vector<int> power_law_degree_sequence(int n, double alpha, int k_min, int k_max,
                                           std::uint64_t seed);

}  // namespace hrg
