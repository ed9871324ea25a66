#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hrg/graph.hpp"
#include "hrg/rng.hpp"

namespace hrg {

// -(p log p + (1-p) log(1-p)), natural log, with h(0) = h(1) = 0 exactly.
double binary_entropy(double p);

// One internal node's contribution to the log-likelihood: -pairs * h(p).
double log_likelihood_term(double p, double pairs);

// Rooted binary tree with n labeled leaves and n-1 internal nodes.
// Node ids: leaves are 0..n-1 (the id is the graph vertex), internal nodes
// are n..2n-2. Stored in a flat arena so the MCMC sampler can patch the two
// nodes a subtree swap touches in O(1).
class Dendrogram {
 public:
  struct InternalNode {
    int left = -1;
    int right = -1;
    int left_leaves = 0;
    int right_leaves = 0;
    long long cross_edges = -1;  // E_r; -1 when only a probability is known
    double prob = 0.0;           // connection probability at this node

    bool operator==(const InternalNode&) const = default;
  };

  Dendrogram() = default;

  // Builds from explicit children; children[k] are the two child ids of
  // internal node n+k. Validates the binary-tree invariants.
  Dendrogram(int n_leaves, std::vector<std::pair<int, int>> children);

  // Uniform pairwise joining of a forest of n singletons.
  static Dendrogram random(int n_leaves, Rng& rng);
  static Dendrogram random(int n_leaves, std::uint64_t seed);

  // Halving splits; depth-uniform levels when n is a power of two.
  static Dendrogram balanced(int n_leaves);

  int leaf_count() const { return n_; }
  int internal_count() const { return n_ - 1; }
  int node_count() const { return 2 * n_ - 1; }
  int root() const { return root_; }
  bool is_leaf(int id) const { return id < n_; }
  int parent(int id) const { return parent_[id]; }
  const InternalNode& internal(int id) const { return nodes_[id - n_]; }
  int leaves_under(int id) const {
    return is_leaf(id) ? 1 : internal(id).left_leaves + internal(id).right_leaves;
  }
  int sibling(int id) const;
  int depth(int id) const;

  // Fills E_r, L_r, R_r and p_r = E_r/(L_r R_r) for every internal node.
  // Throws if the graph's vertex set does not match the leaf set.
  void compute_stats(const Graph& g);
  bool has_probabilities() const { return has_probabilities_; }
  bool has_edge_counts() const { return has_edge_counts_; }

  double log_likelihood() const;

  // Deepest node with both i and j as leaf descendants (i != j).
  int lowest_common_ancestor(int i, int j) const;
  double connection_probability(int i, int j) const;

  // The two alternate configurations of (children s,t | sibling u) at a
  // non-root internal node: variant 1 exchanges the left child with the
  // sibling, variant 2 the right child. Topology and leaf counts are
  // updated; the caller owns E_r/p_r of the node and its parent.
  void swap_subtrees(int internal_id, int variant);

  // Overwrites probability annotations level by level from the root
  // (depths past the end reuse the last entry). Clears edge counts.
  void set_depth_probabilities(const std::vector<double>& prob_per_depth);

  // Replaces leaf l by perm[l] everywhere.
  void relabel_leaves(const std::vector<int>& perm);

  // Canonical text for the unordered topology; equal iff same labeled tree.
  std::string topology_signature() const;

  // Signature with each internal node's probability attached; equal iff the
  // trees agree on topology, labels, and stored probabilities, independent
  // of arena ordering.
  std::string annotated_signature() const;

  // Leaves in traversal order plus, per node, its contiguous [begin,end)
  // range in that order. Lets callers enumerate each internal node's
  // L_r * R_r cross pairs without LCA queries.
  void leaf_ranges(std::vector<int>& leaf_order,
                   std::vector<std::pair<int, int>>& range) const;

  void collect_leaves(int id, std::vector<int>& out) const;

  bool operator==(const Dendrogram& other) const = default;

 private:
  void rebuild_leaf_counts();
  void validate() const;

  int n_ = 0;
  int root_ = -1;
  std::vector<int> parent_;          // size 2n-1, -1 for root
  std::vector<InternalNode> nodes_;  // size n-1, id = n_ + index
  bool has_probabilities_ = false;
  bool has_edge_counts_ = false;

  friend class Chain;
  friend Dendrogram deserialize_dendrogram(std::string_view text);
};

// Text format: three header lines (magic, "n <count>", "loglik <value>")
// followed by the parenthesized tree, e.g. ((0,1):0.5). Probabilities carry
// 17 significant digits so a round trip is exact.
std::string serialize_dendrogram(const Dendrogram& d);
Dendrogram deserialize_dendrogram(std::string_view text);

// One row per internal node: id,left,right,left_leaves,right_leaves,prob.
// Children are written as v<k> for leaves and i<k> for internal nodes.
std::string dendrogram_table(const Dendrogram& d);

// All (2n-3)!! labeled topologies; n <= 7 enforced. Exhaustive oracle for
// the sampler tests.
std::vector<Dendrogram> enumerate_dendrograms(int n);

long long count_labeled_dendrograms(int n);  // (2n-3)!!

}  // namespace hrg
