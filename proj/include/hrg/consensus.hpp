#pragma once

#include <string>
#include <vector>

#include "hrg/mcmc.hpp"

namespace hrg {

// Majority-rule consensus of sampled dendrograms: a rooted tree with
// arbitrary internal arity whose clusters (leaf-descendant sets) each carry
// more than half of the likelihood^exponent weight. Node ids follow the
// dendrogram convention: leaves 0..n-1, internal nodes from n upward.
class Hierarchy {
 public:
  struct Node {
    std::vector<int> children;  // ordered by smallest leaf
    double support = 0.0;       // normalized weight of this cluster, in (0.5, 1]
    double mean_prob = 0.0;     // weighted mean p_r over supporting samples
    int size = 0;               // leaves under this node
  };

  Hierarchy(int n_leaves, std::vector<Node> internals, int root);

  int leaf_count() const { return n_; }
  int internal_count() const { return static_cast<int>(nodes_.size()); }
  int root() const { return root_; }
  bool is_leaf(int id) const { return id < n_; }
  const Node& internal(int id) const { return nodes_[id - n_]; }

 private:
  int n_;
  std::vector<Node> nodes_;
  int root_;
};

// Samples are weighted proportionally to L(D)^exponent, computed stably via
// shifted log weights. Clusters above weight 1/2 are necessarily laminar
// and assemble into a unique minimal tree; the all-leaves cluster is always
// the root. Throws if samples disagree on the leaf set.
Hierarchy consensus_tree(const std::vector<DendrogramSample>& samples,
                         double exponent = 2.0);

// Nested n-ary text, support annotations per internal node, labels when given.
std::string serialize_hierarchy(const Hierarchy& h,
                                const std::vector<std::string>* labels = nullptr);

// Indented terminal rendering.
std::string render_hierarchy(const Hierarchy& h,
                             const std::vector<std::string>* labels = nullptr);

std::string hierarchy_to_json(const Hierarchy& h,
                              const std::vector<std::string>* labels = nullptr);

}  // namespace hrg
