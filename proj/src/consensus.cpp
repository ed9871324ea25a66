#include "hrg/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "hrg/util.hpp"

namespace hrg {

Hierarchy::Hierarchy(int n_leaves, std::vector<Node> internals, int root)
    : n_(n_leaves), nodes_(std::move(internals)), root_(root) {
  if (root_ < n_ || root_ >= n_ + static_cast<int>(nodes_.size()))
    throw std::invalid_argument("bad root id");
}

Hierarchy consensus_tree(const std::vector<DendrogramSample>& samples, double exponent) {
  if (samples.empty()) throw std::invalid_argument("need at least one sample");
  const int n = samples[0].dendrogram.leaf_count();
  for (const auto& s : samples)
    if (s.dendrogram.leaf_count() != n)
      throw std::invalid_argument("samples disagree on the leaf set");

  // Shifted log weights: w_i = exp(exponent * (logL_i - max logL)).
  double max_ll = samples[0].log_likelihood;
  for (const auto& s : samples) max_ll = std::max(max_ll, s.log_likelihood);
  std::vector<double> weights(samples.size());
  double total_weight = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    weights[i] = std::exp(exponent * (samples[i].log_likelihood - max_ll));
    total_weight += weights[i];
  }

  // Accumulate weight and weighted p_r per cluster. std::map keys keep the
  // iteration order deterministic.
  struct ClusterAcc {
    double weight = 0.0;
    double weighted_prob = 0.0;
  };
  std::map<std::vector<int>, ClusterAcc> clusters;
  std::vector<int> leaf_order;
  std::vector<std::pair<int, int>> range;
  std::vector<int> members;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Dendrogram& d = samples[i].dendrogram;
    d.leaf_ranges(leaf_order, range);
    for (int k = 0; k < d.internal_count(); ++k) {
      const int id = n + k;
      members.assign(leaf_order.begin() + range[id].first,
                     leaf_order.begin() + range[id].second);
      std::sort(members.begin(), members.end());
      auto& acc = clusters[members];
      acc.weight += weights[i];
      acc.weighted_prob += weights[i] * d.internal(id).prob;
    }
  }

  struct Retained {
    std::vector<int> members;
    double support;
    double mean_prob;
  };
  std::vector<Retained> retained;
  for (const auto& [members_key, acc] : clusters) {
    double support = acc.weight / total_weight;
    if (support > 0.5)
      retained.push_back({members_key, support, acc.weighted_prob / acc.weight});
  }
  // Largest first; the full leaf set has support 1 and leads.
  std::sort(retained.begin(), retained.end(), [](const Retained& a, const Retained& b) {
    if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
    return a.members < b.members;
  });
  if (retained.empty() || static_cast<int>(retained[0].members.size()) != n)
    throw std::logic_error("full leaf set missing from consensus");

  // Assemble the laminar family top-down: each cluster's parent is the
  // owner of its members at the time it is placed.
  std::vector<Hierarchy::Node> nodes(retained.size());
  std::vector<int> owner(n, 0);  // index into retained/nodes
  for (std::size_t c = 0; c < retained.size(); ++c) {
    nodes[c].support = retained[c].support;
    nodes[c].mean_prob = retained[c].mean_prob;
    nodes[c].size = static_cast<int>(retained[c].members.size());
    if (c > 0) {
      int parent = owner[retained[c].members[0]];
      for (int v : retained[c].members)
        if (owner[v] != parent)
          throw std::logic_error("majority clusters are not laminar");
      nodes[parent].children.push_back(n + static_cast<int>(c));
    }
    for (int v : retained[c].members) owner[v] = static_cast<int>(c);
  }
  for (int v = 0; v < n; ++v) nodes[owner[v]].children.push_back(v);

  // Deterministic child order: by smallest descendant leaf.
  std::vector<int> min_leaf(n + nodes.size());
  for (int v = 0; v < n; ++v) min_leaf[v] = v;
  for (std::size_t c = 0; c < nodes.size(); ++c)
    min_leaf[n + c] = retained[c].members[0];
  for (auto& node : nodes)
    std::sort(node.children.begin(), node.children.end(),
              [&](int a, int b) { return min_leaf[a] < min_leaf[b]; });

  return Hierarchy(n, std::move(nodes), n);
}

namespace {

void serialize_node(const Hierarchy& h, int id, const std::vector<std::string>* labels,
                    std::string& out) {
  if (h.is_leaf(id)) {
    out += labels ? (*labels)[id] : std::to_string(id);
    return;
  }
  const auto& node = h.internal(id);
  out += '(';
  for (std::size_t c = 0; c < node.children.size(); ++c) {
    if (c > 0) out += ',';
    serialize_node(h, node.children[c], labels, out);
  }
  out += "):";
  out += format_fixed(node.support, 4);
}

void render_node(const Hierarchy& h, int id, const std::vector<std::string>* labels,
                 int indent, std::string& out) {
  out.append(indent * 2, ' ');
  if (h.is_leaf(id)) {
    out += "- ";
    out += labels ? (*labels)[id] : std::to_string(id);
    out += '\n';
    return;
  }
  const auto& node = h.internal(id);
  out += "+ support=" + format_fixed(node.support, 3) +
         " mean_p=" + format_fixed(node.mean_prob, 4) + "\n";
  for (int child : node.children) render_node(h, child, labels, indent + 1, out);
}

nlohmann::json node_to_json(const Hierarchy& h, int id,
                            const std::vector<std::string>* labels) {
  if (h.is_leaf(id)) return labels ? (*labels)[id] : std::to_string(id);
  const auto& node = h.internal(id);
  nlohmann::json j;
  j["support"] = node.support;
  j["mean_prob"] = node.mean_prob;
  j["size"] = node.size;
  nlohmann::json children = nlohmann::json::array();
  for (int child : node.children) children.push_back(node_to_json(h, child, labels));
  j["children"] = children;
  return j;
}

}  // namespace

std::string serialize_hierarchy(const Hierarchy& h, const std::vector<std::string>* labels) {
  std::string out = "hrg-hierarchy v1\n";
  out += "n " + std::to_string(h.leaf_count()) + "\n(";
  serialize_node(h, h.root(), labels, out);
  out += ")\n";
  return out;
}

std::string render_hierarchy(const Hierarchy& h, const std::vector<std::string>* labels) {
  std::string out;
  render_node(h, h.root(), labels, 0, out);
  return out;
}

std::string hierarchy_to_json(const Hierarchy& h, const std::vector<std::string>* labels) {
  nlohmann::json j;
  j["n"] = h.leaf_count();
  j["tree"] = node_to_json(h, h.root(), labels);
  return j.dump(2) + "\n";
}

}  // namespace hrg
