#include "hrg/link_prediction.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "hrg/util.hpp"

namespace hrg {

Method method_from_name(const std::string& name) {
  for (Method m : {Method::hrg, Method::common_neighbors, Method::jaccard,
                   Method::degree_product, Method::shortest_path})
    if (name == method_name(m)) return m;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::vector<ScoredPair> hrg_scores(const Graph& g,
                                   const std::vector<DendrogramSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("need at least one sampled dendrogram");
  const int n = g.vertex_count();

  // Accumulate each sample's p_ij by walking internal nodes and adding the
  // node probability over its left x right leaf ranges (every pair has
  // exactly one LCA, so each pair is touched once per sample).
  std::vector<double> acc(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<int> leaf_order;
  std::vector<std::pair<int, int>> range;
  for (const auto& sample : samples) {
    const Dendrogram& d = sample.dendrogram;
    if (d.leaf_count() != n)
      throw std::invalid_argument("sample leaf set does not match the graph");
    d.leaf_ranges(leaf_order, range);
    for (int k = 0; k < d.internal_count(); ++k) {
      const auto& node = d.internal(n + k);
      if (node.prob == 0.0) continue;
      const auto [lb, le] = range[node.left];
      const auto [rb, re] = range[node.right];
      for (int a = lb; a < le; ++a) {
        const int i = leaf_order[a];
        double* row = acc.data() + static_cast<std::size_t>(i) * n;
        for (int b = rb; b < re; ++b) row[leaf_order[b]] += node.prob;
      }
    }
  }

  const double inv = 1.0 / static_cast<double>(samples.size());
  std::vector<ScoredPair> out;
  out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2 - g.edge_count());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (g.has_edge(i, j)) continue;
      double sum = acc[static_cast<std::size_t>(i) * n + j] +
                   acc[static_cast<std::size_t>(j) * n + i];
      out.push_back({i, j, sum * inv});
    }
  }
  return out;
}

double common_neighbors_score(const Graph& g, int i, int j) {
  const auto& a = g.neighbors(i);
  const auto& b = g.neighbors(j);
  long long count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(count);
}

double jaccard_score(const Graph& g, int i, int j) {
  double inter = common_neighbors_score(g, i, j);
  double uni = static_cast<double>(g.degree(i)) + g.degree(j) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double degree_product_score(const Graph& g, int i, int j) {
  return static_cast<double>(g.degree(i)) * static_cast<double>(g.degree(j));
}

namespace {

void bfs_distances(const Graph& g, int src, std::vector<int>& dist) {
  dist.assign(g.vertex_count(), -1);
  dist[src] = 0;
  std::deque<int> queue{src};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : g.neighbors(v))
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
}

}  // namespace

double shortest_path_score(const Graph& g, int i, int j) {
  std::vector<int> dist;
  bfs_distances(g, i, dist);
  return dist[j] > 0 ? 1.0 / dist[j] : 0.0;
}

std::vector<ScoredPair> score_non_edges(const Graph& g, Method method,
                                        const std::vector<DendrogramSample>* samples) {
  if (method == Method::hrg) {
    if (!samples) throw std::invalid_argument("hrg scoring needs sampled dendrograms");
    return hrg_scores(g, *samples);
  }
  const int n = g.vertex_count();
  std::vector<ScoredPair> out;
  out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2 - g.edge_count());
  if (method == Method::shortest_path) {
    std::vector<int> dist;
    for (int i = 0; i < n; ++i) {
      bfs_distances(g, i, dist);
      for (int j = i + 1; j < n; ++j)
        if (!g.has_edge(i, j))
          out.push_back({i, j, dist[j] > 0 ? 1.0 / dist[j] : 0.0});
    }
    return out;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (g.has_edge(i, j)) continue;
      double s = 0.0;
      switch (method) {
        case Method::common_neighbors: s = common_neighbors_score(g, i, j); break;
        case Method::jaccard: s = jaccard_score(g, i, j); break;
        case Method::degree_product: s = degree_product_score(g, i, j); break;
        default: break;
      }
      out.push_back({i, j, s});
    }
  }
  return out;
}

void rank_pairs(std::vector<ScoredPair>& scores, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {stream_tag("rank")}));
  rng.shuffle(scores);
  std::stable_sort(scores.begin(), scores.end(),
                   [](const ScoredPair& a, const ScoredPair& b) { return a.score > b.score; });
}

std::string predictions_csv(const std::vector<ScoredPair>& ranked, Method method,
                            const std::vector<std::string>& labels) {
  std::string out = "i_label,j_label,method,score,rank\n";
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    out += labels[ranked[r].i] + "," + labels[ranked[r].j] + "," + method_name(method) + "," +
           format_double(ranked[r].score) + "," + std::to_string(r + 1) + "\n";
  }
  return out;
}

}  // namespace hrg
