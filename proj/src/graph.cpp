#include "hrg/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "hrg/util.hpp"

namespace hrg {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

Graph Graph::from_edges(int n, std::vector<Edge> edges) {
  Graph g;
  g.n_ = n;
  g.adj_.resize(n);
  for (auto& [a, b] : edges) {
    if (a == b) throw std::invalid_argument("self-loop on vertex " + std::to_string(a));
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges_ = std::move(edges);
  for (const auto& [a, b] : g.edges_) {
    g.adj_[a].push_back(b);
    g.adj_[b].push_back(a);
  }
  for (auto& nb : g.adj_) std::sort(nb.begin(), nb.end());
  return g;
}

bool Graph::has_edge(int i, int j) const {
  const auto& nb = adj_[degree(i) <= degree(j) ? i : j];
  int other = degree(i) <= degree(j) ? j : i;
  return std::binary_search(nb.begin(), nb.end(), other);
}

ParsedGraph parse_edge_list(std::string_view text) {
  std::unordered_map<std::string, int> ids;
  std::vector<std::string> labels;
  std::vector<Edge> edges;

  auto vertex_id = [&](std::string_view label) {
    auto [it, inserted] = ids.try_emplace(std::string(label), static_cast<int>(labels.size()));
    if (inserted) labels.emplace_back(label);
    return it->second;
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    auto tokens = split_whitespace(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2)
      throw ParseError("expected two vertex labels, got " + std::to_string(tokens.size()),
                       line_no);
    if (tokens[0] == tokens[1])
      throw ParseError("self-loop on '" + std::string(tokens[0]) + "'", line_no);
    int a = vertex_id(tokens[0]);  // sequenced: first appearance fixes the id
    int b = vertex_id(tokens[1]);
    edges.emplace_back(a, b);
  }

  ParsedGraph result;
  result.graph = Graph::from_edges(static_cast<int>(labels.size()), std::move(edges));
  result.labels = std::move(labels);
  return result;
}

std::string serialize_edge_list(const Graph& g, const std::vector<std::string>& labels) {
  std::string out;
  for (const auto& [a, b] : g.edges()) {
    out += labels[a];
    out += ' ';
    out += labels[b];
    out += '\n';
  }
  return out;
}

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return labels;
}

namespace {

// Triangles through v = adjacent neighbor pairs.
long long triangles_at(const Graph& g, int v) {
  const auto& nb = g.neighbors(v);
  long long t = 0;
  for (std::size_t a = 0; a < nb.size(); ++a)
    for (std::size_t b = a + 1; b < nb.size(); ++b)
      if (g.has_edge(nb[a], nb[b])) ++t;
  return t;
}

}  // namespace

GraphStatistics graph_statistics(const Graph& g, ClusteringKind kind) {
  GraphStatistics s;
  s.clustering_kind = kind;
  const int n = g.vertex_count();
  if (n == 0) return s;

  s.mean_degree = 2.0 * static_cast<double>(g.edge_count()) / n;

  int max_deg = 0;
  for (int v = 0; v < n; ++v) max_deg = std::max(max_deg, g.degree(v));
  s.degree_histogram.assign(max_deg + 1, 0);
  for (int v = 0; v < n; ++v) ++s.degree_histogram[g.degree(v)];

  double local_sum = 0.0;
  long long triangle_paths = 0;  // 3 * triangles, summed over vertices
  long long open_triads = 0;
  for (int v = 0; v < n; ++v) {
    long long d = g.degree(v);
    long long possible = d * (d - 1) / 2;
    open_triads += possible;
    if (possible > 0) {
      long long t = triangles_at(g, v);
      triangle_paths += t;
      local_sum += static_cast<double>(t) / static_cast<double>(possible);
    }
  }
  if (kind == ClusteringKind::average_local) {
    s.clustering = n > 0 ? local_sum / n : 0.0;
  } else {
    s.clustering = open_triads > 0
                       ? static_cast<double>(triangle_paths) / static_cast<double>(open_triads)
                       : 0.0;
  }

  // BFS from every vertex; each unordered pair contributes once.
  std::vector<int> dist(n);
  std::deque<int> queue;
  long long dist_sum = 0;
  for (int src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    queue.clear();
    queue.push_back(src);
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      }
    }
    for (int v = src + 1; v < n; ++v) {
      if (dist[v] > 0) {
        ++s.connected_pairs;
        dist_sum += dist[v];
        if (static_cast<std::size_t>(dist[v]) >= s.distance_histogram.size())
          s.distance_histogram.resize(dist[v] + 1, 0);
        ++s.distance_histogram[dist[v]];
      } else {
        ++s.disconnected_pairs;
      }
    }
  }
  if (s.connected_pairs > 0) {
    s.mean_distance = static_cast<double>(dist_sum) / static_cast<double>(s.connected_pairs);
    s.distance_defined = true;
  }
  return s;
}

std::string statistics_to_json(const GraphStatistics& s, const Graph& g) {
  nlohmann::json j;
  j["n"] = g.vertex_count();
  j["m"] = g.edge_count();
  j["mean_degree"] = s.mean_degree;
  j["clustering"] = s.clustering;
  j["clustering_definition"] =
      s.clustering_kind == ClusteringKind::average_local ? "average_local" : "global_transitivity";
  j["mean_distance"] = s.mean_distance;
  j["distance_defined"] = s.distance_defined;
  j["connected_pairs"] = s.connected_pairs;
  j["disconnected_pairs"] = s.disconnected_pairs;
  j["degree_histogram"] = s.degree_histogram;
  j["distance_histogram"] = s.distance_histogram;
  return j.dump(2) + "\n";
}

EdgeSplit remove_random_edges(const Graph& g, double fraction, std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0)
    throw std::invalid_argument("removal fraction must be in [0,1]");
  const long long m = g.edge_count();
  const long long k = std::llround(fraction * static_cast<double>(m));

  std::vector<Edge> pool = g.edges();
  Rng rng(seed);
  // Partial Fisher-Yates: first k entries become the removed set.
  for (long long i = 0; i < k; ++i) {
    long long j = i + rng.uniform_int(static_cast<long long>(pool.size()) - i);
    std::swap(pool[i], pool[j]);
  }
  EdgeSplit split;
  split.removed.assign(pool.begin(), pool.begin() + k);
  std::sort(split.removed.begin(), split.removed.end());
  std::vector<Edge> kept(pool.begin() + k, pool.end());
  split.observed = Graph::from_edges(g.vertex_count(), std::move(kept));
  return split;
}

namespace {

// Row-major position of linear index k within the strict upper triangle of
// an n x n matrix. Closed form plus a correction loop for FP edge cases.
Edge decode_pair_index(int n, long long k) {
  double nd = static_cast<double>(n);
  double disc = (2.0 * nd - 1.0) * (2.0 * nd - 1.0) - 8.0 * static_cast<double>(k);
  int i = static_cast<int>((2.0 * nd - 1.0 - std::sqrt(std::max(disc, 0.0))) / 2.0);
  i = std::clamp(i, 0, n - 2);
  auto row_start = [n](int r) {
    return static_cast<long long>(r) * n - static_cast<long long>(r) * (r + 1) / 2;
  };
  while (i > 0 && row_start(i) > k) --i;
  while (i < n - 2 && row_start(i + 1) <= k) ++i;
  int j = static_cast<int>(k - row_start(i)) + i + 1;
  return {i, j};
}

}  // namespace

Graph generate_er_graph(int n, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("edge probability must be in [0,1]");
  const long long total = static_cast<long long>(n) * (n - 1) / 2;
  std::vector<Edge> edges;
  Rng rng(seed);
  for_each_bernoulli_hit(total, p, rng,
                         [&](long long k) { edges.push_back(decode_pair_index(n, k)); });
  return Graph::from_edges(n, std::move(edges));
}

Graph generate_configuration_model(const std::vector<int>& degrees, std::uint64_t seed) {
  long long sum = 0;
  for (int d : degrees) {
    if (d < 0) throw std::invalid_argument("negative degree");
    sum += d;
  }
  if (sum % 2 != 0) throw std::invalid_argument("degree sum must be even");

  std::vector<int> stubs;
  stubs.reserve(sum);
  for (int v = 0; v < static_cast<int>(degrees.size()); ++v)
    stubs.insert(stubs.end(), degrees[v], v);

  Rng rng(seed);
  rng.shuffle(stubs);
  std::vector<Edge> edges;
  edges.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    int a = stubs[i], b = stubs[i + 1];
    if (a == b) continue;  // self-loops discarded
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  // from_edges collapses multi-edges.
  return Graph::from_edges(static_cast<int>(degrees.size()), std::move(edges));
}

std::vector<int> power_law_degree_sequence(int n, double alpha, int k_min, int k_max,
                                           std::uint64_t seed) {
  if (k_min < 1 || k_max < k_min || k_max > n - 1)
    throw std::invalid_argument("invalid degree bounds");
  std::vector<double> cdf;
  cdf.reserve(k_max - k_min + 1);
  double acc = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    acc += std::pow(static_cast<double>(k), -alpha);
    cdf.push_back(acc);
  }
  Rng rng(seed);
  std::vector<int> degrees(n);
  for (int v = 0; v < n; ++v) {
    double u = rng.next_double() * acc;
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    degrees[v] = k_min + static_cast<int>(it - cdf.begin());
    degrees[v] = std::min(degrees[v], k_max);
  }
  long long sum = 0;
  for (int d : degrees) sum += d;
  if (sum % 2 != 0) {
    // Bump one uniformly chosen vertex to make the stub count even.
    int v = static_cast<int>(rng.uniform_int(n));
    if (degrees[v] < k_max)
      ++degrees[v];
    else
      --degrees[v];
  }
  return degrees;
}

}  // namespace hrg
