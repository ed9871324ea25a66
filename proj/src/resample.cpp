#include "hrg/resample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "hrg/parallel.hpp"
#include "hrg/util.hpp"

namespace hrg {

Graph resample_graph(const Dendrogram& d, std::uint64_t seed) {
  if (!d.has_probabilities())
    throw std::invalid_argument("resampling needs probabilities on the dendrogram");
  const int n = d.leaf_count();

  std::vector<int> leaf_order;
  std::vector<std::pair<int, int>> range;
  d.leaf_ranges(leaf_order, range);

  Rng rng(seed);
  std::vector<Edge> edges;
  for (int k = 0; k < d.internal_count(); ++k) {
    const auto& node = d.internal(n + k);
    const auto [lb, le] = range[node.left];
    const auto [rb, re] = range[node.right];
    const long long rows = le - lb;
    const long long cols = re - rb;
    for_each_bernoulli_hit(rows * cols, node.prob, rng, [&](long long idx) {
      int i = leaf_order[lb + idx / cols];
      int j = leaf_order[rb + idx % cols];
      edges.emplace_back(std::min(i, j), std::max(i, j));
    });
  }
  return Graph::from_edges(n, std::move(edges));
}

double resample_edge_count_mean(const Dendrogram& d) {
  double mean = 0.0;
  for (int k = 0; k < d.internal_count(); ++k) {
    const auto& node = d.internal(d.leaf_count() + k);
    mean += static_cast<double>(node.left_leaves) * node.right_leaves * node.prob;
  }
  return mean;
}

double resample_edge_count_variance(const Dendrogram& d) {
  double var = 0.0;
  for (int k = 0; k < d.internal_count(); ++k) {
    const auto& node = d.internal(d.leaf_count() + k);
    var += static_cast<double>(node.left_leaves) * node.right_leaves * node.prob *
           (1.0 - node.prob);
  }
  return var;
}

namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& values) {
  MeanSe out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  }
  return out;
}

}  // namespace

ResampleReport resample_report(const std::vector<DendrogramSample>& samples,
                               int resamples_per_dendrogram, std::uint64_t seed,
                               ClusteringKind kind, int threads) {
  if (samples.empty()) throw std::invalid_argument("need at least one sampled dendrogram");
  if (resamples_per_dendrogram < 1)
    throw std::invalid_argument("resamples_per_dendrogram must be >= 1");

  const long long total =
      static_cast<long long>(samples.size()) * resamples_per_dendrogram;
  ResampleReport report;
  report.resamples = static_cast<int>(total);
  report.per_sample.resize(total);

  parallel_for(total, threads, [&](long long t) {
    const auto& d = samples[t / resamples_per_dendrogram].dendrogram;
    Graph g = resample_graph(d, derive_seed(seed, {stream_tag("resample"),
                                                   static_cast<std::uint64_t>(t)}));
    report.per_sample[t] = graph_statistics(g, kind);
  });

  std::vector<double> degrees, clusterings, distances;
  std::size_t max_deg_bins = 0, max_dist_bins = 0;
  long long connected = 0, disconnected = 0;
  for (const auto& s : report.per_sample) {
    degrees.push_back(s.mean_degree);
    clusterings.push_back(s.clustering);
    if (s.distance_defined) distances.push_back(s.mean_distance);
    max_deg_bins = std::max(max_deg_bins, s.degree_histogram.size());
    max_dist_bins = std::max(max_dist_bins, s.distance_histogram.size());
    connected += s.connected_pairs;
    disconnected += s.disconnected_pairs;
  }
  auto k = mean_and_se(degrees);
  report.mean_degree_mean = k.mean;
  report.mean_degree_se = k.se;
  auto c = mean_and_se(clusterings);
  report.clustering_mean = c.mean;
  report.clustering_se = c.se;
  auto dist = mean_and_se(distances);
  report.mean_distance_mean = dist.mean;
  report.mean_distance_se = dist.se;
  report.disconnected_pair_fraction =
      connected + disconnected > 0
          ? static_cast<double>(disconnected) / static_cast<double>(connected + disconnected)
          : 0.0;

  // Equal per-graph weight: average the per-graph bin fractions.
  report.degree_distribution.assign(max_deg_bins, 0.0);
  report.distance_distribution.assign(max_dist_bins, 0.0);
  for (const auto& s : report.per_sample) {
    long long deg_total = 0;
    for (long long v : s.degree_histogram) deg_total += v;
    for (std::size_t b = 0; b < s.degree_histogram.size(); ++b)
      if (deg_total > 0)
        report.degree_distribution[b] +=
            static_cast<double>(s.degree_histogram[b]) / static_cast<double>(deg_total);
    long long dist_total = 0;
    for (long long v : s.distance_histogram) dist_total += v;
    for (std::size_t b = 0; b < s.distance_histogram.size(); ++b)
      if (dist_total > 0)
        report.distance_distribution[b] +=
            static_cast<double>(s.distance_histogram[b]) / static_cast<double>(dist_total);
  }
  for (auto& v : report.degree_distribution) v /= static_cast<double>(total);
  for (auto& v : report.distance_distribution) v /= static_cast<double>(total);
  return report;
}

std::string resample_report_to_json(const ResampleReport& r) {
  nlohmann::json j;
  j["resamples"] = r.resamples;
  j["mean_degree"] = {{"mean", r.mean_degree_mean}, {"std_error", r.mean_degree_se}};
  j["clustering"] = {{"mean", r.clustering_mean}, {"std_error", r.clustering_se}};
  j["mean_distance"] = {{"mean", r.mean_distance_mean}, {"std_error", r.mean_distance_se}};
  j["disconnected_pair_fraction"] = r.disconnected_pair_fraction;
  j["degree_distribution"] = r.degree_distribution;
  j["distance_distribution"] = r.distance_distribution;
  nlohmann::json per = nlohmann::json::array();
  for (const auto& s : r.per_sample) {
    per.push_back({{"mean_degree", s.mean_degree},
                   {"clustering", s.clustering},
                   {"mean_distance", s.mean_distance},
                   {"distance_defined", s.distance_defined}});
  }
  j["per_sample"] = per;
  return j.dump(2) + "\n";
}

std::string histogram_csv(const std::vector<double>& distribution,
                          const std::string& bin_name) {
  std::string out = bin_name + ",fraction\n";
  for (std::size_t b = 0; b < distribution.size(); ++b)
    out += std::to_string(b) + "," + format_double(distribution[b]) + "\n";
  return out;
}

}  // namespace hrg
