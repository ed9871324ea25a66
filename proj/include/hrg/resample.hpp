#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrg/dendrogram.hpp"
#include "hrg/graph.hpp"
#include "hrg/mcmc.hpp"

namespace hrg {

// Draws one graph from the hierarchical random graph (D, {p_r}): every
// vertex pair connects independently with the probability at its lowest
// common ancestor. Iterates internal nodes and samples each node's
// L_r * R_r cross pairs, which is equivalent to n^2 LCA queries but faster.
Graph resample_graph(const Dendrogram& d, std::uint64_t seed);

// Single-draw edge-count variance of the model: sum L_r R_r p_r (1 - p_r).
// The mean is sum L_r R_r p_r (= m when fitted by compute_stats).
double resample_edge_count_mean(const Dendrogram& d);
double resample_edge_count_variance(const Dendrogram& d);

struct ResampleReport {
  std::vector<GraphStatistics> per_sample;
  int resamples = 0;
  double mean_degree_mean = 0.0, mean_degree_se = 0.0;
  double clustering_mean = 0.0, clustering_se = 0.0;
  double mean_distance_mean = 0.0, mean_distance_se = 0.0;
  // Pooled with equal per-graph weight: mean fraction per bin.
  std::vector<double> degree_distribution;
  std::vector<double> distance_distribution;
  double disconnected_pair_fraction = 0.0;
};

// One resampled graph per dendrogram by default; the multiplier exists for
// variance studies. Tasks derive their RNG streams from (seed, index).
ResampleReport resample_report(const std::vector<DendrogramSample>& samples,
                               int resamples_per_dendrogram, std::uint64_t seed,
                               ClusteringKind kind = ClusteringKind::average_local,
                               int threads = 1);

std::string resample_report_to_json(const ResampleReport& r);
std::string histogram_csv(const std::vector<double>& distribution, const std::string& bin_name);

}  // namespace hrg
