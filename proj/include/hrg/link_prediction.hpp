#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrg/graph.hpp"
#include "hrg/mcmc.hpp"

namespace hrg {

// A non-edge of the observed graph with its prediction score (mean
// connection probability for the HRG method, heuristic value otherwise).
struct ScoredPair {
  int i = 0;
  int j = 0;  // i < j
  double score = 0.0;
};

enum class Method { hrg, common_neighbors, jaccard, degree_product, shortest_path };

constexpr const char* method_name(Method m) {
  switch (m) {
    case Method::hrg: return "hrg";
    case Method::common_neighbors: return "common_neighbors";
    case Method::jaccard: return "jaccard";
    case Method::degree_product: return "degree_product";
    case Method::shortest_path: return "shortest_path";
  }
  return "?";
}

Method method_from_name(const std::string& name);

// Mean p_ij over the sampled dendrograms for every non-adjacent pair.
// Throws on an empty sample list.
std::vector<ScoredPair> hrg_scores(const Graph& g,
                                   const std::vector<DendrogramSample>& samples);

double common_neighbors_score(const Graph& g, int i, int j);
double jaccard_score(const Graph& g, int i, int j);  // 0 when the union is empty
double degree_product_score(const Graph& g, int i, int j);
double shortest_path_score(const Graph& g, int i, int j);  // 1/dist, 0 if disconnected

// All non-edges scored by the given method (samples required for hrg).
std::vector<ScoredPair> score_non_edges(const Graph& g, Method method,
                                        const std::vector<DendrogramSample>* samples = nullptr);

// Descending by score; ties broken by a seeded uniform shuffle so that
// coarse-valued baselines are not biased by index order.
void rank_pairs(std::vector<ScoredPair>& scores, std::uint64_t seed);

std::string predictions_csv(const std::vector<ScoredPair>& ranked, Method method,
                            const std::vector<std::string>& labels);

}  // namespace hrg
