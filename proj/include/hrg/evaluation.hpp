#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "hrg/graph.hpp"
#include "hrg/link_prediction.hpp"
#include "hrg/mcmc.hpp"

namespace hrg {

using PairSet = std::unordered_set<std::uint64_t>;  // keys from pair_key()

PairSet make_pair_set(const std::vector<Edge>& edges);

struct AucOptions {
  // Exact Mann-Whitney (midranks, ties count 1/2) up to this universe size;
  // Monte Carlo above it.
  long long exact_threshold = 10'000'000;
  long long mc_comparisons = 200'000;  // kept >= 1e5
  std::uint64_t seed = 0;
};

struct AucResult {
  double value = 0.0;
  bool exact = true;
  double std_error = 0.0;     // 0 for the exact computation
  long long comparisons = 0;  // Monte Carlo only
};

// Probability that a random positive outranks a random negative, ties 1/2.
// positives must be a subset of the scored universe; throws when either
// class is empty.
AucResult auc(const std::vector<ScoredPair>& scored, const PairSet& positives,
              const AucOptions& options = {});

// Indicator that the top-ranked pair is a positive, divided by the base
// rate |positives| / |universe|. Averaged across trials by the harness.
double top_rank_ratio(const std::vector<ScoredPair>& ranked, const PairSet& positives);

struct ExperimentConfig {
  std::vector<Method> methods{Method::hrg, Method::common_neighbors, Method::jaccard,
                              Method::degree_product, Method::shortest_path};
  // Fraction of edges KNOWN to the algorithm; 1-f of the edges are removed.
  std::vector<double> fractions_known{0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 0.95};
  int trials = 25;
  SamplerConfig sampler;  // template; the seed is derived per trial
  AucOptions auc_options;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct TrialRecord {
  Method method;
  double fraction_known;
  int trial;
  double auc;
  double auc_std_error;
  bool auc_exact;
  double top_rank_ratio;
  double runtime_ms;  // diagnostics only; never part of deterministic outputs
};

struct AggregateRecord {
  Method method;
  double fraction_known;
  int trials;
  double mean_auc, se_auc;
  double mean_ratio, se_ratio;
};

struct SkippedTrial {
  double fraction_known;
  int trial;
  std::string reason;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  std::vector<AggregateRecord> aggregates;
  std::vector<SkippedTrial> skipped;
};

// Per trial: remove edges, score the observed graph with every method,
// measure AUC and top-rank ratio against the removed edges. Edge removal is
// shared across methods within a trial; every stream derives from
// (seed, fraction index, trial index [, method]).
ExperimentResult run_experiment(const Graph& g, const ExperimentConfig& config);

// Control graphs: a fresh instance per trial.
struct GraphSource {
  enum class Kind { fixed, erdos_renyi, power_law_cm } kind = Kind::fixed;
  Graph graph;         // fixed
  int n = 0;           // generators
  double er_p = 0.0;
  double alpha = 2.5;
  int k_min = 1;
  int k_max = 0;  // 0 -> n-1

  Graph make(std::uint64_t seed) const;
};

ExperimentResult run_experiment(const GraphSource& source, const ExperimentConfig& config);

// Named control presets (Erdos-Renyi n=500 <k>=5; power-law alpha=2.5 n=500).
struct Preset {
  GraphSource source;
  ExperimentConfig config;
};
Preset er_control_preset(std::uint64_t seed);
Preset cm_control_preset(std::uint64_t seed);

std::string experiment_to_json(const ExperimentResult& r);
std::string experiment_to_csv(const ExperimentResult& r);
std::string experiment_timings(const ExperimentResult& r);

}  // namespace hrg
