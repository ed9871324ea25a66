#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrg/dendrogram.hpp"
#include "hrg/graph.hpp"
#include "hrg/rng.hpp"

namespace hrg {

// Subtree rearrangement at a non-root internal node: the node's two child
// subtrees plus its sibling subtree admit two alternate groupings.
struct Move {
  int node;     // internal node id, never the root
  int variant;  // 1 = exchange left child with sibling, 2 = right child
};

// A move with its evaluated log-likelihood change and the two updated edge
// counts, so acceptance can apply it without recounting.
struct MoveEval {
  Move move;
  double delta = 0.0;
  long long new_cross_node = 0;    // E at the chosen node after the swap
  long long new_cross_parent = 0;  // E at its parent after the swap
};

// Metropolis-Hastings acceptance for a symmetric proposal: accept when the
// log-likelihood does not decrease, otherwise with probability exp(delta).
bool metropolis_accept(double delta, Rng& rng);

// Plateau detector over a recent log-likelihood series: equilibrated when
// the least-squares slope, accumulated across the window, stays within
// tolerance. The hard cap (in chain steps) bounds burn-in regardless.
struct PlateauPolicy {
  int window = 64;          // trace points considered
  double tolerance = 2.0;   // |slope| * window, in nats
  long long cap_steps = 0;  // 0 -> 200 n^2
};

bool detect_equilibrium(const std::vector<double>& trace, const PlateauPolicy& policy,
                        double* slope_out = nullptr);

struct SamplerConfig {
  PlateauPolicy burn_in;
  long long sample_interval = 0;    // steps between retained samples; 0 -> n^2
  int num_samples = 100;
  std::uint64_t seed = 0;
  long long resync_interval = 10000;  // full stat recompute cadence
  long long trace_stride = 0;         // 0 -> span the window over ~n^2 steps
};

// Single-owner Markov chain over dendrograms for a fixed graph. The cached
// log-likelihood is kept within 1e-9 of a full recompute by periodic
// resyncs.
class Chain {
 public:
  Chain(const Graph& g, std::uint64_t seed);
  Chain(const Graph& g, Dendrogram start, std::uint64_t seed);

  const Graph& graph() const { return *graph_; }
  const Dendrogram& dendrogram() const { return dendrogram_; }
  double log_likelihood() const { return log_likelihood_; }
  long long step_count() const { return step_; }

  // Uniform over the n-2 non-root internal nodes and the 2 variants.
  // Throws for n < 3 (no candidate nodes; the chain is trivially
  // stationary).
  Move propose_move();

  // Local evaluation: only the chosen node and its parent change, and edge
  // recounting is restricted to pairs crossing the regrouped subtrees.
  MoveEval evaluate_move(const Move& move);

  void apply_move(const MoveEval& eval);

  // One Metropolis-Hastings step; returns whether the move was accepted.
  bool step();

  // Recomputes stats from scratch; throws if the cached log-likelihood
  // drifted by more than 1e-9.
  void resync();

  long long resync_interval = 10000;

 private:
  long long cross_edge_count(int node_a, int node_b);

  const Graph* graph_;
  Dendrogram dendrogram_;
  double log_likelihood_ = 0.0;
  long long step_ = 0;
  Rng rng_;

  // Scratch for leaf collection and membership marking.
  std::vector<int> leaves_a_, leaves_b_;
  std::vector<int> mark_;
  int mark_epoch_ = 0;
};

struct DendrogramSample {
  Dendrogram dendrogram;
  double log_likelihood = 0.0;
};

struct BurnInDiagnostics {
  long long steps = 0;
  std::string reason;   // "plateau", "cap", or "trivial"
  double slope = 0.0;
};

struct TracePoint {
  long long step;
  double log_likelihood;
};

struct SampleRun {
  std::vector<DendrogramSample> samples;
  BurnInDiagnostics burn_in;
  std::vector<TracePoint> trace;
};

// Appendix-style schedule: random start, run to equilibrium, then retain
// num_samples snapshots sample_interval steps apart.
SampleRun sample(const Graph& g, const SamplerConfig& config);

// Resolved defaults for a given graph size (interval n^2, cap 200 n^2, ...).
SamplerConfig resolve_config(const SamplerConfig& config, int n);

}  // namespace hrg
