#include "hrg/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hrg {

bool metropolis_accept(double delta, Rng& rng) {
  if (delta >= 0.0) return true;
  return rng.next_double() < std::exp(delta);
}

bool detect_equilibrium(const std::vector<double>& trace, const PlateauPolicy& policy,
                        double* slope_out) {
  const int w = policy.window;
  if (static_cast<int>(trace.size()) < w)
    throw std::invalid_argument("trace shorter than detector window");
  // Least-squares slope against the point index over the last w points.
  const double* y = trace.data() + (trace.size() - w);
  double mean_x = (w - 1) / 2.0;
  double mean_y = 0.0;
  for (int i = 0; i < w; ++i) mean_y += y[i];
  mean_y /= w;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < w; ++i) {
    double dx = i - mean_x;
    sxx += dx * dx;
    sxy += dx * (y[i] - mean_y);
  }
  double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  if (slope_out) *slope_out = slope;
  return std::abs(slope) * w <= policy.tolerance;
}

Chain::Chain(const Graph& g, std::uint64_t seed)
    : Chain(g, Dendrogram::random(g.vertex_count(), derive_seed(seed, {stream_tag("init")})),
            seed) {}

Chain::Chain(const Graph& g, Dendrogram start, std::uint64_t seed)
    : graph_(&g),
      dendrogram_(std::move(start)),
      rng_(derive_seed(seed, {stream_tag("chain")})) {
  if (dendrogram_.leaf_count() != g.vertex_count())
    throw std::invalid_argument("start dendrogram does not match graph");
  dendrogram_.compute_stats(g);
  log_likelihood_ = dendrogram_.log_likelihood();
  mark_.assign(g.vertex_count(), 0);
}

Move Chain::propose_move() {
  const int n = dendrogram_.leaf_count();
  if (n < 3) throw std::invalid_argument("no moves exist for n < 3");
  // Internal ids n..2n-2 minus the root: n-2 candidates.
  long long k = rng_.uniform_int(n - 2);
  int node = n + static_cast<int>(k);
  if (node >= dendrogram_.root()) ++node;  // skip the root id
  int variant = 1 + static_cast<int>(rng_.uniform_int(2));
  return {node, variant};
}

long long Chain::cross_edge_count(int node_a, int node_b) {
  // Mark the leaves of one side, then walk adjacency lists of the other.
  // Iterate the side with fewer leaves to bound the adjacency scan.
  dendrogram_.collect_leaves(node_a, leaves_a_);
  dendrogram_.collect_leaves(node_b, leaves_b_);
  const std::vector<int>& walk = leaves_a_.size() <= leaves_b_.size() ? leaves_a_ : leaves_b_;
  const std::vector<int>& marked = leaves_a_.size() <= leaves_b_.size() ? leaves_b_ : leaves_a_;
  ++mark_epoch_;
  for (int v : marked) mark_[v] = mark_epoch_;
  long long count = 0;
  for (int v : walk)
    for (int w : graph_->neighbors(v))
      if (mark_[w] == mark_epoch_) ++count;
  return count;
}

MoveEval Chain::evaluate_move(const Move& move) {
  const Dendrogram& d = dendrogram_;
  const auto& r = d.internal(move.node);
  const int p_id = d.parent(move.node);
  const auto& p = d.internal(p_id);
  const int u = d.sibling(move.node);

  // x leaves r's children, y stays; after the swap r = (u, y), parent = (r, x).
  const int x = move.variant == 1 ? r.left : r.right;
  const int y = move.variant == 1 ? r.right : r.left;

  const long long e_r = r.cross_edges;
  const long long e_p = p.cross_edges;
  const long long cross_uy = cross_edge_count(u, y);

  const long long new_e_r = cross_uy;
  const long long new_e_p = e_p - cross_uy + e_r;

  const double cnt_u = d.leaves_under(u);
  const double cnt_x = d.leaves_under(x);
  const double cnt_y = d.leaves_under(y);

  const double old_pairs_r = cnt_x * cnt_y;
  const double old_pairs_p = (cnt_x + cnt_y) * cnt_u;
  const double new_pairs_r = cnt_u * cnt_y;
  const double new_pairs_p = (cnt_u + cnt_y) * cnt_x;

  MoveEval eval;
  eval.move = move;
  eval.new_cross_node = new_e_r;
  eval.new_cross_parent = new_e_p;
  eval.delta = log_likelihood_term(new_e_r / new_pairs_r, new_pairs_r) +
               log_likelihood_term(new_e_p / new_pairs_p, new_pairs_p) -
               log_likelihood_term(e_r / old_pairs_r, old_pairs_r) -
               log_likelihood_term(e_p / old_pairs_p, old_pairs_p);
  return eval;
}

void Chain::apply_move(const MoveEval& eval) {
  const int p_id = dendrogram_.parent(eval.move.node);
  dendrogram_.swap_subtrees(eval.move.node, eval.move.variant);

  auto& r = dendrogram_.nodes_[eval.move.node - dendrogram_.leaf_count()];
  auto& p = dendrogram_.nodes_[p_id - dendrogram_.leaf_count()];
  r.cross_edges = eval.new_cross_node;
  r.prob = static_cast<double>(r.cross_edges) /
           (static_cast<double>(r.left_leaves) * r.right_leaves);
  p.cross_edges = eval.new_cross_parent;
  p.prob = static_cast<double>(p.cross_edges) /
           (static_cast<double>(p.left_leaves) * p.right_leaves);
  log_likelihood_ += eval.delta;
}

bool Chain::step() {
  ++step_;
  Move move = propose_move();
  MoveEval eval = evaluate_move(move);
  bool accepted = metropolis_accept(eval.delta, rng_);
  if (accepted) apply_move(eval);
  if (resync_interval > 0 && step_ % resync_interval == 0) resync();
  return accepted;
}

void Chain::resync() {
  dendrogram_.compute_stats(*graph_);
  double fresh = dendrogram_.log_likelihood();
  if (std::abs(fresh - log_likelihood_) > 1e-9)
    throw std::logic_error("cached log-likelihood drifted beyond 1e-9");
  log_likelihood_ = fresh;
}

SamplerConfig resolve_config(const SamplerConfig& config, int n) {
  SamplerConfig c = config;
  const long long n2 = static_cast<long long>(n) * n;
  if (c.sample_interval <= 0) c.sample_interval = std::max<long long>(1, n2);
  if (c.burn_in.cap_steps <= 0) c.burn_in.cap_steps = 200 * n2;
  if (c.trace_stride <= 0)
    c.trace_stride = std::max<long long>(1, n2 / std::max(1, c.burn_in.window));
  if (c.num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
  if (c.burn_in.window < 2) throw std::invalid_argument("detector window must be >= 2");
  if (c.burn_in.cap_steps < c.burn_in.window)
    throw std::invalid_argument("burn-in cap below detector window");
  return c;
}

SampleRun sample(const Graph& g, const SamplerConfig& config) {
  const int n = g.vertex_count();
  if (n < 2) throw std::invalid_argument("sampling needs n >= 2");

  SampleRun run;
  if (n == 2) {
    // Single topology; the chain has no moves.
    Dendrogram d(2, {{0, 1}});
    d.compute_stats(g);
    double ll = d.log_likelihood();
    for (int s = 0; s < std::max(1, config.num_samples); ++s)
      run.samples.push_back({d, ll});
    run.burn_in = {0, "trivial", 0.0};
    run.trace.push_back({0, ll});
    return run;
  }

  const SamplerConfig cfg = resolve_config(config, n);
  Chain chain(g, cfg.seed);
  chain.resync_interval = cfg.resync_interval;

  std::vector<double> window_trace;
  run.trace.push_back({0, chain.log_likelihood()});

  // Burn-in: step until the plateau detector fires or the cap is reached.
  BurnInDiagnostics diag;
  for (;;) {
    if (chain.step_count() >= cfg.burn_in.cap_steps) {
      diag = {chain.step_count(), "cap", 0.0};
      if (static_cast<int>(window_trace.size()) >= cfg.burn_in.window)
        detect_equilibrium(window_trace, cfg.burn_in, &diag.slope);
      break;
    }
    chain.step();
    if (chain.step_count() % cfg.trace_stride == 0) {
      window_trace.push_back(chain.log_likelihood());
      run.trace.push_back({chain.step_count(), chain.log_likelihood()});
      if (static_cast<int>(window_trace.size()) >= cfg.burn_in.window) {
        double slope = 0.0;
        if (detect_equilibrium(window_trace, cfg.burn_in, &slope)) {
          diag = {chain.step_count(), "plateau", slope};
          break;
        }
      }
    }
  }
  run.burn_in = diag;

  // Sampling: snapshots at regular intervals, resynced so the stored
  // log-likelihood is exact.
  run.samples.reserve(cfg.num_samples);
  for (int s = 0; s < cfg.num_samples; ++s) {
    for (long long k = 0; k < cfg.sample_interval; ++k) {
      chain.step();
      if (chain.step_count() % cfg.trace_stride == 0)
        run.trace.push_back({chain.step_count(), chain.log_likelihood()});
    }
    chain.resync();
    run.samples.push_back({chain.dendrogram(), chain.log_likelihood()});
  }
  return run;
}

}  // namespace hrg
