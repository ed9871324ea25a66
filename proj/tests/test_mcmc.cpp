#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "hrg/mcmc.hpp"
#include "test_support.hpp"

using namespace hrg;
namespace ts = test_support;

namespace {

Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph::from_edges(n, edges);
}

Graph cycle_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({std::min(i, (i + 1) % n),
                                               std::max(i, (i + 1) % n)});
  return Graph::from_edges(n, edges);
}

Graph complete_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Graph::from_edges(n, edges);
}

// Exact stationary distribution over topologies, from the enumeration
// oracle: P(D) = L(D) / sum L.
std::map<std::string, double> boltzmann_over_topologies(const Graph& g) {
  auto all = enumerate_dendrograms(g.vertex_count());
  std::map<std::string, double> prob;
  double total = 0.0;
  for (auto& d : all) {
    d.compute_stats(g);
    double l = std::exp(d.log_likelihood());
    prob[d.topology_signature()] += l;
    total += l;
  }
  for (auto& [sig, p] : prob) p /= total;
  return prob;
}

// Occupancy chi^2 against the exact distribution; states are recorded every
// `stride` steps so the chain has decorrelated between observations and the
// multinomial null of the test applies.
double occupancy_chi_squared(Chain& chain, const std::map<std::string, double>& expected,
                             long long steps, long long stride, long long* samples_out) {
  std::map<std::string, long long> counts;
  long long samples = 0;
  for (long long s = 1; s <= steps; ++s) {
    chain.step();
    if (s % stride == 0) {
      ++counts[chain.dendrogram().topology_signature()];
      ++samples;
    }
  }
  double stat = 0.0;
  for (const auto& [sig, p] : expected) {
    double exp_count = p * static_cast<double>(samples);
    REQUIRE(exp_count >= 10.0);  // chi^2 validity
    double diff = static_cast<double>(counts[sig]) - exp_count;
    stat += diff * diff / exp_count;
  }
  if (samples_out) *samples_out = samples;
  return stat;
}

}  // namespace

TEST_CASE("metropolis acceptance rule") {
  Rng rng(5);
  SUBCASE("nonnegative delta always accepts") {
    for (int i = 0; i < 100; ++i) CHECK(metropolis_accept(0.0, rng));
    for (int i = 0; i < 100; ++i) CHECK(metropolis_accept(3.7, rng));
  }
  SUBCASE("delta = -log 2 accepts half the time") {
    int accepted = 0;
    const int trials = 10'000;
    for (int i = 0; i < trials; ++i)
      if (metropolis_accept(-std::log(2.0), rng)) ++accepted;
    CHECK(std::abs(accepted / static_cast<double>(trials) - 0.5) < 0.02);
  }
}

TEST_CASE("proposals are uniform and leave the state alone") {
  Graph g = generate_er_graph(10, 0.3, 2);
  Chain chain(g, 77);
  std::string before = serialize_dendrogram(chain.dendrogram());

  SUBCASE("n=10: each non-root internal node at 1/8, variants at 1/2") {
    std::map<int, int> node_counts;
    int variant_one = 0;
    const int trials = 100'000;
    for (int t = 0; t < trials; ++t) {
      Move m = chain.propose_move();
      CHECK(m.node != chain.dendrogram().root());
      CHECK_FALSE(chain.dendrogram().is_leaf(m.node));
      ++node_counts[m.node];
      if (m.variant == 1) ++variant_one;
    }
    CHECK(node_counts.size() == 8);
    for (const auto& [node, count] : node_counts)
      CHECK(std::abs(count / static_cast<double>(trials) - 0.125) < 0.01);
    CHECK(std::abs(variant_one / static_cast<double>(trials) - 0.5) < 0.01);
    CHECK(serialize_dendrogram(chain.dendrogram()) == before);
  }
  SUBCASE("n=3 has a single candidate node") {
    Graph g3 = path_graph(3);
    Chain c3(g3, 1);
    for (int t = 0; t < 50; ++t) {
      Move m = c3.propose_move();
      CHECK(m.node != c3.dendrogram().root());
    }
  }
  SUBCASE("n=2 rejects proposals") {
    Graph g2 = Graph::from_edges(2, {{0, 1}});
    Chain c2(g2, 1);
    CHECK_THROWS_AS(c2.propose_move(), std::invalid_argument);
  }
}

TEST_CASE("local delta equals the full recomputation") {
  Rng rng(11);
  int moves_checked = 0;
  while (moves_checked < 500) {
    int n = 4 + static_cast<int>(rng.uniform_int(27));  // n <= 30
    Graph g = generate_er_graph(n, 0.05 + 0.5 * rng.next_double(), rng.next_u64());
    Chain chain(g, rng.next_u64());
    for (int k = 0; k < 25 && moves_checked < 500; ++k, ++moves_checked) {
      Move move = chain.propose_move();
      MoveEval eval = chain.evaluate_move(move);

      // Antisymmetry: the same (node, variant) applied twice is the
      // identity, so the reverse delta must be the exact negative.
      double before = chain.log_likelihood();
      Dendrogram copy = chain.dendrogram();
      copy.swap_subtrees(move.node, move.variant);
      copy.compute_stats(g);
      double full_delta = copy.log_likelihood() - before;
      CHECK(std::abs(eval.delta - full_delta) < 1e-9);

      chain.apply_move(eval);
      MoveEval reverse = chain.evaluate_move(move);
      CHECK(std::abs(reverse.delta + eval.delta) < 1e-12);
    }
  }
}

TEST_CASE("complete graph: every move is a tie and is accepted") {
  Graph g = complete_graph(8);
  Chain chain(g, 9);
  for (int s = 0; s < 500; ++s) {
    Move m = chain.propose_move();
    CHECK(chain.evaluate_move(m).delta == 0.0);
  }
  for (int s = 0; s < 500; ++s) CHECK(chain.step());
  CHECK(chain.log_likelihood() == 0.0);
}

TEST_CASE("cached log-likelihood stays synced over long runs") {
  Graph g = generate_er_graph(30, 0.2, 55);
  Chain chain(g, 56);
  chain.resync_interval = 10'000;
  for (int s = 0; s < 300'000; ++s) chain.step();  // resync throws on drift
  double cached = chain.log_likelihood();
  Dendrogram d = chain.dendrogram();
  d.compute_stats(g);
  CHECK(std::abs(cached - d.log_likelihood()) < 1e-9);
}

TEST_CASE("move relation is ergodic on n=4") {
  auto all = enumerate_dendrograms(4);
  for (const auto& start : all) {
    std::set<std::string> seen{start.topology_signature()};
    std::queue<Dendrogram> frontier;
    frontier.push(start);
    while (!frontier.empty()) {
      Dendrogram d = frontier.front();
      frontier.pop();
      for (int k = 0; k < d.internal_count(); ++k) {
        int node = d.leaf_count() + k;
        if (node == d.root()) continue;
        for (int variant : {1, 2}) {
          Dendrogram next = d;
          next.swap_subtrees(node, variant);
          if (seen.insert(next.topology_signature()).second) frontier.push(next);
        }
      }
    }
    CHECK(seen.size() == 15);
  }
}

TEST_CASE("stationary distribution matches the likelihood on n=4") {
  Graph g = path_graph(4);
  auto expected_map = boltzmann_over_topologies(g);
  REQUIRE(expected_map.size() == 15);

  Chain chain(g, 101);
  for (int s = 0; s < 10'000; ++s) chain.step();  // burn-in

  double stat = occupancy_chi_squared(chain, expected_map, 200'000, 10, nullptr);
  CHECK(stat < ts::chi_squared_critical(14, 0.01));
}

TEST_CASE("detailed balance on an exhaustively enumerable n=5 instance") {
  Graph g = cycle_graph(5);
  auto expected_map = boltzmann_over_topologies(g);
  REQUIRE(expected_map.size() == 105);

  Chain chain(g, 909);
  for (int s = 0; s < 20'000; ++s) chain.step();

  double stat = occupancy_chi_squared(chain, expected_map, 2'000'000, 10, nullptr);
  CHECK(stat < ts::chi_squared_critical(104, 0.01));
}

TEST_CASE("plateau detector") {
  PlateauPolicy policy;
  policy.window = 50;
  policy.tolerance = 2.0;
  SUBCASE("constant trace is a plateau") {
    std::vector<double> trace(60, -123.4);
    CHECK(detect_equilibrium(trace, policy));
  }
  SUBCASE("steep climb is not") {
    std::vector<double> trace;
    for (int i = 0; i < 60; ++i) trace.push_back(static_cast<double>(i));
    double slope = 0.0;
    CHECK_FALSE(detect_equilibrium(trace, policy, &slope));
    CHECK(slope == doctest::Approx(1.0));
  }
  SUBCASE("short traces are rejected") {
    std::vector<double> trace(10, 0.0);
    CHECK_THROWS_AS(detect_equilibrium(trace, policy), std::invalid_argument);
  }
}

TEST_CASE("sampling schedule") {
  SUBCASE("n=2 returns the unique tree") {
    Graph g = Graph::from_edges(2, {{0, 1}});
    SamplerConfig cfg;
    cfg.num_samples = 1;
    cfg.seed = 4;
    SampleRun run = sample(g, cfg);
    REQUIRE(run.samples.size() == 1);
    CHECK(run.samples[0].dendrogram.topology_signature() == "(0,1)");
    CHECK(run.burn_in.reason == "trivial");
  }
  SUBCASE("equal seeds give bit-identical sample lists") {
    Graph g = generate_er_graph(12, 0.3, 8);
    SamplerConfig cfg;
    cfg.num_samples = 10;
    cfg.sample_interval = 50;
    cfg.seed = 99;
    SampleRun a = sample(g, cfg);
    SampleRun b = sample(g, cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      CHECK(a.samples[i].log_likelihood == b.samples[i].log_likelihood);
      CHECK(serialize_dendrogram(a.samples[i].dendrogram) ==
            serialize_dendrogram(b.samples[i].dendrogram));
    }
    cfg.seed = 100;
    SampleRun c = sample(g, cfg);
    bool any_different = false;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
      if (serialize_dendrogram(a.samples[i].dendrogram) !=
          serialize_dendrogram(c.samples[i].dendrogram))
        any_different = true;
    CHECK(any_different);
  }
  SUBCASE("sampled-tree frequencies follow the likelihood on n=4") {
    Graph g = path_graph(4);
    auto expected_map = boltzmann_over_topologies(g);
    SamplerConfig cfg;
    cfg.num_samples = 20'000;
    cfg.sample_interval = 25;
    cfg.seed = 303;
    cfg.burn_in.cap_steps = 5'000;
    SampleRun run = sample(g, cfg);
    std::map<std::string, long long> counts;
    for (const auto& s : run.samples) ++counts[s.dendrogram.topology_signature()];
    double stat = 0.0;
    for (const auto& [sig, p] : expected_map) {
      double expected = p * static_cast<double>(run.samples.size());
      REQUIRE(expected >= 10.0);
      double diff = static_cast<double>(counts[sig]) - expected;
      stat += diff * diff / expected;
    }
    CHECK(stat < ts::chi_squared_critical(14, 0.01));
  }
  SUBCASE("burn-in on a structured n=50 graph stays within the cap") {
    // Two planted blocks of 25 with sparse cross links.
    std::vector<Edge> edges;
    Rng rng(61);
    for (int i = 0; i < 50; ++i)
      for (int j = i + 1; j < 50; ++j) {
        bool same = (i < 25) == (j < 25);
        if (rng.bernoulli(same ? 0.35 : 0.02)) edges.push_back({i, j});
      }
    Graph g = Graph::from_edges(50, edges);
    SamplerConfig cfg;
    cfg.num_samples = 1;
    cfg.sample_interval = 1;
    cfg.seed = 7;
    SampleRun run = sample(g, cfg);
    CHECK(run.burn_in.steps <= 200LL * 50 * 50);
    CHECK(run.burn_in.reason == "plateau");
    CHECK(run.trace.size() >= 2);
  }
  SUBCASE("stats invariants hold on every snapshot") {
    Graph g = generate_er_graph(15, 0.25, 21);
    SamplerConfig cfg;
    cfg.num_samples = 25;
    cfg.sample_interval = 40;
    cfg.seed = 5;
    SampleRun run = sample(g, cfg);
    for (const auto& s : run.samples) {
      long long pair_sum = 0, edge_sum = 0;
      for (int k = 0; k < s.dendrogram.internal_count(); ++k) {
        const auto& node = s.dendrogram.internal(15 + k);
        pair_sum += static_cast<long long>(node.left_leaves) * node.right_leaves;
        edge_sum += node.cross_edges;
      }
      CHECK(pair_sum == 15 * 14 / 2);
      CHECK(edge_sum == g.edge_count());
      CHECK(s.log_likelihood == doctest::Approx(s.dendrogram.log_likelihood()));
    }
  }
}
