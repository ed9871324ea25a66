#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hrg/evaluation.hpp"
#include "hrg/util.hpp"
#include "test_support.hpp"

using namespace hrg;

namespace {

std::vector<ScoredPair> make_scored(const std::vector<double>& pos,
                                    const std::vector<double>& neg, PairSet& positives) {
  std::vector<ScoredPair> scored;
  int v = 0;
  for (double s : pos) {
    scored.push_back({v, v + 1000, s});
    positives.insert(pair_key(v, v + 1000));
    ++v;
  }
  for (double s : neg) {
    scored.push_back({v, v + 1000, s});
    ++v;
  }
  return scored;
}

}  // namespace

TEST_CASE("AUC exact computation") {
  SUBCASE("perfect separation") {
    PairSet positives;
    auto scored = make_scored({0.9, 0.8}, {0.2, 0.1, 0.0}, positives);
    CHECK(auc(scored, positives).value == doctest::Approx(1.0));
  }
  SUBCASE("all ties give one half") {
    PairSet positives;
    auto scored = make_scored({1.0, 1.0}, {1.0, 1.0, 1.0}, positives);
    CHECK(auc(scored, positives).value == doctest::Approx(0.5));
  }
  SUBCASE("brute-force cross check: {3,1} vs {2,0}") {
    // Comparisons: 3>2, 3>0, 1<2, 1>0 -> 3 of 4.
    PairSet positives;
    auto scored = make_scored({3.0, 1.0}, {2.0, 0.0}, positives);
    CHECK(auc(scored, positives).value == doctest::Approx(0.75));
  }
  SUBCASE("empty classes are rejected") {
    PairSet positives;
    auto scored = make_scored({}, {0.4, 0.2}, positives);
    CHECK_THROWS_AS(auc(scored, positives), std::invalid_argument);
    PairSet all;
    auto scored2 = make_scored({0.4, 0.2}, {}, all);
    CHECK_THROWS_AS(auc(scored2, all), std::invalid_argument);
  }
  SUBCASE("positives outside the universe are rejected") {
    PairSet positives;
    auto scored = make_scored({1.0}, {0.0}, positives);
    positives.insert(pair_key(500, 501));
    CHECK_THROWS_AS(auc(scored, positives), std::invalid_argument);
  }
}

TEST_CASE("AUC invariances") {
  Rng rng(40);
  for (int trial = 0; trial < 10; ++trial) {
    PairSet positives;
    std::vector<double> pos, neg;
    for (int i = 0; i < 30; ++i) pos.push_back(rng.uniform_int(8));
    for (int i = 0; i < 70; ++i) neg.push_back(rng.uniform_int(8));
    auto scored = make_scored(pos, neg, positives);

    double forward = auc(scored, positives).value;

    // Reversal: negating scores flips every comparison; ties stay 1/2.
    auto reversed = scored;
    for (auto& sp : reversed) sp.score = -sp.score;
    double backward = auc(reversed, positives).value;
    CHECK(forward + backward == doctest::Approx(1.0).epsilon(1e-12));

    // Strictly monotone transforms preserve the ranking exactly.
    auto transformed = scored;
    for (auto& sp : transformed) sp.score = std::exp(sp.score) + 3.0;
    CHECK(auc(transformed, positives).value == forward);
  }
}

TEST_CASE("Monte Carlo AUC agrees with exact") {
  Rng rng(41);
  PairSet positives;
  std::vector<double> pos, neg;
  for (int i = 0; i < 400; ++i) pos.push_back(rng.next_double() + 0.2);
  for (int i = 0; i < 2000; ++i) neg.push_back(rng.next_double());
  auto scored = make_scored(pos, neg, positives);

  AucResult exact = auc(scored, positives);
  AucOptions mc_opts;
  mc_opts.exact_threshold = 0;  // force the Monte Carlo path
  mc_opts.mc_comparisons = 200'000;
  mc_opts.seed = 7;
  AucResult mc = auc(scored, positives, mc_opts);
  CHECK(exact.exact);
  CHECK_FALSE(mc.exact);
  CHECK(mc.comparisons >= 100'000);
  CHECK(mc.std_error > 0.0);
  CHECK(std::abs(mc.value - exact.value) < 3.0 * mc.std_error);
}

TEST_CASE("top-rank ratio") {
  SUBCASE("hit and miss") {
    PairSet positives;
    auto scored = make_scored({0.9}, std::vector<double>(99, 0.1), positives);
    rank_pairs(scored, 3);
    // One positive in a 100-pair universe: base rate 1%.
    CHECK(top_rank_ratio(scored, positives) == doctest::Approx(100.0));

    auto reversed = scored;
    for (auto& sp : reversed) sp.score = -sp.score;
    rank_pairs(reversed, 3);
    CHECK(top_rank_ratio(reversed, positives) == 0.0);
  }
  SUBCASE("random ranking averages to one") {
    Rng rng(42);
    const int trials = 4000;
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
      PairSet positives;
      std::vector<double> pos(30), neg(70);
      for (auto& s : pos) s = rng.next_double();
      for (auto& s : neg) s = rng.next_double();
      auto scored = make_scored(pos, neg, positives);
      rank_pairs(scored, rng.next_u64());
      total += top_rank_ratio(scored, positives);
    }
    // Indicator/base-rate has variance (1-p)/p ~ 2.33; 4000 trials give a
    // standard error of about 0.024.
    CHECK(std::abs(total / trials - 1.0) < 0.1);
  }
  SUBCASE("degenerate inputs are rejected") {
    PairSet positives;
    std::vector<ScoredPair> empty;
    CHECK_THROWS_AS(top_rank_ratio(empty, positives), std::invalid_argument);
    auto scored = make_scored({}, {0.5}, positives);
    CHECK_THROWS_AS(top_rank_ratio(scored, positives), std::invalid_argument);
  }
}

TEST_CASE("experiment harness") {
  // Two planted blocks so the HRG method has something to find.
  std::vector<Edge> edges;
  Rng rng(71);
  for (int i = 0; i < 24; ++i)
    for (int j = i + 1; j < 24; ++j) {
      bool same = (i < 12) == (j < 12);
      if (rng.bernoulli(same ? 0.6 : 0.05)) edges.push_back({i, j});
    }
  Graph g = Graph::from_edges(24, edges);

  ExperimentConfig cfg;
  cfg.methods = {Method::common_neighbors, Method::hrg};
  cfg.fractions_known = {0.75, 1.0};
  cfg.trials = 3;
  cfg.seed = 5;
  cfg.sampler.num_samples = 8;
  cfg.sampler.sample_interval = 200;
  cfg.sampler.burn_in.cap_steps = 4000;
  cfg.sampler.burn_in.window = 8;

  ExperimentResult result = run_experiment(g, cfg);

  SUBCASE("f=1.0 trials are skipped with a reason") {
    CHECK(result.skipped.size() == 3);
    for (const auto& s : result.skipped) {
      CHECK(s.fraction_known == 1.0);
      CHECK_FALSE(s.reason.empty());
    }
  }
  SUBCASE("records cover method x fraction x trial") {
    CHECK(result.records.size() == 2 * 3);  // two methods, three f=0.75 trials
    for (const auto& rec : result.records) {
      CHECK(rec.auc >= 0.0);
      CHECK(rec.auc <= 1.0);
      CHECK(rec.top_rank_ratio >= 0.0);
      CHECK(rec.fraction_known == 0.75);
    }
    CHECK(result.aggregates.size() == 2);
    for (const auto& agg : result.aggregates) CHECK(agg.trials == 3);
  }
  SUBCASE("reruns are bit-identical, including the HRG method") {
    ExperimentResult again = run_experiment(g, cfg);
    CHECK(experiment_to_csv(again) == experiment_to_csv(result));
    CHECK(experiment_to_json(again) == experiment_to_json(result));
    ExperimentConfig threaded = cfg;
    threaded.threads = 4;
    ExperimentResult parallel = run_experiment(g, threaded);
    CHECK(experiment_to_csv(parallel) == experiment_to_csv(result));
  }
  SUBCASE("CSV and JSON render the records") {
    std::string csv = experiment_to_csv(result);
    CHECK(csv.rfind("method,fraction_known,trial,auc,", 0) == 0);
    CHECK(experiment_to_json(result).find("\"aggregates\"") != std::string::npos);
    std::string timings = experiment_timings(result);
    CHECK(timings.find("runtime_ms") != std::string::npos);
  }
}

TEST_CASE("invalid experiment configs are rejected") {
  Graph g = generate_er_graph(10, 0.3, 1);
  ExperimentConfig cfg;
  cfg.fractions_known = {0.0};
  CHECK_THROWS_AS(run_experiment(g, cfg), std::invalid_argument);
  cfg.fractions_known = {0.5};
  cfg.trials = 0;
  CHECK_THROWS_AS(run_experiment(g, cfg), std::invalid_argument);
}

TEST_CASE("control presets are wired") {
  Preset er = er_control_preset(3);
  CHECK(er.source.kind == GraphSource::Kind::erdos_renyi);
  CHECK(er.source.n == 500);
  CHECK(er.config.trials >= 25);
  Graph g = er.source.make(1);
  CHECK(g.vertex_count() == 500);

  Preset cm = cm_control_preset(3);
  CHECK(cm.source.kind == GraphSource::Kind::power_law_cm);
  Graph g2 = cm.source.make(1);
  CHECK(g2.vertex_count() == 500);
  CHECK(g2.edge_count() > 0);
}
