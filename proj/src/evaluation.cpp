#include "hrg/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "hrg/parallel.hpp"
#include "hrg/util.hpp"

namespace hrg {

PairSet make_pair_set(const std::vector<Edge>& edges) {
  PairSet set;
  set.reserve(edges.size() * 2);
  for (const auto& [i, j] : edges) set.insert(pair_key(i, j));
  return set;
}

AucResult auc(const std::vector<ScoredPair>& scored, const PairSet& positives,
              const AucOptions& options) {
  std::vector<double> pos, neg;
  pos.reserve(positives.size());
  neg.reserve(scored.size());
  for (const auto& sp : scored) {
    if (positives.count(pair_key(sp.i, sp.j)))
      pos.push_back(sp.score);
    else
      neg.push_back(sp.score);
  }
  if (pos.size() != positives.size())
    throw std::invalid_argument("positives must be a subset of the scored universe");
  if (pos.empty() || neg.empty())
    throw std::invalid_argument("AUC undefined without both positives and negatives");

  AucResult result;
  if (static_cast<long long>(scored.size()) <= options.exact_threshold) {
    // Midrank Mann-Whitney: ties contribute exactly 1/2.
    std::vector<std::pair<double, bool>> all;
    all.reserve(scored.size());
    for (double s : pos) all.emplace_back(s, true);
    for (double s : neg) all.emplace_back(s, false);
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < all.size()) {
      std::size_t j = i;
      while (j < all.size() && all[j].first == all[i].first) ++j;
      double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
      for (std::size_t k = i; k < j; ++k)
        if (all[k].second) pos_rank_sum += midrank;
      i = j;
    }
    double p = static_cast<double>(pos.size());
    double n = static_cast<double>(neg.size());
    result.value = (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
    result.exact = true;
    return result;
  }

  // Monte Carlo: sampled positive-negative comparisons with a standard
  // error from the outcome variance.
  const long long k = std::max<long long>(options.mc_comparisons, 100'000);
  Rng rng(derive_seed(options.seed, {stream_tag("auc-mc")}));
  double sum = 0.0, sum_sq = 0.0;
  for (long long c = 0; c < k; ++c) {
    double ps = pos[rng.uniform_int(static_cast<long long>(pos.size()))];
    double ns = neg[rng.uniform_int(static_cast<long long>(neg.size()))];
    double outcome = ps > ns ? 1.0 : (ps == ns ? 0.5 : 0.0);
    sum += outcome;
    sum_sq += outcome * outcome;
  }
  result.value = sum / static_cast<double>(k);
  double var = (sum_sq - sum * sum / static_cast<double>(k)) / static_cast<double>(k - 1);
  result.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(k));
  result.exact = false;
  result.comparisons = k;
  return result;
}

double top_rank_ratio(const std::vector<ScoredPair>& ranked, const PairSet& positives) {
  if (ranked.empty()) throw std::invalid_argument("empty ranking");
  if (positives.empty()) throw std::invalid_argument("no positives");
  double base_rate =
      static_cast<double>(positives.size()) / static_cast<double>(ranked.size());
  bool hit = positives.count(pair_key(ranked.front().i, ranked.front().j)) > 0;
  return (hit ? 1.0 : 0.0) / base_rate;
}

Graph GraphSource::make(std::uint64_t seed) const {
  switch (kind) {
    case Kind::fixed: return graph;
    case Kind::erdos_renyi: return generate_er_graph(n, er_p, seed);
    case Kind::power_law_cm: {
      auto degrees = power_law_degree_sequence(
          n, alpha, k_min, k_max > 0 ? k_max : n - 1,
          derive_seed(seed, {stream_tag("degrees")}));
      return generate_configuration_model(degrees,
                                          derive_seed(seed, {stream_tag("matching")}));
    }
  }
  throw std::logic_error("bad GraphSource kind");
}

namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& values) {
  MeanSe out;
  if (values.empty()) return out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(values.size() - 1)) /
             std::sqrt(static_cast<double>(values.size()));
  }
  return out;
}

struct TrialSlot {
  std::vector<TrialRecord> records;  // one per method, fixed order
  bool skipped = false;
  std::string skip_reason;
};

}  // namespace

static ExperimentResult run_experiment_impl(const GraphSource& source,
                                            const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  for (double f : config.fractions_known)
    if (f <= 0.0 || f > 1.0)
      throw std::invalid_argument("fractions known must be in (0,1]");

  const std::size_t n_fractions = config.fractions_known.size();
  const long long total = static_cast<long long>(n_fractions) * config.trials;
  std::vector<TrialSlot> slots(total);

  parallel_for(total, config.threads, [&](long long t) {
    const std::size_t fi = static_cast<std::size_t>(t) / config.trials;
    const int ti = static_cast<int>(t % config.trials);
    const double f = config.fractions_known[fi];
    TrialSlot& slot = slots[t];

    Graph g = source.kind == GraphSource::Kind::fixed
                  ? source.graph
                  : source.make(derive_seed(config.seed,
                                            {stream_tag("control-graph"), fi,
                                             static_cast<std::uint64_t>(ti)}));

    EdgeSplit split = remove_random_edges(
        g, 1.0 - f,
        derive_seed(config.seed,
                    {stream_tag("removal"), fi, static_cast<std::uint64_t>(ti)}));
    if (split.removed.empty()) {
      slot.skipped = true;
      slot.skip_reason = "no edges removed at this fraction";
      return;
    }
    PairSet positives = make_pair_set(split.removed);

    for (Method method : config.methods) {
      auto started = std::chrono::steady_clock::now();
      const std::uint64_t method_seed =
          derive_seed(config.seed, {stream_tag("method"), stream_tag(method_name(method)),
                                    fi, static_cast<std::uint64_t>(ti)});
      std::vector<ScoredPair> scored;
      if (method == Method::hrg) {
        SamplerConfig sc = config.sampler;
        sc.seed = method_seed;
        SampleRun run = sample(split.observed, sc);
        scored = hrg_scores(split.observed, run.samples);
      } else {
        scored = score_non_edges(split.observed, method);
      }
      AucOptions opts = config.auc_options;
      opts.seed = method_seed;
      AucResult a = auc(scored, positives, opts);
      rank_pairs(scored, method_seed);
      double ratio = top_rank_ratio(scored, positives);
      double ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - started)
                      .count();
      slot.records.push_back(
          {method, f, ti, a.value, a.std_error, a.exact, ratio, ms});
    }
  });

  ExperimentResult result;
  for (long long t = 0; t < total; ++t) {
    const std::size_t fi = static_cast<std::size_t>(t) / config.trials;
    const int ti = static_cast<int>(t % config.trials);
    if (slots[t].skipped) {
      result.skipped.push_back({config.fractions_known[fi], ti, slots[t].skip_reason});
      continue;
    }
    for (const auto& rec : slots[t].records) result.records.push_back(rec);
  }

  for (std::size_t fi = 0; fi < n_fractions; ++fi) {
    for (Method method : config.methods) {
      std::vector<double> aucs, ratios;
      for (const auto& rec : result.records)
        if (rec.method == method && rec.fraction_known == config.fractions_known[fi]) {
          aucs.push_back(rec.auc);
          ratios.push_back(rec.top_rank_ratio);
        }
      if (aucs.empty()) continue;
      auto a = mean_and_se(aucs);
      auto r = mean_and_se(ratios);
      result.aggregates.push_back({method, config.fractions_known[fi],
                                   static_cast<int>(aucs.size()), a.mean, a.se, r.mean,
                                   r.se});
    }
  }
  return result;
}

ExperimentResult run_experiment(const Graph& g, const ExperimentConfig& config) {
  GraphSource source;
  source.kind = GraphSource::Kind::fixed;
  source.graph = g;
  return run_experiment_impl(source, config);
}

ExperimentResult run_experiment(const GraphSource& source, const ExperimentConfig& config) {
  return run_experiment_impl(source, config);
}

Preset er_control_preset(std::uint64_t seed) {
  Preset p;
  p.source.kind = GraphSource::Kind::erdos_renyi;
  p.source.n = 500;
  p.source.er_p = 5.0 / 499.0;  // mean degree 5
  p.config.seed = seed;
  p.config.fractions_known = {0.5};
  p.config.trials = 25;
  p.config.sampler.num_samples = 12;
  p.config.sampler.sample_interval = 20'000;
  p.config.sampler.burn_in.cap_steps = 2'500'000;
  p.config.sampler.burn_in.window = 32;
  p.config.sampler.trace_stride = 4'000;
  return p;
}

Preset cm_control_preset(std::uint64_t seed) {
  Preset p = er_control_preset(seed);
  p.source.kind = GraphSource::Kind::power_law_cm;
  p.source.alpha = 2.5;
  // Minimum degree 3: with k_min=1 the graph is dominated by degree-one
  // vertices and removing an edge drags both endpoints' observed degrees
  // toward zero, which inverts the degree-product signal.
  p.source.k_min = 3;
  p.source.k_max = 0;
  p.config.fractions_known = {0.75};
  p.config.trials = 12;
  return p;
}

std::string experiment_to_json(const ExperimentResult& r) {
  nlohmann::json j;
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"method", method_name(rec.method)},
                       {"fraction_known", rec.fraction_known},
                       {"trial", rec.trial},
                       {"auc", rec.auc},
                       {"auc_std_error", rec.auc_std_error},
                       {"auc_exact", rec.auc_exact},
                       {"top_rank_ratio", rec.top_rank_ratio}});
  }
  j["trials"] = records;
  nlohmann::json aggregates = nlohmann::json::array();
  for (const auto& agg : r.aggregates) {
    aggregates.push_back({{"method", method_name(agg.method)},
                          {"fraction_known", agg.fraction_known},
                          {"trials", agg.trials},
                          {"mean_auc", agg.mean_auc},
                          {"se_auc", agg.se_auc},
                          {"mean_top_rank_ratio", agg.mean_ratio},
                          {"se_top_rank_ratio", agg.se_ratio}});
  }
  j["aggregates"] = aggregates;
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& s : r.skipped)
    skipped.push_back(
        {{"fraction_known", s.fraction_known}, {"trial", s.trial}, {"reason", s.reason}});
  j["skipped"] = skipped;
  return j.dump(2) + "\n";
}

std::string experiment_to_csv(const ExperimentResult& r) {
  std::string out = "method,fraction_known,trial,auc,auc_std_error,top_rank_ratio\n";
  for (const auto& rec : r.records) {
    out += std::string(method_name(rec.method)) + "," + format_double(rec.fraction_known) +
           "," + std::to_string(rec.trial) + "," + format_double(rec.auc) + "," +
           format_double(rec.auc_std_error) + "," + format_double(rec.top_rank_ratio) + "\n";
  }
  return out;
}

std::string experiment_timings(const ExperimentResult& r) {
  std::string out = "method fraction_known trial runtime_ms\n";
  for (const auto& rec : r.records) {
    out += std::string(method_name(rec.method)) + " " + format_double(rec.fraction_known) +
           " " + std::to_string(rec.trial) + " " + format_fixed(rec.runtime_ms, 3) + "\n";
  }
  return out;
}

}  // namespace hrg
