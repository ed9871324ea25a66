#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hrg/consensus.hpp"
#include "hrg/evaluation.hpp"
#include "hrg/graph.hpp"
#include "hrg/link_prediction.hpp"
#include "hrg/mcmc.hpp"
#include "hrg/parallel.hpp"
#include "hrg/resample.hpp"
#include "hrg/svg.hpp"
#include "hrg/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "hrg 1.0.0";

// Exit codes: 0 success, 1 computation error, 2 usage or I/O error.
constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

// Tracks everything written so a failed command leaves no partial outputs.
class OutputDir {
 public:
  explicit OutputDir(const std::string& path) : dir_(path) {
    created_ = !fs::exists(dir_);
    fs::create_directories(dir_);
  }

  OutputDir(const OutputDir&) = delete;

  ~OutputDir() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& f : files_) fs::remove(f, ec);
    if (created_) fs::remove(dir_, ec);
  }

  void write(const std::string& name, std::string_view content) {
    fs::path p = dir_ / name;
    hrg::write_text_file(p.string(), content);
    files_.push_back(p);
  }

  const fs::path& path() const { return dir_; }
  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  bool created_ = false;
  bool committed_ = false;
  std::vector<fs::path> files_;
};

hrg::ParsedGraph load_graph(const std::string& path) {
  return hrg::parse_edge_list(hrg::read_text_file(path));
}

json base_manifest(const std::string& command, const std::vector<std::string>& argv) {
  json m;
  m["tool"] = kToolVersion;
  m["command"] = command;
  m["argv"] = argv;
  return m;
}

struct SampleDir {
  std::vector<hrg::DendrogramSample> samples;
  std::vector<std::string> labels;  // empty when labels.json is absent
  int n = 0;
};

SampleDir load_sample_dir(const std::string& path) {
  SampleDir out;
  json manifest = json::parse(hrg::read_text_file((fs::path(path) / "manifest.json").string()));
  for (const auto& entry : manifest.at("samples")) {
    std::string file = entry.at("file").get<std::string>();
    hrg::Dendrogram d =
        hrg::deserialize_dendrogram(hrg::read_text_file((fs::path(path) / file).string()));
    out.samples.push_back({std::move(d), entry.at("loglik").get<double>()});
  }
  if (out.samples.empty()) throw std::runtime_error("sample directory is empty");
  out.n = out.samples[0].dendrogram.leaf_count();
  fs::path labels_file = fs::path(path) / "labels.json";
  if (fs::exists(labels_file)) {
    json labels = json::parse(hrg::read_text_file(labels_file.string()));
    out.labels = labels.get<std::vector<std::string>>();
  }
  return out;
}

hrg::ChartSpec chart_spec(const std::string& title, const std::string& x,
                          const std::string& y) {
  hrg::ChartSpec s;
  s.title = title;
  s.x_label = x;
  s.y_label = y;
  return s;
}

json sampler_manifest(const hrg::SamplerConfig& cfg) {
  return json{{"num_samples", cfg.num_samples},
              {"sample_interval", cfg.sample_interval},
              {"burnin_cap", cfg.burn_in.cap_steps},
              {"burnin_window", cfg.burn_in.window},
              {"burnin_tolerance", cfg.burn_in.tolerance},
              {"resync_interval", cfg.resync_interval},
              {"trace_stride", cfg.trace_stride}};
}

struct SamplerFlags {
  CLI::Option* samples = nullptr;
  CLI::Option* interval = nullptr;
  CLI::Option* cap = nullptr;
  CLI::Option* window = nullptr;
  CLI::Option* tolerance = nullptr;
};

SamplerFlags add_sampler_flags(CLI::App* cmd, hrg::SamplerConfig& sampler) {
  SamplerFlags f;
  f.samples = cmd->add_option("--samples", sampler.num_samples, "retained dendrogram samples")
                  ->envname("HRG_SAMPLES")
                  ->check(CLI::PositiveNumber);
  f.interval = cmd->add_option("--interval", sampler.sample_interval,
                               "steps between retained samples (0 = n^2)")
                   ->envname("HRG_INTERVAL");
  f.cap = cmd->add_option("--burnin-cap", sampler.burn_in.cap_steps,
                          "hard burn-in cap in steps (0 = 200 n^2)")
              ->envname("HRG_BURNIN_CAP");
  f.window = cmd->add_option("--burnin-window", sampler.burn_in.window,
                             "plateau detector window (trace points)");
  f.tolerance = cmd->add_option("--burnin-tolerance", sampler.burn_in.tolerance,
                                "plateau slope tolerance (nats per window)");
  return f;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string input;
  std::string out_dir;
  std::uint64_t seed = 1;
  int threads = 1;
  int chains = 1;
  hrg::SamplerConfig sampler;
  bool export_tables = false;
};

int run_fit(const FitArgs& args, const std::vector<std::string>& argv) {
  hrg::ParsedGraph parsed = load_graph(args.input);
  const hrg::Graph& g = parsed.graph;
  if (g.vertex_count() < 2) throw std::runtime_error("need at least 2 vertices to fit");

  std::vector<hrg::SampleRun> runs(args.chains);
  hrg::parallel_for(args.chains, args.threads, [&](long long c) {
    hrg::SamplerConfig cfg = args.sampler;
    cfg.seed = hrg::derive_seed(args.seed,
                                {hrg::stream_tag("fit-chain"), static_cast<std::uint64_t>(c)});
    runs[c] = hrg::sample(g, cfg);
  });

  OutputDir out(args.out_dir);
  json manifest = base_manifest("fit", argv);
  manifest["format"] = "hrg-samples v1";
  manifest["input"] = args.input;
  manifest["n"] = g.vertex_count();
  manifest["m"] = g.edge_count();
  manifest["seed"] = args.seed;
  manifest["chains"] = args.chains;
  manifest["pooled"] = args.chains > 1;
  manifest["sampler"] = sampler_manifest(hrg::resolve_config(args.sampler, g.vertex_count()));
  manifest["labels_file"] = "labels.json";

  json samples = json::array();
  json burnin = json::array();
  std::string trace_csv = "chain,step,loglik\n";
  int index = 0;
  for (int c = 0; c < args.chains; ++c) {
    const auto& run = runs[c];
    burnin.push_back({{"chain", c},
                      {"steps", run.burn_in.steps},
                      {"reason", run.burn_in.reason},
                      {"slope", run.burn_in.slope}});
    for (const auto& tp : run.trace)
      trace_csv += std::to_string(c) + "," + std::to_string(tp.step) + "," +
                   hrg::format_double(tp.log_likelihood) + "\n";
    for (const auto& s : run.samples) {
      char name[32];
      std::snprintf(name, sizeof(name), "sample_%04d.hrg", index);
      out.write(name, hrg::serialize_dendrogram(s.dendrogram));
      if (args.export_tables) {
        std::snprintf(name, sizeof(name), "sample_%04d.table.csv", index);
        out.write(name, hrg::dendrogram_table(s.dendrogram));
      }
      std::snprintf(name, sizeof(name), "sample_%04d.hrg", index);
      samples.push_back({{"file", name}, {"loglik", s.log_likelihood}});
      ++index;
    }
  }
  manifest["samples"] = samples;
  manifest["burn_in"] = burnin;

  json labels = parsed.labels;
  out.write("labels.json", labels.dump(2) + "\n");
  out.write("trace.csv", trace_csv);
  out.write("manifest.json", manifest.dump(2) + "\n");
  out.commit();

  double best = runs[0].samples[0].log_likelihood;
  for (const auto& run : runs)
    for (const auto& s : run.samples) best = std::max(best, s.log_likelihood);
  std::cerr << "fit: " << index << " samples, best loglik " << hrg::format_double(best)
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct ResampleArgs {
  std::string sample_dir;
  std::string out_dir;
  std::string original;  // optional edge list for overlays
  int per_dendrogram = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  std::vector<std::string> formats;
  std::string clustering = "local";
};

int run_resample(const ResampleArgs& args, const std::vector<std::string>& argv) {
  SampleDir dir = load_sample_dir(args.sample_dir);
  hrg::ClusteringKind kind = args.clustering == "global"
                                 ? hrg::ClusteringKind::global_transitivity
                                 : hrg::ClusteringKind::average_local;
  hrg::ResampleReport report =
      hrg::resample_report(dir.samples, args.per_dendrogram, args.seed, kind, args.threads);

  OutputDir out(args.out_dir);
  out.write("report.json", hrg::resample_report_to_json(report));
  out.write("degree_distribution.csv", hrg::histogram_csv(report.degree_distribution, "degree"));
  out.write("distance_distribution.csv",
            hrg::histogram_csv(report.distance_distribution, "distance"));

  bool want_svg =
      std::find(args.formats.begin(), args.formats.end(), "svg") != args.formats.end();
  if (want_svg) {
    hrg::Series resampled_deg{"resampled", {}, {}, ""};
    for (std::size_t b = 0; b < report.degree_distribution.size(); ++b)
      resampled_deg.points.emplace_back(static_cast<double>(b),
                                        report.degree_distribution[b]);
    hrg::Series resampled_dist{"resampled", {}, {}, ""};
    for (std::size_t b = 1; b < report.distance_distribution.size(); ++b)
      resampled_dist.points.emplace_back(static_cast<double>(b),
                                         report.distance_distribution[b]);
    std::vector<hrg::Series> deg_series{resampled_deg};
    std::vector<hrg::Series> dist_series{resampled_dist};
    if (!args.original.empty()) {
      hrg::GraphStatistics orig = hrg::graph_statistics(load_graph(args.original).graph, kind);
      hrg::Series od{"original", {}, {}, ""};
      long long total = 0;
      for (long long v : orig.degree_histogram) total += v;
      for (std::size_t b = 0; b < orig.degree_histogram.size(); ++b)
        od.points.emplace_back(static_cast<double>(b),
                               total > 0 ? static_cast<double>(orig.degree_histogram[b]) / total
                                         : 0.0);
      deg_series.insert(deg_series.begin(), od);
      hrg::Series od2{"original", {}, {}, ""};
      long long dist_total = 0;
      for (long long v : orig.distance_histogram) dist_total += v;
      for (std::size_t b = 1; b < orig.distance_histogram.size(); ++b)
        od2.points.emplace_back(
            static_cast<double>(b),
            dist_total > 0 ? static_cast<double>(orig.distance_histogram[b]) / dist_total : 0.0);
      dist_series.insert(dist_series.begin(), od2);
    }
    out.write("degree_distribution.svg",
              hrg::render_chart_svg(
                  chart_spec("Degree distribution", "degree", "fraction of vertices"),
                  deg_series));
    out.write("distance_distribution.svg",
              hrg::render_chart_svg(chart_spec("Vertex-vertex distance distribution",
                                               "distance", "fraction of pairs"),
                                    dist_series));
  }

  json manifest = base_manifest("resample", argv);
  manifest["sample_dir"] = args.sample_dir;
  manifest["per_dendrogram"] = args.per_dendrogram;
  manifest["seed"] = args.seed;
  manifest["clustering"] = args.clustering;
  manifest["resamples"] = report.resamples;
  out.write("manifest.json", manifest.dump(2) + "\n");
  out.commit();
  return 0;
}

// ---------------------------------------------------------------------------

struct ConsensusArgs {
  std::string sample_dir;
  std::string out_dir;
  double exponent = 2.0;
};

int run_consensus(const ConsensusArgs& args, const std::vector<std::string>& argv) {
  SampleDir dir = load_sample_dir(args.sample_dir);
  hrg::Hierarchy h = hrg::consensus_tree(dir.samples, args.exponent);
  const std::vector<std::string>* labels = dir.labels.empty() ? nullptr : &dir.labels;

  OutputDir out(args.out_dir);
  out.write("consensus.txt", hrg::serialize_hierarchy(h, labels));
  out.write("consensus.json", hrg::hierarchy_to_json(h, labels));
  json manifest = base_manifest("consensus", argv);
  manifest["sample_dir"] = args.sample_dir;
  manifest["exponent"] = args.exponent;
  manifest["samples"] = dir.samples.size();
  out.write("manifest.json", manifest.dump(2) + "\n");
  out.commit();

  std::cout << hrg::render_hierarchy(h, labels);
  return 0;
}

// ---------------------------------------------------------------------------

struct PredictArgs {
  std::string input;
  std::string sample_dir;
  std::string out_dir;
  std::vector<std::string> methods{"hrg"};
  std::uint64_t seed = 1;
  long long top_k = 0;  // 0 = keep all
};

int run_predict(const PredictArgs& args, const std::vector<std::string>& argv) {
  hrg::ParsedGraph parsed = load_graph(args.input);
  std::vector<hrg::DendrogramSample> samples;
  bool needs_samples = false;
  std::vector<hrg::Method> methods;
  for (const auto& name : args.methods) {
    methods.push_back(hrg::method_from_name(name));
    if (methods.back() == hrg::Method::hrg) needs_samples = true;
  }
  if (needs_samples) {
    if (args.sample_dir.empty())
      throw CLI::ValidationError("--samples-dir is required for the hrg method");
    SampleDir dir = load_sample_dir(args.sample_dir);
    if (dir.n != parsed.graph.vertex_count())
      throw std::runtime_error("sample directory was fitted to a different vertex set");
    samples = std::move(dir.samples);
  }

  std::string csv = "i_label,j_label,method,score,rank\n";
  for (hrg::Method method : methods) {
    std::vector<hrg::ScoredPair> scored = hrg::score_non_edges(
        parsed.graph, method, samples.empty() ? nullptr : &samples);
    hrg::rank_pairs(scored,
                    hrg::derive_seed(args.seed, {hrg::stream_tag("predict"),
                                                 hrg::stream_tag(hrg::method_name(method))}));
    if (args.top_k > 0 && static_cast<long long>(scored.size()) > args.top_k)
      scored.resize(args.top_k);
    std::string block = hrg::predictions_csv(scored, method, parsed.labels);
    csv += block.substr(block.find('\n') + 1);  // drop the repeated header
  }

  OutputDir out(args.out_dir);
  out.write("predictions.csv", csv);
  json manifest = base_manifest("predict", argv);
  manifest["input"] = args.input;
  manifest["sample_dir"] = args.sample_dir;
  manifest["methods"] = args.methods;
  manifest["seed"] = args.seed;
  manifest["top_k"] = args.top_k;
  out.write("manifest.json", manifest.dump(2) + "\n");
  out.commit();
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string input;   // edge list; empty when a preset is used
  std::string preset;  // er-control | cm-control
  std::string out_dir;
  std::vector<double> fractions;
  std::vector<std::string> methods;
  int trials = 0;
  std::uint64_t seed = 1;
  int threads = 1;
  hrg::SamplerConfig sampler;
  SamplerFlags sampler_flags;
  std::vector<std::string> formats;
};

int run_evaluate(const EvaluateArgs& args, const std::vector<std::string>& argv) {
  hrg::GraphSource source;
  hrg::ExperimentConfig config;
  if (!args.preset.empty()) {
    hrg::Preset preset = args.preset == "er-control" ? hrg::er_control_preset(args.seed)
                                                     : hrg::cm_control_preset(args.seed);
    source = preset.source;
    config = preset.config;
  } else {
    source.kind = hrg::GraphSource::Kind::fixed;
    source.graph = load_graph(args.input).graph;
  }
  config.seed = args.seed;
  config.threads = args.threads;
  if (!args.fractions.empty()) config.fractions_known = args.fractions;
  if (args.trials > 0) config.trials = args.trials;
  if (!args.methods.empty()) {
    config.methods.clear();
    for (const auto& name : args.methods) config.methods.push_back(hrg::method_from_name(name));
  }
  // Sampler flags override the preset only where actually given.
  if (args.sampler_flags.samples->count()) config.sampler.num_samples = args.sampler.num_samples;
  if (args.sampler_flags.interval->count())
    config.sampler.sample_interval = args.sampler.sample_interval;
  if (args.sampler_flags.cap->count())
    config.sampler.burn_in.cap_steps = args.sampler.burn_in.cap_steps;
  if (args.sampler_flags.window->count())
    config.sampler.burn_in.window = args.sampler.burn_in.window;
  if (args.sampler_flags.tolerance->count())
    config.sampler.burn_in.tolerance = args.sampler.burn_in.tolerance;

  hrg::ExperimentResult result = source.kind == hrg::GraphSource::Kind::fixed
                                     ? hrg::run_experiment(source.graph, config)
                                     : hrg::run_experiment(source, config);

  OutputDir out(args.out_dir);
  out.write("results.json", hrg::experiment_to_json(result));
  out.write("results.csv", hrg::experiment_to_csv(result));
  out.write("timings.txt", hrg::experiment_timings(result));

  bool want_svg =
      std::find(args.formats.begin(), args.formats.end(), "svg") != args.formats.end();
  if (want_svg) {
    std::vector<hrg::Series> auc_series, ratio_series;
    for (hrg::Method method : config.methods) {
      hrg::Series a{hrg::method_name(method), {}, {}, ""};
      hrg::Series r{hrg::method_name(method), {}, {}, ""};
      for (const auto& agg : result.aggregates)
        if (agg.method == method) {
          a.points.emplace_back(agg.fraction_known, agg.mean_auc);
          a.y_errors.push_back(agg.se_auc);
          r.points.emplace_back(agg.fraction_known, agg.mean_ratio);
          r.y_errors.push_back(agg.se_ratio);
        }
      auc_series.push_back(a);
      ratio_series.push_back(r);
    }
    hrg::ChartSpec auc_spec =
        chart_spec("Mean AUC vs fraction of edges known", "fraction known", "AUC");
    auc_spec.y_min = 0.0;
    auc_spec.y_max = 1.0;
    out.write("auc_vs_fraction.svg", hrg::render_chart_svg(auc_spec, auc_series));
    out.write("ratio_vs_fraction.svg",
              hrg::render_chart_svg(chart_spec("Mean top-rank ratio vs fraction of edges known",
                                               "fraction known", "ratio over chance"),
                                    ratio_series));
  }

  json manifest = base_manifest("evaluate", argv);
  manifest["input"] = args.input;
  manifest["preset"] = args.preset;
  manifest["seed"] = args.seed;
  manifest["trials"] = config.trials;
  manifest["fractions_known"] = config.fractions_known;
  json methods = json::array();
  for (hrg::Method m : config.methods) methods.push_back(hrg::method_name(m));
  manifest["methods"] = methods;
  manifest["sampler"] = sampler_manifest(config.sampler);
  out.write("manifest.json", manifest.dump(2) + "\n");
  out.commit();

  for (const auto& agg : result.aggregates)
    std::cerr << "evaluate: " << hrg::method_name(agg.method) << " f=" << agg.fraction_known
              << " AUC=" << hrg::format_fixed(agg.mean_auc, 4) << " +/- "
              << hrg::format_fixed(agg.se_auc, 4) << "\n";
  for (const auto& s : result.skipped)
    std::cerr << "evaluate: skipped f=" << s.fraction_known << " trial " << s.trial << ": "
              << s.reason << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct StatsArgs {
  std::string input;
  std::string out_dir;
  std::string clustering = "local";
};

int run_stats(const StatsArgs& args, const std::vector<std::string>& argv) {
  hrg::ParsedGraph parsed = load_graph(args.input);
  hrg::ClusteringKind kind = args.clustering == "global"
                                 ? hrg::ClusteringKind::global_transitivity
                                 : hrg::ClusteringKind::average_local;
  std::string doc = hrg::statistics_to_json(hrg::graph_statistics(parsed.graph, kind),
                                            parsed.graph);
  if (args.out_dir.empty()) {
    std::cout << doc;
    return 0;
  }
  OutputDir out(args.out_dir);
  out.write("stats.json", doc);
  json manifest = base_manifest("stats", argv);
  manifest["input"] = args.input;
  manifest["clustering"] = args.clustering;
  out.write("manifest.json", manifest.dump(2) + "\n");
  out.commit();
  return 0;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string kind;  // er | power-law | planted
  std::string out_dir;
  std::uint64_t seed = 1;
  int n = 100;
  double p = -1.0;
  double mean_degree = -1.0;
  double alpha = 2.5;
  int k_min = 1;
  int k_max = 0;
  std::string dendrogram_file;
};

int run_generate(const GenerateArgs& args, const std::vector<std::string>& argv) {
  hrg::Graph g;
  if (args.kind == "er") {
    double p = args.p;
    if (p < 0.0) {
      if (args.mean_degree < 0.0)
        throw CLI::ValidationError("er needs --p or --mean-degree");
      p = args.mean_degree / (args.n - 1);
    }
    g = hrg::generate_er_graph(args.n, p, args.seed);
  } else if (args.kind == "power-law") {
    auto degrees = hrg::power_law_degree_sequence(
        args.n, args.alpha, args.k_min, args.k_max > 0 ? args.k_max : args.n - 1,
        hrg::derive_seed(args.seed, {hrg::stream_tag("degrees")}));
    g = hrg::generate_configuration_model(
        degrees, hrg::derive_seed(args.seed, {hrg::stream_tag("matching")}));
  } else if (args.kind == "planted") {
    hrg::Dendrogram d =
        hrg::deserialize_dendrogram(hrg::read_text_file(args.dendrogram_file));
    g = hrg::resample_graph(d, args.seed);
  } else {
    throw CLI::ValidationError("unknown generator '" + args.kind + "'");
  }

  OutputDir out(args.out_dir);
  out.write("edges.txt", hrg::serialize_edge_list(g, hrg::default_labels(g.vertex_count())));
  json manifest = base_manifest("generate", argv);
  manifest["kind"] = args.kind;
  manifest["seed"] = args.seed;
  manifest["n"] = g.vertex_count();
  manifest["m"] = g.edge_count();
  if (args.kind == "planted") manifest["dendrogram"] = args.dendrogram_file;
  out.write("manifest.json", manifest.dump(2) + "\n");
  out.commit();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical random graph inference"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  std::vector<std::string> argv_copy(argv, argv + argc);

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "sample dendrograms for an edge list");
  fit_cmd->add_option("input", fit.input, "edge list file")->required();
  fit_cmd->add_option("-o,--output", fit.out_dir, "output directory")->required();
  fit_cmd->add_option("--seed", fit.seed, "root RNG seed")->envname("HRG_SEED");
  fit_cmd->add_option("--threads", fit.threads, "worker threads")->envname("HRG_THREADS");
  fit_cmd->add_option("--chains", fit.chains, "independent chains to pool")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_flag("--export-tables", fit.export_tables, "also write per-sample node tables");
  add_sampler_flags(fit_cmd, fit.sampler);

  ResampleArgs resample;
  CLI::App* resample_cmd =
      app.add_subcommand("resample", "generate graphs from sampled dendrograms");
  resample_cmd->add_option("samples", resample.sample_dir, "sample directory")->required();
  resample_cmd->add_option("-o,--output", resample.out_dir, "output directory")->required();
  resample_cmd->add_option("--per-dendrogram", resample.per_dendrogram,
                           "resampled graphs per dendrogram")
      ->check(CLI::PositiveNumber);
  resample_cmd->add_option("--original", resample.original, "edge list for overlay charts");
  resample_cmd->add_option("--seed", resample.seed, "root RNG seed")->envname("HRG_SEED");
  resample_cmd->add_option("--threads", resample.threads, "worker threads")
      ->envname("HRG_THREADS");
  resample_cmd->add_option("--clustering", resample.clustering, "local | global")
      ->check(CLI::IsMember({"local", "global"}));
  resample_cmd->add_option("--format", resample.formats, "extra output formats (svg)")
      ->envname("HRG_FORMAT")
      ->delimiter(',');

  ConsensusArgs consensus;
  CLI::App* consensus_cmd =
      app.add_subcommand("consensus", "majority-rule consensus of sampled dendrograms");
  consensus_cmd->add_option("samples", consensus.sample_dir, "sample directory")->required();
  consensus_cmd->add_option("-o,--output", consensus.out_dir, "output directory")->required();
  consensus_cmd->add_option("--exponent", consensus.exponent,
                            "likelihood weight exponent (2 = likelihood squared)");

  PredictArgs predict;
  CLI::App* predict_cmd = app.add_subcommand("predict", "score missing links");
  predict_cmd->add_option("input", predict.input, "edge list file")->required();
  predict_cmd->add_option("-o,--output", predict.out_dir, "output directory")->required();
  predict_cmd->add_option("--samples-dir", predict.sample_dir,
                          "fitted sample directory (required for hrg)");
  predict_cmd->add_option("--methods", predict.methods, "scoring methods")
      ->envname("HRG_METHODS")
      ->delimiter(',');
  predict_cmd->add_option("--seed", predict.seed, "root RNG seed")->envname("HRG_SEED");
  predict_cmd->add_option("--top-k", predict.top_k, "keep only the top K pairs");

  EvaluateArgs evaluate;
  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "edge-removal link prediction experiment");
  evaluate_cmd->add_option("input", evaluate.input, "edge list file");
  evaluate_cmd->add_option("--preset", evaluate.preset, "er-control | cm-control")
      ->check(CLI::IsMember({"er-control", "cm-control"}));
  evaluate_cmd->add_option("--fractions", evaluate.fractions,
                           "fractions of edges known to the algorithm")
      ->envname("HRG_FRACTIONS")
      ->delimiter(',');
  evaluate_cmd->add_option("--trials", evaluate.trials, "trials per fraction")
      ->envname("HRG_TRIALS");
  evaluate_cmd->add_option("--methods", evaluate.methods, "scoring methods")
      ->envname("HRG_METHODS")
      ->delimiter(',');
  evaluate_cmd->add_option("--seed", evaluate.seed, "root RNG seed")->envname("HRG_SEED");
  evaluate_cmd->add_option("--threads", evaluate.threads, "worker threads")
      ->envname("HRG_THREADS");
  evaluate_cmd->add_option("-o,--output", evaluate.out_dir, "output directory")->required();
  evaluate_cmd->add_option("--format", evaluate.formats, "extra output formats (svg)")
      ->envname("HRG_FORMAT")
      ->delimiter(',');
  evaluate.sampler_flags = add_sampler_flags(evaluate_cmd, evaluate.sampler);

  StatsArgs stats;
  CLI::App* stats_cmd = app.add_subcommand("stats", "network statistics for an edge list");
  stats_cmd->add_option("input", stats.input, "edge list file")->required();
  stats_cmd->add_option("-o,--output", stats.out_dir, "output directory (default: stdout)");
  stats_cmd->add_option("--clustering", stats.clustering, "local | global")
      ->check(CLI::IsMember({"local", "global"}));

  GenerateArgs generate;
  CLI::App* generate_cmd = app.add_subcommand("generate", "random graph generators");
  generate_cmd->add_option("kind", generate.kind, "er | power-law | planted")->required();
  generate_cmd->add_option("-o,--output", generate.out_dir, "output directory")->required();
  generate_cmd->add_option("--seed", generate.seed, "root RNG seed")->envname("HRG_SEED");
  generate_cmd->add_option("--n", generate.n, "vertex count");
  generate_cmd->add_option("--p", generate.p, "edge probability (er)");
  generate_cmd->add_option("--mean-degree", generate.mean_degree, "mean degree (er)");
  generate_cmd->add_option("--alpha", generate.alpha, "power-law exponent");
  generate_cmd->add_option("--kmin", generate.k_min, "minimum degree (power-law)");
  generate_cmd->add_option("--kmax", generate.k_max, "maximum degree (power-law)");
  generate_cmd->add_option("--dendrogram", generate.dendrogram_file,
                           "dendrogram file (planted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(fit, argv_copy);
    if (resample_cmd->parsed()) return run_resample(resample, argv_copy);
    if (consensus_cmd->parsed()) return run_consensus(consensus, argv_copy);
    if (predict_cmd->parsed()) return run_predict(predict, argv_copy);
    if (evaluate_cmd->parsed()) {
      if (evaluate.input.empty() && evaluate.preset.empty())
        throw CLI::ValidationError("evaluate needs an edge list or --preset");
      return run_evaluate(evaluate, argv_copy);
    }
    if (stats_cmd->parsed()) return run_stats(stats, argv_copy);
    if (generate_cmd->parsed()) {
      if (generate.kind == "planted" && generate.dendrogram_file.empty())
        throw CLI::ValidationError("planted generation needs --dendrogram");
      return run_generate(generate, argv_copy);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hrg::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hrg::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return 0;
}
