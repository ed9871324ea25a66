#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <boost/math/distributions/chi_squared.hpp>

#include "hrg/dendrogram.hpp"
#include "hrg/graph.hpp"

namespace test_support {

// Six-vertex fixture: two triangles {0,1,2} and {3,4,5} joined by edge 2-3.
inline hrg::Graph two_triangles_graph() {
  return hrg::Graph::from_edges(
      6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
}

// Dendrogram that splits the two triangles at the root: likelihood
// (1/9)(8/9)^8.
inline hrg::Dendrogram good_split_dendrogram() {
  // internals: 6=(1,2) 7=(0,6) 8=(4,5) 9=(3,8) 10=(7,9)
  return hrg::Dendrogram(6, {{1, 2}, {0, 6}, {4, 5}, {3, 8}, {7, 9}});
}

// Dendrogram that peels off the pair (0,1) first: likelihood
// (1/3)(2/3)^2 (1/4)^2 (3/4)^6.
inline hrg::Dendrogram bad_split_dendrogram() {
  // internals: 6=(0,1) 7=(4,5) 8=(3,7) 9=(2,8) 10=(6,9)
  return hrg::Dendrogram(6, {{0, 1}, {4, 5}, {3, 7}, {2, 8}, {6, 9}});
}

inline double good_split_likelihood() {
  return (1.0 / 9.0) * std::pow(8.0 / 9.0, 8);
}

inline double bad_split_likelihood() {
  return (1.0 / 3.0) * std::pow(2.0 / 3.0, 2) * std::pow(1.0 / 4.0, 2) *
         std::pow(3.0 / 4.0, 6);
}

// Independent linear-space likelihood: the per-node product
// [p^p (1-p)^(1-p)]^{L R} evaluated directly, term by term.
inline double profile_likelihood_product(const hrg::Dendrogram& d) {
  double product = 1.0;
  for (int k = 0; k < d.internal_count(); ++k) {
    const auto& node = d.internal(d.leaf_count() + k);
    double p = node.prob;
    double pairs = static_cast<double>(node.left_leaves) * node.right_leaves;
    double term = 1.0;
    if (p > 0.0) term *= std::pow(p, p * pairs);
    if (p < 1.0) term *= std::pow(1.0 - p, (1.0 - p) * pairs);
    product *= term;
  }
  return product;
}

// Bernoulli likelihood of the fitted graph: product over nodes of
// p^E (1-p)^(LR-E), with 0^0 = 1.
inline double bernoulli_likelihood(const hrg::Dendrogram& d) {
  double product = 1.0;
  for (int k = 0; k < d.internal_count(); ++k) {
    const auto& node = d.internal(d.leaf_count() + k);
    double pairs = static_cast<double>(node.left_leaves) * node.right_leaves;
    double e = static_cast<double>(node.cross_edges);
    if (node.prob > 0.0) product *= std::pow(node.prob, e);
    if (node.prob < 1.0) product *= std::pow(1.0 - node.prob, pairs - e);
  }
  return product;
}

inline double chi_squared_statistic(const std::vector<long long>& observed,
                                    const std::vector<double>& expected_prob,
                                    long long total) {
  double stat = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    double expected = expected_prob[k] * static_cast<double>(total);
    double diff = static_cast<double>(observed[k]) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

inline double chi_squared_critical(int df, double p_value) {
  boost::math::chi_squared dist(df);
  return boost::math::quantile(dist, 1.0 - p_value);
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    double midrank = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = midrank;
    i = j;
  }
  return ranks;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(average_ranks(x), average_ranks(y));
}

// --- CLI process helpers ----------------------------------------------------

inline std::string cli_path() {
  const char* env = std::getenv("HRG_CLI");
  return env ? env : "./hrg";
}

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline CliResult run_cli(const std::string& args, const std::filesystem::path& workdir) {
  std::filesystem::path out = workdir / "stdout.txt";
  std::filesystem::path err = workdir / "stderr.txt";
  std::string cmd = cli_path() + " " + args + " > " + out.string() + " 2> " + err.string();
  int rc = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = rc == -1 ? -1 : WEXITSTATUS(rc);
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  std::filesystem::path p =
      std::filesystem::temp_directory_path() / ("hrg_test_" + name + "_" +
                                                std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace test_support
