#include "hrg/dendrogram.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "hrg/util.hpp"

namespace hrg {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;  // 0^0 = 1 convention, no smoothing
  return -(p * std::log(p) + (1.0 - p) * std::log1p(-p));
}

double log_likelihood_term(double p, double pairs) {
  return -pairs * binary_entropy(p);
}

Dendrogram::Dendrogram(int n_leaves, std::vector<std::pair<int, int>> children) {
  n_ = n_leaves;
  if (n_ < 2) throw std::invalid_argument("dendrogram needs at least 2 leaves");
  if (static_cast<int>(children.size()) != n_ - 1)
    throw std::invalid_argument("expected n-1 internal nodes");
  nodes_.resize(n_ - 1);
  parent_.assign(2 * n_ - 1, -1);
  for (int k = 0; k < n_ - 1; ++k) {
    nodes_[k].left = children[k].first;
    nodes_[k].right = children[k].second;
  }
  for (int k = 0; k < n_ - 1; ++k) {
    int id = n_ + k;
    for (int child : {nodes_[k].left, nodes_[k].right}) {
      if (child < 0 || child >= 2 * n_ - 1 || child == id)
        throw std::invalid_argument("child id out of range");
      if (parent_[child] != -1) throw std::invalid_argument("node has two parents");
      parent_[child] = id;
    }
  }
  for (int id = n_; id < 2 * n_ - 1; ++id)
    if (parent_[id] == -1) {
      if (root_ != -1) throw std::invalid_argument("multiple roots");
      root_ = id;
    }
  if (root_ == -1) throw std::invalid_argument("no root (cycle)");
  for (int l = 0; l < n_; ++l)
    if (parent_[l] == -1) throw std::invalid_argument("disconnected leaf");
  rebuild_leaf_counts();
  if (leaves_under(root_) != n_) throw std::invalid_argument("tree is disconnected");
}

void Dendrogram::rebuild_leaf_counts() {
  // Post-order over the arena without recursion.
  std::vector<int> stack{root_};
  std::vector<int> order;
  order.reserve(n_ - 1);
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (is_leaf(id)) continue;
    order.push_back(id);
    stack.push_back(internal(id).left);
    stack.push_back(internal(id).right);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    InternalNode& node = nodes_[*it - n_];
    node.left_leaves = leaves_under(node.left);
    node.right_leaves = leaves_under(node.right);
  }
}

Dendrogram Dendrogram::random(int n_leaves, Rng& rng) {
  if (n_leaves < 2) throw std::invalid_argument("dendrogram needs at least 2 leaves");
  std::vector<int> roots(n_leaves);
  for (int i = 0; i < n_leaves; ++i) roots[i] = i;
  std::vector<std::pair<int, int>> children;
  children.reserve(n_leaves - 1);
  while (roots.size() > 1) {
    long long a = rng.uniform_int(static_cast<long long>(roots.size()));
    int left = roots[a];
    roots[a] = roots.back();
    roots.pop_back();
    long long b = rng.uniform_int(static_cast<long long>(roots.size()));
    int right = roots[b];
    int joined = n_leaves + static_cast<int>(children.size());
    children.emplace_back(left, right);
    roots[b] = joined;
  }
  return Dendrogram(n_leaves, std::move(children));
}

Dendrogram Dendrogram::random(int n_leaves, std::uint64_t seed) {
  Rng rng(seed);
  return random(n_leaves, rng);
}

namespace {

// Builds halving splits over [lo,hi); returns the subtree's root id.
int build_balanced(int lo, int hi, int n, std::vector<std::pair<int, int>>& children) {
  if (hi - lo == 1) return lo;
  int mid = lo + (hi - lo + 1) / 2;
  int left = build_balanced(lo, mid, n, children);
  int right = build_balanced(mid, hi, n, children);
  children.emplace_back(left, right);
  return n + static_cast<int>(children.size()) - 1;
}

}  // namespace

Dendrogram Dendrogram::balanced(int n_leaves) {
  if (n_leaves < 2) throw std::invalid_argument("dendrogram needs at least 2 leaves");
  std::vector<std::pair<int, int>> children;
  children.reserve(n_leaves - 1);
  build_balanced(0, n_leaves, n_leaves, children);
  return Dendrogram(n_leaves, std::move(children));
}

int Dendrogram::sibling(int id) const {
  int p = parent_[id];
  if (p < 0) throw std::invalid_argument("root has no sibling");
  const InternalNode& node = internal(p);
  return node.left == id ? node.right : node.left;
}

int Dendrogram::depth(int id) const {
  int d = 0;
  while (parent_[id] >= 0) {
    id = parent_[id];
    ++d;
  }
  return d;
}

void Dendrogram::compute_stats(const Graph& g) {
  if (g.vertex_count() != n_)
    throw std::invalid_argument("graph vertex set does not match dendrogram leaves");
  for (auto& node : nodes_) node.cross_edges = 0;
  for (const auto& [i, j] : g.edges()) {
    int r = lowest_common_ancestor(i, j);
    ++nodes_[r - n_].cross_edges;
  }
  for (auto& node : nodes_) {
    double pairs = static_cast<double>(node.left_leaves) * node.right_leaves;
    node.prob = static_cast<double>(node.cross_edges) / pairs;
  }
  has_probabilities_ = true;
  has_edge_counts_ = true;
}

double Dendrogram::log_likelihood() const {
  if (!has_probabilities_)
    throw std::logic_error("log_likelihood requires stats (compute_stats or annotations)");
  double sum = 0.0;
  for (const auto& node : nodes_)
    sum += log_likelihood_term(node.prob,
                               static_cast<double>(node.left_leaves) * node.right_leaves);
  return sum;
}

int Dendrogram::lowest_common_ancestor(int i, int j) const {
  if (i == j) throw std::invalid_argument("LCA of a vertex with itself");
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::invalid_argument("leaf out of range");
  // Depth-equalizing walk; the tree mutates during MCMC so nothing is
  // precomputed.
  int di = depth(i), dj = depth(j);
  while (di > dj) {
    i = parent_[i];
    --di;
  }
  while (dj > di) {
    j = parent_[j];
    --dj;
  }
  while (i != j) {
    i = parent_[i];
    j = parent_[j];
  }
  return i;
}

double Dendrogram::connection_probability(int i, int j) const {
  if (!has_probabilities_) throw std::logic_error("no probabilities on this dendrogram");
  return internal(lowest_common_ancestor(i, j)).prob;
}

void Dendrogram::swap_subtrees(int internal_id, int variant) {
  if (is_leaf(internal_id) || internal_id == root_)
    throw std::invalid_argument("swap requires a non-root internal node");
  if (variant != 1 && variant != 2) throw std::invalid_argument("variant must be 1 or 2");

  InternalNode& r = nodes_[internal_id - n_];
  int p_id = parent_[internal_id];
  InternalNode& p = nodes_[p_id - n_];

  int& sibling_slot = p.left == internal_id ? p.right : p.left;
  int& child_slot = variant == 1 ? r.left : r.right;

  int u = sibling_slot;
  int x = child_slot;
  sibling_slot = x;
  child_slot = u;
  parent_[u] = internal_id;
  parent_[x] = p_id;

  r.left_leaves = leaves_under(r.left);
  r.right_leaves = leaves_under(r.right);
  p.left_leaves = leaves_under(p.left);
  p.right_leaves = leaves_under(p.right);
}

void Dendrogram::set_depth_probabilities(const std::vector<double>& prob_per_depth) {
  if (prob_per_depth.empty()) throw std::invalid_argument("need at least one probability");
  for (int k = 0; k < n_ - 1; ++k) {
    int d = depth(n_ + k);
    double p = prob_per_depth[std::min<std::size_t>(d, prob_per_depth.size() - 1)];
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability out of [0,1]");
    nodes_[k].prob = p;
    nodes_[k].cross_edges = -1;
  }
  has_probabilities_ = true;
  has_edge_counts_ = false;
}

void Dendrogram::relabel_leaves(const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != n_) throw std::invalid_argument("permutation size");
  std::vector<int> new_leaf_parent(n_);
  for (int l = 0; l < n_; ++l) new_leaf_parent[perm[l]] = parent_[l];
  for (int l = 0; l < n_; ++l) parent_[l] = new_leaf_parent[l];
  for (auto& node : nodes_) {
    if (is_leaf(node.left)) node.left = perm[node.left];
    if (is_leaf(node.right)) node.right = perm[node.right];
  }
}

namespace {

struct SignaturePart {
  int min_leaf;
  std::string text;
};

SignaturePart signature_rec(const Dendrogram& d, int id, bool annotate) {
  if (d.is_leaf(id)) return {id, std::to_string(id)};
  SignaturePart a = signature_rec(d, d.internal(id).left, annotate);
  SignaturePart b = signature_rec(d, d.internal(id).right, annotate);
  if (b.min_leaf < a.min_leaf) std::swap(a, b);
  std::string text = "(" + a.text + "," + b.text + ")";
  if (annotate) text += ":" + format_double(d.internal(id).prob);
  return {a.min_leaf, std::move(text)};
}

}  // namespace

std::string Dendrogram::topology_signature() const {
  return signature_rec(*this, root_, false).text;
}

std::string Dendrogram::annotated_signature() const {
  return signature_rec(*this, root_, true).text;
}

void Dendrogram::leaf_ranges(std::vector<int>& leaf_order,
                             std::vector<std::pair<int, int>>& range) const {
  leaf_order.clear();
  leaf_order.reserve(n_);
  range.assign(node_count(), {0, 0});
  // Iterative traversal; post-state fills the range once children are done.
  std::vector<std::pair<int, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [id, done] = stack.back();
    stack.pop_back();
    if (is_leaf(id)) {
      range[id] = {static_cast<int>(leaf_order.size()),
                   static_cast<int>(leaf_order.size()) + 1};
      leaf_order.push_back(id);
      continue;
    }
    if (done) {
      range[id] = {range[internal(id).left].first, range[internal(id).right].second};
      continue;
    }
    stack.push_back({id, true});
    stack.push_back({internal(id).right, false});
    stack.push_back({internal(id).left, false});
  }
}

void Dendrogram::collect_leaves(int id, std::vector<int>& out) const {
  out.clear();
  std::vector<int> stack{id};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (is_leaf(v)) {
      out.push_back(v);
    } else {
      stack.push_back(internal(v).left);
      stack.push_back(internal(v).right);
    }
  }
}

// ---------------------------------------------------------------------------
// Text format

namespace {

void serialize_node(const Dendrogram& d, int id, std::string& out) {
  if (d.is_leaf(id)) {
    out += std::to_string(id);
    return;
  }
  const auto& node = d.internal(id);
  out += '(';
  serialize_node(d, node.left, out);
  out += ',';
  serialize_node(d, node.right, out);
  out += "):";
  out += format_double(node.prob);
}

struct TreeParser {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line, col);
  }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  char take() {
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    take();
  }

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(peek()))) take();
  }

  // Returns the node id; internal nodes are appended to children/probs.
  int parse_node(std::vector<std::pair<int, int>>& children, std::vector<double>& probs,
                 int& max_leaf) {
    skip_space();
    if (peek() == '(') {
      take();
      int left = parse_node(children, probs, max_leaf);
      skip_space();
      expect(',');
      int right = parse_node(children, probs, max_leaf);
      skip_space();
      expect(')');
      expect(':');
      probs.push_back(parse_number());
      children.emplace_back(left, right);
      // Internal ids are provisional (offset by leaf count later).
      return -static_cast<int>(children.size());
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected leaf or '('");
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) v = v * 10 + (take() - '0');
    if (v > 1'000'000'000L) fail("leaf label too large");
    max_leaf = std::max(max_leaf, static_cast<int>(v));
    return static_cast<int>(v);
  }

  double parse_number() {
    skip_space();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' ||
            peek() == '-' || peek() == '+' || peek() == 'e' || peek() == 'E' ||
            peek() == 'n' || peek() == 'a' || peek() == 'i' || peek() == 'f'))
      take();
    if (pos == start) fail("expected a number");
    std::string token(text.substr(start, pos - start));
    char* end = nullptr;
    double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) fail("malformed number '" + token + "'");
    return v;
  }
};

long long parse_header_count(std::string_view text, std::size_t& pos, int& line_no,
                             const std::string& key, std::string& value_out) {
  std::size_t eol = text.find('\n', pos);
  if (eol == std::string_view::npos) throw ParseError("missing header line", line_no);
  std::string_view line = text.substr(pos, eol - pos);
  pos = eol + 1;
  auto tokens = split_whitespace(line);
  if (tokens.size() != 2 || tokens[0] != key)
    throw ParseError("expected header '" + key + " <value>'", line_no);
  value_out = std::string(tokens[1]);
  ++line_no;
  return 0;
}

}  // namespace

std::string serialize_dendrogram(const Dendrogram& d) {
  std::string out = "hrg-dendrogram v1\n";
  out += "n " + std::to_string(d.leaf_count()) + "\n";
  out += "loglik ";
  out += d.has_probabilities() ? format_double(d.log_likelihood()) : "nan";
  out += "\n(";
  serialize_node(d, d.root(), out);
  out += ")\n";
  return out;
}

Dendrogram deserialize_dendrogram(std::string_view text) {
  std::size_t pos = 0;
  int line_no = 1;
  {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos || text.substr(pos, eol - pos) != "hrg-dendrogram v1")
      throw ParseError("expected 'hrg-dendrogram v1' magic", 1);
    pos = eol + 1;
    ++line_no;
  }
  std::string n_str, loglik_str;
  parse_header_count(text, pos, line_no, "n", n_str);
  parse_header_count(text, pos, line_no, "loglik", loglik_str);
  int n_header = std::atoi(n_str.c_str());

  TreeParser parser{text.substr(pos), 0, line_no, 1};
  parser.skip_space();
  parser.expect('(');
  std::vector<std::pair<int, int>> children;
  std::vector<double> probs;
  int max_leaf = -1;
  int root_token = parser.parse_node(children, probs, max_leaf);
  parser.skip_space();
  parser.expect(')');
  if (root_token >= 0) throw ParseError("tree must have at least two leaves", parser.line);

  int n = static_cast<int>(children.size()) + 1;
  if (n != n_header)
    throw ParseError("header n=" + std::to_string(n_header) + " but tree has " +
                         std::to_string(n) + " leaves",
                     parser.line);
  if (max_leaf != n - 1)
    throw ParseError("leaf labels must be a permutation of 0.." + std::to_string(n - 1),
                     parser.line);
  // Provisional internal ids -(k+1) become n + k.
  for (auto& [a, b] : children) {
    if (a < 0) a = n + (-a - 1);
    if (b < 0) b = n + (-b - 1);
  }
  Dendrogram d(n, std::move(children));
  for (int k = 0; k < n - 1; ++k) {
    if (probs[k] < 0.0 || probs[k] > 1.0)
      throw ParseError("probability out of [0,1]", parser.line);
    d.nodes_[k].prob = probs[k];
    double pairs = static_cast<double>(d.nodes_[k].left_leaves) * d.nodes_[k].right_leaves;
    double e = probs[k] * pairs;
    d.nodes_[k].cross_edges = std::abs(e - std::round(e)) < 1e-9
                                  ? static_cast<long long>(std::llround(e))
                                  : -1;
  }
  d.has_probabilities_ = true;
  d.has_edge_counts_ = false;
  // Leaf labels must be a bijection; duplicate labels leave some leaf with
  // two parents, which the constructor rejects, so only range is left.
  return d;
}

std::string dendrogram_table(const Dendrogram& d) {
  std::string out = "id,left,right,left_leaves,right_leaves,prob\n";
  auto ref = [&](int id) {
    return d.is_leaf(id) ? "v" + std::to_string(id) : "i" + std::to_string(id - d.leaf_count());
  };
  for (int k = 0; k < d.internal_count(); ++k) {
    const auto& node = d.internal(d.leaf_count() + k);
    out += "i" + std::to_string(k) + "," + ref(node.left) + "," + ref(node.right) + "," +
           std::to_string(node.left_leaves) + "," + std::to_string(node.right_leaves) + "," +
           format_double(node.prob) + "\n";
  }
  return out;
}

long long count_labeled_dendrograms(int n) {
  long long c = 1;
  for (int k = 3; k <= 2 * n - 3; k += 2) c *= k;
  return c;
}

namespace {

// Inserting leaf k above every node of every tree on k leaves enumerates all
// labeled topologies exactly once.
void enumerate_rec(int n, int next_leaf, const std::vector<std::pair<int, int>>& children,
                   std::vector<Dendrogram>& out) {
  if (next_leaf == n) {
    // Children vectors built over leaf ids 0..n-1 with internal ids n+k.
    out.emplace_back(n, children);
    return;
  }
  int leaves_now = next_leaf;
  int nodes_now = 2 * leaves_now - 1;
  for (int pos = 0; pos < nodes_now; ++pos) {
    // Node ids in the smaller tree: leaves 0..leaves_now-1 then internals.
    int target = pos < leaves_now ? pos : n + (pos - leaves_now);
    // Renumber: internals keep their index; the new internal node becomes
    // the parent of `target` and the new leaf.
    std::vector<std::pair<int, int>> grown = children;
    int new_internal = n + static_cast<int>(grown.size());
    for (auto& [a, b] : grown) {
      if (a == target) a = new_internal;
      if (b == target) b = new_internal;
    }
    grown.emplace_back(target, next_leaf);
    enumerate_rec(n, next_leaf + 1, grown, out);
  }
}

}  // namespace

std::vector<Dendrogram> enumerate_dendrograms(int n) {
  if (n < 2) throw std::invalid_argument("need at least 2 leaves");
  if (n > 7) throw std::invalid_argument("enumeration limited to n <= 7");
  std::vector<Dendrogram> out;
  out.reserve(count_labeled_dendrograms(n));
  std::vector<std::pair<int, int>> base{{0, 1}};
  enumerate_rec(n, 2, base, out);
  return out;
}

}  // namespace hrg
