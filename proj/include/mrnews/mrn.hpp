#pragma once

// Multiplex recurrence networks: one recurrence layer per instrument over a
// shared time-node axis, the interlayer mutual information between degree
// sequences, average edge overlap, the M x M projection network and its
// maximum spanning tree. The NM x NM supra-adjacency matrix is never built.

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mrnews/detail/csv.hpp"
#include "mrnews/market_data.hpp"
#include "mrnews/recurrence.hpp"

namespace mrnews {

/// What each layer is built from.
enum class LayerInput { LogReturns, Prices };

struct MrnConfig {
  EmbeddingConfig embedding{.dimension = 3, .delay = 1, .mode = EmbeddingMode::Fixed, .min_points = 10};
  ThresholdPolicy threshold{};
  LayerInput input = LayerInput::LogReturns;
};

class Mrn {
 public:
  Mrn(std::vector<RecurrenceMatrix> layers, std::vector<std::string> labels, Date date = {}, int dimension = 0,
      int delay = 0)
      : layers_(std::move(layers)), labels_(std::move(labels)), date_(date), dimension_(dimension), delay_(delay) {
    if (layers_.size() < 2) throw Error(ErrorKind::InvalidRange, "a multiplex network needs at least 2 layers");
    if (labels_.empty()) {
      for (std::size_t k = 0; k < layers_.size(); ++k) labels_.push_back("L" + std::to_string(k + 1));
    }
    if (labels_.size() != layers_.size()) throw Error(ErrorKind::SizeMismatch, "one label per layer required");
    for (const auto& layer : layers_)
      if (layer.size() != layers_.front().size()) throw Error(ErrorKind::SizeMismatch, "layers differ in node count");
  }

  [[nodiscard]] std::size_t n_layers() const noexcept { return layers_.size(); }
  [[nodiscard]] std::size_t n_nodes() const noexcept { return layers_.front().size(); }
  [[nodiscard]] const RecurrenceMatrix& layer(std::size_t k) const { return layers_.at(k); }
  [[nodiscard]] const std::vector<RecurrenceMatrix>& layers() const noexcept { return layers_; }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
  [[nodiscard]] Date date() const noexcept { return date_; }
  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  [[nodiscard]] int delay() const noexcept { return delay_; }

  [[nodiscard]] std::size_t degenerate_layers() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(layers_.begin(), layers_.end(), [](const auto& l) { return l.degenerate(); }));
  }

 private:
  std::vector<RecurrenceMatrix> layers_;
  std::vector<std::string> labels_;
  Date date_;
  int dimension_;
  int delay_;
};

/// Builds one layer per instrument with a shared (m, tau). In auto mode each
/// layer is estimated separately and the largest m and tau are shared.
inline Mrn build_mrn(const DayWindow& window, const MrnConfig& config = {}) {
  if (window.n_instruments() < 2) throw Error(ErrorKind::InvalidRange, "need at least 2 instruments");
  std::vector<std::vector<double>> series;
  series.reserve(window.n_instruments());
  for (std::size_t k = 0; k < window.n_instruments(); ++k) {
    const auto v = window.values(k);
    series.push_back(config.input == LayerInput::LogReturns ? intraday_log_returns(v, 1)
                                                            : std::vector<double>(v.begin(), v.end()));
  }
  EmbeddingConfig emb = config.embedding;
  if (emb.mode == EmbeddingMode::Auto) {
    int m = 1;
    int tau = 1;
    for (const auto& s : series) {
      const auto [mk, tk] = estimate_embedding(s);
      m = std::max(m, mk);
      tau = std::max(tau, tk);
    }
    emb = {.dimension = m, .delay = tau, .mode = EmbeddingMode::Fixed, .min_points = emb.min_points};
  }
  std::vector<RecurrenceMatrix> layers;
  layers.reserve(series.size());
  for (const auto& s : series) layers.push_back(build_recurrence(embed(s, emb), config.threshold));
  return Mrn(std::move(layers), window.instruments(), window.date(), emb.dimension, emb.delay);
}

// --------------------------------------------------------------------------
// Interlayer mutual information

/// Shannon entropy (nats) of a layer's degree distribution.
inline double degree_entropy(const RecurrenceMatrix& layer) {
  std::unordered_map<int, std::size_t> counts;
  for (int k : layer.degrees()) ++counts[k];
  const double n = static_cast<double>(layer.size());
  double h = 0.0;
  for (const auto& [k, c] : counts) h += static_cast<double>(c) / n * std::log(n / static_cast<double>(c));
  return h;
}

/// I = sum P(ka, kb) ln[P(ka, kb) / (P(ka) P(kb))] over the exact joint
/// histogram of paired non-negative integer degrees.
inline double degree_mutual_information(std::span<const int> ka, std::span<const int> kb) {
  if (ka.size() != kb.size()) throw Error(ErrorKind::SizeMismatch, "degree sequences differ in length");
  const auto n = ka.size();
  if (n == 0) return 0.0;
  // Fixed argument order keeps the summation order, and so the result, symmetric.
  if (std::lexicographical_compare(kb.begin(), kb.end(), ka.begin(), ka.end())) return degree_mutual_information(kb, ka);
  const auto max_a = static_cast<std::size_t>(*std::max_element(ka.begin(), ka.end()));
  const auto max_b = static_cast<std::size_t>(*std::max_element(kb.begin(), kb.end()));
  std::vector<std::size_t> ca(max_a + 1, 0);
  std::vector<std::size_t> cb(max_b + 1, 0);
  std::vector<std::uint64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (ka[i] < 0 || kb[i] < 0) throw Error(ErrorKind::InvalidRange, "negative degree");
    ++ca[static_cast<std::size_t>(ka[i])];
    ++cb[static_cast<std::size_t>(kb[i])];
    keys[i] = static_cast<std::uint64_t>(ka[i]) * (max_b + 1) + static_cast<std::uint64_t>(kb[i]);
  }
  std::sort(keys.begin(), keys.end());
  const double total = static_cast<double>(n);
  double mi = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && keys[j] == keys[i]) ++j;
    const double cxy = static_cast<double>(j - i);
    const auto x = static_cast<std::size_t>(keys[i] / (max_b + 1));
    const auto y = static_cast<std::size_t>(keys[i] % (max_b + 1));
    mi += cxy / total * std::log(cxy * total / (static_cast<double>(ca[x]) * static_cast<double>(cb[y])));
    i = j;
  }
  return std::max(0.0, mi);
}

inline double interlayer_mutual_information(const RecurrenceMatrix& a, const RecurrenceMatrix& b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::SizeMismatch, "layers have " + std::to_string(a.size()) + " and " +
                                             std::to_string(b.size()) + " nodes");
  return degree_mutual_information(a.degrees(), b.degrees());
}

/// Symmetric M x M matrix of I_ab (zero diagonal), row-major.
inline std::vector<double> mutual_information_matrix(const Mrn& mrn) {
  const auto m = mrn.n_layers();
  std::vector<double> out(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      const double v = interlayer_mutual_information(mrn.layer(a), mrn.layer(b));
      out[a * m + b] = v;
      out[b * m + a] = v;
    }
  return out;
}

/// `Pairs` divides the pair sum by M(M-1)/2; `AsPrinted` divides by M.
enum class MiNormalization { Pairs, AsPrinted };

inline double average_mutual_information(const Mrn& mrn, MiNormalization norm = MiNormalization::Pairs) {
  const auto m = mrn.n_layers();
  const auto mi = mutual_information_matrix(mrn);
  double sum = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) sum += mi[a * m + b];
  const double pairs = static_cast<double>(m * (m - 1) / 2);
  return norm == MiNormalization::Pairs ? sum / pairs : sum / static_cast<double>(m);
}

// --------------------------------------------------------------------------
// Edge overlap

/// `Pairwise2` scales each pair so that identical layers give 1;
/// `AsPrinted` divides by M instead of 2.
enum class OverlapNormalization { Pairwise2, AsPrinted };

/// Per-pair overlap (E_a + E_b) / (c * |E_a u E_b|) over off-diagonal
/// edges; nullopt when neither layer has an edge.
inline std::optional<double> edge_overlap(const RecurrenceMatrix& a, const RecurrenceMatrix& b, double c = 2.0) {
  if (a.size() != b.size()) throw Error(ErrorKind::SizeMismatch, "layers differ in node count");
  std::size_t union_full = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto ra = a.row_bits(i);
    const auto rb = b.row_bits(i);
    for (std::size_t w = 0; w < ra.size(); ++w) union_full += static_cast<std::size_t>(std::popcount(ra[w] | rb[w]));
  }
  const std::size_t union_edges = (union_full - a.size()) / 2;
  if (union_edges == 0) return std::nullopt;
  return static_cast<double>(a.edge_count() + b.edge_count()) / (c * static_cast<double>(union_edges));
}

struct OverlapResult {
  /// Mean over non-skipped pairs; NaN when every pair was skipped.
  double value = std::numeric_limits<double>::quiet_NaN();
  std::size_t pairs_used = 0;
  std::size_t pairs_skipped = 0;
};

inline OverlapResult average_edge_overlap(const Mrn& mrn, OverlapNormalization norm = OverlapNormalization::Pairwise2) {
  const auto m = mrn.n_layers();
  const double c = norm == OverlapNormalization::Pairwise2 ? 2.0 : static_cast<double>(m);
  OverlapResult out;
  double sum = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      if (const auto w = edge_overlap(mrn.layer(a), mrn.layer(b), c)) {
        sum += *w;
        ++out.pairs_used;
      } else {
        ++out.pairs_skipped;
      }
    }
  if (out.pairs_used > 0) out.value = sum / static_cast<double>(out.pairs_used);
  return out;
}

// --------------------------------------------------------------------------
// Projection network and maximum spanning tree

/// Complete undirected graph with symmetric non-negative weights.
class WeightedGraph {
 public:
  WeightedGraph(std::vector<std::string> labels, std::vector<double> weights)
      : labels_(std::move(labels)), weights_(std::move(weights)) {
    const auto m = labels_.size();
    if (weights_.size() != m * m) throw Error(ErrorKind::SizeMismatch, "weight matrix must be M x M");
    for (std::size_t a = 0; a < m; ++a) {
      weights_[a * m + a] = 0.0;
      for (std::size_t b = a + 1; b < m; ++b)
        if (weights_[a * m + b] != weights_[b * m + a])
          throw Error(ErrorKind::InvalidRange, "weight matrix is not symmetric");
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
  [[nodiscard]] double weight(std::size_t a, std::size_t b) const { return weights_.at(a * size() + b); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return size() * (size() - 1) / 2; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;
};

inline WeightedGraph projection_network(const Mrn& mrn) {
  return WeightedGraph(mrn.labels(), mutual_information_matrix(mrn));
}

struct TreeEdge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  double weight = 0.0;
};

struct SpanningTree {
  std::vector<std::string> labels;
  std::vector<TreeEdge> edges;
  std::vector<int> degrees;

  [[nodiscard]] double total_weight() const {
    double s = 0.0;
    for (const auto& e : edges) s += e.weight;
    return s;
  }

  [[nodiscard]] int max_degree() const { return degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end()); }

  /// Max degree / (M - 1): 1 for a star, small for a path.
  [[nodiscard]] double hub_dominance() const {
    return degrees.size() < 2 ? 0.0 : static_cast<double>(max_degree()) / static_cast<double>(degrees.size() - 1);
  }
};

namespace detail {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    parent[std::max(x, y)] = std::min(x, y);
    return true;
  }
  std::vector<std::size_t> parent;
};

}  // namespace detail

/// Kruskal on weights sorted descending; equal weights resolve in (a, b)
/// node-index order.
inline SpanningTree maximum_spanning_tree(const WeightedGraph& graph) {
  const auto m = graph.size();
  std::vector<TreeEdge> candidates;
  candidates.reserve(graph.edge_count());
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) candidates.push_back({a, b, graph.weight(a, b)});
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const TreeEdge& x, const TreeEdge& y) { return x.weight > y.weight; });
  SpanningTree tree;
  tree.labels = graph.labels();
  tree.degrees.assign(m, 0);
  detail::DisjointSets sets(m);
  for (const auto& e : candidates) {
    if (tree.edges.size() + 1 >= m) break;
    if (sets.unite(e.a, e.b)) {
      tree.edges.push_back(e);
      ++tree.degrees[e.a];
      ++tree.degrees[e.b];
    }
  }
  return tree;
}

// --------------------------------------------------------------------------
// Exports

inline void write_mst_edges(const SpanningTree& tree, std::ostream& out) {
  out << "alpha,beta,weight\n";
  for (const auto& e : tree.edges)
    out << tree.labels[e.a] << ',' << tree.labels[e.b] << ',' << detail::format_number(e.weight) << '\n';
}

/// hub_dominance_flag marks the node(s) attaining the maximum degree.
inline void write_mst_nodes(const SpanningTree& tree, std::ostream& out) {
  out << "instrument,degree,hub_dominance_flag\n";
  const int top = tree.max_degree();
  for (std::size_t k = 0; k < tree.labels.size(); ++k)
    out << tree.labels[k] << ',' << tree.degrees[k] << ',' << (tree.degrees[k] == top ? 1 : 0) << '\n';
}

inline void write_projection_matrix(const WeightedGraph& graph, std::ostream& out) {
  out << "instrument";
  for (const auto& l : graph.labels()) out << ',' << l;
  out << '\n';
  for (std::size_t a = 0; a < graph.size(); ++a) {
    out << graph.labels()[a];
    for (std::size_t b = 0; b < graph.size(); ++b) out << ',' << detail::format_number(graph.weight(a, b));
    out << '\n';
  }
}

}  // namespace mrnews
