#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace mrnews;
namespace ts = testing_support;

namespace {

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

RecurrenceMatrix path_graph(std::size_t n) {
  Edges e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return RecurrenceMatrix::from_edges(n, e);
}

RecurrenceMatrix random_layer(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  RecurrenceMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) r.add_edge(i, j);
  return r;
}

RecurrenceMatrix relabel(const RecurrenceMatrix& r, const std::vector<std::size_t>& perm) {
  RecurrenceMatrix out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j)
      if (r.at(i, j)) out.add_edge(perm[i], perm[j]);
  return out;
}

// Direct evaluation of the joint-histogram mutual information with maps.
double mi_oracle(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> pa, pb;
  const double n = static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0 / n;
    pa[a[i]] += 1.0 / n;
    pb[b[i]] += 1.0 / n;
  }
  double s = 0.0;
  for (const auto& [k, p] : joint) s += p * std::log(p / (pa[k.first] * pb[k.second]));
  return s;
}

double entropy_oracle(const std::vector<int>& a) {
  std::map<int, double> p;
  for (int k : a) p[k] += 1.0 / static_cast<double>(a.size());
  double h = 0.0;
  for (const auto& [k, v] : p) h -= v * std::log(v);
  return h;
}

DayWindow window_of(std::vector<std::vector<double>> cols, std::vector<std::string> names) {
  const auto minutes = default_session_minutes(cols.front().size());
  std::vector<Timestamp> t;
  for (int m : minutes) t.push_back({Date{std::chrono::year{2020} / 1 / 6}, m});
  return DayWindow(Date{std::chrono::year{2020} / 1 / 6}, t, std::move(names), std::move(cols));
}

std::vector<double> random_prices(std::size_t n, std::uint64_t seed) {
  const auto z = ts::normal_series(n, seed);
  std::vector<double> p(n);
  double v = 100.0;
  for (std::size_t i = 0; i < n; ++i) p[i] = (v *= std::exp(0.001 * z[i]));
  return p;
}

}  // namespace

TEST(BuildMrn, IdenticalSeriesGiveIdenticalLayers) {
  const auto p = random_prices(240, 1);
  const auto mrn = build_mrn(window_of({p, p}, {"a", "b"}));
  EXPECT_EQ(mrn.layer(0), mrn.layer(1));
}

TEST(BuildMrn, FixtureDayHasSixteenLayersOf237Nodes) {
  const auto loaded = load_price_panel((ts::fixture_dir() / "panel.csv").string());
  const auto mrn = build_mrn(loaded.panel.day(0));
  EXPECT_EQ(mrn.n_layers(), 16u);
  for (const auto& l : mrn.layers()) EXPECT_EQ(l.size(), 237u);
  EXPECT_EQ(mrn.dimension(), 3);
  EXPECT_EQ(mrn.delay(), 1);
}

TEST(BuildMrn, ConstantInstrumentIsDegenerate) {
  const auto p = random_prices(240, 2);
  MrnConfig cfg;
  cfg.threshold = {ThresholdKind::StdFraction, 0.05};
  const auto mrn = build_mrn(window_of({p, std::vector<double>(240, 50.0)}, {"a", "flat"}), cfg);
  EXPECT_FALSE(mrn.layer(0).degenerate());
  EXPECT_TRUE(mrn.layer(1).degenerate());
  EXPECT_EQ(mrn.layer(1), RecurrenceMatrix::all_ones(237));
  EXPECT_EQ(mrn.degenerate_layers(), 1u);
  // A constant degree sequence carries no information.
  EXPECT_EQ(interlayer_mutual_information(mrn.layer(0), mrn.layer(1)), 0.0);
}

TEST(BuildMrn, NeedsTwoInstruments) {
  EXPECT_THROW((void)build_mrn(window_of({random_prices(240, 3)}, {"a"})), Error);
}

TEST(MutualInformation, IdenticalPathLayersGiveLn2) {
  const auto a = path_graph(4);  // degrees 1, 2, 2, 1
  EXPECT_NEAR(interlayer_mutual_information(a, a), std::log(2.0), 1e-15);
  EXPECT_NEAR(degree_entropy(a), std::log(2.0), 1e-15);
}

TEST(MutualInformation, ConstantDegreeLayerGivesZero) {
  std::mt19937_64 rng(4);
  const auto a = random_layer(50, 0.1, rng);
  EXPECT_EQ(interlayer_mutual_information(a, RecurrenceMatrix(50)), 0.0);
  EXPECT_EQ(interlayer_mutual_information(a, RecurrenceMatrix::all_ones(50)), 0.0);
}

TEST(MutualInformation, SizeMismatch) {
  try {
    (void)interlayer_mutual_information(RecurrenceMatrix(3), RecurrenceMatrix(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeMismatch);
  }
}

TEST(MutualInformation, MatchesOracleAndBounds) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_layer(80, 0.05 + 0.01 * (trial % 5), rng);
    const auto b = random_layer(80, 0.08, rng);
    const double ab = interlayer_mutual_information(a, b);
    EXPECT_NEAR(ab, mi_oracle(a.degrees(), b.degrees()), 1e-12);
    EXPECT_EQ(ab, interlayer_mutual_information(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, std::min(degree_entropy(a), degree_entropy(b)) + 1e-12);
    EXPECT_NEAR(interlayer_mutual_information(a, a), entropy_oracle(a.degrees()), 1e-12);
  }
}

TEST(MutualInformation, ShuffledLayersNearZero) {
  std::mt19937_64 rng(12);
  double total = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_layer(1000, 0.002, rng);
    std::vector<std::size_t> perm(1000);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    total += interlayer_mutual_information(a, relabel(a, perm));
  }
  EXPECT_LT(total / 100.0, 0.05);
}

TEST(AverageMutualInformation, TwoLayerNormalizations) {
  const auto p = random_prices(240, 5);
  const auto q = random_prices(240, 6);
  const auto mrn = build_mrn(window_of({p, q}, {"a", "b"}));
  const double i12 = interlayer_mutual_information(mrn.layer(0), mrn.layer(1));
  EXPECT_DOUBLE_EQ(average_mutual_information(mrn, MiNormalization::Pairs), i12);
  EXPECT_DOUBLE_EQ(average_mutual_information(mrn, MiNormalization::AsPrinted), i12 / 2.0);
}

TEST(AverageMutualInformation, IdenticalLayersGiveEntropy) {
  const auto p = random_prices(240, 7);
  const auto mrn = build_mrn(window_of({p, p, p, p}, {"a", "b", "c", "d"}));
  EXPECT_NEAR(average_mutual_information(mrn), entropy_oracle(mrn.layer(0).degrees()), 1e-12);
}

TEST(AverageMutualInformation, NormalizationsDifferByConstant) {
  std::vector<std::vector<double>> cols;
  std::vector<std::string> names;
  for (std::uint64_t k = 0; k < 6; ++k) {
    cols.push_back(random_prices(240, 20 + k));
    names.push_back("x" + std::to_string(k));
  }
  const auto mrn = build_mrn(window_of(cols, names));
  const double pairs = average_mutual_information(mrn, MiNormalization::Pairs);
  const double printed = average_mutual_information(mrn, MiNormalization::AsPrinted);
  EXPECT_NEAR(printed, pairs * (6.0 - 1.0) / 2.0, 1e-12);
}

TEST(EdgeOverlap, IdenticalLayersGiveOne) {
  std::mt19937_64 rng(13);
  const auto a = random_layer(60, 0.1, rng);
  EXPECT_EQ(*edge_overlap(a, a), 1.0);
}

TEST(EdgeOverlap, DisjointLayersGiveHalf) {
  const auto a = RecurrenceMatrix::from_edges(6, Edges{{0, 1}, {2, 3}, {4, 5}});
  const auto b = RecurrenceMatrix::from_edges(6, Edges{{0, 2}, {1, 3}});
  EXPECT_EQ(*edge_overlap(a, b), 0.5);
}

TEST(EdgeOverlap, EmptyPairSkipped) {
  const auto r = edge_overlap(RecurrenceMatrix(5), RecurrenceMatrix(5));
  EXPECT_FALSE(r.has_value());
  const Mrn mrn({RecurrenceMatrix(5), RecurrenceMatrix(5), path_graph(5)}, {"a", "b", "c"});
  const auto avg = average_edge_overlap(mrn);
  EXPECT_EQ(avg.pairs_skipped, 1u);
  EXPECT_EQ(avg.pairs_used, 2u);
  EXPECT_DOUBLE_EQ(avg.value, 0.5);
}

TEST(EdgeOverlap, PairwiseTwoWithinHalfAndOne) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_layer(40, 0.05 + 0.01 * trial, rng);
    const auto b = random_layer(40, 0.3, rng);
    const auto w = edge_overlap(a, b);
    ASSERT_TRUE(w);
    EXPECT_GE(*w, 0.5);
    EXPECT_LE(*w, 1.0);
    // Brute force over i < j.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < 40; ++i)
      for (std::size_t j = i + 1; j < 40; ++j) {
        num += a.at(i, j) + b.at(i, j);
        den += (a.at(i, j) || b.at(i, j)) ? 1.0 : 0.0;
      }
    EXPECT_NEAR(*w, num / (2.0 * den), 1e-15);
  }
}

TEST(EdgeOverlap, AsPrintedDividesByM) {
  const auto a = path_graph(6);
  const Mrn mrn({a, a, a, a}, {"a", "b", "c", "d"});
  EXPECT_DOUBLE_EQ(average_edge_overlap(mrn, OverlapNormalization::AsPrinted).value, 2.0 / 4.0);
  EXPECT_DOUBLE_EQ(average_edge_overlap(mrn, OverlapNormalization::Pairwise2).value, 1.0);
}

TEST(Projection, FixtureWeightsMatchPairwiseCalls) {
  const auto loaded = load_price_panel((ts::fixture_dir() / "panel.csv").string());
  const auto mrn = build_mrn(loaded.panel.day(3));
  const auto g = projection_network(mrn);
  EXPECT_EQ(g.size(), 16u);
  EXPECT_EQ(g.edge_count(), 120u);
  for (std::size_t a = 0; a < 16; ++a) {
    EXPECT_EQ(g.weight(a, a), 0.0);
    for (std::size_t b = a + 1; b < 16; ++b) {
      EXPECT_NEAR(g.weight(a, b), interlayer_mutual_information(mrn.layer(a), mrn.layer(b)), 1e-12);
      EXPECT_EQ(g.weight(a, b), g.weight(b, a));
    }
  }
}

TEST(Projection, IdenticalLayersGiveEqualWeights) {
  const auto p = random_prices(240, 8);
  const auto g = projection_network(build_mrn(window_of({p, p, p}, {"a", "b", "c"})));
  EXPECT_EQ(g.weight(0, 1), g.weight(0, 2));
  EXPECT_EQ(g.weight(0, 1), g.weight(1, 2));
}

TEST(SpanningTree, TwoNodes) {
  const WeightedGraph g({"a", "b"}, {0.0, 0.7, 0.7, 0.0});
  const auto t = maximum_spanning_tree(g);
  ASSERT_EQ(t.edges.size(), 1u);
  EXPECT_EQ(t.edges[0].weight, 0.7);
}

TEST(SpanningTree, StarFavoringWeights) {
  std::vector<double> w(16, 1.0);
  for (std::size_t k = 1; k < 4; ++k) w[k] = w[k * 4] = 10.0;
  const auto t = maximum_spanning_tree(WeightedGraph({"1", "2", "3", "4"}, w));
  EXPECT_EQ(t.degrees, (std::vector<int>{3, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(t.hub_dominance(), 1.0);
  EXPECT_DOUBLE_EQ(t.total_weight(), 30.0);
}

TEST(SpanningTree, EqualWeightsTieBreak) {
  const WeightedGraph g({"1", "2", "3", "4", "5"}, std::vector<double>(25, 1.0));
  const auto t = maximum_spanning_tree(g);
  ASSERT_EQ(t.edges.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(t.edges[k].a, 0u);
    EXPECT_EQ(t.edges[k].b, k + 1);
  }
}

TEST(SpanningTree, RejectsAsymmetricWeights) {
  EXPECT_THROW(WeightedGraph({"a", "b"}, {0.0, 1.0, 2.0, 0.0}), Error);
}

TEST(SpanningTree, LayerPermutationInvariance) {
  std::vector<std::vector<double>> cols;
  std::vector<std::string> names;
  for (std::uint64_t k = 0; k < 7; ++k) {
    cols.push_back(random_prices(240, 40 + k));
    names.push_back("s" + std::to_string(k));
  }
  const auto mrn = build_mrn(window_of(cols, names));
  std::vector<std::size_t> perm{3, 6, 0, 5, 1, 4, 2};
  std::vector<std::vector<double>> pcols;
  std::vector<std::string> pnames;
  for (auto k : perm) {
    pcols.push_back(cols[k]);
    pnames.push_back(names[k]);
  }
  const auto pmrn = build_mrn(window_of(pcols, pnames));
  EXPECT_DOUBLE_EQ(average_mutual_information(mrn), average_mutual_information(pmrn));
  EXPECT_DOUBLE_EQ(average_edge_overlap(mrn).value, average_edge_overlap(pmrn).value);
  auto edge_set = [](const SpanningTree& t) {
    std::multiset<std::tuple<std::string, std::string, double>> s;
    for (const auto& e : t.edges) {
      auto x = t.labels[e.a], y = t.labels[e.b];
      if (y < x) std::swap(x, y);
      s.emplace(x, y, e.weight);
    }
    return s;
  };
  EXPECT_EQ(edge_set(maximum_spanning_tree(projection_network(mrn))),
            edge_set(maximum_spanning_tree(projection_network(pmrn))));
}

TEST(Exports, MstCsvFormats) {
  std::vector<double> w(16, 1.0);
  for (std::size_t k = 1; k < 4; ++k) w[k] = w[k * 4] = 10.0;
  const WeightedGraph g({"A", "B", "C", "D"}, w);
  const auto t = maximum_spanning_tree(g);
  std::ostringstream edges, nodes, proj;
  write_mst_edges(t, edges);
  write_mst_nodes(t, nodes);
  write_projection_matrix(g, proj);
  EXPECT_EQ(edges.str(), "alpha,beta,weight\nA,B,10\nA,C,10\nA,D,10\n");
  EXPECT_EQ(nodes.str(), "instrument,degree,hub_dominance_flag\nA,3,1\nB,1,0\nC,1,0\nD,1,0\n");
  EXPECT_EQ(proj.str().substr(0, proj.str().find('\n')), "instrument,A,B,C,D");
}
