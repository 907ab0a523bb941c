#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace mrnews;
namespace ts = testing_support;

namespace {

SimConfig small_config(std::size_t days, double p, std::uint64_t seed = 7) {
  SimConfig c;
  c.n_assets = 4;
  c.n_days = days;
  c.set_cojump_probability(p);
  c.seed = seed;
  return c;
}

PeakSet peaks_at(std::vector<std::size_t> days, std::size_t n) {
  PeakSet p;
  p.series_length = n;
  for (auto d : days) p.peaks.push_back({d, 1.0, 1.0, 0.0});
  return p;
}

CojumpLog log_on(std::vector<std::size_t> days) {
  CojumpLog log;
  for (auto d : days) log.events.push_back({d * 240 + 1, d, 0, +1});
  return log;
}

}  // namespace

TEST(Simulation, DefaultsGiveSixtyThousandReturns) {
  SimConfig c;
  c.n_assets = 2;
  const auto sim = simulate_paths(c);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(sim.returns(k).size(), 60000u);
  const auto panel = sim.panel();
  EXPECT_EQ(panel.n_days(), 250u);
  EXPECT_EQ(panel.window_len(), 240u);
  EXPECT_EQ(panel.n_instruments(), 2u);
}

TEST(Simulation, NoJumpsWithZeroProbability) {
  const auto sim = simulate_paths(small_config(20, 0.0));
  EXPECT_TRUE(sim.log.events.empty());
}

TEST(Simulation, CojumpCountWithinThreeSigma) {
  SimConfig c;
  c.n_assets = 1;
  const auto sim = simulate_paths(c);
  const double expected = 0.001 * 60000;
  for (int dir : {+1, -1})
    EXPECT_LE(std::abs(static_cast<double>(sim.log.count(dir)) - expected), 3.0 * std::sqrt(expected));
}

TEST(Simulation, SeedDeterminism) {
  const auto a = simulate_paths(small_config(10, 0.002, 99));
  const auto b = simulate_paths(small_config(10, 0.002, 99));
  const auto c = simulate_paths(small_config(10, 0.002, 100));
  EXPECT_EQ(a.paths, b.paths);
  EXPECT_EQ(a.log.events.size(), b.log.events.size());
  EXPECT_NE(a.paths, c.paths);
}

TEST(Simulation, JumpProbabilityDoesNotShiftDiffusion) {
  auto cfg = small_config(5, 0.0);
  cfg.positive_jump = cfg.negative_jump = {0.0, 0.0};
  const auto a = simulate_paths(cfg);
  cfg.set_cojump_probability(0.01);
  const auto b = simulate_paths(cfg);
  EXPECT_FALSE(b.log.events.empty());
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t s = 0; s < a.paths[k].size(); ++s) EXPECT_NEAR(a.paths[k][s], b.paths[k][s], 1e-9);
}

TEST(Simulation, PlantedJumpsMoveEveryAsset) {
  const auto sim = simulate_paths(small_config(50, 0.001, 3));
  ASSERT_FALSE(sim.log.events.empty());
  std::multiset<std::size_t> steps;
  for (const auto& e : sim.log.events) steps.insert(e.step);
  for (const auto& e : sim.log.events) {
    if (steps.count(e.step) > 1) continue;
    EXPECT_EQ(e.day, (e.step - 1) / 240);
    EXPECT_EQ(e.minute, (e.step - 1) % 240);
    for (std::size_t k = 0; k < 4; ++k) {
      const double r = std::log(sim.paths[k][e.step] / sim.paths[k][e.step - 1]);
      EXPECT_GT(r * e.direction, 0.005) << "asset " << k << " step " << e.step;
    }
  }
}

TEST(Simulation, PriceFloorHolds) {
  auto cfg = small_config(5, 0.0);
  cfg.p_negative = 0.02;
  cfg.initial_price = {20.0, 30.0};
  const auto sim = simulate_paths(cfg);
  EXPECT_GT(sim.floored_prices, 0u);
  for (const auto& p : sim.paths)
    for (double v : p) EXPECT_GE(v, cfg.price_floor);
}

TEST(Simulation, ArithmeticModeRuns) {
  auto cfg = small_config(3, 0.0);
  cfg.diffusion = DiffusionMode::Arithmetic;
  const auto sim = simulate_paths(cfg);
  for (const auto& p : sim.paths)
    for (double v : p) EXPECT_GT(v, 0.0);
}

TEST(Simulation, InvalidConfigRejected) {
  auto cfg = small_config(3, 1.5);
  EXPECT_THROW((void)simulate_paths(cfg), Error);
  cfg = small_config(3, 0.0);
  cfg.initial_price = {0.0, 1.0};
  EXPECT_THROW((void)simulate_paths(cfg), Error);
}

TEST(Simulation, CojumpLogCsv) {
  CojumpLog log;
  log.events.push_back({241, 1, 0, -1});
  std::ostringstream out;
  write_cojump_log(log, small_config(2, 0.0), out);
  EXPECT_EQ(out.str(), "day,date,minute,step,direction\n1,2012-01-05,0,241,-1\n");
}

TEST(Warning, EmptyTruthNoPeaks) {
  const auto c = evaluate_warning(peaks_at({}, 30), CojumpLog{}, 30);
  EXPECT_FALSE(c.sensitivity().has_value());
  EXPECT_EQ(*c.specificity(), 1.0);
  EXPECT_EQ(c.objective(), 0.0);
}

TEST(Warning, AllPositiveAllCovered) {
  std::vector<std::size_t> days(20);
  for (std::size_t d = 0; d < 20; ++d) days[d] = d;
  const auto c = evaluate_warning(peaks_at({0, 10}, 20), log_on(days), 20);
  EXPECT_EQ(*c.sensitivity(), 1.0);
  EXPECT_FALSE(c.specificity().has_value());
}

TEST(Warning, SinglePeakExample) {
  const auto c = evaluate_warning(peaks_at({3}, 250), log_on({5, 50}), 250);
  // Brute-force day marking.
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t d = 0; d < 250; ++d) {
    const bool covered = d >= 3 && d <= 12;
    const bool positive = d == 5 || d == 50;
    (positive ? (covered ? tp : fn) : (covered ? fp : tn)) += 1;
  }
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_EQ(c.fp, 9u);
  EXPECT_EQ(c.tn, 239u);
  EXPECT_EQ(c.tp, tp);
  EXPECT_EQ(c.fp, fp);
  EXPECT_EQ(c.fn, fn);
  EXPECT_EQ(c.tn, tn);
  EXPECT_NEAR(c.objective(), std::pow(9.0 / 248.0, 2) + 0.25, 1e-15);
}

TEST(Warning, AxisMismatch) {
  try {
    (void)evaluate_warning(peaks_at({3}, 100), log_on({5}), 90);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AxisMismatch);
  }
}

TEST(Calibration, FrequencyGridParsing) {
  EXPECT_EQ(parse_frequency_grid("0.001,0.005,0.01"), (std::vector<double>{0.001, 0.005, 0.01}));
  const auto g = parse_frequency_grid("0.001:0.005:0.001");
  ASSERT_EQ(g.size(), 5u);
  EXPECT_NEAR(g.back(), 0.005, 1e-15);
  EXPECT_THROW((void)parse_frequency_grid(""), Error);
  EXPECT_THROW((void)parse_frequency_grid("0.1,x"), Error);
}

TEST(Calibration, StructureAndThreadIndependence) {
  CalibrationConfig cfg;
  cfg.simulation = small_config(20, 0.0);
  cfg.seed = 5;
  const std::vector<double> grid{0.001, 0.01, 0.05};
  const auto a = calibrate_risk_level(grid, 3, cfg);
  cfg.threads = 4;
  const auto b = calibrate_risk_level(grid, 3, cfg);
  ASSERT_EQ(a.entries.size(), 18u);
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].objective, b.entries[i].objective);
    EXPECT_TRUE(std::isfinite(a.entries[i].objective));
    EXPECT_GE(a.entries[i].objective, 0.0);
    EXPECT_LE(a.entries[i].objective, 2.0);
    EXPECT_EQ(a.entries[i].confusion.total(), 20u);
  }
  for (const auto* cal : {&a.mutual_information, &a.edge_overlap}) {
    ASSERT_EQ(cal->mean_objective.size(), 3u);
    ASSERT_EQ(cal->per_run_best.size(), 3u);
    double best = cal->mean_objective[0];
    double best_f = grid[0];
    for (std::size_t f = 0; f < 3; ++f) {
      double sum = 0.0;
      for (const auto& e : a.entries)
        if (e.indicator == cal->indicator && e.frequency_index == f) sum += e.objective;
      EXPECT_NEAR(cal->mean_objective[f], sum / 3.0, 1e-15);
      if (cal->mean_objective[f] < best) {
        best = cal->mean_objective[f];
        best_f = grid[f];
      }
    }
    EXPECT_EQ(cal->best_frequency, best_f);
  }
  std::ostringstream out;
  write_calibration_csv(a, out);
  const auto text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 19);
}

TEST(Calibration, SingleFrequencyIsItsOwnArgmin) {
  CalibrationConfig cfg;
  cfg.simulation = small_config(10, 0.0);
  const auto r = calibrate_risk_level({0.01}, 2, cfg);
  EXPECT_EQ(r.mutual_information.best_frequency, 0.01);
  EXPECT_EQ(r.edge_overlap.best_frequency, 0.01);
  EXPECT_THROW((void)calibrate_risk_level({}, 2, cfg), Error);
  EXPECT_THROW((void)calibrate_risk_level({0.01}, 0, cfg), Error);
}

TEST(Calibration, BnsTruthSource) {
  CalibrationConfig cfg;
  cfg.simulation = small_config(10, 0.0);
  cfg.truth = TruthSource::Bns;
  const auto r = calibrate_risk_level({0.005}, 1, cfg);
  for (const auto& e : r.entries) EXPECT_EQ(e.confusion.total(), 10u);
}
