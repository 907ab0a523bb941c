#pragma once

// ROC-style calibration of the co-jump frequency ("risk level") at which
// MRN indicator peaks best indicate planted co-jumps.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mrnews/detail/csv.hpp"
#include "mrnews/detail/numeric.hpp"
#include "mrnews/detail/parallel.hpp"
#include "mrnews/indicators.hpp"
#include "mrnews/jump_test.hpp"
#include "mrnews/simulation.hpp"

namespace mrnews {

/// What counts as an "actual" crisis day when scoring peaks.
enum class TruthSource {
  /// Days with at least one planted co-jump.
  Planted,
  /// Days on which the BNS test rejects on the equal-weighted portfolio.
  Bns,
};

struct CalibrationConfig {
  SimConfig simulation{};
  IndicatorConfig indicators{};
  std::size_t horizon = kDefaultHorizon;
  TruthSource truth = TruthSource::Planted;
  double bns_alpha = 0.001;
  int bns_interval = 5;
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

enum class CalibrationProfile { Desk, Full };

struct ProfileSettings {
  std::size_t runs;
  std::size_t n_days;
};

/// Desk: 5 runs x 50 days. Full: 50 runs x 250 days.
constexpr ProfileSettings profile_settings(CalibrationProfile p) {
  return p == CalibrationProfile::Desk ? ProfileSettings{5, 50} : ProfileSettings{50, 250};
}

/// grid "lo:hi:step" inclusive of hi (within half a step).
inline std::vector<double> parse_frequency_grid(const std::string& spec) {
  const auto fields = [&] {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t pos; (pos = spec.find(':', start)) != std::string::npos; start = pos + 1)
      out.push_back(spec.substr(start, pos - start));
    out.push_back(spec.substr(start));
    return out;
  }();
  std::vector<double> grid;
  if (fields.size() == 1) {
    for (const auto& f : detail::split_fields(spec)) {
      const auto v = detail::parse_double(f);
      if (!v) throw Error(ErrorKind::ConfigInvalid, "bad grid value '" + std::string(f) + "'");
      grid.push_back(*v);
    }
  } else if (fields.size() == 3) {
    const auto lo = detail::parse_double(fields[0]);
    const auto hi = detail::parse_double(fields[1]);
    const auto step = detail::parse_double(fields[2]);
    if (!lo || !hi || !step || !(*step > 0.0) || *hi < *lo) throw Error(ErrorKind::ConfigInvalid, "bad grid '" + spec + "'");
    const auto count = static_cast<std::size_t>(std::floor((*hi - *lo) / *step + 0.5)) + 1;
    for (std::size_t i = 0; i < count; ++i) grid.push_back(*lo + static_cast<double>(i) * *step);
  } else {
    throw Error(ErrorKind::ConfigInvalid, "grid must be lo:hi:step or a comma list");
  }
  if (grid.empty()) throw Error(ErrorKind::ConfigInvalid, "empty grid");
  for (double p : grid)
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::ConfigInvalid, "grid frequency outside [0, 1]");
  return grid;
}

struct CalibrationEntry {
  double frequency = 0.0;
  std::size_t frequency_index = 0;
  std::size_t run = 0;
  IndicatorKind indicator = IndicatorKind::MutualInformation;
  ConfusionSummary confusion;
  double objective = 0.0;
};

struct IndicatorCalibration {
  IndicatorKind indicator = IndicatorKind::MutualInformation;
  std::vector<double> mean_objective;  // per grid frequency
  double best_frequency = 0.0;         // argmin of mean_objective
  std::vector<double> per_run_best;    // argmin frequency of each run
};

struct CalibrationResult {
  std::vector<double> grid;
  std::size_t runs = 0;
  std::vector<CalibrationEntry> entries;  // grid x runs x {I, omega}
  IndicatorCalibration mutual_information;
  IndicatorCalibration edge_overlap;
};

namespace detail {

inline std::vector<bool> bns_truth(const SimulationResult& sim, double alpha, int interval) {
  const auto panel = sim.panel();
  const auto portfolio = build_portfolio_series(panel, WeightVector::equal(panel.instruments()));
  std::vector<bool> out;
  for (const auto& r : jump_test_days(portfolio, interval, alpha)) out.push_back(r.is_jump);
  return out;
}

inline std::size_t argmin_index(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace detail

/// For every (frequency, run): simulate with a seed derived from (seed,
/// frequency index, run), build daily indicators, detect peaks, and score
/// the risk intervals against the truth days.
inline CalibrationResult calibrate_risk_level(const std::vector<double>& grid, std::size_t runs,
                                              const CalibrationConfig& config) {
  if (grid.empty()) throw Error(ErrorKind::InvalidRange, "calibration grid is empty");
  if (runs < 1) throw Error(ErrorKind::InvalidRange, "calibration needs at least one run");
  const auto jobs = grid.size() * runs;
  std::vector<std::array<CalibrationEntry, 2>> results(jobs);

  detail::parallel_for(jobs, config.threads, [&](std::size_t job) {
    const auto fi = job / runs;
    const auto run = job % runs;
    SimConfig sim_config = config.simulation;
    sim_config.set_cojump_probability(grid[fi]);
    sim_config.seed = detail::derive_seed(config.seed, fi, run);
    const auto sim = simulate_paths(sim_config);
    const auto n_days = sim_config.n_days;
    const auto truth = config.truth == TruthSource::Planted ? sim.log.positive_days(n_days)
                                                            : detail::bns_truth(sim, config.bns_alpha, config.bns_interval);
    IndicatorConfig ind = config.indicators;
    ind.threads = 1;
    const auto run_ind = indicator_series(sim.panel(), ind);
    auto score = [&](const IndicatorSeries& series) {
      CalibrationEntry e;
      e.frequency = grid[fi];
      e.frequency_index = fi;
      e.run = run;
      e.indicator = series.kind;
      const auto peaks = series.size() >= 3 ? detect_peaks(series) : PeakSet{{}, {}, series.size()};
      e.confusion = evaluate_warning(risk_intervals(peaks, config.horizon), truth);
      e.objective = e.confusion.objective();
      return e;
    };
    results[job] = {score(run_ind.mutual_information), score(run_ind.edge_overlap)};
  });

  CalibrationResult out;
  out.grid = grid;
  out.runs = runs;
  for (const auto& pair : results)
    for (const auto& e : pair) out.entries.push_back(e);

  for (int which = 0; which < 2; ++which) {
    auto& cal = which == 0 ? out.mutual_information : out.edge_overlap;
    cal.indicator = which == 0 ? IndicatorKind::MutualInformation : IndicatorKind::EdgeOverlap;
    cal.mean_objective.assign(grid.size(), 0.0);
    std::vector<std::vector<double>> per_run(runs, std::vector<double>(grid.size(), 0.0));
    for (std::size_t job = 0; job < jobs; ++job) {
      const auto& e = results[job][static_cast<std::size_t>(which)];
      cal.mean_objective[e.frequency_index] += e.objective / static_cast<double>(runs);
      per_run[e.run][e.frequency_index] = e.objective;
    }
    cal.best_frequency = grid[detail::argmin_index(cal.mean_objective)];
    for (const auto& r : per_run) cal.per_run_best.push_back(grid[detail::argmin_index(r)]);
  }
  return out;
}

/// Long format, one row per (indicator, frequency, run). Undefined rates are
/// written as empty fields.
inline void write_calibration_csv(const CalibrationResult& result, std::ostream& out) {
  out << "indicator,frequency,run,sensitivity,specificity,objective\n";
  auto opt = [](std::optional<double> v) { return v ? detail::format_number(*v) : std::string(); };
  for (int which = 0; which < 2; ++which) {
    const auto kind = which == 0 ? IndicatorKind::MutualInformation : IndicatorKind::EdgeOverlap;
    for (const auto& e : result.entries) {
      if (e.indicator != kind) continue;
      out << to_string(kind) << ',' << detail::format_number(e.frequency) << ',' << e.run << ','
          << opt(e.confusion.sensitivity()) << ',' << opt(e.confusion.specificity()) << ','
          << detail::format_number(e.objective) << '\n';
    }
  }
}

}  // namespace mrnews
