#pragma once

// Multi-asset jump-diffusion simulator with shared (co-)jump arrivals, and
// day-wise scoring of warning intervals against the planted co-jumps.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "mrnews/detail/numeric.hpp"
#include "mrnews/error.hpp"
#include "mrnews/indicators.hpp"
#include "mrnews/market_data.hpp"

namespace mrnews {

struct UniformRange {
  double lo = 0.0;
  double hi = 0.0;
};

enum class DiffusionMode {
  /// dP = mu P dt + sigma P dB
  Geometric,
  /// dP = mu dt + sigma dB, in price units
  Arithmetic,
};

struct SimConfig {
  std::size_t n_assets = 5;
  std::size_t n_days = 250;
  std::size_t minutes_per_day = 240;
  UniformRange annual_return{0.1, 0.2};
  UniformRange annual_volatility{0.1, 0.3};
  UniformRange initial_price{500.0, 1000.0};
  /// Per-minute co-jump probability for each direction.
  double p_positive = 0.001;
  double p_negative = 0.001;
  UniformRange positive_jump{10.0, 15.0};
  UniformRange negative_jump{15.0, 20.0};
  DiffusionMode diffusion = DiffusionMode::Geometric;
  double price_floor = 1.0;
  std::uint64_t seed = 42;
  Date start_date = Date{std::chrono::year{2012} / 1 / 4};

  /// Year fraction of one simulation step.
  [[nodiscard]] double dt() const { return 1.0 / static_cast<double>(n_days * minutes_per_day); }
  [[nodiscard]] std::size_t n_steps() const { return n_days * minutes_per_day; }

  void set_cojump_probability(double p) { p_positive = p_negative = p; }

  void validate() const {
    auto check = [](const UniformRange& r, const char* name, bool positive) {
      if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi) || (positive && !(r.lo > 0.0)))
        throw Error(ErrorKind::InvalidRange, std::string("invalid range for ") + name);
    };
    if (n_assets < 1 || n_days < 1 || minutes_per_day < 2)
      throw Error(ErrorKind::InvalidRange, "n_assets, n_days must be >= 1 and minutes_per_day >= 2");
    check(annual_return, "annual_return", false);
    check(annual_volatility, "annual_volatility", false);
    if (annual_volatility.lo < 0.0) throw Error(ErrorKind::InvalidRange, "annual_volatility must be >= 0");
    check(initial_price, "initial_price", true);
    check(positive_jump, "positive_jump", false);
    check(negative_jump, "negative_jump", false);
    if (positive_jump.lo < 0.0 || negative_jump.lo < 0.0)
      throw Error(ErrorKind::InvalidRange, "jump sizes are magnitudes and must be >= 0");
    for (double p : {p_positive, p_negative})
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidRange, "co-jump probability must lie in [0, 1]");
    if (!(price_floor > 0.0)) throw Error(ErrorKind::InvalidRange, "price_floor must be positive");
  }
};

struct CojumpEvent {
  std::size_t step = 0;    // 1-based simulation step; alters price index `step`
  std::size_t day = 0;     // (step - 1) / minutes_per_day
  std::size_t minute = 0;  // (step - 1) % minutes_per_day; 0 is the opening gap
  int direction = 0;       // +1 or -1
};

struct CojumpLog {
  std::vector<CojumpEvent> events;

  [[nodiscard]] std::size_t count(int direction) const {
    std::size_t n = 0;
    for (const auto& e : events) n += e.direction == direction ? 1 : 0;
    return n;
  }

  /// Days containing at least one event.
  [[nodiscard]] std::vector<bool> positive_days(std::size_t n_days) const {
    std::vector<bool> out(n_days, false);
    for (const auto& e : events) {
      if (e.day >= n_days) throw Error(ErrorKind::AxisMismatch, "co-jump day beyond axis");
      out[e.day] = true;
    }
    return out;
  }
};

struct AssetParams {
  double annual_return = 0.0;
  double annual_volatility = 0.0;
  double initial_price = 0.0;
};

struct SimulationResult {
  SimConfig config;
  std::vector<AssetParams> assets;
  /// Per asset n_steps + 1 prices, starting with the initial price.
  std::vector<std::vector<double>> paths;
  CojumpLog log;
  std::size_t floored_prices = 0;

  /// Continuous one-minute log returns of one asset (n_steps values).
  [[nodiscard]] std::vector<double> returns(std::size_t asset) const {
    const auto& p = paths.at(asset);
    std::vector<double> r(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = std::log(p[i]) - std::log(p[i - 1]);
    return r;
  }

  /// Prices after steps 1..n_steps, one day window per minutes_per_day rows.
  [[nodiscard]] PricePanel panel() const {
    const auto minutes = default_session_minutes(config.minutes_per_day);
    const auto dates = weekday_calendar(config.start_date, config.n_days);
    std::vector<Timestamp> ts;
    ts.reserve(config.n_steps());
    for (const auto& d : dates)
      for (int m : minutes) ts.push_back({d, m});
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols;
    for (std::size_t k = 0; k < paths.size(); ++k) {
      names.push_back("A" + std::to_string(k + 1));
      cols.emplace_back(paths[k].begin() + 1, paths[k].end());
    }
    return PricePanel(std::move(ts), std::move(names), std::move(cols), config.minutes_per_day);
  }
};

/// Per minute and asset: diffusion increment, plus every co-jump that fired
/// this minute (one Bernoulli draw per direction shared by all assets) with
/// an i.i.d. per-asset magnitude. Prices are floored at `price_floor`.
inline SimulationResult simulate_paths(const SimConfig& config) {
  config.validate();
  SimulationResult out;
  out.config = config;

  std::mt19937_64 param_rng(detail::derive_seed(config.seed, 1));
  std::mt19937_64 diffusion_rng(detail::derive_seed(config.seed, 2));
  std::mt19937_64 arrival_rng(detail::derive_seed(config.seed, 3));
  std::mt19937_64 size_rng(detail::derive_seed(config.seed, 4));
  auto uniform = [](std::mt19937_64& g, const UniformRange& r) {
    return r.lo == r.hi ? r.lo : std::uniform_real_distribution<double>(r.lo, r.hi)(g);
  };
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto n = config.n_assets;
  const auto steps = config.n_steps();
  const double dt = config.dt();
  const double sqrt_dt = std::sqrt(dt);
  out.assets.resize(n);
  out.paths.assign(n, std::vector<double>(steps + 1));
  for (std::size_t k = 0; k < n; ++k) {
    out.assets[k] = {uniform(param_rng, config.annual_return), uniform(param_rng, config.annual_volatility),
                     uniform(param_rng, config.initial_price)};
    out.paths[k][0] = out.assets[k].initial_price;
  }

  std::vector<double> jump(n);
  for (std::size_t s = 1; s <= steps; ++s) {
    const bool up = unit(arrival_rng) < config.p_positive;
    const bool down = unit(arrival_rng) < config.p_negative;
    const CojumpEvent where{s, (s - 1) / config.minutes_per_day, (s - 1) % config.minutes_per_day, 0};
    if (up) out.log.events.push_back({where.step, where.day, where.minute, +1});
    if (down) out.log.events.push_back({where.step, where.day, where.minute, -1});
    for (std::size_t k = 0; k < n; ++k) {
      jump[k] = 0.0;
      if (up) jump[k] += uniform(size_rng, config.positive_jump);
      if (down) jump[k] -= uniform(size_rng, config.negative_jump);
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double prev = out.paths[k][s - 1];
      const auto& a = out.assets[k];
      const double z = normal(diffusion_rng);
      const double diffusion = config.diffusion == DiffusionMode::Geometric
                                   ? a.annual_return * dt * prev + a.annual_volatility * sqrt_dt * prev * z
                                   : a.annual_return * dt + a.annual_volatility * sqrt_dt * z;
      double next = prev + diffusion + jump[k];
      if (next < config.price_floor) {
        next = config.price_floor;
        ++out.floored_prices;
      }
      out.paths[k][s] = next;
    }
  }
  return out;
}

inline void write_cojump_log(const CojumpLog& log, const SimConfig& config, std::ostream& out) {
  const auto dates = weekday_calendar(config.start_date, config.n_days);
  out << "day,date,minute,step,direction\n";
  for (const auto& e : log.events)
    out << e.day << ',' << format_date(dates.at(e.day)) << ',' << e.minute << ',' << e.step << ','
        << (e.direction > 0 ? "+1" : "-1") << '\n';
}

// --------------------------------------------------------------------------
// Scoring

struct ConfusionSummary {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  [[nodiscard]] std::size_t total() const noexcept { return tp + fp + tn + fn; }

  /// nullopt when there are no positive days.
  [[nodiscard]] std::optional<double> sensitivity() const {
    if (tp + fn == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
  }

  /// nullopt when there are no negative days.
  [[nodiscard]] std::optional<double> specificity() const {
    if (tn + fp == 0) return std::nullopt;
    return static_cast<double>(tn) / static_cast<double>(tn + fp);
  }

  /// (1 - specificity)^2 + (sensitivity - 1)^2. An undefined rate has no
  /// day that could be misclassified and counts as 1.
  [[nodiscard]] double objective() const {
    const double sens = sensitivity().value_or(1.0);
    const double spec = specificity().value_or(1.0);
    return (1.0 - spec) * (1.0 - spec) + (sens - 1.0) * (sens - 1.0);
  }
};

/// Day-wise confusion counts: a day is predicted positive when a risk
/// interval covers it and actually positive when truth marks it.
inline ConfusionSummary evaluate_warning(const IntervalSet& predicted, const std::vector<bool>& truth) {
  if (predicted.series_length != truth.size())
    throw Error(ErrorKind::AxisMismatch, "prediction covers " + std::to_string(predicted.series_length) +
                                             " days, truth " + std::to_string(truth.size()));
  const auto covered = predicted.mask();
  ConfusionSummary c;
  for (std::size_t d = 0; d < truth.size(); ++d) {
    if (truth[d])
      (covered[d] ? c.tp : c.fn) += 1;
    else
      (covered[d] ? c.fp : c.tn) += 1;
  }
  return c;
}

inline ConfusionSummary evaluate_warning(const PeakSet& peaks, const CojumpLog& truth, std::size_t n_days,
                                         std::size_t horizon = kDefaultHorizon) {
  if (peaks.series_length != n_days) throw Error(ErrorKind::AxisMismatch, "peak series length differs from truth axis");
  return evaluate_warning(risk_intervals(peaks, horizon), truth.positive_days(n_days));
}

}  // namespace mrnews
