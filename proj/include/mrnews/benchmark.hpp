#pragma once

// Critical-slowing-down benchmark: Gaussian-kernel detrending before the
// pre-crisis price maximum, rolling variance / lag-1 autocorrelation /
// low-frequency spectral power, Kendall tau trend estimation, a parameter
// grid sensitivity analysis and a historical rank significance test.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "mrnews/detail/csv.hpp"
#include "mrnews/detail/numeric.hpp"
#include "mrnews/detail/parallel.hpp"
#include "mrnews/error.hpp"
#include "mrnews/market_data.hpp"

namespace mrnews {

// --------------------------------------------------------------------------
// Kendall tau

struct KendallResult {
  double tau = 0.0;
  /// One of the inputs is constant; tau is reported as 0.
  bool degenerate = false;
};

namespace detail {

// Counts strict inversions of v[lo, hi) while merge-sorting it.
inline std::uint64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

// sum over groups of equal values of t(t-1)/2; `v` must be sorted.
inline std::uint64_t tied_pairs(std::span<const double> v) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const std::uint64_t t = j - i;
    s += t * (t - 1) / 2;
    i = j;
  }
  return s;
}

}  // namespace detail

/// Tie-corrected Kendall tau-b in O(n log n) (Knight's merge-sort method).
inline KendallResult kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::SizeMismatch, "kendall: inputs differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorKind::SeriesTooShort, "kendall: need at least 2 observations");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(x[a], y[a]) < std::tie(x[b], y[b]);
  });
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }
  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t n1 = detail::tied_pairs(xs);
  std::uint64_t n3 = 0;  // pairs tied in both
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && xs[j] == xs[i] && ys[j] == ys[i]) ++j;
    const std::uint64_t t = j - i;
    n3 += t * (t - 1) / 2;
    i = j;
  }
  std::vector<double> buf(n);
  const std::uint64_t swaps = detail::merge_count(ys, buf, 0, n);
  const std::uint64_t n2 = detail::tied_pairs(ys);
  if (n1 == n0 || n2 == n0) return {0.0, true};
  const auto numerator = static_cast<std::int64_t>(n0 - n1 - n2 + n3) - 2 * static_cast<std::int64_t>(swaps);
  return {static_cast<double>(numerator) /
              std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2)),
          false};
}

/// Kendall tau-b of a segment against the sequence 1, 2, ..., n.
inline KendallResult kendall_tau_trend(std::span<const double> segment) {
  if (segment.size() < 2) throw Error(ErrorKind::SeriesTooShort, "kendall trend needs lkw >= 2");
  std::vector<double> index(segment.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<double>(i + 1);
  return kendall_tau_b(index, segment);
}

// --------------------------------------------------------------------------
// Detrending

/// Gaussian kernel smoother truncated at +-4 bandwidths with weights
/// renormalized at the edges. A bandwidth below 1/4 sample is the identity.
inline std::vector<double> gaussian_smooth(std::span<const double> x, double bandwidth) {
  std::vector<double> out(x.begin(), x.end());
  if (!(bandwidth > 0.0)) return out;
  const auto half = static_cast<std::ptrdiff_t>(std::floor(4.0 * bandwidth));
  if (half < 1) return out;
  std::vector<double> w(static_cast<std::size_t>(half) + 1);
  for (std::ptrdiff_t k = 0; k <= half; ++k) {
    const double u = static_cast<double>(k) / bandwidth;
    w[static_cast<std::size_t>(k)] = std::exp(-0.5 * u * u);
  }
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double num = 0.0;
    double den = 0.0;
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
      const auto j = i + k;
      if (j < 0 || j >= n) continue;
      const double wk = w[static_cast<std::size_t>(k < 0 ? -k : k)];
      num += wk * (x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(i)]);
      den += wk;
    }
    // Averaging offsets from x_i keeps a constant series exact.
    out[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + num / den;
  }
  return out;
}

struct BenchmarkParams {
  std::size_t detrend_window = 500;
  double kernel_bandwidth = 25.0;
  std::size_t rolling_window = 150;
  std::size_t lkw = 150;
  std::size_t lkend = 0;
  /// Days of history pooled by the significance test.
  std::size_t history = 1000;
};

struct DetrendResult {
  std::size_t peak_index = 0;    // pre-crisis price maximum
  std::size_t window_begin = 0;  // first day of the detrended window; window ends at peak_index
  std::vector<double> smooth;
  std::vector<double> residual;
};

/// Highest price among the detrend_window days before `crisis`, then the
/// detrend_window days ending at that maximum are smoothed; residual =
/// price - smooth.
inline DetrendResult detrend_gaussian(std::span<const double> prices, std::size_t crisis, const BenchmarkParams& params) {
  const auto w = params.detrend_window;
  if (w < 2) throw Error(ErrorKind::InvalidRange, "detrend_window must be >= 2");
  if (crisis == 0 || crisis > prices.size()) throw Error(ErrorKind::InsufficientHistory, "crisis index outside the price series");
  const std::size_t search_lo = crisis > w ? crisis - w : 0;
  const auto peak_it = std::max_element(prices.begin() + static_cast<std::ptrdiff_t>(search_lo),
                                        prices.begin() + static_cast<std::ptrdiff_t>(crisis));
  DetrendResult out;
  out.peak_index = static_cast<std::size_t>(peak_it - prices.begin());
  if (out.peak_index + 1 < w)
    throw Error(ErrorKind::InsufficientHistory, "need " + std::to_string(w) + " days up to the pre-crisis maximum, have " +
                                                    std::to_string(out.peak_index + 1));
  out.window_begin = out.peak_index + 1 - w;
  const auto window = prices.subspan(out.window_begin, w);
  out.smooth = gaussian_smooth(window, params.kernel_bandwidth);
  out.residual.resize(w);
  for (std::size_t i = 0; i < w; ++i) out.residual[i] = window[i] - out.smooth[i];
  return out;
}

// --------------------------------------------------------------------------
// Rolling indicators

enum class EwsIndicator { Variance, Acf1, LowFrequencyPower };
inline constexpr std::array<EwsIndicator, 3> kEwsIndicators{EwsIndicator::Variance, EwsIndicator::Acf1,
                                                            EwsIndicator::LowFrequencyPower};

inline std::string_view to_string(EwsIndicator k) {
  switch (k) {
    case EwsIndicator::Variance: return "variance";
    case EwsIndicator::Acf1: return "acf1";
    case EwsIndicator::LowFrequencyPower: return "low_freq_power";
  }
  return "?";
}

struct RollingIndicators {
  std::vector<double> variance;
  std::vector<double> acf1;
  std::vector<double> low_frequency_power;

  [[nodiscard]] const std::vector<double>& get(EwsIndicator k) const {
    return k == EwsIndicator::Variance ? variance : k == EwsIndicator::Acf1 ? acf1 : low_frequency_power;
  }
};

inline double lag1_autocorrelation(std::span<const double> x) {
  const double m = detail::mean(x);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    den += (x[t] - m) * (x[t] - m);
    if (t + 1 < x.size()) num += (x[t] - m) * (x[t + 1] - m);
  }
  return den > 0.0 ? num / den : 0.0;
}

/// Mean periodogram |X_k|^2 / n over the lowest 10% (at least one) of the
/// nonzero frequency bins k = 1..floor(n/2), DC excluded.
inline double low_frequency_power(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t bins = n / 2;
  if (bins == 0) return 0.0;
  const std::size_t band = std::max<std::size_t>(1, bins / 10);
  const double m = detail::mean(x);
  double total = 0.0;
  for (std::size_t k = 1; k <= band; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n);
      re += (x[t] - m) * std::cos(angle);
      im -= (x[t] - m) * std::sin(angle);
    }
    total += (re * re + im * im) / static_cast<double>(n);
  }
  return total / static_cast<double>(band);
}

/// Value j of each series describes residuals [j, j + window).
inline RollingIndicators rolling_indicators(std::span<const double> residuals, std::size_t window) {
  if (window < 2) throw Error(ErrorKind::InvalidRange, "rolling window must be >= 2");
  if (residuals.size() <= window)
    throw Error(ErrorKind::WindowTooLong, "rolling window " + std::to_string(window) + " needs more than " +
                                              std::to_string(residuals.size()) + " residuals");
  const std::size_t count = residuals.size() - window + 1;
  RollingIndicators out;
  out.variance.resize(count);
  out.acf1.resize(count);
  out.low_frequency_power.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    const auto w = residuals.subspan(j, window);
    out.variance[j] = detail::sample_variance(w);
    out.acf1[j] = lag1_autocorrelation(w);
    out.low_frequency_power[j] = low_frequency_power(w);
  }
  return out;
}

// --------------------------------------------------------------------------
// Trend segments

/// Index range of the lkw-long trend segment ending lkend days before the
/// last residual, in rolling-series coordinates.
inline std::pair<std::size_t, std::size_t> trend_segment(const BenchmarkParams& p) {
  if (p.lkw < 2 || p.rolling_window < 2) throw Error(ErrorKind::InvalidRange, "lkw and rolling_window must be >= 2");
  if (p.rolling_window >= p.detrend_window || p.lkw + p.lkend > p.detrend_window - p.rolling_window)
    throw Error(ErrorKind::InsufficientHistory, "lkw + lkend must not exceed detrend_window - rolling_window");
  const std::size_t end = p.detrend_window - p.rolling_window - p.lkend;  // inclusive
  return {end + 1 - p.lkw, end + 1};
}

/// Kendall tau of each indicator over the pre-crisis trend segment.
inline std::array<KendallResult, 3> pre_crisis_tau(std::span<const double> prices, std::size_t crisis,
                                                   const BenchmarkParams& params) {
  const auto [lo, hi] = trend_segment(params);
  const auto detrended = detrend_gaussian(prices, crisis, params);
  const auto rolling = rolling_indicators(detrended.residual, params.rolling_window);
  std::array<KendallResult, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& series = rolling.get(kEwsIndicators[i]);
    out[i] = kendall_tau_trend(std::span<const double>(series).subspan(lo, hi - lo));
  }
  return out;
}

// --------------------------------------------------------------------------
// Sensitivity analysis

struct ParamGrid {
  std::vector<double> kernel_bandwidth{10.0, 25.0, 50.0};
  std::vector<std::size_t> rolling_window{100, 150, 200, 250};
  std::vector<std::size_t> lkw{125, 150, 175, 200, 225, 250};
  std::vector<std::size_t> lkend{0, 10, 20, 30, 40, 50};
  std::size_t detrend_window = 500;
  std::size_t history = 1000;

  [[nodiscard]] std::vector<BenchmarkParams> combinations() const {
    std::vector<BenchmarkParams> out;
    for (double bw : kernel_bandwidth)
      for (auto rw : rolling_window)
        for (auto l : lkw)
          for (auto e : lkend) out.push_back({detrend_window, bw, rw, l, e, history});
    return out;
  }
};

inline std::string combo_label(const BenchmarkParams& p) {
  return "bw=" + detail::format_number(p.kernel_bandwidth) + ";rw=" + std::to_string(p.rolling_window) +
         ";lkw=" + std::to_string(p.lkw) + ";lkend=" + std::to_string(p.lkend);
}

struct ComboTau {
  BenchmarkParams params;
  KendallResult tau;
};

struct IndicatorTaus {
  EwsIndicator indicator = EwsIndicator::Variance;
  std::vector<ComboTau> taus;
  double fraction_positive = 0.0;  // share with tau >= cut
  double fraction_negative = 0.0;  // share with tau <= -cut
  std::vector<std::size_t> histogram;  // 20 equal bins over [-1, 1]
  bool passes = false;
  int direction = 0;
};

struct TauHistogram {
  std::array<IndicatorTaus, 3> indicators;
  std::vector<BenchmarkParams> skipped;  // InsufficientHistory combinations
};

struct SensitivityOptions {
  double tau_cut = 0.8;
  double pass_fraction = 0.5;
};

inline constexpr std::size_t kHistogramBins = 20;

namespace detail {

inline void summarize(IndicatorTaus& ind, const SensitivityOptions& opt) {
  ind.histogram.assign(kHistogramBins, 0);
  std::size_t pos = 0, neg = 0;
  for (const auto& c : ind.taus) {
    const double t = c.tau.tau;
    auto bin = static_cast<std::size_t>(std::floor((t + 1.0) / 2.0 * kHistogramBins));
    ++ind.histogram[std::min(bin, kHistogramBins - 1)];
    pos += t >= opt.tau_cut ? 1 : 0;
    neg += t <= -opt.tau_cut ? 1 : 0;
  }
  const double n = static_cast<double>(ind.taus.size());
  ind.fraction_positive = ind.taus.empty() ? 0.0 : static_cast<double>(pos) / n;
  ind.fraction_negative = ind.taus.empty() ? 0.0 : static_cast<double>(neg) / n;
  const double best = std::max(ind.fraction_positive, ind.fraction_negative);
  ind.passes = !ind.taus.empty() && best > 0.0 && best >= opt.pass_fraction;
  ind.direction = ind.passes ? (ind.fraction_positive >= ind.fraction_negative ? 1 : -1) : 0;
}

}  // namespace detail

/// Full-factorial tau evaluation over the grid. Combinations without enough
/// history are recorded as skipped. Rolling indicators are computed once per
/// (bandwidth, rolling window).
inline TauHistogram sensitivity_analysis(std::span<const double> prices, std::size_t crisis, const ParamGrid& grid,
                                         const SensitivityOptions& opt = {}) {
  const auto combos = grid.combinations();
  if (combos.empty()) throw Error(ErrorKind::InvalidRange, "empty parameter grid");
  TauHistogram out;
  for (std::size_t i = 0; i < 3; ++i) out.indicators[i].indicator = kEwsIndicators[i];
  std::map<std::pair<double, std::size_t>, std::optional<RollingIndicators>> cache;
  for (const auto& p : combos) {
    try {
      const auto [lo, hi] = trend_segment(p);
      const auto key = std::make_pair(p.kernel_bandwidth, p.rolling_window);
      if (!cache.contains(key)) {
        const auto detrended = detrend_gaussian(prices, crisis, p);
        cache[key] = rolling_indicators(detrended.residual, p.rolling_window);
      }
      const auto& rolling = *cache[key];
      for (std::size_t i = 0; i < 3; ++i) {
        const auto& series = rolling.get(kEwsIndicators[i]);
        out.indicators[i].taus.push_back({p, kendall_tau_trend(std::span<const double>(series).subspan(lo, hi - lo))});
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientHistory && e.kind() != ErrorKind::WindowTooLong) throw;
      out.skipped.push_back(p);
    }
  }
  for (auto& ind : out.indicators) detail::summarize(ind, opt);
  return out;
}

// --------------------------------------------------------------------------
// Significance

/// Fraction of the pool at least as extreme as `observed` in the direction
/// of its sign (>= for tau >= 0, <= otherwise). With `include_observed` the
/// observed value joins the pool.
inline double rank_p_value(std::span<const double> pool, double observed, bool include_observed = false) {
  std::size_t count = include_observed ? 1 : 0;
  for (double t : pool) count += (observed >= 0.0 ? t >= observed : t <= observed) ? 1 : 0;
  const std::size_t n = pool.size() + (include_observed ? 1 : 0);
  if (n == 0) throw Error(ErrorKind::InsufficientHistory, "empty historical pool");
  return static_cast<double>(count) / static_cast<double>(n);
}

struct SignificanceResult {
  EwsIndicator indicator = EwsIndicator::Variance;
  double tau = 0.0;
  double p_value = 1.0;
  std::size_t n_segments = 0;
  bool significant = false;
};

inline constexpr double kSignificanceLevel = 0.1;

/// Historical tau pool: every stride-1, lkw-long segment of the rolling
/// indicators computed on the detrended `history` days before `crisis`.
inline std::vector<double> historical_taus(const RollingIndicators& rolling, EwsIndicator k, std::size_t lkw) {
  const auto& s = rolling.get(k);
  std::vector<double> out;
  for (std::size_t j = 0; j + lkw <= s.size(); ++j)
    out.push_back(kendall_tau_trend(std::span<const double>(s).subspan(j, lkw)).tau);
  return out;
}

inline RollingIndicators history_rolling(std::span<const double> prices, std::size_t crisis, const BenchmarkParams& p) {
  if (crisis < p.history || crisis > prices.size())
    throw Error(ErrorKind::InsufficientHistory, "significance test needs " + std::to_string(p.history) +
                                                    " days before the crisis, have " + std::to_string(crisis));
  const auto window = prices.subspan(crisis - p.history, p.history);
  const auto smooth = gaussian_smooth(window, p.kernel_bandwidth);
  std::vector<double> residual(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) residual[i] = window[i] - smooth[i];
  return rolling_indicators(residual, p.rolling_window);
}

inline std::array<SignificanceResult, 3> significance_test(std::span<const double> prices, std::size_t crisis,
                                                           const BenchmarkParams& params) {
  const auto taus = pre_crisis_tau(prices, crisis, params);
  const auto rolling = history_rolling(prices, crisis, params);
  std::array<SignificanceResult, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto pool = historical_taus(rolling, kEwsIndicators[i], params.lkw);
    out[i].indicator = kEwsIndicators[i];
    out[i].tau = taus[i].tau;
    out[i].n_segments = pool.size();
    out[i].p_value = rank_p_value(pool, taus[i].tau);
    out[i].significant = out[i].p_value < kSignificanceLevel;
  }
  return out;
}

// --------------------------------------------------------------------------
// Report

struct BenchmarkRow {
  std::size_t crisis = 0;
  EwsIndicator indicator = EwsIndicator::Variance;
  BenchmarkParams params;
  double tau = 0.0;
  bool passes_sensitivity = false;
  std::optional<double> p_value;  // nullopt when history is insufficient
  bool significant = false;
};

/// Sensitivity and significance for every grid combination of one crisis.
/// Rolling indicators are cached per (bandwidth, rolling window).
inline std::vector<BenchmarkRow> benchmark_crisis(std::span<const double> prices, std::size_t crisis,
                                                  const ParamGrid& grid, const SensitivityOptions& opt = {}) {
  const auto sens = sensitivity_analysis(prices, crisis, grid, opt);
  std::map<std::pair<double, std::size_t>, std::optional<RollingIndicators>> cache;
  std::vector<BenchmarkRow> rows;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& ind = sens.indicators[i];
    for (const auto& c : ind.taus) {
      BenchmarkRow row{crisis, ind.indicator, c.params, c.tau.tau, ind.passes, std::nullopt, false};
      const auto key = std::make_pair(c.params.kernel_bandwidth, c.params.rolling_window);
      if (!cache.contains(key)) {
        try {
          cache[key] = history_rolling(prices, crisis, c.params);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::InsufficientHistory && e.kind() != ErrorKind::WindowTooLong) throw;
          cache[key] = std::nullopt;
        }
      }
      if (const auto& rolling = cache[key]) {
        const auto pool = historical_taus(*rolling, ind.indicator, c.params.lkw);
        if (!pool.empty()) {
          row.p_value = rank_p_value(pool, row.tau);
          row.significant = *row.p_value < kSignificanceLevel;
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

inline void write_benchmark_report(std::span<const BenchmarkRow> rows, std::span<const Date> dates, std::ostream& out) {
  out << "crisis_date,indicator,param_combo,tau,passes_sensitivity,p_value,significant\n";
  for (const auto& r : rows)
    out << format_date(dates[r.crisis]) << ',' << to_string(r.indicator) << ',' << combo_label(r.params) << ','
        << detail::format_number(r.tau) << ',' << (r.passes_sensitivity ? 1 : 0) << ','
        << (r.p_value ? detail::format_number(*r.p_value) : std::string()) << ',' << (r.significant ? 1 : 0) << '\n';
}

// --------------------------------------------------------------------------
// Inputs

struct DailySeries {
  std::vector<Date> dates;
  std::vector<double> values;

  /// Index of the first day on or after `d`.
  [[nodiscard]] std::size_t index_of(Date d) const {
    const auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.end()) throw Error(ErrorKind::AxisMismatch, "date " + format_date(d) + " is after the last day");
    return static_cast<std::size_t>(it - dates.begin());
  }
};

/// Daily closing prices. A file keyed by `date` (YYYY-MM-DD) is read
/// directly; a minute panel keyed by `timestamp` is reduced to daily closes.
/// `column` selects an instrument; empty means the first one.
inline DailySeries load_daily_series(const std::string& path, const std::string& column = {}) {
  const auto lines = detail::read_lines(path);
  if (lines.size() < 2) throw Error(ErrorKind::EmptyPanel, "'" + path + "' has no data rows");
  const auto header = detail::split_fields(lines.front());
  if (header.size() < 2) throw Error(ErrorKind::MissingColumn, "'" + path + "' needs a date and a price column");
  std::size_t col = 1;
  if (!column.empty()) {
    const auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end() || it == header.begin()) throw Error(ErrorKind::MissingColumn, "column '" + column + "'");
    col = static_cast<std::size_t>(it - header.begin());
  }
  DailySeries out;
  if (header.front() != "date") {
    PanelSchema schema;
    schema.timestamp_column = std::string(header.front());
    schema.instrument_columns = {std::string(header[col])};
    const auto loaded = load_price_panel(path, schema);
    out.dates = loaded.panel.day_dates();
    out.values = loaded.panel.daily_closes(0);
    return out;
  }
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto f = detail::split_fields(lines[ln]);
    const auto d = f.empty() ? std::nullopt : parse_date(f[0]);
    const auto v = f.size() > col ? detail::parse_double(f[col]) : std::nullopt;
    if (!d || !v) throw Error(ErrorKind::ParseError, path + ":" + std::to_string(ln + 1) + ": expected date,price");
    if (!(*v > 0.0)) throw Error(ErrorKind::NonPositivePrice, path + ":" + std::to_string(ln + 1));
    if (!out.dates.empty() && !(out.dates.back() < *d))
      throw Error(ErrorKind::DataError, path + ":" + std::to_string(ln + 1) + ": dates must be strictly increasing");
    out.dates.push_back(*d);
    out.values.push_back(*v);
  }
  return out;
}

/// One crisis date per line in the first field; a non-date first line is a
/// header.
inline std::vector<Date> load_crisis_dates(const std::string& path) {
  const auto lines = detail::read_lines(path);
  std::vector<Date> out;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto f = detail::split_fields(lines[ln]);
    const auto d = f.empty() ? std::nullopt : parse_date(f[0]);
    if (!d) {
      if (ln == 0) continue;
      throw Error(ErrorKind::ParseError, path + ":" + std::to_string(ln + 1) + ": expected a YYYY-MM-DD date");
    }
    out.push_back(*d);
  }
  if (out.empty()) throw Error(ErrorKind::DataError, "'" + path + "' lists no crisis dates");
  return out;
}

}  // namespace mrnews
