#pragma once

// Daily MRN indicator series, percentile-threshold peak detection and the
// risk intervals that follow each peak.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrnews/detail/csv.hpp"
#include "mrnews/detail/numeric.hpp"
#include "mrnews/detail/parallel.hpp"
#include "mrnews/market_data.hpp"
#include "mrnews/mrn.hpp"

namespace mrnews {

enum class IndicatorKind { MutualInformation, EdgeOverlap };

inline std::string_view to_string(IndicatorKind k) { return k == IndicatorKind::MutualInformation ? "I" : "omega"; }

/// One value per trading day; std::nullopt marks a gap day.
struct IndicatorSeries {
  IndicatorKind kind = IndicatorKind::MutualInformation;
  std::vector<Date> dates;
  std::vector<std::optional<double>> values;
  std::string fingerprint;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] bool is_gap(std::size_t t) const { return !values.at(t).has_value(); }
};

struct IndicatorConfig {
  MrnConfig mrn{};
  MiNormalization mi_normalization = MiNormalization::Pairs;
  OverlapNormalization overlap_normalization = OverlapNormalization::Pairwise2;
  /// A day is a gap when more than this fraction of its layers is degenerate.
  double max_degenerate_fraction = 0.5;
  unsigned threads = 1;
};

inline std::string fingerprint(const IndicatorConfig& c) {
  std::string s = "m=" + std::to_string(c.mrn.embedding.dimension) + ";tau=" + std::to_string(c.mrn.embedding.delay);
  s += c.mrn.embedding.mode == EmbeddingMode::Auto ? ";embed=auto" : ";embed=fixed";
  s += c.mrn.threshold.kind == ThresholdKind::TargetRecurrenceRate ? ";rr=" : ";stdfrac=";
  s += detail::format_number(c.mrn.threshold.value);
  s += c.mrn.input == LayerInput::LogReturns ? ";input=returns" : ";input=prices";
  s += c.mi_normalization == MiNormalization::Pairs ? ";mi=pairs" : ";mi=as-printed";
  s += c.overlap_normalization == OverlapNormalization::Pairwise2 ? ";omega=pairwise-2" : ";omega=as-printed";
  return s;
}

struct DayDiagnostic {
  Date date{};
  std::size_t degenerate_layers = 0;
  std::string error;  // empty unless the day failed
};

struct IndicatorRun {
  IndicatorSeries mutual_information;
  IndicatorSeries edge_overlap;
  std::vector<DayDiagnostic> days;

  [[nodiscard]] std::vector<std::size_t> gap_days() const {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < mutual_information.size(); ++t)
      if (mutual_information.is_gap(t) || edge_overlap.is_gap(t)) out.push_back(t);
    return out;
  }
};

/// Builds the MRN of every day and evaluates both indicators. Per-day
/// failures and mostly-degenerate days become gaps; the run continues.
inline IndicatorRun indicator_series(const PricePanel& panel, const IndicatorConfig& config = {}) {
  if (panel.n_instruments() < 2) throw Error(ErrorKind::InvalidRange, "indicator series needs >= 2 instruments");
  const auto n = panel.n_days();
  IndicatorRun run;
  run.mutual_information.kind = IndicatorKind::MutualInformation;
  run.edge_overlap.kind = IndicatorKind::EdgeOverlap;
  run.mutual_information.fingerprint = run.edge_overlap.fingerprint = fingerprint(config);
  run.mutual_information.dates = run.edge_overlap.dates = panel.day_dates();
  run.mutual_information.values.assign(n, std::nullopt);
  run.edge_overlap.values.assign(n, std::nullopt);
  run.days.resize(n);

  detail::parallel_for(n, config.threads, [&](std::size_t d) {
    auto& diag = run.days[d];
    diag.date = panel.day_date(d);
    try {
      const auto mrn = build_mrn(panel.day(d), config.mrn);
      diag.degenerate_layers = mrn.degenerate_layers();
      if (static_cast<double>(diag.degenerate_layers) > config.max_degenerate_fraction * static_cast<double>(mrn.n_layers()))
        return;
      run.mutual_information.values[d] = average_mutual_information(mrn, config.mi_normalization);
      const auto omega = average_edge_overlap(mrn, config.overlap_normalization);
      if (omega.pairs_used > 0) run.edge_overlap.values[d] = omega.value;
    } catch (const std::exception& e) {
      diag.error = e.what();
    }
  });
  return run;
}

// --------------------------------------------------------------------------
// Peaks

struct Peak {
  std::size_t index = 0;
  double left_jump = 0.0;   // xi_p - xi_{p-1}
  double right_jump = 0.0;  // xi_p - xi_{p+1}
  double threshold = 0.0;   // delta-xi of the segment
};

struct PeakSegment {
  std::size_t begin = 0;  // [begin, end)
  std::size_t end = 0;
  double threshold = 0.0;
  /// Shorter than 20 days: the threshold fell back to the largest difference.
  bool short_segment = false;
};

struct PeakSet {
  std::vector<Peak> peaks;
  std::vector<PeakSegment> segments;
  std::size_t series_length = 0;

  [[nodiscard]] std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (const auto& p : peaks) out.push_back(p.index);
    return out;
  }
};

inline constexpr double kPeakPercentile = 0.95;
inline constexpr std::size_t kMinPercentileSegment = 20;

/// Peak p satisfies (xi_p - xi_{p-1})(xi_p - xi_{p+1}) > 0 and both
/// differences exceed delta-xi, the nearest-rank 95th percentile of the
/// absolute adjacent differences of its gap-free segment. Endpoints of a
/// segment are never peaks.
inline PeakSet detect_peaks(std::span<const std::optional<double>> series) {
  if (series.size() < 3) throw Error(ErrorKind::SeriesTooShort, "peak detection needs T >= 3, got " + std::to_string(series.size()));
  PeakSet out;
  out.series_length = series.size();
  std::size_t t = 0;
  while (t < series.size()) {
    if (!series[t]) {
      ++t;
      continue;
    }
    const std::size_t begin = t;
    while (t < series.size() && series[t]) ++t;
    const std::size_t end = t;
    if (end - begin < 3) continue;

    std::vector<double> diffs;
    diffs.reserve(end - begin - 1);
    for (std::size_t i = begin + 1; i < end; ++i) diffs.push_back(std::abs(*series[i] - *series[i - 1]));
    PeakSegment seg{begin, end, 0.0, end - begin < kMinPercentileSegment};
    seg.threshold = seg.short_segment ? *std::max_element(diffs.begin(), diffs.end())
                                      : detail::nearest_rank_quantile(diffs, kPeakPercentile);
    for (std::size_t p = begin + 1; p + 1 < end; ++p) {
      const double left = *series[p] - *series[p - 1];
      const double right = *series[p] - *series[p + 1];
      if (left * right > 0.0 && left > seg.threshold && right > seg.threshold)
        out.peaks.push_back({p, left, right, seg.threshold});
    }
    out.segments.push_back(seg);
  }
  return out;
}

inline PeakSet detect_peaks(std::span<const double> series) {
  std::vector<std::optional<double>> wrapped(series.begin(), series.end());
  return detect_peaks(std::span<const std::optional<double>>(wrapped));
}

inline PeakSet detect_peaks(const IndicatorSeries& series) {
  return detect_peaks(std::span<const std::optional<double>>(series.values));
}

// --------------------------------------------------------------------------
// Risk intervals

struct Interval {
  std::size_t start = 0;  // inclusive day indices
  std::size_t end = 0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct IntervalSet {
  std::vector<Interval> intervals;
  std::size_t horizon = 9;
  std::size_t series_length = 0;

  [[nodiscard]] bool covers(std::size_t day) const {
    return std::any_of(intervals.begin(), intervals.end(), [&](const Interval& i) { return i.start <= day && day <= i.end; });
  }

  [[nodiscard]] std::vector<bool> mask() const {
    std::vector<bool> m(series_length, false);
    for (const auto& i : intervals)
      for (std::size_t d = i.start; d <= i.end && d < series_length; ++d) m[d] = true;
    return m;
  }

  [[nodiscard]] std::size_t covered_days() const {
    std::size_t s = 0;
    for (const auto& i : intervals) s += i.end - i.start + 1;
    return s;
  }
};

inline constexpr std::size_t kDefaultHorizon = 9;

/// Expands every peak p to [p, p + horizon], truncated at the series end,
/// and merges overlapping intervals.
inline IntervalSet risk_intervals(std::span<const std::size_t> peak_days, std::size_t series_length,
                                  std::size_t horizon = kDefaultHorizon) {
  std::vector<std::size_t> days(peak_days.begin(), peak_days.end());
  std::sort(days.begin(), days.end());
  IntervalSet out;
  out.horizon = horizon;
  out.series_length = series_length;
  for (std::size_t p : days) {
    if (p >= series_length) throw Error(ErrorKind::AxisMismatch, "peak day beyond series end");
    const Interval next{p, std::min(p + horizon, series_length - 1)};
    if (!out.intervals.empty() && next.start <= out.intervals.back().end)
      out.intervals.back().end = std::max(out.intervals.back().end, next.end);
    else
      out.intervals.push_back(next);
  }
  return out;
}

inline IntervalSet risk_intervals(const PeakSet& peaks, std::size_t horizon = kDefaultHorizon) {
  const auto idx = peaks.indices();
  return risk_intervals(idx, peaks.series_length, horizon);
}

}  // namespace mrnews
