#pragma once

// Price panels: loading and cleaning minute-resolution CSV data, weighted
// portfolio construction, intraday log returns and the per-day windows that
// every downstream stage consumes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <compare>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mrnews/detail/csv.hpp"
#include "mrnews/error.hpp"

namespace mrnews {

using Date = std::chrono::sys_days;

/// Minute-resolution instant: calendar date plus minute of day.
struct Timestamp {
  Date date{};
  int minute_of_day = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

inline std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

inline std::string format_timestamp(const Timestamp& t) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", t.minute_of_day / 60, t.minute_of_day % 60);
  return format_date(t.date) + "T" + buf;
}

/// Parses YYYY-MM-DD.
inline std::optional<Date> parse_date(std::string_view s) {
  s = detail::trim(s);
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  const auto y = detail::parse_int(s.substr(0, 4));
  const auto m = detail::parse_int(s.substr(5, 2));
  const auto d = detail::parse_int(s.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(*y)},
                                        std::chrono::month{static_cast<unsigned>(*m)},
                                        std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

/// Parses ISO-8601 `YYYY-MM-DDTHH:MM[:SS]` (a space is accepted in place of
/// `T`). Seconds are accepted but truncated to the minute. A bare date maps
/// to minute 0.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
  s = detail::trim(s);
  const auto date = parse_date(s.substr(0, std::min<std::size_t>(10, s.size())));
  if (!date) return std::nullopt;
  if (s.size() == 10) return Timestamp{*date, 0};
  if (s.size() < 16 || (s[10] != 'T' && s[10] != ' ') || s[13] != ':') return std::nullopt;
  const auto hh = detail::parse_int(s.substr(11, 2));
  const auto mm = detail::parse_int(s.substr(14, 2));
  if (!hh || !mm || *hh < 0 || *hh > 23 || *mm < 0 || *mm > 59) return std::nullopt;
  if (s.size() > 16) {
    auto rest = s.substr(16);
    if (rest.size() < 3 || rest[0] != ':' || !detail::parse_int(rest.substr(1, 2))) return std::nullopt;
    rest = rest.substr(3);
    if (!rest.empty() && rest != "Z" && rest.front() != '.') return std::nullopt;
  }
  return Timestamp{*date, static_cast<int>(*hh * 60 + *mm)};
}

/// One trading day of aligned per-instrument values.
class DayWindow {
 public:
  DayWindow(Date date, std::vector<Timestamp> timestamps, std::vector<std::string> instruments,
            std::vector<std::vector<double>> values)
      : date_(date), timestamps_(std::move(timestamps)), instruments_(std::move(instruments)),
        values_(std::move(values)) {
    if (instruments_.size() != values_.size())
      throw Error(ErrorKind::SizeMismatch, "day window: label/value count mismatch");
    for (const auto& v : values_)
      if (v.size() != timestamps_.size())
        throw Error(ErrorKind::SizeMismatch, "day window: instrument vectors differ in length");
  }

  [[nodiscard]] Date date() const noexcept { return date_; }
  [[nodiscard]] std::size_t length() const noexcept { return timestamps_.size(); }
  [[nodiscard]] std::size_t n_instruments() const noexcept { return instruments_.size(); }
  [[nodiscard]] const std::vector<Timestamp>& timestamps() const noexcept { return timestamps_; }
  [[nodiscard]] const std::vector<std::string>& instruments() const noexcept { return instruments_; }
  [[nodiscard]] std::span<const double> values(std::size_t k) const { return values_.at(k); }

 private:
  Date date_;
  std::vector<Timestamp> timestamps_;
  std::vector<std::string> instruments_;
  std::vector<std::vector<double>> values_;
};

/// Cleaned [time x instrument] price matrix, stored column-wise, made of
/// whole trading days of exactly `window_len` rows each.
class PricePanel {
 public:
  PricePanel(std::vector<Timestamp> timestamps, std::vector<std::string> instruments,
             std::vector<std::vector<double>> columns, std::size_t window_len)
      : timestamps_(std::move(timestamps)), instruments_(std::move(instruments)),
        columns_(std::move(columns)), window_len_(window_len) {
    if (instruments_.empty() || timestamps_.empty()) throw Error(ErrorKind::EmptyPanel, "panel has no data");
    if (window_len_ == 0) throw Error(ErrorKind::InvalidRange, "window_len must be positive");
    if (columns_.size() != instruments_.size())
      throw Error(ErrorKind::SizeMismatch, "panel: one column per instrument required");
    for (std::size_t t = 1; t < timestamps_.size(); ++t)
      if (!(timestamps_[t - 1] < timestamps_[t]))
        throw Error(ErrorKind::DataError, "panel timestamps must be strictly increasing (row " +
                                              std::to_string(t) + ")");
    for (std::size_t k = 0; k < columns_.size(); ++k) {
      if (columns_[k].size() != timestamps_.size())
        throw Error(ErrorKind::SizeMismatch, "panel column '" + instruments_[k] + "' has wrong length");
      for (std::size_t t = 0; t < columns_[k].size(); ++t)
        if (!(columns_[k][t] > 0.0) || !std::isfinite(columns_[k][t]))
          throw Error(ErrorKind::NonPositivePrice, "row " + std::to_string(t) + ", column '" +
                                                       instruments_[k] + "'");
    }
    if (timestamps_.size() % window_len_ != 0)
      throw Error(ErrorKind::DataError, "panel rows are not a whole number of days");
    for (std::size_t d = 0; d < n_days(); ++d) {
      const auto first = timestamps_[d * window_len_].date;
      for (std::size_t r = 0; r < window_len_; ++r)
        if (timestamps_[d * window_len_ + r].date != first)
          throw Error(ErrorKind::DataError, "day " + format_date(first) + " does not have exactly " +
                                                std::to_string(window_len_) + " rows");
      if (d > 0 && timestamps_[(d - 1) * window_len_].date == first)
        throw Error(ErrorKind::DataError, "day " + format_date(first) + " spans more than one window");
    }
  }

  [[nodiscard]] std::size_t n_rows() const noexcept { return timestamps_.size(); }
  [[nodiscard]] std::size_t n_instruments() const noexcept { return instruments_.size(); }
  [[nodiscard]] std::size_t window_len() const noexcept { return window_len_; }
  [[nodiscard]] std::size_t n_days() const noexcept { return timestamps_.size() / window_len_; }
  [[nodiscard]] const std::vector<Timestamp>& timestamps() const noexcept { return timestamps_; }
  [[nodiscard]] const std::vector<std::string>& instruments() const noexcept { return instruments_; }
  [[nodiscard]] std::span<const double> column(std::size_t k) const { return columns_.at(k); }
  [[nodiscard]] double price(std::size_t row, std::size_t k) const { return columns_.at(k).at(row); }
  [[nodiscard]] Date day_date(std::size_t d) const { return timestamps_.at(d * window_len_).date; }

  [[nodiscard]] std::vector<Date> day_dates() const {
    std::vector<Date> out(n_days());
    for (std::size_t d = 0; d < out.size(); ++d) out[d] = day_date(d);
    return out;
  }

  [[nodiscard]] std::optional<std::size_t> index_of(std::string_view instrument) const {
    for (std::size_t k = 0; k < instruments_.size(); ++k)
      if (instruments_[k] == instrument) return k;
    return std::nullopt;
  }

  [[nodiscard]] DayWindow day(std::size_t d) const {
    if (d >= n_days()) throw Error(ErrorKind::InvalidRange, "day index out of range");
    const auto begin = d * window_len_;
    std::vector<Timestamp> ts(timestamps_.begin() + static_cast<std::ptrdiff_t>(begin),
                              timestamps_.begin() + static_cast<std::ptrdiff_t>(begin + window_len_));
    std::vector<std::vector<double>> values;
    values.reserve(columns_.size());
    for (const auto& col : columns_)
      values.emplace_back(col.begin() + static_cast<std::ptrdiff_t>(begin),
                          col.begin() + static_cast<std::ptrdiff_t>(begin + window_len_));
    return DayWindow(day_date(d), std::move(ts), instruments_, std::move(values));
  }

  [[nodiscard]] std::vector<DayWindow> days() const {
    std::vector<DayWindow> out;
    out.reserve(n_days());
    for (std::size_t d = 0; d < n_days(); ++d) out.push_back(day(d));
    return out;
  }

  /// Last price of every day for one instrument.
  [[nodiscard]] std::vector<double> daily_closes(std::size_t k = 0) const {
    std::vector<double> out(n_days());
    for (std::size_t d = 0; d < out.size(); ++d) out[d] = columns_.at(k)[(d + 1) * window_len_ - 1];
    return out;
  }

 private:
  std::vector<Timestamp> timestamps_;
  std::vector<std::string> instruments_;
  std::vector<std::vector<double>> columns_;
  std::size_t window_len_;
};

/// Inverse of PricePanel::days().
inline PricePanel concatenate(std::span<const DayWindow> days) {
  if (days.empty()) throw Error(ErrorKind::EmptyPanel, "no day windows to concatenate");
  const auto& labels = days.front().instruments();
  std::vector<Timestamp> ts;
  std::vector<std::vector<double>> cols(labels.size());
  for (const auto& day : days) {
    if (day.instruments() != labels || day.length() != days.front().length())
      throw Error(ErrorKind::SizeMismatch, "day windows are not aligned");
    ts.insert(ts.end(), day.timestamps().begin(), day.timestamps().end());
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const auto v = day.values(k);
      cols[k].insert(cols[k].end(), v.begin(), v.end());
    }
  }
  return PricePanel(std::move(ts), labels, std::move(cols), days.front().length());
}

// --------------------------------------------------------------------------
// Loading

struct PanelSchema {
  std::string timestamp_column = "timestamp";
  /// Instrument columns to keep; empty selects every non-timestamp column.
  std::vector<std::string> instrument_columns;
  std::size_t window_len = 240;
  /// Days with a larger fraction of missing cells are dropped.
  double max_missing_fraction = 0.05;
  /// Minutes of day forming one session. Empty = infer from the data as the
  /// `window_len` most frequently observed minutes.
  std::vector<int> session_minutes;
};

struct DroppedDay {
  Date date;
  double missing_fraction;
};

struct LoadReport {
  std::vector<std::size_t> rejected_lines;  // 1-based file line numbers
  std::vector<std::size_t> off_session_lines;
  std::vector<DroppedDay> dropped_days;
  std::size_t filled_cells = 0;
};

struct LoadedPanel {
  PricePanel panel;
  LoadReport report;
};

namespace detail {

inline std::vector<int> infer_session(const std::map<int, std::size_t>& freq, std::size_t window_len) {
  std::vector<std::pair<int, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() < window_len)
    throw Error(ErrorKind::EmptyPanel, "only " + std::to_string(ranked.size()) +
                                           " distinct minutes observed, fewer than window_len " +
                                           std::to_string(window_len));
  std::vector<int> session;
  for (std::size_t i = 0; i < window_len; ++i) session.push_back(ranked[i].first);
  std::sort(session.begin(), session.end());
  return session;
}

}  // namespace detail

/// Loads a `timestamp,<inst1>,<inst2>,...` CSV. Unparseable timestamps are
/// rejected; empty or non-numeric cells count as missing and are
/// forward-filled within the day (leading gaps back-filled); days above the
/// missing-cell threshold are dropped. Rows are reported by file line number.
inline LoadedPanel load_price_panel(const std::string& path, const PanelSchema& schema = {}) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw Error(ErrorKind::EmptyPanel, "'" + path + "' is empty");
  const auto header = detail::split_fields(lines.front());

  std::optional<std::size_t> ts_col;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == schema.timestamp_column) ts_col = c;
  if (!ts_col) throw Error(ErrorKind::MissingColumn, "timestamp column '" + schema.timestamp_column + "'");

  std::vector<std::size_t> cols;
  std::vector<std::string> names;
  if (schema.instrument_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (c != *ts_col) {
        cols.push_back(c);
        names.emplace_back(header[c]);
      }
  } else {
    for (const auto& want : schema.instrument_columns) {
      const auto it = std::find(header.begin(), header.end(), want);
      if (it == header.end()) throw Error(ErrorKind::MissingColumn, "instrument column '" + want + "'");
      cols.push_back(static_cast<std::size_t>(it - header.begin()));
      names.push_back(want);
    }
  }
  if (cols.empty()) throw Error(ErrorKind::MissingColumn, "no instrument columns in header");

  LoadReport report;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  struct Row {
    std::size_t line;
    std::vector<double> values;
  };
  std::map<Timestamp, Row> rows;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto fields = detail::split_fields(lines[ln]);
    const auto ts = *ts_col < fields.size() ? parse_timestamp(fields[*ts_col]) : std::nullopt;
    if (!ts || rows.contains(*ts)) {
      report.rejected_lines.push_back(ln + 1);
      continue;
    }
    std::vector<double> values(cols.size(), nan);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] >= fields.size()) continue;
      const auto v = detail::parse_double(fields[cols[k]]);
      if (!v) continue;
      if (!(*v > 0.0) || !std::isfinite(*v))
        throw Error(ErrorKind::NonPositivePrice,
                    "line " + std::to_string(ln + 1) + ", column '" + names[k] + "' has price " +
                        std::string(detail::trim(fields[cols[k]])));
      values[k] = *v;
    }
    rows.emplace(*ts, Row{ln + 1, std::move(values)});
  }
  if (rows.empty()) throw Error(ErrorKind::EmptyPanel, "'" + path + "' has no parseable rows");

  std::map<int, std::size_t> minute_freq;
  for (const auto& [ts, row] : rows) ++minute_freq[ts.minute_of_day];

  const auto session = schema.session_minutes.empty() ? detail::infer_session(minute_freq, schema.window_len)
                                                      : schema.session_minutes;
  if (session.size() != schema.window_len)
    throw Error(ErrorKind::ConfigInvalid, "session template must have exactly window_len minutes");
  std::unordered_map<int, std::size_t> slot;
  for (std::size_t i = 0; i < session.size(); ++i) slot[session[i]] = i;

  const std::size_t n_inst = cols.size();
  std::vector<Timestamp> out_ts;
  std::vector<std::vector<double>> out_cols(n_inst);
  auto it = rows.begin();
  while (it != rows.end()) {
    const Date date = it->first.date;
    std::vector<std::vector<double>> grid(n_inst, std::vector<double>(session.size(), nan));
    for (; it != rows.end() && it->first.date == date; ++it) {
      const auto s = slot.find(it->first.minute_of_day);
      if (s == slot.end()) {
        report.off_session_lines.push_back(it->second.line);
        continue;
      }
      for (std::size_t k = 0; k < n_inst; ++k) grid[k][s->second] = it->second.values[k];
    }
    std::size_t missing = 0;
    for (const auto& col : grid)
      for (double v : col) missing += std::isnan(v) ? 1 : 0;
    const double fraction = static_cast<double>(missing) / static_cast<double>(n_inst * session.size());
    bool usable = fraction <= schema.max_missing_fraction;
    if (usable) {
      for (auto& col : grid) {
        const auto first = std::find_if(col.begin(), col.end(), [](double v) { return !std::isnan(v); });
        if (first == col.end()) {
          usable = false;
          break;
        }
        std::fill(col.begin(), first, *first);
        for (auto p = first + 1; p != col.end(); ++p)
          if (std::isnan(*p)) *p = *(p - 1);
      }
    }
    if (!usable) {
      report.dropped_days.push_back({date, fraction});
      continue;
    }
    report.filled_cells += missing;
    for (int minute : session) out_ts.push_back({date, minute});
    for (std::size_t k = 0; k < n_inst; ++k) out_cols[k].insert(out_cols[k].end(), grid[k].begin(), grid[k].end());
  }
  if (out_ts.empty()) throw Error(ErrorKind::EmptyPanel, "every day in '" + path + "' was dropped");
  return {PricePanel(std::move(out_ts), std::move(names), std::move(out_cols), schema.window_len), std::move(report)};
}

inline void write_price_panel(const PricePanel& panel, const std::string& path) {
  auto out = detail::open_output(path);
  out << "timestamp";
  for (const auto& name : panel.instruments()) out << ',' << name;
  out << '\n';
  for (std::size_t t = 0; t < panel.n_rows(); ++t) {
    out << format_timestamp(panel.timestamps()[t]);
    for (std::size_t k = 0; k < panel.n_instruments(); ++k) out << ',' << detail::format_number(panel.price(t, k));
    out << '\n';
  }
}

// --------------------------------------------------------------------------
// Weights and portfolio

/// Non-negative instrument weights summing to one.
class WeightVector {
 public:
  /// Validates an already-normalized set of weights.
  explicit WeightVector(std::vector<std::pair<std::string, double>> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw Error(ErrorKind::WeightMismatch, "empty weight vector");
    double sum = 0.0;
    for (const auto& [name, w] : weights_) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidRange, "weight for '" + name + "' is negative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorKind::InvalidRange, "weights sum to " + detail::format_number(sum));
  }

  /// Scales raw non-negative values (e.g. market capitalisations) to sum to one.
  static WeightVector normalized(std::vector<std::pair<std::string, double>> raw) {
    double sum = 0.0;
    for (const auto& [name, w] : raw) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidRange, "weight for '" + name + "' is negative");
      sum += w;
    }
    if (!(sum > 0.0)) throw Error(ErrorKind::InvalidRange, "weights sum to zero");
    for (auto& [name, w] : raw) w /= sum;
    return WeightVector(std::move(raw));
  }

  static WeightVector equal(const std::vector<std::string>& instruments) {
    std::vector<std::pair<std::string, double>> raw;
    for (const auto& name : instruments) raw.emplace_back(name, 1.0);
    return normalized(std::move(raw));
  }

  [[nodiscard]] const std::vector<std::pair<std::string, double>>& entries() const noexcept { return weights_; }

  [[nodiscard]] std::optional<double> weight(std::string_view instrument) const {
    for (const auto& [name, w] : weights_)
      if (name == instrument) return w;
    return std::nullopt;
  }

 private:
  std::vector<std::pair<std::string, double>> weights_;
};

/// Reads an `instrument,weight` CSV and normalizes it.
inline WeightVector load_weights(const std::string& path) {
  const auto lines = detail::read_lines(path);
  std::vector<std::pair<std::string, double>> raw;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto f = detail::split_fields(lines[ln]);
    if (f.size() < 2) throw Error(ErrorKind::ParseError, path + ":" + std::to_string(ln + 1) + ": expected instrument,weight");
    const auto w = detail::parse_double(f[1]);
    if (!w) {
      if (ln == 0) continue;  // header
      throw Error(ErrorKind::ParseError, path + ":" + std::to_string(ln + 1) + ": bad weight");
    }
    raw.emplace_back(std::string(f[0]), *w);
  }
  return WeightVector::normalized(std::move(raw));
}

inline constexpr std::string_view kPortfolioName = "PORTFOLIO";

/// Weighted price combination: P(t) = sum_k w_k P_k(t).
inline PricePanel build_portfolio_series(const PricePanel& panel, const WeightVector& weights) {
  if (weights.entries().size() != panel.n_instruments())
    throw Error(ErrorKind::WeightMismatch, "weights cover " + std::to_string(weights.entries().size()) +
                                               " instruments, panel has " + std::to_string(panel.n_instruments()));
  std::vector<double> w(panel.n_instruments());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const auto wk = weights.weight(panel.instruments()[k]);
    if (!wk) throw Error(ErrorKind::WeightMismatch, "no weight for instrument '" + panel.instruments()[k] + "'");
    w[k] = *wk;
  }
  std::vector<double> prices(panel.n_rows(), 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const auto col = panel.column(k);
    for (std::size_t t = 0; t < prices.size(); ++t) prices[t] += w[k] * col[t];
  }
  return PricePanel(panel.timestamps(), {std::string(kPortfolioName)}, {std::move(prices)}, panel.window_len());
}

// --------------------------------------------------------------------------
// Returns

struct ReturnSeries {
  Date date{};
  std::vector<Timestamp> timestamps;  // instant closing each return
  std::vector<double> values;
  int sampling_interval = 1;
};

/// Log returns of one day's prices subsampled every `interval` rows,
/// starting at row 0. No overnight return.
inline std::vector<double> intraday_log_returns(std::span<const double> prices, int interval = 1) {
  if (interval < 1 || prices.size() % static_cast<std::size_t>(interval) != 0)
    throw Error(ErrorKind::IntervalNotDivisor, "interval " + std::to_string(interval) +
                                                   " does not divide window length " + std::to_string(prices.size()));
  const auto step = static_cast<std::size_t>(interval);
  std::vector<double> out;
  if (prices.size() <= step) return out;
  out.reserve(prices.size() / step - 1);
  for (std::size_t i = step; i < prices.size(); i += step) out.push_back(std::log(prices[i]) - std::log(prices[i - step]));
  return out;
}

inline std::vector<ReturnSeries> log_returns(const PricePanel& panel, int sampling_interval, std::size_t instrument = 0) {
  if (sampling_interval < 1 || panel.window_len() % static_cast<std::size_t>(sampling_interval) != 0)
    throw Error(ErrorKind::IntervalNotDivisor, "interval " + std::to_string(sampling_interval) +
                                                   " does not divide window length " + std::to_string(panel.window_len()));
  const auto col = panel.column(instrument);
  const auto step = static_cast<std::size_t>(sampling_interval);
  std::vector<ReturnSeries> out;
  out.reserve(panel.n_days());
  for (std::size_t d = 0; d < panel.n_days(); ++d) {
    const auto begin = d * panel.window_len();
    ReturnSeries rs;
    rs.date = panel.day_date(d);
    rs.sampling_interval = sampling_interval;
    rs.values = intraday_log_returns(col.subspan(begin, panel.window_len()), sampling_interval);
    for (std::size_t i = 1; i <= rs.values.size(); ++i) rs.timestamps.push_back(panel.timestamps()[begin + i * step]);
    out.push_back(std::move(rs));
  }
  return out;
}

// --------------------------------------------------------------------------
// Calendars for synthetic panels

/// 240-minute session 09:30-11:29 and 13:00-14:59; other lengths run
/// consecutively from 09:30.
inline std::vector<int> default_session_minutes(std::size_t window_len) {
  std::vector<int> out;
  if (window_len == 240) {
    for (int m = 9 * 60 + 30; m < 11 * 60 + 30; ++m) out.push_back(m);
    for (int m = 13 * 60; m < 15 * 60; ++m) out.push_back(m);
    return out;
  }
  for (std::size_t i = 0; i < window_len; ++i) out.push_back(9 * 60 + 30 + static_cast<int>(i));
  return out;
}

/// `n` consecutive weekdays starting at (or after) `start`.
inline std::vector<Date> weekday_calendar(Date start, std::size_t n) {
  std::vector<Date> out;
  for (Date d = start; out.size() < n; d += std::chrono::days{1}) {
    const std::chrono::weekday wd{d};
    if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) out.push_back(d);
  }
  return out;
}

}  // namespace mrnews
