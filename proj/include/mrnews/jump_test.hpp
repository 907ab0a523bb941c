#pragma once

// Bipower-variation (BNS) jump test on intraday log returns.

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mrnews/detail/csv.hpp"
#include "mrnews/detail/numeric.hpp"
#include "mrnews/error.hpp"
#include "mrnews/market_data.hpp"

namespace mrnews {

/// mu_{4/3} = E|Z|^{4/3} = 2^{2/3} Gamma(7/6) / Gamma(1/2).
inline double mu_four_thirds() {
  return std::pow(2.0, 2.0 / 3.0) * std::tgamma(7.0 / 6.0) / std::tgamma(0.5);
}

/// (pi/2)^2 + pi - 5
inline constexpr double kBnsVarianceFactor = std::numbers::pi * std::numbers::pi / 4.0 + std::numbers::pi - 5.0;

inline double realized_volatility(std::span<const double> r) {
  if (r.empty()) throw Error(ErrorKind::EmptyDay, "realized volatility of an empty day");
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

/// (pi/2) (M/(M-1)) sum_{i>=2} |r_i| |r_{i-1}|
inline double bipower_variation(std::span<const double> r) {
  if (r.size() < 2) throw Error(ErrorKind::TooFewReturns, "bipower variation needs M >= 2");
  const double m = static_cast<double>(r.size());
  double s = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i) s += std::abs(r[i]) * std::abs(r[i - 1]);
  return std::numbers::pi / 2.0 * (m / (m - 1.0)) * s;
}

/// mu_{4/3}^{-3} (M^2/(M-2)) sum_{i>=3} |r_{i-2} r_{i-1} r_i|^{4/3}
inline double tripower_quarticity(std::span<const double> r) {
  if (r.size() < 3) throw Error(ErrorKind::TooFewReturns, "tripower quarticity needs M >= 3");
  const double m = static_cast<double>(r.size());
  double s = 0.0;
  for (std::size_t i = 2; i < r.size(); ++i)
    s += std::pow(std::abs(r[i - 2]), 4.0 / 3.0) * std::pow(std::abs(r[i - 1]), 4.0 / 3.0) *
         std::pow(std::abs(r[i]), 4.0 / 3.0);
  return std::pow(mu_four_thirds(), -3.0) * (m * m / (m - 2.0)) * s;
}

/// One-sided critical value Phi^{-1}(1 - alpha).
inline double jump_threshold(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw Error(ErrorKind::InvalidRange, "alpha must lie in (0, 0.5)");
  return detail::inverse_normal_cdf(1.0 - alpha);
}

struct JumpTestResult {
  Date date{};
  std::size_t m = 0;
  double rv = 0.0;
  double bv = 0.0;
  double tp = 0.0;
  double z = 0.0;  // NaN when RV = 0
  double alpha = 0.0;
  double threshold = 0.0;
  bool is_jump = false;
  bool degenerate = false;
};

/// Z = (1 - BV/RV) / sqrt(((pi/2)^2 + pi - 5) M^{-1} max(1, TP/BV^2)).
/// Days with RV = 0 or BV = 0 are flagged degenerate and never jumps.
inline JumpTestResult bns_test(std::span<const double> r, double alpha) {
  if (r.size() < 3) throw Error(ErrorKind::TooFewReturns, "BNS test needs M >= 3, got " + std::to_string(r.size()));
  JumpTestResult out;
  out.m = r.size();
  out.alpha = alpha;
  out.threshold = jump_threshold(alpha);
  out.rv = realized_volatility(r);
  out.bv = bipower_variation(r);
  out.tp = tripower_quarticity(r);
  out.degenerate = !(out.rv > 0.0) || !(out.bv > 0.0);
  const double ratio = out.bv > 0.0 ? std::max(1.0, out.tp / (out.bv * out.bv)) : 1.0;
  const double denom = std::sqrt(kBnsVarianceFactor / static_cast<double>(out.m) * ratio);
  out.z = out.rv > 0.0 ? (1.0 - out.bv / out.rv) / denom : std::numeric_limits<double>::quiet_NaN();
  out.is_jump = !out.degenerate && out.z > out.threshold;
  return out;
}

/// Runs the test on every day of a single-instrument (portfolio) panel.
inline std::vector<JumpTestResult> jump_test_days(const PricePanel& portfolio, int sampling_interval, double alpha,
                                                  std::size_t instrument = 0) {
  std::vector<JumpTestResult> out;
  for (const auto& day : log_returns(portfolio, sampling_interval, instrument)) {
    auto res = bns_test(day.values, alpha);
    res.date = day.date;
    out.push_back(res);
  }
  return out;
}

inline void write_jump_csv(std::span<const JumpTestResult> results, std::ostream& out) {
  out << "date,M,RV,BV,TP,Z,threshold,is_jump,degenerate\n";
  for (const auto& r : results)
    out << format_date(r.date) << ',' << r.m << ',' << detail::format_number(r.rv) << ','
        << detail::format_number(r.bv) << ',' << detail::format_number(r.tp) << ',' << detail::format_number(r.z)
        << ',' << detail::format_number(r.threshold) << ',' << (r.is_jump ? 1 : 0) << ',' << (r.degenerate ? 1 : 0)
        << '\n';
}

}  // namespace mrnews
