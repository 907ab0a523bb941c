#pragma once

// Single recurrence-network layer: delay embedding, recurrence threshold
// selection and the binary recurrence matrix R_ij = [ |x_i - x_j| < eps ].

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrnews/detail/numeric.hpp"
#include "mrnews/error.hpp"

namespace mrnews {

enum class EmbeddingMode { Fixed, Auto };

struct EmbeddingConfig {
  int dimension = 3;
  int delay = 1;
  EmbeddingMode mode = EmbeddingMode::Fixed;
  /// Smallest acceptable number of embedded points N - (m-1)*tau.
  std::size_t min_points = 1;
};

/// Delay-embedded trajectory: point i is (u_i, u_{i+tau}, ..., u_{i+tau(m-1)}).
class PhaseTrajectory {
 public:
  PhaseTrajectory(std::vector<double> source, int dimension, int delay)
      : source_(std::move(source)), dimension_(dimension), delay_(delay) {
    const auto span = static_cast<std::size_t>((dimension_ - 1) * delay_);
    n_points_ = source_.size() > span ? source_.size() - span : 0;
  }

  [[nodiscard]] std::size_t size() const noexcept { return n_points_; }
  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  [[nodiscard]] int delay() const noexcept { return delay_; }
  [[nodiscard]] std::span<const double> source() const noexcept { return source_; }

  [[nodiscard]] double coord(std::size_t i, int c) const {
    return source_[i + static_cast<std::size_t>(c * delay_)];
  }

  [[nodiscard]] std::vector<double> point(std::size_t i) const {
    std::vector<double> p(static_cast<std::size_t>(dimension_));
    for (int c = 0; c < dimension_; ++c) p[static_cast<std::size_t>(c)] = coord(i, c);
    return p;
  }

  [[nodiscard]] double distance(std::size_t i, std::size_t j) const {
    double s = 0.0;
    for (int c = 0; c < dimension_; ++c) {
      const double d = coord(i, c) - coord(j, c);
      s += d * d;
    }
    return std::sqrt(s);
  }

 private:
  std::vector<double> source_;
  int dimension_;
  int delay_;
  std::size_t n_points_ = 0;
};

// --------------------------------------------------------------------------
// Automatic embedding parameters

/// Mutual information (nats) between x_t and x_{t+lag} from an equal-width
/// joint histogram spanning the range of the whole series.
inline double auto_mutual_information(std::span<const double> x, std::size_t lag, int bins = 16) {
  if (lag >= x.size()) return 0.0;
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double width = *hi_it - lo;
  if (!(width > 0.0)) return 0.0;
  auto bin = [&](double v) {
    return std::min(bins - 1, static_cast<int>((v - lo) / width * bins));
  };
  const std::size_t n = x.size() - lag;
  std::vector<double> joint(static_cast<std::size_t>(bins * bins), 0.0);
  std::vector<double> pa(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> pb(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const int a = bin(x[t]);
    const int b = bin(x[t + lag]);
    joint[static_cast<std::size_t>(a * bins + b)] += 1.0;
    pa[static_cast<std::size_t>(a)] += 1.0;
    pb[static_cast<std::size_t>(b)] += 1.0;
  }
  const double inv = 1.0 / static_cast<double>(n);
  double mi = 0.0;
  for (int a = 0; a < bins; ++a)
    for (int b = 0; b < bins; ++b) {
      const double p = joint[static_cast<std::size_t>(a * bins + b)] * inv;
      if (p > 0.0) mi += p * std::log(p / (pa[static_cast<std::size_t>(a)] * inv * pb[static_cast<std::size_t>(b)] * inv));
    }
  return std::max(0.0, mi);
}

/// First lag at which the auto-mutual-information has a local minimum;
/// 1 when the curve has none up to max_lag.
inline int first_ami_minimum(std::span<const double> x, int max_lag = 20, int bins = 16) {
  std::vector<double> ami;
  for (int lag = 0; lag <= max_lag + 1; ++lag) ami.push_back(auto_mutual_information(x, static_cast<std::size_t>(lag), bins));
  for (int lag = 1; lag <= max_lag; ++lag) {
    const auto l = static_cast<std::size_t>(lag);
    if (ami[l] < ami[l - 1] && ami[l] <= ami[l + 1]) return lag;
  }
  return 1;
}

/// Fraction of false nearest neighbours when going from dimension m to m+1
/// (Kennel criterion with distance-ratio tolerance `rtol` and attractor-size
/// tolerance `atol`).
inline double false_nearest_fraction(std::span<const double> x, int m, int delay, double rtol = 15.0,
                                     double atol = 2.0) {
  const auto shift = static_cast<std::size_t>(m * delay);
  if (x.size() <= shift + 1) return 0.0;
  const std::size_t n = x.size() - shift;  // points that exist in m+1 dims
  const double attractor = detail::sample_stddev(x);
  std::size_t false_count = 0;
  std::size_t tested = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t nn = i;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double s = 0.0;
      for (int c = 0; c < m; ++c) {
        const double d = x[i + static_cast<std::size_t>(c * delay)] - x[j + static_cast<std::size_t>(c * delay)];
        s += d * d;
      }
      if (s < best) {
        best = s;
        nn = j;
      }
    }
    if (nn == i) continue;
    ++tested;
    const double extra = std::abs(x[i + shift] - x[nn + shift]);
    const double rd = std::sqrt(best);
    const bool ratio_fail = rd > 0.0 ? extra / rd > rtol : extra > 0.0;
    const bool size_fail = attractor > 0.0 && std::sqrt(best + extra * extra) / attractor > atol;
    if (ratio_fail || size_fail) ++false_count;
  }
  return tested == 0 ? 0.0 : static_cast<double>(false_count) / static_cast<double>(tested);
}

/// tau from the first auto-MI minimum; m the smallest dimension whose FNN
/// fraction drops below `fnn_threshold`, capped at `max_dimension`.
inline std::pair<int, int> estimate_embedding(std::span<const double> x, int max_dimension = 5,
                                              double fnn_threshold = 0.01, int max_lag = 20) {
  const int delay = first_ami_minimum(x, max_lag);
  int dimension = max_dimension;
  for (int m = 1; m < max_dimension; ++m) {
    if (x.size() <= static_cast<std::size_t>(m * delay) + 2) break;
    if (false_nearest_fraction(x, m, delay) < fnn_threshold) {
      dimension = m;
      break;
    }
  }
  return {dimension, delay};
}

// --------------------------------------------------------------------------
// Embedding

/// Delay-embeds a window. In auto mode the config's dimension/delay are
/// replaced by estimate_embedding().
inline PhaseTrajectory embed(std::span<const double> window, const EmbeddingConfig& config = {}) {
  int m = config.dimension;
  int tau = config.delay;
  if (config.mode == EmbeddingMode::Auto) std::tie(m, tau) = estimate_embedding(window);
  if (m < 1 || tau < 1) throw Error(ErrorKind::InvalidRange, "embedding dimension and delay must be >= 1");
  const auto span = static_cast<std::size_t>((m - 1) * tau);
  const std::size_t need = std::max<std::size_t>(config.min_points, 1);
  if (window.size() < span + need)
    throw Error(ErrorKind::WindowTooShort, "window of " + std::to_string(window.size()) + " samples yields fewer than " +
                                               std::to_string(need) + " points at m=" + std::to_string(m) +
                                               ", tau=" + std::to_string(tau));
  return PhaseTrajectory(std::vector<double>(window.begin(), window.end()), m, tau);
}

// --------------------------------------------------------------------------
// Threshold

enum class ThresholdKind { TargetRecurrenceRate, StdFraction };

struct ThresholdPolicy {
  ThresholdKind kind = ThresholdKind::TargetRecurrenceRate;
  double value = 0.05;
};

struct EpsilonChoice {
  double epsilon = 0.0;
  /// Zero spread: every embedded point coincides (or the raw window is constant).
  bool degenerate = false;
};

namespace detail {

inline std::vector<double> pairwise_distances(const PhaseTrajectory& traj) {
  const auto n = traj.size();
  std::vector<double> d;
  d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.push_back(traj.distance(i, j));
  return d;
}

inline void check_policy(const ThresholdPolicy& policy) {
  if (!(policy.value > 0.0 && policy.value < 1.0))
    throw Error(ErrorKind::InvalidRange, "threshold policy value must lie in (0, 1)");
}

inline EpsilonChoice choose_epsilon(const PhaseTrajectory& traj, const ThresholdPolicy& policy,
                                    const std::vector<double>& distances) {
  check_policy(policy);
  if (policy.kind == ThresholdKind::StdFraction) {
    const double sd = sample_stddev(traj.source());
    return {policy.value * sd, !(sd > 0.0)};
  }
  if (traj.size() < 2) throw Error(ErrorKind::WindowTooShort, "need at least 2 embedded points");
  const double spread = *std::max_element(distances.begin(), distances.end());
  if (!(spread > 0.0)) return {0.0, true};
  return {nearest_rank_quantile(distances, policy.value), false};
}

}  // namespace detail

/// Target-recurrence-rate mode: nearest-rank q-quantile of the N'(N'-1)/2
/// pairwise distances. Std-fraction mode: value * sample std of the raw window.
inline EpsilonChoice select_epsilon(const PhaseTrajectory& traj, const ThresholdPolicy& policy = {}) {
  if (traj.size() < 2) throw Error(ErrorKind::WindowTooShort, "need at least 2 embedded points");
  if (policy.kind == ThresholdKind::StdFraction) return detail::choose_epsilon(traj, policy, {});
  return detail::choose_epsilon(traj, policy, detail::pairwise_distances(traj));
}

// --------------------------------------------------------------------------
// Recurrence matrix

/// Symmetric binary matrix with unit diagonal, stored as packed bit rows.
/// Degrees exclude the self-loop.
class RecurrenceMatrix {
 public:
  RecurrenceMatrix() = default;

  /// n x n identity (no recurrences besides the diagonal).
  explicit RecurrenceMatrix(std::size_t n, double epsilon = 0.0)
      : n_(n), words_((n + 63) / 64), bits_(n * words_, 0), degrees_(n, 0), epsilon_(epsilon) {
    for (std::size_t i = 0; i < n_; ++i) set_bit(i, i);
  }

  static RecurrenceMatrix all_ones(std::size_t n, double epsilon = 0.0) {
    RecurrenceMatrix r(n, epsilon);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) r.add_edge(i, j);
    return r;
  }

  /// Builds from an explicit off-diagonal edge list (i != j, 0-based).
  static RecurrenceMatrix from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges) {
    RecurrenceMatrix r(n);
    for (auto [i, j] : edges) {
      if (i >= n || j >= n) throw Error(ErrorKind::InvalidRange, "edge endpoint out of range");
      if (i != j && !r.at(i, j)) r.add_edge(i, j);
    }
    return r;
  }

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  [[nodiscard]] bool degenerate() const noexcept { return degenerate_; }
  void set_degenerate(bool flag) noexcept { degenerate_ = flag; }

  [[nodiscard]] bool at(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }

  [[nodiscard]] std::span<const std::uint64_t> row_bits(std::size_t i) const {
    return std::span<const std::uint64_t>(bits_).subspan(i * words_, words_);
  }

  [[nodiscard]] const std::vector<int>& degrees() const noexcept { return degrees_; }

  /// Off-diagonal edges counted once (i < j).
  [[nodiscard]] std::size_t edge_count() const noexcept {
    std::size_t s = 0;
    for (int k : degrees_) s += static_cast<std::size_t>(k);
    return s / 2;
  }

  /// Off-diagonal density: sum_{i != j} R_ij / (N'(N'-1)).
  [[nodiscard]] double recurrence_rate() const noexcept {
    if (n_ < 2) return 0.0;
    return 2.0 * static_cast<double>(edge_count()) / (static_cast<double>(n_) * static_cast<double>(n_ - 1));
  }

  void add_edge(std::size_t i, std::size_t j) {
    set_bit(i, j);
    set_bit(j, i);
    ++degrees_[i];
    ++degrees_[j];
  }

  friend bool operator==(const RecurrenceMatrix& a, const RecurrenceMatrix& b) {
    return a.n_ == b.n_ && a.bits_ == b.bits_;
  }

 private:
  void set_bit(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<int> degrees_;
  double epsilon_ = 0.0;
  bool degenerate_ = false;
};

/// R_ij = 1 iff the Euclidean distance is strictly below epsilon; R_ii = 1.
inline RecurrenceMatrix recurrence_matrix(const PhaseTrajectory& traj, double epsilon) {
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::InvalidRange, "epsilon must be >= 0");
  RecurrenceMatrix r(traj.size(), epsilon);
  for (std::size_t i = 0; i < traj.size(); ++i)
    for (std::size_t j = i + 1; j < traj.size(); ++j)
      if (traj.distance(i, j) < epsilon) r.add_edge(i, j);
  return r;
}

/// Threshold selection and matrix construction sharing one distance pass.
/// A degenerate trajectory (all points coincide) yields the all-ones matrix
/// with the degenerate flag set.
inline RecurrenceMatrix build_recurrence(const PhaseTrajectory& traj, const ThresholdPolicy& policy) {
  if (traj.size() < 2) throw Error(ErrorKind::WindowTooShort, "need at least 2 embedded points");
  const auto distances = detail::pairwise_distances(traj);
  const auto choice = detail::choose_epsilon(traj, policy, distances);
  if (choice.degenerate) {
    auto r = RecurrenceMatrix::all_ones(traj.size(), choice.epsilon);
    r.set_degenerate(true);
    return r;
  }
  RecurrenceMatrix r(traj.size(), choice.epsilon);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < traj.size(); ++i)
    for (std::size_t j = i + 1; j < traj.size(); ++j, ++idx)
      if (distances[idx] < choice.epsilon) r.add_edge(i, j);
  return r;
}

}  // namespace mrnews
