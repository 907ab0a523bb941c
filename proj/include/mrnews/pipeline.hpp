#pragma once

// End-to-end report: panel -> daily MRN indicators -> peaks and risk
// intervals -> BNS jump days per alpha -> overlap summary -> MST exports.
// Also maps configuration files onto the module settings.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mrnews/benchmark.hpp"
#include "mrnews/calibration.hpp"
#include "mrnews/config.hpp"
#include "mrnews/indicators.hpp"
#include "mrnews/jump_test.hpp"
#include "mrnews/market_data.hpp"
#include "mrnews/mrn.hpp"
#include "mrnews/simulation.hpp"

namespace mrnews {

// --------------------------------------------------------------------------
// Settings from configuration files

namespace detail {

inline UniformRange range_setting(const ConfigFile& cfg, const std::string& key, UniformRange fallback) {
  const auto v = cfg.numbers(key);
  if (!v) return fallback;
  if (v->size() == 1) return {v->front(), v->front()};
  if (v->size() != 2) throw Error(ErrorKind::ConfigInvalid, "'" + key + "' needs lo,hi");
  return {(*v)[0], (*v)[1]};
}

template <class T>
std::vector<T> list_setting(const ConfigFile& cfg, const std::string& key, std::vector<T> fallback) {
  const auto v = cfg.numbers(key);
  if (!v) return fallback;
  std::vector<T> out;
  for (double x : *v) {
    if constexpr (std::is_integral_v<T>) {
      if (x < 0 || x != std::floor(x)) throw Error(ErrorKind::ConfigInvalid, "'" + key + "' needs non-negative integers");
    }
    out.push_back(static_cast<T>(x));
  }
  if (out.empty()) throw Error(ErrorKind::ConfigInvalid, "'" + key + "' is empty");
  return out;
}

template <class E>
E choice_setting(const ConfigFile& cfg, const std::string& key, E fallback,
                 std::initializer_list<std::pair<std::string_view, E>> options) {
  const auto s = cfg.string(key);
  if (!s) return fallback;
  for (const auto& [name, value] : options)
    if (*s == name) return value;
  std::string allowed;
  for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : "|") + std::string(name);
  throw Error(ErrorKind::ConfigInvalid, "'" + key + " = " + *s + "' must be one of " + allowed);
}

}  // namespace detail

inline void apply_indicator_settings(const ConfigFile& cfg, IndicatorConfig& c) {
  auto& emb = c.mrn.embedding;
  if (const auto v = cfg.numbers("embedding")) {
    if (v->size() != 2) throw Error(ErrorKind::ConfigInvalid, "'embedding' needs m,tau");
    emb.dimension = static_cast<int>((*v)[0]);
    emb.delay = static_cast<int>((*v)[1]);
  }
  emb.mode = detail::choice_setting(cfg, "embedding_mode", emb.mode,
                                    {{"fixed", EmbeddingMode::Fixed}, {"auto", EmbeddingMode::Auto}});
  c.mrn.threshold.kind = detail::choice_setting(
      cfg, "threshold_mode", c.mrn.threshold.kind,
      {{"rr", ThresholdKind::TargetRecurrenceRate}, {"std", ThresholdKind::StdFraction}});
  if (const auto v = cfg.number("threshold_value")) c.mrn.threshold.value = *v;
  c.mrn.input = detail::choice_setting(cfg, "layer_input", c.mrn.input,
                                       {{"returns", LayerInput::LogReturns}, {"prices", LayerInput::Prices}});
  c.mi_normalization = detail::choice_setting(cfg, "mi_normalization", c.mi_normalization,
                                              {{"pairs", MiNormalization::Pairs}, {"as-printed", MiNormalization::AsPrinted}});
  c.overlap_normalization = detail::choice_setting(
      cfg, "overlap_normalization", c.overlap_normalization,
      {{"pairwise-2", OverlapNormalization::Pairwise2}, {"as-printed", OverlapNormalization::AsPrinted}});
  if (const auto v = cfg.number("max_degenerate_fraction")) c.max_degenerate_fraction = *v;
  if (emb.dimension < 1 || emb.delay < 1) throw Error(ErrorKind::ConfigInvalid, "embedding m and tau must be >= 1");
}

inline void apply_simulation_settings(const ConfigFile& cfg, SimConfig& s) {
  if (const auto v = cfg.count("sim.assets")) s.n_assets = *v;
  if (const auto v = cfg.count("sim.days")) s.n_days = *v;
  if (const auto v = cfg.count("sim.minutes_per_day")) s.minutes_per_day = *v;
  s.annual_return = detail::range_setting(cfg, "sim.annual_return", s.annual_return);
  s.annual_volatility = detail::range_setting(cfg, "sim.annual_volatility", s.annual_volatility);
  s.initial_price = detail::range_setting(cfg, "sim.initial_price", s.initial_price);
  if (const auto v = cfg.number("sim.p_cojump")) s.set_cojump_probability(*v);
  if (const auto v = cfg.number("sim.p_positive")) s.p_positive = *v;
  if (const auto v = cfg.number("sim.p_negative")) s.p_negative = *v;
  s.positive_jump = detail::range_setting(cfg, "sim.positive_jump", s.positive_jump);
  s.negative_jump = detail::range_setting(cfg, "sim.negative_jump", s.negative_jump);
  s.diffusion = detail::choice_setting(cfg, "sim.diffusion", s.diffusion,
                                       {{"geometric", DiffusionMode::Geometric}, {"arithmetic", DiffusionMode::Arithmetic}});
  if (const auto v = cfg.number("sim.price_floor")) s.price_floor = *v;
  if (const auto v = cfg.string("sim.start_date")) {
    const auto d = parse_date(*v);
    if (!d) throw Error(ErrorKind::ConfigInvalid, "'sim.start_date = " + *v + "' is not YYYY-MM-DD");
    s.start_date = *d;
  }
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigInvalid, e.what());
  }
}

inline void apply_calibration_settings(const ConfigFile& cfg, CalibrationConfig& c) {
  apply_simulation_settings(cfg, c.simulation);
  apply_indicator_settings(cfg, c.indicators);
  if (const auto v = cfg.count("horizon")) c.horizon = *v;
  c.truth = detail::choice_setting(cfg, "calibrate.truth", c.truth, {{"planted", TruthSource::Planted}, {"bns", TruthSource::Bns}});
  if (const auto v = cfg.number("calibrate.bns_alpha")) c.bns_alpha = *v;
  if (const auto v = cfg.integer("calibrate.bns_interval")) c.bns_interval = static_cast<int>(*v);
}

/// Keys may carry a `benchmark.` prefix (shared config) or not (grid file).
inline void apply_benchmark_settings(const ConfigFile& cfg, ParamGrid& grid, SensitivityOptions& opt) {
  for (const std::string prefix : {"", "benchmark."}) {
    grid.kernel_bandwidth = detail::list_setting(cfg, prefix + "kernel_bandwidth", grid.kernel_bandwidth);
    grid.rolling_window = detail::list_setting(cfg, prefix + "rolling_window", grid.rolling_window);
    grid.lkw = detail::list_setting(cfg, prefix + "lkw", grid.lkw);
    grid.lkend = detail::list_setting(cfg, prefix + "lkend", grid.lkend);
    if (const auto v = cfg.count(prefix + "detrend_window")) grid.detrend_window = *v;
    if (const auto v = cfg.count(prefix + "history")) grid.history = *v;
    if (const auto v = cfg.number(prefix + "tau_cut")) opt.tau_cut = *v;
    if (const auto v = cfg.number(prefix + "pass_fraction")) opt.pass_fraction = *v;
  }
}

// --------------------------------------------------------------------------
// Pipeline

struct PipelineConfig {
  std::string panel_path;
  std::string weights_path;
  std::string out_dir = "out";
  PanelSchema schema{};
  IndicatorConfig indicators{};
  int sampling_interval = 5;
  std::vector<double> alphas{0.001, 0.0025};
  std::size_t horizon = kDefaultHorizon;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  bool export_mst = true;

  void validate() const {
    for (const auto& [what, path] : {std::pair{"panel", panel_path}, std::pair{"weights", weights_path}}) {
      if (path.empty()) throw Error(ErrorKind::ConfigInvalid, std::string(what) + " path is not set");
      if (!std::filesystem::exists(path))
        throw Error(ErrorKind::ConfigInvalid, std::string(what) + " file '" + path + "' does not exist");
    }
    if (alphas.empty()) throw Error(ErrorKind::ConfigInvalid, "no alpha levels");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (!(alphas[i] > 0.0 && alphas[i] < 0.5)) throw Error(ErrorKind::ConfigInvalid, "alpha levels must lie in (0, 0.5)");
      if (i > 0 && !(alphas[i - 1] < alphas[i])) throw Error(ErrorKind::ConfigInvalid, "alpha levels must be strictly ascending");
    }
    if (sampling_interval < 1) throw Error(ErrorKind::ConfigInvalid, "sampling_interval must be >= 1");
    if (out_dir.empty()) throw Error(ErrorKind::ConfigInvalid, "output directory is not set");
  }
};

inline PipelineConfig pipeline_config_from(const ConfigFile& cfg, PipelineConfig base = {}) {
  if (const auto v = cfg.path("panel")) base.panel_path = *v;
  if (const auto v = cfg.path("weights")) base.weights_path = *v;
  if (const auto v = cfg.string("out")) base.out_dir = *v;
  if (const auto v = cfg.count("window_len")) base.schema.window_len = *v;
  if (const auto v = cfg.number("max_missing_fraction")) base.schema.max_missing_fraction = *v;
  apply_indicator_settings(cfg, base.indicators);
  if (const auto v = cfg.integer("sampling_interval")) base.sampling_interval = static_cast<int>(*v);
  if (const auto v = cfg.numbers("alphas")) base.alphas = *v;
  if (const auto v = cfg.count("horizon")) base.horizon = *v;
  if (const auto v = cfg.integer("seed")) base.seed = static_cast<std::uint64_t>(*v);
  if (const auto v = cfg.count("threads")) base.threads = static_cast<unsigned>(*v);
  if (const auto v = cfg.flag("export_mst")) base.export_mst = *v;
  return base;
}

struct OverlapRow {
  double alpha = 0.0;
  IndicatorKind indicator = IndicatorKind::MutualInformation;
  std::size_t n_jumps = 0;
  std::size_t n_covered = 0;  // jump days inside a risk interval
  std::size_t n_exact = 0;    // jump days that are themselves peak days
};

struct JumpDays {
  double alpha = 0.0;
  std::vector<JumpTestResult> results;
};

struct MstExport {
  std::size_t day = 0;
  Date date{};
  bool peak_day = false;
  SpanningTree tree;
};

struct ReportBundle {
  std::filesystem::path out_dir;
  LoadReport load_report;
  IndicatorRun indicators;
  PeakSet peaks_mi;
  PeakSet peaks_omega;
  IntervalSet intervals_mi;
  IntervalSet intervals_omega;
  std::vector<JumpDays> jumps;
  std::vector<OverlapRow> overlap;
  std::vector<MstExport> msts;
  std::vector<std::filesystem::path> files;
};

inline OverlapRow overlap_report(const JumpDays& jumps, IndicatorKind kind, const PeakSet& peaks,
                                              const IntervalSet& intervals) {
  if (intervals.series_length != jumps.results.size())
    throw Error(ErrorKind::AxisMismatch, "jump days and indicator days differ");
  const auto covered = intervals.mask();
  const auto peak_days = peaks.indices();
  const std::set<std::size_t> peak_set(peak_days.begin(), peak_days.end());
  OverlapRow row{jumps.alpha, kind, 0, 0, 0};
  for (std::size_t d = 0; d < jumps.results.size(); ++d) {
    if (!jumps.results[d].is_jump) continue;
    ++row.n_jumps;
    row.n_covered += covered[d] ? 1 : 0;
    row.n_exact += peak_set.contains(d) ? 1 : 0;
  }
  return row;
}

inline std::string jump_file_name(double alpha) { return "jumps_alpha_" + detail::format_number(alpha) + ".csv"; }

inline void write_indicator_csv(const IndicatorRun& run, const PeakSet& peaks_mi, const PeakSet& peaks_omega,
                                const IntervalSet& risk_mi, const IntervalSet& risk_omega, std::ostream& out) {
  out << "date,indicator_I,indicator_omega,is_gap,is_peak_I,is_peak_omega,in_risk_interval_I,in_risk_interval_omega\n";
  auto flags = [](const PeakSet& p, std::size_t n) {
    std::vector<bool> m(n, false);
    for (const auto& peak : p.peaks) m[peak.index] = true;
    return m;
  };
  const auto n = run.mutual_information.size();
  const auto pk_mi = flags(peaks_mi, n);
  const auto pk_om = flags(peaks_omega, n);
  const auto in_mi = risk_mi.mask();
  const auto in_om = risk_omega.mask();
  auto value = [](const std::optional<double>& v) { return v ? detail::format_number(*v) : std::string(); };
  for (std::size_t t = 0; t < n; ++t) {
    const bool gap = run.mutual_information.is_gap(t) || run.edge_overlap.is_gap(t);
    out << format_date(run.mutual_information.dates[t]) << ',' << value(run.mutual_information.values[t]) << ','
        << value(run.edge_overlap.values[t]) << ',' << gap << ',' << pk_mi[t] << ',' << pk_om[t] << ',' << in_mi[t]
        << ',' << in_om[t] << '\n';
  }
}

inline void write_peaks_csv(const IndicatorSeries& mi, const PeakSet& peaks_mi, const IntervalSet& risk_mi,
                            const IndicatorSeries& omega, const PeakSet& peaks_omega, const IntervalSet& risk_omega,
                            std::ostream& out) {
  out << "indicator,date,day,value,left_jump,right_jump,threshold,interval_start,interval_end\n";
  auto rows = [&](const IndicatorSeries& s, const PeakSet& peaks, const IntervalSet& risk) {
    for (const auto& p : peaks.peaks) {
      const auto end = std::min(p.index + risk.horizon, s.size() - 1);
      out << to_string(s.kind) << ',' << format_date(s.dates[p.index]) << ',' << p.index << ','
          << detail::format_number(*s.values[p.index]) << ',' << detail::format_number(p.left_jump) << ','
          << detail::format_number(p.right_jump) << ',' << detail::format_number(p.threshold) << ','
          << format_date(s.dates[p.index]) << ',' << format_date(s.dates[end]) << '\n';
    }
  };
  rows(mi, peaks_mi, risk_mi);
  rows(omega, peaks_omega, risk_omega);
}

inline void write_overlap_csv(std::span<const OverlapRow> rows, std::ostream& out) {
  out << "alpha,indicator,n_jumps,n_covered,n_exact\n";
  for (const auto& r : rows)
    out << detail::format_number(r.alpha) << ',' << to_string(r.indicator) << ',' << r.n_jumps << ',' << r.n_covered
        << ',' << r.n_exact << '\n';
}

/// `count` distinct entries of `pool` drawn by a seeded partial Fisher-Yates
/// shuffle, returned in ascending order.
inline std::vector<std::size_t> seeded_sample(std::vector<std::size_t> pool, std::size_t count, std::uint64_t seed) {
  count = std::min(count, pool.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(detail::derive_seed(seed, i) % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

inline SpanningTree day_spanning_tree(const PricePanel& panel, std::size_t day, const MrnConfig& config) {
  return maximum_spanning_tree(projection_network(build_mrn(panel.day(day), config)));
}

namespace detail {

/// Re-raises a failure as the category of the stage it happened in.
template <class Fn>
auto run_stage(const char* stage, ErrorKind category, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigInvalid || e.kind() == ErrorKind::DataError || e.kind() == ErrorKind::ComputeError)
      throw;
    throw Error(category, std::string("stage '") + stage + "': " + e.what());
  } catch (const std::exception& e) {
    throw Error(category, std::string("stage '") + stage + "': " + e.what());
  }
}

}  // namespace detail

inline ReportBundle run_pipeline(const PipelineConfig& config) {
  config.validate();
  ReportBundle bundle;
  bundle.out_dir = config.out_dir;
  std::filesystem::create_directories(bundle.out_dir);
  auto emit = [&](const std::string& name, auto&& writer) {
    const auto path = bundle.out_dir / name;
    std::filesystem::create_directories(path.parent_path());
    auto out = detail::open_output(path.string());
    writer(out);
    bundle.files.push_back(path);
  };

  const auto weights = detail::run_stage("load", ErrorKind::DataError, [&] { return load_weights(config.weights_path); });
  PanelSchema schema = config.schema;
  if (schema.instrument_columns.empty())
    for (const auto& [name, w] : weights.entries()) schema.instrument_columns.push_back(name);
  auto loaded = detail::run_stage("load", ErrorKind::DataError, [&] { return load_price_panel(config.panel_path, schema); });
  bundle.load_report = loaded.report;
  const auto& panel = loaded.panel;

  IndicatorConfig ind = config.indicators;
  ind.threads = config.threads;
  detail::run_stage("indicators", ErrorKind::ComputeError, [&] {
    bundle.indicators = indicator_series(panel, ind);
    const auto& mi = bundle.indicators.mutual_information;
    const auto& om = bundle.indicators.edge_overlap;
    bundle.peaks_mi = mi.size() >= 3 ? detect_peaks(mi) : PeakSet{{}, {}, mi.size()};
    bundle.peaks_omega = om.size() >= 3 ? detect_peaks(om) : PeakSet{{}, {}, om.size()};
    bundle.intervals_mi = risk_intervals(bundle.peaks_mi, config.horizon);
    bundle.intervals_omega = risk_intervals(bundle.peaks_omega, config.horizon);
    return 0;
  });
  emit("indicators.csv", [&](std::ostream& o) {
    write_indicator_csv(bundle.indicators, bundle.peaks_mi, bundle.peaks_omega, bundle.intervals_mi,
                        bundle.intervals_omega, o);
  });
  emit("peaks.csv", [&](std::ostream& o) {
    write_peaks_csv(bundle.indicators.mutual_information, bundle.peaks_mi, bundle.intervals_mi,
                    bundle.indicators.edge_overlap, bundle.peaks_omega, bundle.intervals_omega, o);
  });

  detail::run_stage("jumptest", ErrorKind::ComputeError, [&] {
    const auto portfolio = build_portfolio_series(panel, weights);
    for (double alpha : config.alphas) bundle.jumps.push_back({alpha, jump_test_days(portfolio, config.sampling_interval, alpha)});
    return 0;
  });
  for (const auto& j : bundle.jumps) emit(jump_file_name(j.alpha), [&](std::ostream& o) { write_jump_csv(j.results, o); });

  detail::run_stage("overlap", ErrorKind::ComputeError, [&] {
    for (const auto& j : bundle.jumps) {
      bundle.overlap.push_back(overlap_report(j, IndicatorKind::MutualInformation, bundle.peaks_mi, bundle.intervals_mi));
      bundle.overlap.push_back(overlap_report(j, IndicatorKind::EdgeOverlap, bundle.peaks_omega, bundle.intervals_omega));
    }
    return 0;
  });
  emit("overlap.csv", [&](std::ostream& o) { write_overlap_csv(bundle.overlap, o); });

  if (config.export_mst) {
    detail::run_stage("mst", ErrorKind::ComputeError, [&] {
      std::set<std::size_t> peak_days;
      for (auto d : bundle.peaks_mi.indices()) peak_days.insert(d);
      for (auto d : bundle.peaks_omega.indices()) peak_days.insert(d);
      std::vector<std::size_t> pool;
      const auto gaps = bundle.indicators.gap_days();
      for (std::size_t d = 0; d < panel.n_days(); ++d)
        if (!peak_days.contains(d) && !std::binary_search(gaps.begin(), gaps.end(), d)) pool.push_back(d);
      std::vector<std::pair<std::size_t, bool>> days;
      for (auto d : peak_days) days.emplace_back(d, true);
      for (auto d : seeded_sample(pool, peak_days.size(), config.seed)) days.emplace_back(d, false);
      std::sort(days.begin(), days.end());
      bundle.msts.resize(days.size());
      detail::parallel_for(days.size(), config.threads, [&](std::size_t i) {
        const auto [d, is_peak] = days[i];
        bundle.msts[i] = {d, panel.day_date(d), is_peak, day_spanning_tree(panel, d, ind.mrn)};
      });
      return 0;
    });
    for (const auto& m : bundle.msts) {
      const auto stem = "mst/" + format_date(m.date);
      emit(stem + "_edges.csv", [&](std::ostream& o) { write_mst_edges(m.tree, o); });
      emit(stem + "_nodes.csv", [&](std::ostream& o) { write_mst_nodes(m.tree, o); });
    }
    emit("mst_summary.csv", [&](std::ostream& o) {
      o << "date,day,group,max_degree,hub_dominance,total_weight\n";
      for (const auto& m : bundle.msts)
        o << format_date(m.date) << ',' << m.day << ',' << (m.peak_day ? "peak" : "non_peak") << ','
          << m.tree.max_degree() << ',' << detail::format_number(m.tree.hub_dominance()) << ','
          << detail::format_number(m.tree.total_weight()) << '\n';
    });
  }
  return bundle;
}

/// Process exit code for a failure: 2 configuration, 3 data, 4 compute.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigInvalid: return 2;
    case ErrorKind::DataError:
    case ErrorKind::ParseError:
    case ErrorKind::MissingColumn:
    case ErrorKind::NonPositivePrice:
    case ErrorKind::EmptyPanel:
    case ErrorKind::WeightMismatch: return 3;
    default: return 4;
  }
}

}  // namespace mrnews
