// mrnews: command-line front end for simulation, calibration, indicators,
// jump tests, the EWS benchmark, MST exports and the full report.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mrnews/mrnews.hpp"

namespace fs = std::filesystem;
using namespace mrnews;

namespace {

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out_dir = "out";
};

ConfigFile load_config(const Globals& g) { return g.config_path.empty() ? ConfigFile{} : ConfigFile::load(g.config_path); }

fs::path output(const Globals& g, const std::string& name) {
  const fs::path path = fs::path(g.out_dir) / name;
  fs::create_directories(path.parent_path());
  return path;
}

unsigned thread_count(const Globals& g, const ConfigFile& cfg) {
  if (g.threads) return *g.threads;
  return static_cast<unsigned>(cfg.count("threads").value_or(1));
}

std::uint64_t seed_of(const Globals& g, const ConfigFile& cfg) {
  if (g.seed) return *g.seed;
  return static_cast<std::uint64_t>(cfg.integer("seed").value_or(42));
}

void require_file(const std::string& what, const std::string& path) {
  if (path.empty()) throw Error(ErrorKind::ConfigInvalid, what + " is not set");
  if (!fs::exists(path)) throw Error(ErrorKind::ConfigInvalid, what + " '" + path + "' does not exist");
}

PanelSchema schema_from(const ConfigFile& cfg) {
  PanelSchema schema;
  if (const auto v = cfg.count("window_len")) schema.window_len = *v;
  if (const auto v = cfg.number("max_missing_fraction")) schema.max_missing_fraction = *v;
  return schema;
}

/// Loads the panel restricted to the weighted instruments (all columns when
/// there is no weights file).
std::pair<PricePanel, WeightVector> load_inputs(const std::string& panel_path, const std::string& weights_path,
                                                const ConfigFile& cfg) {
  require_file("panel file", panel_path);
  PanelSchema schema = schema_from(cfg);
  std::optional<WeightVector> weights;
  if (!weights_path.empty()) {
    require_file("weights file", weights_path);
    weights = load_weights(weights_path);
    for (const auto& [name, w] : weights->entries()) schema.instrument_columns.push_back(name);
  }
  auto loaded = load_price_panel(panel_path, schema);
  const auto& r = loaded.report;
  if (!r.rejected_lines.empty() || !r.dropped_days.empty() || r.filled_cells > 0)
    std::cerr << "load: " << r.rejected_lines.size() << " rejected lines, " << r.off_session_lines.size()
              << " off-session lines, " << r.filled_cells << " filled cells, " << r.dropped_days.size()
              << " dropped days\n";
  if (!weights) weights = WeightVector::equal(loaded.panel.instruments());
  return {std::move(loaded.panel), std::move(*weights)};
}

void note_written(const fs::path& p) { std::cout << "wrote " << p.string() << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiplex recurrence network early-warning toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "key = value configuration file");
  app.add_option("--seed", g.seed, "master random seed");
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
  app.add_option("--out", g.out_dir, "output directory")->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate a co-jump panel");
  std::string sim_prices = "prices.csv";
  std::string sim_truth = "cojumps.csv";
  sim->add_option("--prices", sim_prices, "price panel file name inside --out")->capture_default_str();
  sim->add_option("--truth", sim_truth, "co-jump log file name inside --out")->capture_default_str();

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "ROC calibration of the co-jump frequency");
  std::string cal_grid = "0.001,0.005,0.01,0.05";
  std::optional<std::size_t> cal_runs;
  std::optional<std::size_t> cal_days;
  std::string cal_profile = "desk";
  std::string cal_truth;
  cal->add_option("--grid", cal_grid, "lo:hi:step or comma list of per-minute probabilities")->capture_default_str();
  cal->add_option("--runs", cal_runs, "simulation runs per frequency");
  cal->add_option("--days", cal_days, "simulated days per run");
  cal->add_option("--profile", cal_profile, "desk (5 runs x 50 days) or full (50 x 250)")
      ->check(CLI::IsMember({"desk", "full"}))
      ->capture_default_str();
  cal->add_option("--truth-source", cal_truth, "planted or bns")->check(CLI::IsMember({"planted", "bns"}));

  // indicators
  auto* ind = app.add_subcommand("indicators", "daily MRN indicators, peaks and risk intervals");
  std::string ind_panel, ind_weights, ind_embedding;
  std::optional<double> ind_rr;
  std::optional<std::size_t> ind_horizon;
  ind->add_option("--panel", ind_panel, "price panel CSV");
  ind->add_option("--weights", ind_weights, "instrument,weight CSV selecting the layers");
  ind->add_option("--embedding", ind_embedding, "m,tau");
  ind->add_option("--rr", ind_rr, "target recurrence rate");
  ind->add_option("--horizon", ind_horizon, "risk interval horizon in days");

  // jumptest
  auto* jt = app.add_subcommand("jumptest", "BNS jump test on the weighted portfolio");
  std::string jt_panel, jt_weights;
  std::optional<int> jt_interval;
  std::vector<double> jt_alpha;
  jt->add_option("--panel", jt_panel, "price panel CSV");
  jt->add_option("--weights", jt_weights, "instrument,weight CSV (equal weights when omitted)");
  jt->add_option("--interval", jt_interval, "sampling interval in minutes");
  jt->add_option("--alpha", jt_alpha, "significance level(s)");

  // benchmark
  auto* bm = app.add_subcommand("benchmark", "critical-slowing-down benchmark");
  std::string bm_panel, bm_crises, bm_grid, bm_column;
  bm->add_option("--panel", bm_panel, "daily date,price CSV or minute panel")->required();
  bm->add_option("--crises", bm_crises, "crisis dates CSV")->required();
  bm->add_option("--grid", bm_grid, "parameter grid file (key = value lists)");
  bm->add_option("--column", bm_column, "price column (default: first)");

  // mst
  auto* mst = app.add_subcommand("mst", "projection network and maximum spanning tree per day");
  std::string mst_panel, mst_weights;
  std::vector<std::string> mst_dates;
  mst->add_option("--panel", mst_panel, "price panel CSV");
  mst->add_option("--weights", mst_weights, "instrument,weight CSV selecting the layers");
  mst->add_option("--date", mst_dates, "YYYY-MM-DD (default: every day)");

  // report
  auto* rep = app.add_subcommand("report", "full pipeline from one configuration");
  std::string rep_panel, rep_weights;
  rep->add_option("--panel", rep_panel, "price panel CSV (overrides config)");
  rep->add_option("--weights", rep_weights, "weights CSV (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto cfg = load_config(g);
    const auto threads = thread_count(g, cfg);
    const auto seed = seed_of(g, cfg);

    if (*sim) {
      SimConfig sc;
      apply_simulation_settings(cfg, sc);
      sc.seed = seed;
      const auto result = simulate_paths(sc);
      const auto prices = output(g, sim_prices);
      write_price_panel(result.panel(), prices.string());
      note_written(prices);
      const auto truth = output(g, sim_truth);
      auto out = detail::open_output(truth.string());
      write_cojump_log(result.log, sc, out);
      note_written(truth);
      std::cerr << "simulate: " << result.log.events.size() << " co-jumps, " << result.floored_prices
                << " floored prices\n";
    } else if (*cal) {
      CalibrationConfig cc;
      apply_calibration_settings(cfg, cc);
      const auto profile = profile_settings(cal_profile == "full" ? CalibrationProfile::Full : CalibrationProfile::Desk);
      cc.simulation.n_days = cal_days.value_or(cfg.has("sim.days") ? cc.simulation.n_days : profile.n_days);
      if (!cal_truth.empty()) cc.truth = cal_truth == "bns" ? TruthSource::Bns : TruthSource::Planted;
      cc.seed = seed;
      cc.threads = threads;
      const auto grid = parse_frequency_grid(cal_grid);
      const auto result = calibrate_risk_level(grid, cal_runs.value_or(profile.runs), cc);
      const auto path = output(g, "calibration.csv");
      auto out = detail::open_output(path.string());
      write_calibration_csv(result, out);
      note_written(path);
      const auto summary = output(g, "calibration_summary.csv");
      auto so = detail::open_output(summary.string());
      so << "indicator,frequency,mean_objective,is_best\n";
      for (const auto* c : {&result.mutual_information, &result.edge_overlap})
        for (std::size_t i = 0; i < grid.size(); ++i)
          so << to_string(c->indicator) << ',' << detail::format_number(grid[i]) << ','
             << detail::format_number(c->mean_objective[i]) << ',' << (grid[i] == c->best_frequency ? 1 : 0) << '\n';
      note_written(summary);
      std::cout << "best frequency: I " << detail::format_number(result.mutual_information.best_frequency)
                << ", omega " << detail::format_number(result.edge_overlap.best_frequency) << '\n';
    } else if (*ind) {
      auto pc = pipeline_config_from(cfg);
      if (!ind_panel.empty()) pc.panel_path = ind_panel;
      if (!ind_weights.empty()) pc.weights_path = ind_weights;
      if (!ind_embedding.empty()) {
        ConfigFile over;
        over.set("embedding", ind_embedding);
        apply_indicator_settings(over, pc.indicators);
      }
      if (ind_rr) pc.indicators.mrn.threshold = {ThresholdKind::TargetRecurrenceRate, *ind_rr};
      if (ind_horizon) pc.horizon = *ind_horizon;
      pc.indicators.threads = threads;
      const auto [panel, weights] = load_inputs(pc.panel_path, pc.weights_path, cfg);
      const auto run = indicator_series(panel, pc.indicators);
      auto peaks_of = [](const IndicatorSeries& s) { return s.size() >= 3 ? detect_peaks(s) : PeakSet{{}, {}, s.size()}; };
      const auto pm = peaks_of(run.mutual_information);
      const auto po = peaks_of(run.edge_overlap);
      const auto rm = risk_intervals(pm, pc.horizon);
      const auto ro = risk_intervals(po, pc.horizon);
      const auto path = output(g, "indicators.csv");
      {
        auto out = detail::open_output(path.string());
        write_indicator_csv(run, pm, po, rm, ro, out);
      }
      note_written(path);
      const auto peaks = output(g, "peaks.csv");
      {
        auto out = detail::open_output(peaks.string());
        write_peaks_csv(run.mutual_information, pm, rm, run.edge_overlap, po, ro, out);
      }
      note_written(peaks);
      for (const auto& d : run.days)
        if (!d.error.empty()) std::cerr << "gap " << format_date(d.date) << ": " << d.error << '\n';
    } else if (*jt) {
      auto pc = pipeline_config_from(cfg);
      if (!jt_panel.empty()) pc.panel_path = jt_panel;
      if (!jt_weights.empty()) pc.weights_path = jt_weights;
      if (jt_interval) pc.sampling_interval = *jt_interval;
      if (!jt_alpha.empty()) pc.alphas = jt_alpha;
      const auto [panel, weights] = load_inputs(pc.panel_path, pc.weights_path, cfg);
      const auto portfolio = build_portfolio_series(panel, weights);
      for (double alpha : pc.alphas) {
        const auto results = jump_test_days(portfolio, pc.sampling_interval, alpha);
        const auto path = output(g, pc.alphas.size() == 1 ? std::string("jumps.csv") : jump_file_name(alpha));
        auto out = detail::open_output(path.string());
        write_jump_csv(results, out);
        note_written(path);
      }
    } else if (*bm) {
      ParamGrid grid;
      SensitivityOptions opt;
      apply_benchmark_settings(cfg, grid, opt);
      if (!bm_grid.empty()) apply_benchmark_settings(ConfigFile::load(bm_grid), grid, opt);
      require_file("panel file", bm_panel);
      require_file("crises file", bm_crises);
      const auto series = load_daily_series(bm_panel, bm_column);
      std::vector<BenchmarkRow> rows;
      for (const auto& date : load_crisis_dates(bm_crises)) {
        const auto crisis = series.index_of(date);
        try {
          for (const auto& r : benchmark_crisis(series.values, crisis, grid, opt)) rows.push_back(r);
        } catch (const Error& e) {
          std::cerr << "benchmark " << format_date(date) << ": " << e.what() << '\n';
        }
      }
      const auto path = output(g, "benchmark_report.csv");
      auto out = detail::open_output(path.string());
      write_benchmark_report(rows, series.dates, out);
      note_written(path);
    } else if (*mst) {
      auto pc = pipeline_config_from(cfg);
      if (!mst_panel.empty()) pc.panel_path = mst_panel;
      if (!mst_weights.empty()) pc.weights_path = mst_weights;
      const auto [panel, weights] = load_inputs(pc.panel_path, pc.weights_path, cfg);
      std::vector<std::size_t> days;
      if (mst_dates.empty()) {
        for (std::size_t d = 0; d < panel.n_days(); ++d) days.push_back(d);
      } else {
        const auto dates = panel.day_dates();
        for (const auto& s : mst_dates) {
          const auto d = parse_date(s);
          if (!d) throw Error(ErrorKind::ConfigInvalid, "bad --date '" + s + "'");
          const auto it = std::find(dates.begin(), dates.end(), *d);
          if (it == dates.end()) throw Error(ErrorKind::DataError, "no trading day " + s + " in the panel");
          days.push_back(static_cast<std::size_t>(it - dates.begin()));
        }
      }
      std::vector<std::optional<std::pair<WeightedGraph, SpanningTree>>> results(days.size());
      detail::parallel_for(days.size(), threads, [&](std::size_t i) {
        const auto graph = projection_network(build_mrn(panel.day(days[i]), pc.indicators.mrn));
        results[i].emplace(graph, maximum_spanning_tree(graph));
      });
      for (std::size_t i = 0; i < days.size(); ++i) {
        const auto stem = "mst/" + format_date(panel.day_date(days[i]));
        const auto edges = output(g, stem + "_edges.csv");
        auto eo = detail::open_output(edges.string());
        write_mst_edges(results[i]->second, eo);
        const auto nodes = output(g, stem + "_nodes.csv");
        auto no = detail::open_output(nodes.string());
        write_mst_nodes(results[i]->second, no);
        const auto proj = output(g, stem + "_projection.csv");
        auto po = detail::open_output(proj.string());
        write_projection_matrix(results[i]->first, po);
      }
      std::cout << "wrote " << days.size() << " MST exports under " << (fs::path(g.out_dir) / "mst").string() << '\n';
    } else if (*rep) {
      auto pc = pipeline_config_from(cfg);
      if (!rep_panel.empty()) pc.panel_path = rep_panel;
      if (!rep_weights.empty()) pc.weights_path = rep_weights;
      pc.out_dir = g.out_dir;
      pc.seed = seed;
      pc.threads = threads;
      const auto bundle = run_pipeline(pc);
      for (const auto& f : bundle.files) note_written(f);
      for (const auto& r : bundle.overlap)
        std::cout << "alpha " << detail::format_number(r.alpha) << ' ' << to_string(r.indicator) << ": "
                  << r.n_covered << " of " << r.n_jumps << " jump days covered, " << r.n_exact << " exact\n";
    }
    for (const auto& k : cfg.unused_keys()) std::cerr << "warning: unused config key '" << k << "'\n";
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
