#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "mrnews/mrnews.hpp"

namespace testing_support {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mrnews_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<double> normal_series(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = z(rng);
  return out;
}

/// Panel with `days` x `window` rows on the default session for the given
/// per-instrument price functions.
template <class F>
mrnews::PricePanel make_panel(std::size_t days, std::size_t window, std::size_t instruments, F price) {
  const auto minutes = mrnews::default_session_minutes(window);
  const auto dates = mrnews::weekday_calendar(mrnews::Date{std::chrono::year{2020} / 1 / 6}, days);
  std::vector<mrnews::Timestamp> ts;
  std::vector<std::vector<double>> cols(instruments);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < instruments; ++k) names.push_back("I" + std::to_string(k + 1));
  for (std::size_t d = 0; d < days; ++d)
    for (std::size_t r = 0; r < window; ++r) {
      ts.push_back({dates[d], minutes[r]});
      for (std::size_t k = 0; k < instruments; ++k) cols[k].push_back(price(d * window + r, k));
    }
  return mrnews::PricePanel(std::move(ts), std::move(names), std::move(cols), window);
}

inline std::filesystem::path fixture_dir() { return MRNEWS_FIXTURE_DIR; }

/// Header-keyed rows of a small CSV file, read without the library.
inline std::vector<std::map<std::string, std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  auto split = [](const std::string& l) {
    std::vector<std::string> f;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!l.empty() && l.back() == ',') f.emplace_back();
    return f;
  };
  if (!std::getline(in, line)) return rows;
  header = split(line);
  while (std::getline(in, line)) {
    const auto f = split(line);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < f.size(); ++i) row[header[i]] = f[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

struct RejoinRow {
  std::string alpha;
  std::string indicator;
  std::size_t n_jumps = 0;
  std::size_t n_covered = 0;
  std::size_t n_exact = 0;
  friend bool operator==(const RejoinRow&, const RejoinRow&) = default;
};

/// Recomputes the overlap table of a report directory from peaks.csv and the
/// per-alpha jump files alone. ISO dates compare correctly as strings.
inline std::vector<RejoinRow> rejoin_overlap(const std::filesystem::path& dir) {
  const auto peaks = read_csv(dir / "peaks.csv");
  std::vector<RejoinRow> out;
  for (const auto& reported : read_csv(dir / "overlap.csv")) {
    RejoinRow row{reported.at("alpha"), reported.at("indicator")};
    for (const auto& j : read_csv(dir / ("jumps_alpha_" + row.alpha + ".csv"))) {
      if (j.at("is_jump") != "1") continue;
      const auto& date = j.at("date");
      ++row.n_jumps;
      bool covered = false, exact = false;
      for (const auto& p : peaks) {
        if (p.at("indicator") != row.indicator) continue;
        covered = covered || (p.at("interval_start") <= date && date <= p.at("interval_end"));
        exact = exact || p.at("date") == date;
      }
      row.n_covered += covered ? 1 : 0;
      row.n_exact += exact ? 1 : 0;
    }
    out.push_back(row);
  }
  return out;
}

inline std::vector<RejoinRow> reported_overlap(const std::filesystem::path& dir) {
  std::vector<RejoinRow> out;
  for (const auto& r : read_csv(dir / "overlap.csv"))
    out.push_back({r.at("alpha"), r.at("indicator"), std::stoul(r.at("n_jumps")), std::stoul(r.at("n_covered")),
                   std::stoul(r.at("n_exact"))});
  return out;
}

/// Runs the CLI binary through the shell and returns its exit status.
inline int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + MRNEWS_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace testing_support
