#pragma once

// Flat `key = value` configuration files. `#` starts a comment; blank lines
// are ignored; later keys override earlier ones.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mrnews/detail/csv.hpp"
#include "mrnews/error.hpp"

namespace mrnews {

class ConfigFile {
 public:
  ConfigFile() = default;

  static ConfigFile parse(const std::vector<std::string>& lines, const std::string& origin = "<config>") {
    ConfigFile cfg;
    cfg.origin_ = origin;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
      std::string_view line = lines[ln];
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw Error(ErrorKind::ConfigInvalid, origin + ":" + std::to_string(ln + 1) + ": expected key = value");
      const auto key = detail::trim(line.substr(0, eq));
      if (key.empty()) throw Error(ErrorKind::ConfigInvalid, origin + ":" + std::to_string(ln + 1) + ": empty key");
      cfg.values_[std::string(key)] = std::string(detail::trim(line.substr(eq + 1)));
    }
    return cfg;
  }

  static ConfigFile load(const std::string& path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorKind::ConfigInvalid, "config file '" + path + "' does not exist");
    try {
      auto cfg = parse(detail::read_lines(path), path);
      cfg.base_dir_ = std::filesystem::path(path).parent_path();
      return cfg;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigInvalid) throw;
      throw Error(ErrorKind::ConfigInvalid, e.what());
    }
  }

  [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  [[nodiscard]] std::optional<std::string> string(const std::string& key) const {
    used_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  /// A file path; relative paths are taken from the config file's directory.
  [[nodiscard]] std::optional<std::string> path(const std::string& key) const {
    const auto s = string(key);
    if (!s || s->empty()) return s;
    const std::filesystem::path p(*s);
    return p.is_absolute() || base_dir_.empty() ? *s : (base_dir_ / p).lexically_normal().string();
  }

  [[nodiscard]] std::optional<double> number(const std::string& key) const {
    const auto s = string(key);
    if (!s) return std::nullopt;
    const auto v = detail::parse_double(*s);
    if (!v) throw invalid(key, *s, "a number");
    return v;
  }

  [[nodiscard]] std::optional<long long> integer(const std::string& key) const {
    const auto s = string(key);
    if (!s) return std::nullopt;
    const auto v = detail::parse_int(*s);
    if (!v) throw invalid(key, *s, "an integer");
    return v;
  }

  [[nodiscard]] std::optional<std::size_t> count(const std::string& key) const {
    const auto v = integer(key);
    if (!v) return std::nullopt;
    if (*v < 0) throw invalid(key, std::to_string(*v), "a non-negative integer");
    return static_cast<std::size_t>(*v);
  }

  [[nodiscard]] std::optional<bool> flag(const std::string& key) const {
    const auto s = string(key);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "1" || *s == "yes") return true;
    if (*s == "false" || *s == "0" || *s == "no") return false;
    throw invalid(key, *s, "true or false");
  }

  /// Comma-separated numbers.
  [[nodiscard]] std::optional<std::vector<double>> numbers(const std::string& key) const {
    const auto s = string(key);
    if (!s) return std::nullopt;
    std::vector<double> out;
    for (const auto f : detail::split_fields(*s)) {
      const auto v = detail::parse_double(f);
      if (!v) throw invalid(key, *s, "a comma-separated list of numbers");
      out.push_back(*v);
    }
    return out;
  }

  /// Keys present in the file but never queried.
  [[nodiscard]] std::vector<std::string> unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
      if (!used_.contains(k)) out.push_back(k);
    return out;
  }

 private:
  [[nodiscard]] Error invalid(const std::string& key, const std::string& value, const char* expected) const {
    return Error(ErrorKind::ConfigInvalid, origin_ + ": '" + key + " = " + value + "' is not " + expected);
  }

  std::string origin_ = "<config>";
  std::filesystem::path base_dir_;
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

}  // namespace mrnews
