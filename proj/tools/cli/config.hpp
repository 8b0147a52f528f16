#pragma once

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace kppfront::cli {

/// Bad or unknown configuration entry. Maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// Flat `key = value` settings grouped by `[section]` headers. Keys are addressed
/// as "section.key". Every key must be consumed before `finish()`; anything left
/// over is an unknown key.
class Config {
public:
  static Config parse(std::istream& in);
  static Config load(const std::string& path);
  static Config empty() { return Config{}; }

  bool has(const std::string& key) const;
  double number(const std::string& key, double fallback);
  std::optional<double> number(const std::string& key);
  int integer(const std::string& key, int fallback);
  std::string text(const std::string& key, const std::string& fallback);
  bool flag(const std::string& key, bool fallback);
  std::optional<std::vector<double>> list(const std::string& key);

  /// Throws ConfigError naming the first key nobody asked for.
  void finish() const;

private:
  const std::vector<std::string>* raw(const std::string& key);
  std::string scalar(const std::string& key);

  std::map<std::string, std::vector<std::string>> entries_;
  std::set<std::string> used_;
};

}  // namespace kppfront::cli
