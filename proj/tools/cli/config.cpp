#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <CLI11.hpp>

namespace kppfront::cli {

namespace {

std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

double to_number(const std::string& key, const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v)) throw ConfigError(key, "not a finite number: '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

// CLI11 folds a repeated key into one multi-valued item, which looks like a
// list. Catch repeats on the raw lines first.
void reject_duplicates(const std::string& text) {
  std::set<std::string> seen;
  std::string section;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    line = trim(line);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      section = trim(line.substr(1, line.find(']') - 1)) + ".";
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = section + trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");
  }
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config cfg;
  std::vector<CLI::ConfigItem> items;
  const std::string text{std::istreambuf_iterator<char>(in), {}};
  reject_duplicates(text);
  try {
    std::istringstream body(text);
    items = CLI::ConfigTOML().from_config(body);
  } catch (const CLI::Error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.what());
  }
  for (const auto& item : items) {
    // Section terminators carry no value.
    if (item.name == "--" || item.name == "++") continue;
    std::vector<std::string> parents;
    for (const auto& p : item.parents)
      if (p != "default") parents.push_back(p);
    std::string key;
    for (const auto& p : parents) key += p + ".";
    key += item.name;
    if (cfg.entries_.count(key)) throw ConfigError(key, "duplicate key");
    std::vector<std::string> values;
    for (const auto& v : item.inputs) values.push_back(unquote(v));
    cfg.entries_[key] = std::move(values);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  return parse(in);
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

const std::vector<std::string>* Config::raw(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

std::string Config::scalar(const std::string& key) {
  const auto* v = raw(key);
  if (v->size() != 1) throw ConfigError(key, "expected a single value");
  return v->front();
}

std::optional<double> Config::number(const std::string& key) {
  if (!raw(key)) return std::nullopt;
  return to_number(key, scalar(key));
}

double Config::number(const std::string& key, double fallback) { return number(key).value_or(fallback); }

int Config::integer(const std::string& key, int fallback) {
  if (!raw(key)) return fallback;
  const std::string s = scalar(key);
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(key, "not an integer: '" + s + "'");
  return v;
}

std::string Config::text(const std::string& key, const std::string& fallback) {
  if (!raw(key)) return fallback;
  return scalar(key);
}

bool Config::flag(const std::string& key, bool fallback) {
  if (!raw(key)) return fallback;
  const std::string s = scalar(key);
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError(key, "expected true or false, got '" + s + "'");
}

std::optional<std::vector<double>> Config::list(const std::string& key) {
  const auto* v = raw(key);
  if (!v) return std::nullopt;
  std::vector<double> out;
  for (const auto& s : *v) out.push_back(to_number(key, s));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

void Config::finish() const {
  for (const auto& [key, _] : entries_)
    if (!used_.count(key)) throw ConfigError(key, "unknown key");
}

}  // namespace kppfront::cli
