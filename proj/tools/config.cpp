#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ctkit::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      cfg.sections_[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any section");
    if (cfg.sections_[section].count(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    cfg.sections_[section][key] = {value, lineno};
  }
  return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               std::optional<std::string> fallback) const {
  auto s = sections_.find(section);
  if (s != sections_.end()) {
    auto k = s->second.find(key);
    if (k != s->second.end()) return k->second.value;
  }
  if (fallback) return *fallback;
  throw ConfigError(origin_ + ": missing required key " + section + "." + key);
}

double Config::get_double(const std::string& section, const std::string& key,
                          std::optional<double> fallback) const {
  if (!has(section, key)) {
    if (fallback) return *fallback;
    throw ConfigError(origin_ + ": missing required key " + section + "." + key);
  }
  const std::string raw = get_string(section, key);
  try {
    std::size_t pos = 0;
    double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": " + section + "." + key + " is not a number: '" + raw + "'");
  }
}

long Config::get_long(const std::string& section, const std::string& key,
                      std::optional<long> fallback) const {
  if (!has(section, key)) {
    if (fallback) return *fallback;
    throw ConfigError(origin_ + ": missing required key " + section + "." + key);
  }
  const std::string raw = get_string(section, key);
  try {
    std::size_t pos = 0;
    long v = std::stol(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": " + section + "." + key + " is not an integer: '" + raw + "'");
  }
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        std::vector<double> fallback) const {
  if (!has(section, key)) return fallback;
  std::string raw = get_string(section, key);
  std::replace(raw.begin(), raw.end(), ',', ' ');
  std::istringstream in(raw);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof())
    throw ConfigError(origin_ + ": " + section + "." + key + " is not a number list");
  return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = {value, 0};
}

void Config::restrict_keys(const std::vector<std::string>& allowed) const {
  for (const auto& [sec, entries] : sections_)
    for (const auto& [key, entry] : entries) {
      const std::string full = sec + "." + key;
      if (std::find(allowed.begin(), allowed.end(), full) == allowed.end())
        throw ConfigError(origin_ + ":" + std::to_string(entry.line) + ": unknown key '" + full +
                          "'");
    }
}

std::vector<std::pair<std::string, std::string>> Config::flattened() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [sec, entries] : sections_)
    for (const auto& [key, entry] : entries) out.emplace_back(sec + "." + key, entry.value);
  return out;
}

}  // namespace ctkit::cli
