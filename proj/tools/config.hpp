#pragma once

// INI-style experiment configuration: named sections of key = value lines,
// '#' or ';' comments, unknown sections and keys rejected up front.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctkit::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         std::optional<std::string> fallback = std::nullopt) const;
  double get_double(const std::string& section, const std::string& key,
                    std::optional<double> fallback = std::nullopt) const;
  long get_long(const std::string& section, const std::string& key,
                std::optional<long> fallback = std::nullopt) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  std::vector<double> fallback = {}) const;

  void set(const std::string& section, const std::string& key, const std::string& value);

  /// Every (section, key) pair must appear in `allowed` (formatted
  /// "section.key"); throws ConfigError naming the offending line otherwise.
  void restrict_keys(const std::vector<std::string>& allowed) const;

  /// Flat "section.key = value" lines, sorted, for embedding in reports.
  std::vector<std::pair<std::string, std::string>> flattened() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::string origin_;
};

}  // namespace ctkit::cli
