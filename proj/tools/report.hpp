#pragma once

// Report writers: flat key-value blocks for scalar results, RFC-4180 CSV for
// time series. Files are written atomically (temp file + rename) so partially
// written outputs are never observed.

#include <string>
#include <vector>

#include "config.hpp"
#include "ctkit/matrixkit.hpp"

namespace ctkit::cli {

class KeyValueReport {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, long value);
  void add_matrix(const std::string& key, const Matrix& m);  // row-major with dims
  void add_config(const Config& cfg);

  void write(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

class CsvReport {
 public:
  explicit CsvReport(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<std::string>& cells);
  void add_row(const std::vector<double>& cells);

  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double v);

/// Writes `content` to path via a sibling temp file and rename.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace ctkit::cli
