#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ctkit::cli {

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

void KeyValueReport::add(const std::string& key, const std::string& value) {
  rows_.emplace_back(key, value);
}

void KeyValueReport::add(const std::string& key, double value) {
  rows_.emplace_back(key, format_double(value));
}

void KeyValueReport::add(const std::string& key, long value) {
  rows_.emplace_back(key, std::to_string(value));
}

void KeyValueReport::add_matrix(const std::string& key, const Matrix& m) {
  add(key + ".rows", long(m.rows()));
  add(key + ".cols", long(m.cols()));
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i + j > 0) out << ' ';
      out << m(i, j);
    }
  add(key + ".entries", out.str());
}

void KeyValueReport::add_config(const Config& cfg) {
  for (const auto& [key, value] : cfg.flattened()) add("config." + key, value);
}

void KeyValueReport::write(const std::string& path) const {
  std::ostringstream out;
  for (const auto& [key, value] : rows_) out << key << " = " << value << '\n';
  atomic_write(path, out.str());
}

namespace {

std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void CsvReport::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size())
    throw std::logic_error("CsvReport: row width does not match header");
  rows_.push_back(cells);
}

void CsvReport::add_row(const std::vector<double>& cells) {
  std::vector<std::string> formatted;
  formatted.reserve(cells.size());
  for (double v : cells) formatted.push_back(format_double(v));
  add_row(formatted);
}

void CsvReport::write(const std::string& path) const {
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << csv_quote(cells[i]);
    }
    out << "\r\n";
  };
  emit(header_);
  for (const auto& row : rows_) emit(row);
  atomic_write(path, out.str());
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + tmp);
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

}  // namespace ctkit::cli
