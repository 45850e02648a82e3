#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bolax/types.hpp"

namespace bolax {

/// Locale-independent shortest round-trip formatting ('.' decimal point).
inline std::string fmt_double(double x) {
  if (x == 0.0) return "0";  // fold -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Minimal CSV writer: header row, '.' decimal, deterministic bytes.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(const std::vector<std::string>& cells) {
    std::string line;
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += cells[i];
    }
    rows_.push_back(std::move(line));
  }

  std::string str() const {
    std::string out;
    for (size_t i = 0; i < header_.size(); ++i) {
      if (i) out += ',';
      out += header_[i];
    }
    out += '\n';
    for (const auto& r : rows_) {
      out += r;
      out += '\n';
    }
    return out;
  }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    f << str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

}  // namespace bolax
