// CSV and text-file output with deterministic number formatting.
#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ringrc/common.hpp"

namespace ringrc {

// Shortest round-trippable decimal form, identical on every run.
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  return out;
}

inline void write_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out = open_output(path);
  out << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << row[i];
    }
    out << "\n";
  }
  if (!out) throw io_error("write failed for '" + path + "'");
}

// One weight per line, round-trippable.
inline void write_weights_csv(const std::string& path, const std::vector<double>& w) {
  std::ofstream out = open_output(path);
  for (double v : w) out << fmt_g17(v) << "\n";
  if (!out) throw io_error("write failed for '" + path + "'");
}

inline std::vector<double> read_weights_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::vector<double> w;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    w.push_back(std::stod(line));
  }
  return w;
}

}  // namespace ringrc
