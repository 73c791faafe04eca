#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "leakscope/harness.hpp"

namespace leakscope::harness {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double ecdf_ks(std::vector<double> samples,
               const std::function<double(double)>& cdf) {
  if (samples.size() < 100) {
    throw std::invalid_argument("ecdf_ks: need at least 100 samples");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    sup = std::max(sup, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
  }
  return sup;
}

void write_csv(const ResultTable& table, std::ostream& out) {
  for (const auto& [key, value] : table.provenance) {
    out << "# " << key << " = " << value << "\n";
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << "\r\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::logic_error("write_csv: row width mismatch");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      out << (row[c] ? format_value(*row[c]) : "NA");
    }
    out << "\r\n";
  }
}

ResultTable read_csv(std::istream& in) {
  ResultTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      std::string key = line.substr(1, eq == std::string::npos
                                           ? std::string::npos
                                           : eq - 1);
      std::string val = eq == std::string::npos ? "" : line.substr(eq + 1);
      const auto strip = [](std::string& s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
      };
      strip(key);
      strip(val);
      table.provenance.emplace_back(key, val);
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!have_header) {
      while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
      have_header = true;
      continue;
    }
    std::vector<std::optional<double>> row;
    while (std::getline(ss, cell, ',')) {
      if (cell == "NA") {
        row.push_back(std::nullopt);
      } else {
        row.push_back(std::stod(cell));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace leakscope::harness
