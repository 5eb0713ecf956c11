#pragma once

// Run summaries and their serialized forms: a CSV with one row per method and
// an aligned text table with the same columns.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reccycle/core.hpp"
#include "reccycle/datasets.hpp"

namespace reccycle {

struct AlgorithmSummary {
  std::string name;
  std::size_t users = 0;
  double ndcg = 0.0;
  double recall = 0.0;
  double accuracy = std::numeric_limits<double>::quiet_NaN();  // NaN when not applicable
  double mean_cost = 0.0;
  double median_cost = 0.0;
  double max_cost = 0.0;
  std::size_t min_group_count = 0;
  double fallback_rate = 0.0;
  double infeasible_rate = 0.0;
  double mean_expansions = 0.0;
  double median_expansions = 0.0;
  double max_expansions = 0.0;
};

struct RunReport {
  std::vector<AlgorithmSummary> algorithms;
  std::vector<std::pair<std::string, std::string>> config;  // resolved settings, in order

  const AlgorithmSummary* find(const std::string& name) const {
    for (const auto& a : algorithms)
      if (a.name == name) return &a;
    return nullptr;
  }
};

inline constexpr const char* kReportCsvHeader =
    "algorithm,ndcg,recall,accuracy,mean_cost,min_group_count,fallback_rate,infeasible_rate";

namespace detail {

inline std::string fixed(double v, int digits = 6) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

inline std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace detail

inline void write_report_csv(std::ostream& os, const RunReport& report) {
  os << kReportCsvHeader << '\n';
  for (const auto& a : report.algorithms) {
    os << a.name << ',' << detail::fixed(a.ndcg) << ',' << detail::fixed(a.recall) << ','
       << detail::fixed(a.accuracy) << ',' << detail::fixed(a.mean_cost) << ',' << a.min_group_count
       << ',' << detail::fixed(a.fallback_rate) << ',' << detail::fixed(a.infeasible_rate) << '\n';
  }
}

/// Fixed-width columns, so alignment does not depend on the values.
inline void write_report_table(std::ostream& os, const RunReport& report) {
  std::size_t name_width = 10;
  for (const auto& a : report.algorithms) name_width = std::max(name_width, a.name.size());
  constexpr std::size_t w = 11;
  os << detail::pad_right("Method", name_width) << detail::pad_left("nDCG", w)
     << detail::pad_left("Recall", w) << detail::pad_left("Accuracy", w)
     << detail::pad_left("Cost", w) << detail::pad_left("MinGroup", w)
     << detail::pad_left("Fallback", w) << detail::pad_left("Infeasible", w) << '\n';
  os << std::string(name_width + 7 * w, '-') << '\n';
  for (const auto& a : report.algorithms) {
    os << detail::pad_right(a.name, name_width) << detail::pad_left(detail::fixed(a.ndcg, 4), w)
       << detail::pad_left(detail::fixed(a.recall, 4), w)
       << detail::pad_left(detail::fixed(a.accuracy, 4), w)
       << detail::pad_left(detail::fixed(a.mean_cost, 2), w)
       << detail::pad_left(std::to_string(a.min_group_count), w)
       << detail::pad_left(detail::fixed(a.fallback_rate, 4), w)
       << detail::pad_left(detail::fixed(a.infeasible_rate, 4), w) << '\n';
  }
}

/// Cost and search-size distribution per method.
inline void write_stats_csv(std::ostream& os, const RunReport& report) {
  os << "algorithm,users,median_cost,max_cost,mean_expansions,median_expansions,max_expansions\n";
  for (const auto& a : report.algorithms)
    os << a.name << ',' << a.users << ',' << detail::fixed(a.median_cost) << ','
       << detail::fixed(a.max_cost) << ',' << detail::fixed(a.mean_expansions) << ','
       << detail::fixed(a.median_expansions) << ',' << detail::fixed(a.max_expansions) << '\n';
}

inline void write_config_echo(std::ostream& os, const RunReport& report) {
  for (const auto& [k, v] : report.config) os << k << " = " << v << '\n';
}

/// Reads back the columns written by write_report_csv.
inline RunReport read_report_csv(std::istream& is, const std::string& source = "report.csv") {
  RunReport report;
  std::string line;
  if (!std::getline(is, line) || line != kReportCsvHeader)
    throw Error(source + ":1: unexpected header");
  std::size_t lineno = 1;
  auto number = [&](std::string_view f) {
    if (f == "NA") return std::numeric_limits<double>::quiet_NaN();
    double v = 0;
    if (!detail::parse_double(f, v))
      throw Error(source + ":" + std::to_string(lineno) + ": bad number '" + std::string(f) + "'");
    return v;
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = detail::split(line, ',');
    if (f.size() != 8) throw Error(source + ":" + std::to_string(lineno) + ": expected 8 fields");
    AlgorithmSummary a;
    a.name = std::string(f[0]);
    a.ndcg = number(f[1]);
    a.recall = number(f[2]);
    a.accuracy = number(f[3]);
    a.mean_cost = number(f[4]);
    long long g = 0;
    if (!detail::parse_int(f[5], g) || g < 0)
      throw Error(source + ":" + std::to_string(lineno) + ": bad group count");
    a.min_group_count = static_cast<std::size_t>(g);
    a.fallback_rate = number(f[6]);
    a.infeasible_rate = number(f[7]);
    report.algorithms.push_back(std::move(a));
  }
  return report;
}

enum class ReportFormat { csv, table };

inline void emit_report(const RunReport& report, ReportFormat format, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  if (format == ReportFormat::csv) write_report_csv(os, report);
  else write_report_table(os, report);
  if (!os) throw Error("write to '" + path + "' failed");
}

}  // namespace reccycle
