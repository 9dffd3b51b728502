#ifndef TACP_HARNESS_TRACE_HPP
#define TACP_HARNESS_TRACE_HPP

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tacp/errors.hpp"

namespace tacp::harness {

inline constexpr const char* kTraceHeader = "k,objective,rel_error,primal_res,dual_res,V,r,restart";

struct TraceRow {
  std::size_t k = 0;
  double objective = 0.0;
  double rel_error = 0.0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  double V = 0.0;
  double r = 0.0;
  bool restart = false;

  bool operator==(const TraceRow&) const = default;
};

/// 17 significant digits: enough for strtod to give the same double back.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_trace_row(std::ostream& os, const TraceRow& row) {
  os << row.k << ',' << format_real(row.objective) << ',' << format_real(row.rel_error) << ','
     << format_real(row.primal_res) << ',' << format_real(row.dual_res) << ',' << format_real(row.V) << ','
     << format_real(row.r) << ',' << (row.restart ? 1 : 0) << '\n';
}

inline void write_trace(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << kTraceHeader << '\n';
  for (const auto& row : rows) write_trace_row(os, row);
}

namespace detail {

inline double parse_real(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || *end != '\0') {
    fail(Errc::ParseError, "line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace detail

inline std::vector<TraceRow> read_trace(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTraceHeader) fail(Errc::ParseError, "missing trace header");
  std::vector<TraceRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 8) fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 8 fields");
    TraceRow row;
    row.k = static_cast<std::size_t>(std::stoull(fields[0]));
    row.objective = detail::parse_real(fields[1], line_no);
    row.rel_error = detail::parse_real(fields[2], line_no);
    row.primal_res = detail::parse_real(fields[3], line_no);
    row.dual_res = detail::parse_real(fields[4], line_no);
    row.V = detail::parse_real(fields[5], line_no);
    row.r = detail::parse_real(fields[6], line_no);
    row.restart = fields[7] == "1";
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tacp::harness

#endif  // TACP_HARNESS_TRACE_HPP
