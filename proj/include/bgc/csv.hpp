#pragma once

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bgc::csv {

using Field = std::variant<double, std::string>;
using Row = std::vector<Field>;

/// 17 significant digits, the C locale's %.17g.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string render(const Field& f) {
  if (const auto* d = std::get_if<double>(&f)) return format_number(*d);
  return quote(std::get<std::string>(f));
}

/// Header first, then one line per row, CRLF-free. Every row must have the
/// header's width.
inline void write_csv(std::ostream& out, const std::vector<std::string>& header, const std::vector<Row>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != header.size()) {
      throw std::invalid_argument("csv row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                  " fields, header has " + std::to_string(header.size()));
    }
  }
  auto line = [&](const auto& fields, auto&& cell) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << cell(fields[i]);
    }
    out << '\n';
  };
  line(header, [](const std::string& h) { return quote(h); });
  for (const auto& r : rows) line(r, [](const Field& f) { return render(f); });
  out.flush();
  if (!out) throw std::runtime_error("csv write failed");
}

}  // namespace bgc::csv
