#pragma once
//
// Report assembly and emission. JSON output is written by a small
// serializer so that every floating value carries 17 significant digits and
// non-finite values become null; key order is insertion order.
//
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kornlab/error.hpp"

namespace kornlab::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "kornlab/1";

struct Report {
  std::string command;
  Json config = Json::object();
  Json results = Json::object();
  Json errors = Json::array();
  Json timings_ms = Json::object();
  std::vector<std::string> csv_header;
  std::vector<std::vector<Json>> csv_rows;
  bool usage_error = false;

  void add_error(ErrorCode code, const std::string& where, const std::string& message) {
    errors.push_back(Json{{"code", std::string(to_string(code))}, {"where", where}, {"message", message}});
  }

  /// Records a failed invariant under its name.
  void violation(const std::string& where, const std::string& message) {
    add_error(ErrorCode::InvariantViolation, where, message);
  }

  int exit_code() const {
    if (usage_error) return 2;
    return errors.empty() ? 0 : 1;
  }

  Json document() const {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["config"] = config;
    j["results"] = results;
    j["errors"] = errors;
    j["timings_ms"] = timings_ms;
    return j;
  }
};

namespace detail {

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_json(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 1);
      }
      os << '\n' << pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const auto& v : j) flat = flat && v.is_primitive();
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << (flat ? ", " : ",");
        first = false;
        if (!flat) os << '\n' << inner;
        write_json(os, v, indent + 1);
      }
      if (!flat) os << '\n' << pad;
      os << ']';
      return;
    }
    case Json::value_t::number_float: os << format_double(j.get<double>()); return;
    default: os << j.dump(); return;
  }
}

inline std::string csv_cell(const Json& v) {
  if (v.is_number_float()) {
    const std::string s = format_double(v.get<double>());
    return s == "null" ? "" : s;
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return v.dump();
}

}  // namespace detail

inline std::string render(const Report& r, const std::string& format) {
  std::ostringstream os;
  if (format == "csv") {
    for (std::size_t i = 0; i < r.csv_header.size(); ++i) os << (i ? "," : "") << r.csv_header[i];
    os << '\n';
    for (const auto& row : r.csv_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_cell(row[i]);
      os << '\n';
    }
  } else {
    detail::write_json(os, r.document(), 0);
    os << '\n';
  }
  return os.str();
}

/// Writes to `path`, or to stdout when the path is empty.
inline void emit_report(const Report& r, const std::string& format, const std::string& path) {
  const std::string text = render(r, format);
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace kornlab::cli
