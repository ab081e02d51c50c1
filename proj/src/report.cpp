#include "eslab/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "eslab/errors.hpp"

namespace eslab {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_value(const ReportValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return std::isfinite(*d) ? format_number(*d) : "null";
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* s = std::get_if<std::string>(&v)) return nlohmann::json(*s).dump();
  return format_value(v);
}

}  // namespace

ReportFormat parse_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw ConfigError("unknown report format '" + std::string(name) + "' (expected csv or json)");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_value(const ReportValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_number(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          return std::to_string(x);
        }
      },
      v);
}

std::string format_report(const std::vector<ReportRow>& rows, ReportFormat format,
                          const std::vector<std::string>& header) {
  std::string out;
  if (format == ReportFormat::kCsv) {
    std::vector<std::string> keys = header;
    if (!rows.empty()) {
      keys.clear();
      for (const auto& [k, v] : rows.front().fields) keys.push_back(k);
    }
    if (keys.empty()) return out;
    for (std::size_t i = 0; i < keys.size(); ++i) out += (i ? "," : "") + csv_field(keys[i]);
    out += "\n";
    for (const auto& row : rows) {
      if (row.fields.size() != keys.size()) throw ConfigError("report rows differ in arity");
      for (std::size_t i = 0; i < row.fields.size(); ++i)
        out += (i ? "," : "") + csv_field(format_value(row.fields[i].second));
      out += "\n";
    }
    return out;
  }
  out += "[";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += r ? ",\n {" : "\n {";
    const auto& fields = rows[r].fields;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out += (i ? ", " : "") + nlohmann::json(fields[i].first).dump() + ": " + json_value(fields[i].second);
    }
    out += "}";
  }
  out += rows.empty() ? "]\n" : "\n]\n";
  return out;
}

std::size_t write_text(const std::string& text, const std::filesystem::path& path) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing report to stdout");
    return text.size();
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw IoError("failed writing " + path.string());
  return text.size();
}

std::size_t emit_report(const std::vector<ReportRow>& rows, ReportFormat format, const std::filesystem::path& path,
                        bool allow_empty, const std::vector<std::string>& header) {
  if (rows.empty() && !allow_empty) throw ConfigError("report has no rows");
  return write_text(format_report(rows, format, header), path);
}

}  // namespace eslab
