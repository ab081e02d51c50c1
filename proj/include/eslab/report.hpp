#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace eslab {

using ReportValue = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;

/// Ordered key-value pairs; every row of a report shares the same keys.
struct ReportRow {
  std::vector<std::pair<std::string, ReportValue>> fields;

  ReportRow& add(std::string key, ReportValue value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  template <class T>
    requires std::is_arithmetic_v<T>
  ReportRow& add(std::string key, T value) {
    if constexpr (std::is_same_v<T, bool>) {
      return add(std::move(key), ReportValue(value));
    } else if constexpr (std::is_floating_point_v<T>) {
      return add(std::move(key), ReportValue(static_cast<double>(value)));
    } else if constexpr (std::is_signed_v<T>) {
      return add(std::move(key), ReportValue(static_cast<std::int64_t>(value)));
    } else {
      return add(std::move(key), ReportValue(static_cast<std::uint64_t>(value)));
    }
  }
  ReportRow& add(std::string key, const char* value) { return add(std::move(key), ReportValue(std::string(value))); }
};

enum class ReportFormat { kCsv, kJson };

ReportFormat parse_format(std::string_view name);

/// Shortest-independent, locale-free rendering with 17 significant digits.
std::string format_number(double x);
std::string format_value(const ReportValue& v);

/// CSV with RFC 4180 quoting and a header line, or a JSON array of objects
/// with keys in row order. `header` names the CSV columns when rows is empty.
std::string format_report(const std::vector<ReportRow>& rows, ReportFormat format,
                          const std::vector<std::string>& header = {});

/// Writes format_report(...) to path ("-" is stdout) and returns the byte
/// count. Throws IoError naming the path on failure and ConfigError when rows
/// is empty and allow_empty is false.
std::size_t emit_report(const std::vector<ReportRow>& rows, ReportFormat format, const std::filesystem::path& path,
                        bool allow_empty = true, const std::vector<std::string>& header = {});

/// Writes text to path ("-" is stdout), returning the byte count.
std::size_t write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace eslab
