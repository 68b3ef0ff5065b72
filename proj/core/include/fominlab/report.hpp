#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace fominlab {

using ReportValue = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;

/// Ordered scalar fields plus an optional table. Field order is insertion
/// order; doubles are written with 17 significant digits so that identical
/// inputs give byte-identical files.
class Report {
 public:
  explicit Report(std::string kind);

  const std::string& kind() const noexcept { return kind_; }

  Report& set(std::string key, ReportValue value) { return assign(std::move(key), std::move(value)); }
  Report& set(std::string key, int value) { return assign(std::move(key), std::int64_t{value}); }
  Report& set(std::string key, std::int64_t value) { return assign(std::move(key), value); }
  Report& set(std::string key, std::uint64_t value) { return assign(std::move(key), value); }
  Report& set(std::string key, double value) { return assign(std::move(key), value); }
  Report& set(std::string key, bool value) { return assign(std::move(key), value); }
  Report& set(std::string key, std::string value) {
    return assign(std::move(key), std::move(value));
  }
  Report& set(std::string key, const char* value) {
    return assign(std::move(key), std::string(value));
  }
  const ReportValue* get(std::string_view key) const;
  const std::vector<std::pair<std::string, ReportValue>>& fields() const noexcept {
    return fields_;
  }

  void set_columns(std::vector<std::string> columns);
  void add_row(std::vector<ReportValue> row);
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<ReportValue>>& rows() const noexcept { return rows_; }

  std::string to_json() const;
  std::string to_csv() const;

 private:
  Report& assign(std::string key, ReportValue value);

  std::string kind_;
  std::vector<std::pair<std::string, ReportValue>> fields_;
  std::vector<std::string> columns_;
  std::vector<std::vector<ReportValue>> rows_;
};

enum class ReportFormat { Json, Csv };

ReportFormat parse_format(std::string_view name);

/// Writes the report to `path`; "-" or an empty path means stdout. Throws Io
/// with the system message when the file cannot be written.
void emit_report(const Report& report, ReportFormat format, const std::string& path);

/// The output step of emit_report for text produced elsewhere.
void write_text(const std::string& text, const std::string& path);

/// "%.17g", with inf / -inf / nan spelled out.
std::string format_double(double v);

}  // namespace fominlab
