#include "fominlab/report.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>

#include "fominlab/error.hpp"

namespace fominlab {
namespace {

std::string json_escape(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string plain(const ReportValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
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

std::string as_json(const ReportValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return json_escape(*s);
  if (const auto* d = std::get_if<double>(&v); d && !std::isfinite(*d)) {
    return json_escape(format_double(*d));  // JSON has no literal for these
  }
  return plain(v);
}

std::string as_csv(const ReportValue& v) { return csv_escape(plain(v)); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Report::Report(std::string kind) : kind_(std::move(kind)) {}

Report& Report::assign(std::string key, ReportValue value) {
  for (auto& [k, v] : fields_) {
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  }
  fields_.emplace_back(std::move(key), std::move(value));
  return *this;
}

const ReportValue* Report::get(std::string_view key) const {
  for (const auto& [k, v] : fields_)
    if (k == key) return &v;
  return nullptr;
}

void Report::set_columns(std::vector<std::string> columns) {
  columns_ = std::move(columns);
  rows_.clear();
}

void Report::add_row(std::vector<ReportValue> row) {
  if (row.size() != columns_.size()) {
    throw Error(ErrorCode::InvalidArgument, "row width does not match the column count");
  }
  rows_.push_back(std::move(row));
}

std::string Report::to_json() const {
  std::string out = "{\n  \"kind\": " + json_escape(kind_);
  for (const auto& [k, v] : fields_) out += ",\n  " + json_escape(k) + ": " + as_json(v);
  if (!columns_.empty()) {
    out += ",\n  \"columns\": [";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      out += (i ? ", " : "") + json_escape(columns_[i]);
    }
    out += "],\n  \"rows\": [";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      out += r ? ",\n    [" : "\n    [";
      for (std::size_t i = 0; i < rows_[r].size(); ++i) out += (i ? ", " : "") + as_json(rows_[r][i]);
      out += "]";
    }
    out += rows_.empty() ? "]" : "\n  ]";
  }
  return out + "\n}\n";
}

std::string Report::to_csv() const {
  std::string header = "kind", values = csv_escape(kind_);
  for (const auto& [k, v] : fields_) {
    header += "," + csv_escape(k);
    values += "," + as_csv(v);
  }
  std::string out = header + "\n" + values + "\n";
  if (!columns_.empty()) {
    out += "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + csv_escape(columns_[i]);
    out += "\n";
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + as_csv(row[i]);
      out += "\n";
    }
  }
  return out;
}

ReportFormat parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw Error(ErrorCode::InvalidArgument, "unknown format '" + std::string(name) + "'");
}

void emit_report(const Report& report, ReportFormat format, const std::string& path) {
  write_text(format == ReportFormat::Json ? report.to_json() : report.to_csv(), path);
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, path + ": " + std::strerror(errno));
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::Io, path + ": " + std::strerror(errno));
}

}  // namespace fominlab
