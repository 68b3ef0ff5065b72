#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fominlab/lattice.hpp"

namespace fominlab {

/// A flat JSON object of experiment settings. Getters throw Config on a type
/// mismatch; `check_keys` rejects anything the caller does not know about.
class Config {
 public:
  Config();
  static Config parse(std::string_view text, std::string_view origin = "<string>");
  static Config load(const std::string& path);

  bool has(std::string_view key) const;
  void check_keys(std::initializer_list<std::string_view> allowed) const;

  double number(std::string_view key, double fallback) const;
  std::int64_t integer(std::string_view key, std::int64_t fallback) const;
  std::uint64_t count(std::string_view key, std::uint64_t fallback) const;
  bool boolean(std::string_view key, bool fallback) const;
  std::string text(std::string_view key, std::string fallback) const;
  std::vector<double> numbers(std::string_view key, std::vector<double> fallback) const;
  std::vector<Point> points(std::string_view key, std::vector<Point> fallback) const;
  std::optional<Point> point(std::string_view key) const;

  /// Nested object (e.g. a domain description); empty Config when absent.
  Config object(std::string_view key) const;

  void set_count(std::string_view key, std::uint64_t value);
  void set_number(std::string_view key, double value);
  /// Sets a top-level field from a JSON literal; text that is not valid JSON
  /// is stored as a string.
  void set_literal(std::string_view key, std::string_view text);

  std::string dump() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
  std::string origin_;
};

}  // namespace fominlab
