#include "fominlab/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fominlab/error.hpp"

namespace fominlab {

struct Config::Impl {
  nlohmann::json value = nlohmann::json::object();
};

namespace {

const nlohmann::json* find(const nlohmann::json& obj, std::string_view key) {
  const auto it = obj.find(std::string(key));
  return it == obj.end() ? nullptr : &*it;
}

[[noreturn]] void type_error(std::string_view origin, std::string_view key, std::string_view want) {
  throw Error(ErrorCode::Config,
              std::string(origin) + ": '" + std::string(key) + "' must be " + std::string(want));
}

Point to_point(const nlohmann::json& j, std::string_view origin, std::string_view key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    type_error(origin, key, "a list of [x, y] integer pairs");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

Config::Config() : impl_(std::make_shared<Impl>()), origin_("<defaults>") {}

Config Config::parse(std::string_view text, std::string_view origin) {
  Config c;
  c.origin_ = std::string(origin);
  try {
    c.impl_->value = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, c.origin_ + ": " + e.what());
  }
  if (!c.impl_->value.is_object()) throw Error(ErrorCode::Config, c.origin_ + ": expected an object");
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

bool Config::has(std::string_view key) const { return find(impl_->value, key) != nullptr; }

void Config::check_keys(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [k, v] : impl_->value.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || a == k;
    if (!known) throw Error(ErrorCode::Config, origin_ + ": unknown key '" + k + "'");
  }
}

double Config::number(std::string_view key, double fallback) const {
  const auto* j = find(impl_->value, key);
  if (!j) return fallback;
  if (!j->is_number()) type_error(origin_, key, "a number");
  return j->get<double>();
}

std::int64_t Config::integer(std::string_view key, std::int64_t fallback) const {
  const auto* j = find(impl_->value, key);
  if (!j) return fallback;
  if (!j->is_number_integer()) type_error(origin_, key, "an integer");
  return j->get<std::int64_t>();
}

std::uint64_t Config::count(std::string_view key, std::uint64_t fallback) const {
  const auto* j = find(impl_->value, key);
  if (!j) return fallback;
  if (j->is_number_unsigned()) return j->get<std::uint64_t>();
  // Allow 1e5-style literals as long as they are exact nonnegative integers.
  if (j->is_number_float()) {
    const double d = j->get<double>();
    if (d >= 0 && d <= 9.007199254740992e15 && d == static_cast<double>(static_cast<std::uint64_t>(d)))
      return static_cast<std::uint64_t>(d);
  }
  type_error(origin_, key, "a nonnegative integer");
}

bool Config::boolean(std::string_view key, bool fallback) const {
  const auto* j = find(impl_->value, key);
  if (!j) return fallback;
  if (!j->is_boolean()) type_error(origin_, key, "true or false");
  return j->get<bool>();
}

std::string Config::text(std::string_view key, std::string fallback) const {
  const auto* j = find(impl_->value, key);
  if (!j) return fallback;
  if (!j->is_string()) type_error(origin_, key, "a string");
  return j->get<std::string>();
}

std::vector<double> Config::numbers(std::string_view key, std::vector<double> fallback) const {
  const auto* j = find(impl_->value, key);
  if (!j) return fallback;
  if (!j->is_array()) type_error(origin_, key, "a list of numbers");
  std::vector<double> out;
  for (const auto& e : *j) {
    if (!e.is_number()) type_error(origin_, key, "a list of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<Point> Config::points(std::string_view key, std::vector<Point> fallback) const {
  const auto* j = find(impl_->value, key);
  if (!j) return fallback;
  if (!j->is_array()) type_error(origin_, key, "a list of [x, y] integer pairs");
  std::vector<Point> out;
  for (const auto& e : *j) out.push_back(to_point(e, origin_, key));
  return out;
}

std::optional<Point> Config::point(std::string_view key) const {
  const auto* j = find(impl_->value, key);
  if (!j) return std::nullopt;
  return to_point(*j, origin_, key);
}

Config Config::object(std::string_view key) const {
  Config c;
  c.origin_ = origin_ + ":" + std::string(key);
  const auto* j = find(impl_->value, key);
  if (!j) return c;
  if (!j->is_object()) type_error(origin_, key, "an object");
  c.impl_->value = *j;
  return c;
}

void Config::set_count(std::string_view key, std::uint64_t value) {
  impl_ = std::make_shared<Impl>(*impl_);
  impl_->value[std::string(key)] = value;
}

void Config::set_number(std::string_view key, double value) {
  impl_ = std::make_shared<Impl>(*impl_);
  impl_->value[std::string(key)] = value;
}

void Config::set_literal(std::string_view key, std::string_view text) {
  impl_ = std::make_shared<Impl>(*impl_);
  auto parsed = nlohmann::json::parse(text, nullptr, false);
  if (parsed.is_discarded()) parsed = std::string(text);
  impl_->value[std::string(key)] = std::move(parsed);
}

std::string Config::dump() const { return impl_->value.dump(); }

}  // namespace fominlab
