#include <doctest.h>

#include "fominlab/config.hpp"
#include "fominlab/error.hpp"

using namespace fominlab;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("typed getters with fallbacks") {
  const Config c = Config::parse(R"({"a": 1.5, "n": 3, "big": 1e5, "flag": true, "s": "hi",
                                     "xs": [1, 2.5], "pts": [[0, -1], [2, 3]], "p": [4, 5],
                                     "dom": {"type": "rectangle", "width": 2, "height": 1}})");
  CHECK(c.number("a", 0) == 1.5);
  CHECK(c.number("n", 0) == 3.0);
  CHECK(c.number("missing", 7.0) == 7.0);
  CHECK(c.integer("n", 0) == 3);
  CHECK(c.count("n", 0) == 3);
  CHECK(c.count("big", 0) == 100000);
  CHECK(c.boolean("flag", false));
  CHECK(c.text("s", "") == "hi");
  CHECK(c.numbers("xs", {}) == std::vector<double>{1.0, 2.5});
  const auto pts = c.points("pts", {});
  REQUIRE(pts.size() == 2);
  CHECK(pts[1] == Point{2, 3});
  CHECK(*c.point("p") == Point{4, 5});
  CHECK_FALSE(c.point("q").has_value());
  CHECK(c.object("dom").integer("width", 0) == 2);
  CHECK_FALSE(c.object("nothing").has("type"));
}

TEST_CASE("type mismatches are config errors") {
  const Config c = Config::parse(R"({"a": 1.5, "s": "x", "neg": -2, "frac": 2.5, "pts": [[0.5, 1]]})");
  CHECK(code_of([&] { (void)c.integer("a", 0); }) == ErrorCode::Config);
  CHECK(code_of([&] { (void)c.number("s", 0); }) == ErrorCode::Config);
  CHECK(code_of([&] { (void)c.count("neg", 0); }) == ErrorCode::Config);
  CHECK(code_of([&] { (void)c.count("frac", 0); }) == ErrorCode::Config);
  CHECK(code_of([&] { (void)c.points("pts", {}); }) == ErrorCode::Config);
  CHECK(code_of([&] { (void)c.boolean("s", false); }) == ErrorCode::Config);
  CHECK(code_of([] { (void)Config::parse("[1, 2]"); }) == ErrorCode::Config);
  CHECK(code_of([] { (void)Config::parse("{oops"); }) == ErrorCode::Config);
}

TEST_CASE("unknown keys are rejected") {
  const Config c = Config::parse(R"({"a": 1, "b": 2})");
  CHECK_NOTHROW(c.check_keys({"a", "b", "c"}));
  CHECK(code_of([&] { c.check_keys({"a"}); }) == ErrorCode::Config);
}

TEST_CASE("overrides copy on write") {
  const Config base = Config::parse(R"({"a": 1})");
  Config c = base;
  c.set_literal("a", "2.5");
  c.set_literal("mode", "conditioned");
  c.set_literal("xs", "[1, 2]");
  c.set_count("n", 10);
  CHECK(base.number("a", 0) == 1.0);
  CHECK(c.number("a", 0) == 2.5);
  CHECK(c.text("mode", "") == "conditioned");
  CHECK(c.numbers("xs", {}).size() == 2);
  CHECK(c.count("n", 0) == 10);
}

TEST_CASE("missing file is an IO error") {
  CHECK(code_of([] { (void)Config::load("/nonexistent/config.json"); }) == ErrorCode::Io);
}

}  // TEST_SUITE
