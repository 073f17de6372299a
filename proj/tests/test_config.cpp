#include <string>

#include "doctest.h"
#include "progrd/config.hpp"

using namespace progrd;

namespace {

std::string error_of(const std::string& text) {
  try {
    ConfigFile c = ConfigFile::parse(text);
    c.finish();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("typed values") {
  ConfigFile c = ConfigFile::parse(
      "seed = 7  # root\n"
      "[grid]\n"
      "r_l = [8, 16.5]\n"
      "r_s = [8, 32]\n"
      "name = \"a # b\"\n"
      "on = true\n"
      "tags = [\"x\", \"y\"]\n");
  CHECK(c.get_uint("", "seed", 0) == 7);
  CHECK(c.get_doubles("grid", "r_l", {}) == std::vector<double>{8, 16.5});
  CHECK(c.get_ints("grid", "r_s", {}) == std::vector<long>{8, 32});
  CHECK(c.get_string("grid", "name", "") == "a # b");
  CHECK(c.get_bool("grid", "on", false));
  CHECK(c.get_strings("grid", "tags", {}) == std::vector<std::string>{"x", "y"});
  CHECK(c.get_double("grid", "missing", 2.5) == 2.5);
  CHECK_NOTHROW(c.finish());
  CHECK(c.to_json()["grid"]["r_s"][1] == 32);
  CHECK(c.to_json()["seed"] == 7);
}

TEST_CASE("strictness") {
  // every problem is reported at once
  std::string e = error_of("[grammar]\np_terminl = 0.5\nmax_depth = 4\n");
  CHECK(e.find("p_terminl") != std::string::npos);
  CHECK(e.find("max_depth") != std::string::npos);

  e = error_of("a = 1\na = 2\nb = [1, oops]\nc\n[bad section\n");
  CHECK(e.find("line 2") != std::string::npos);
  CHECK(e.find("line 3") != std::string::npos);
  CHECK(e.find("line 4") != std::string::npos);
  CHECK(e.find("line 5") != std::string::npos);

  ConfigFile c = ConfigFile::parse("x = \"text\"\ny = 1.5\n");
  c.get_int("", "x", 0);
  c.get_int("", "y", 0);
  try {
    c.finish();
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(std::string(err.what()).find("x: expected an integer") != std::string::npos);
    CHECK(std::string(err.what()).find("y: expected an integer") != std::string::npos);
  }
  CHECK_THROWS_AS(ConfigFile::load("/nonexistent/config.toml"), ConfigError);
}

TEST_CASE("overrides") {
  ConfigFile c = ConfigFile::parse("[grammar]\nmax_depth = 3\n");
  c.set("grammar", "max_depth", "5");
  CHECK(c.get_int("grammar", "max_depth", 0) == 5);
  CHECK_THROWS_AS(c.set("grammar", "max depth", "5"), ConfigError);
  CHECK_THROWS_AS(c.set("grammar", "x", "[1,"), ConfigError);
}

TEST_CASE("grammar parameters") {
  ConfigFile c = ConfigFile::parse(
      "[grammar]\nprimitives = [\"up\", \"rep\"]\np_terminal = 0.6\nmax_depth = 3\n"
      "intermediates = [\"n\", \"c\"]\n");
  GrammarParams p = grammar_params_from(c);
  CHECK_NOTHROW(c.finish());
  CHECK(p.primitives.size() == 2);
  CHECK(p.p_terminal == 0.6);
  CHECK(p.max_depth == 3);
  CHECK(p.intermediates.size() == 2);
  CHECK(p.intermediates[1] == Type(BaseType::Count));

  ConfigFile defaults = ConfigFile::parse("");
  GrammarParams d = grammar_params_from(defaults);
  CHECK(d.intermediates == GrammarParams{}.intermediates);

  ConfigFile bad = ConfigFile::parse("[grammar]\np_terminal = 1.5\nprimitives = [\"fly\"]\n");
  grammar_params_from(bad);
  try {
    bad.finish();
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(std::string(err.what()).find("p_terminal") != std::string::npos);
    CHECK(std::string(err.what()).find("fly") != std::string::npos);
  }
}
