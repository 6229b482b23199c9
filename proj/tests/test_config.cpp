#include <doctest.h>

#include <string>

#include "config.hpp"
#include "error.hpp"

using namespace cellscape;

TEST_CASE("empty config reports the required keys") {
  try {
    RunConfig::parse("", "empty.cfg");
    FAIL("expected");
  } catch (const input_error& e) {
    CHECK(std::string(e.what()).find("missing required key") != std::string::npos);
    CHECK(std::string(e.what()).find("outdir") != std::string::npos);
  }
}

TEST_CASE("duplicate keys name the key and both lines") {
  const std::string text = "outdir = /tmp/a\nseed = 1\nseed = 2\n";
  try {
    RunConfig::parse(text, "dup.cfg");
    FAIL("expected");
  } catch (const input_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("seed") != std::string::npos);
    CHECK(msg.find("2") != std::string::npos);
    CHECK(msg.find("3") != std::string::npos);
  }
}

TEST_CASE("unknown keys are rejected with their line") {
  try {
    RunConfig::parse("outdir = x\nbogus_key = 1\n", "u.cfg");
    FAIL("expected");
  } catch (const input_error& e) {
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("types are validated at load") {
  CHECK_THROWS_AS(RunConfig::parse("outdir = x\ndays = soon\n", "t.cfg"), input_error);
  CHECK_THROWS_AS(RunConfig::parse("outdir = x\nradius_km = wide\n", "t.cfg"), input_error);
  CHECK_THROWS_AS(RunConfig::parse("outdir = x\nadaptive = maybe\n", "t.cfg"), input_error);
  CHECK_THROWS_AS(RunConfig::parse("outdir = x\nstart = 2011-13-01\n", "t.cfg"), input_error);
  CHECK_THROWS_AS(RunConfig::parse("outdir = x\nresolution = fortnight\n", "t.cfg"), input_error);
}

TEST_CASE("comments, spacing, and defaults") {
  const RunConfig cfg = RunConfig::parse(
      "# a comment\n"
      "outdir = /tmp/out   # trailing comment\n"
      "\n"
      "  days=10\n",
      "ok.cfg");
  CHECK(cfg.get_string("outdir") == "/tmp/out");
  CHECK(cfg.get_int("days") == 10);
  CHECK(cfg.get_double("radius_km") == 80.5);       // default
  CHECK(cfg.get_string("resolution") == "minute");  // default
  CHECK_FALSE(cfg.has("epicenter_lat"));            // optional, unset
  CHECK_THROWS_AS(cfg.get_double("epicenter_lat"), input_error);
  cfg.require_keys({"outdir"});
  CHECK_THROWS_AS(cfg.require_keys({"towers", "volumes"}), input_error);
}
