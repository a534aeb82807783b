#include <doctest.h>

#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "entperc/report.hpp"
#include "entperc/version.hpp"

using namespace entperc;

namespace {

Table sample_table() {
  Table t;
  t.columns = {"name", "value", "count", "ok"};
  t.add_row({std::string("a,b"), 0.1, std::int64_t{3}, true});
  t.add_row({std::string("say \"hi\""), std::numeric_limits<double>::infinity(), std::int64_t{-1}, false});
  return t;
}

RunMetadata sample_meta() { return {"demo", 12648430, {{"L", "24"}, {"alpha1", "0.1,0.2"}}}; }

}  // namespace

TEST_CASE("doubles print as the shortest round-tripping decimal") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("rows must match the header") {
  Table t;
  t.columns = {"a", "b"};
  CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);
}

TEST_CASE("CSV carries version, command, seed and parameters") {
  std::ostringstream out;
  write_csv(out, sample_meta(), sample_table());
  const std::string expected = std::string("# entperc ") + kVersion +
                               "\n"
                               "# command: demo\n"
                               "# seed: 12648430\n"
                               "# L: 24\n"
                               "# alpha1: 0.1,0.2\n"
                               "name,value,count,ok\n"
                               "\"a,b\",0.1,3,true\n"
                               "\"say \"\"hi\"\"\",inf,-1,false\n";
  CHECK(out.str() == expected);
}

TEST_CASE("JSON mirrors the CSV") {
  std::ostringstream out;
  write_json(out, sample_meta(), sample_table());
  const auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["meta"]["version"] == kVersion);
  CHECK(doc["meta"]["command"] == "demo");
  CHECK(doc["meta"]["seed"] == 12648430);
  CHECK(doc["meta"]["params"]["L"] == "24");
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["name"] == "a,b");
  CHECK(doc["rows"][0]["value"] == 0.1);
  CHECK(doc["rows"][0]["ok"] == true);
  CHECK(doc["rows"][1]["value"] == "inf");
  CHECK_FALSE(doc["meta"].contains("timestamp"));
}

TEST_CASE("identical inputs give identical bytes") {
  std::ostringstream a, b;
  write_json(a, sample_meta(), sample_table());
  write_json(b, sample_meta(), sample_table());
  CHECK(a.str() == b.str());
}
