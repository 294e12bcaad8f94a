#include <doctest.h>

#include "tandem/trace.hpp"

using namespace tandem;

namespace {

std::size_t error_line(const std::string& text, const std::string& needle) {
  try {
    parse_trace(text);
  } catch (const TraceFormatError& e) {
    CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    return e.line();
  }
  FAIL("expected TraceFormatError for " << text);
  return 0;
}

}  // namespace

TEST_CASE("minimal events parse with defaults") {
  const auto t = parse_trace(R"({"seq":1,"op":"inc"}
{"seq":5,"op":"dec","params":{},"observed":{"x":0},"ts":"2024-01-01T00:00:00Z"}
)");
  CHECK_FALSE(t.header.has_value());
  REQUIRE(t.events.size() == 2);
  CHECK(t.events[0].params == Json::object());
  CHECK_FALSE(t.events[0].observed.has_value());
  CHECK(t.events[1].seq == 5);
  CHECK(*t.events[1].observed == Json{{"x", 0}});
  CHECK(t.events[1].ts == "2024-01-01T00:00:00Z");
  CHECK(t.events[1].line == 2);
}

TEST_CASE("header line and blank lines") {
  const auto t = parse_trace(R"(
{"header":{"model":"Counter","source":"hand","seed":null,"deadlocked":false}}

{"seq":0,"op":"inc"}
)");
  REQUIRE(t.header.has_value());
  CHECK(t.header->model == "Counter");
  CHECK_FALSE(t.header->seed.has_value());
  CHECK(t.events.size() == 1);
  CHECK(t.events[0].line == 4);
}

TEST_CASE("format errors carry the line") {
  CHECK(error_line("{\"seq\":1,\"op\":\"a\"}\n{\"seq\":1,\"op\":\"b\"}\n", "non-monotone seq") == 2);
  CHECK(error_line("{\"seq\":2,\"op\":\"a\"}\n{\"seq\":1,\"op\":\"b\"}\n", "non-monotone seq") == 2);
  CHECK(error_line("{\"seq\":1,\"op\":\"a\",\"extra\":1}\n", "unknown field extra") == 1);
  CHECK(error_line("\n\n{\"seq\":1\n", "malformed") == 3);
  CHECK(error_line("{\"op\":\"a\"}\n", "missing field seq") == 1);
  CHECK(error_line("{\"seq\":1}\n", "missing field op") == 1);
  CHECK(error_line("{\"seq\":-1,\"op\":\"a\"}\n", "seq") == 1);
  CHECK(error_line("{\"seq\":1,\"op\":\"a\",\"params\":[]}\n", "params must be an object") == 1);
  CHECK(error_line("[1,2]\n", "expected a JSON object") == 1);
  CHECK(error_line("{\"seq\":1,\"op\":\"a\"}\n{\"header\":{\"source\":\"x\"}}\n", "first line") == 2);
  CHECK(error_line("{\"header\":{\"source\":\"x\",\"colour\":1}}\n", "unknown header field colour") == 1);
}

TEST_CASE("write then parse round-trips") {
  Trace t;
  t.header = TraceHeader{"Broker", "broker-sim", 17, false};
  TraceEvent a;
  a.seq = 0;
  a.op = "Deliver";
  a.params = Json{{"msg", "RFQ_L1"}};
  a.observed = Json{{"network", Json::array({"RFQ_L2"})}};
  a.ts = "t0";
  TraceEvent b;
  b.seq = 3;
  b.op = "Tick";
  t.events = {a, b};
  const std::string text = write_trace(t);
  const Trace back = parse_trace(text);
  CHECK(write_trace(back) == text);
  REQUIRE(back.header.has_value());
  CHECK(back.header->seed == 17);
  CHECK(back.events[0].params == a.params);
  CHECK(*back.events[0].observed == *a.observed);
  // One line per record, header first.
  CHECK(text.starts_with("{\"header\":"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
