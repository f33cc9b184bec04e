#include "rowsub/trace.hpp"

#include "doctest.h"
#include "rowsub/coalesce.hpp"
#include "rowsub/infer.hpp"
#include "rowsub/syntax.hpp"
#include "test_util.hpp"

using namespace rowsub;

namespace {

std::vector<TraceEvent> trace_of(const std::string& source, TraceLog& log) {
  Inferencer inf(&log);
  SimpleType t = inf.infer_program(parse(source));
  log.result_text(print_type(coalesce(t, inf.supply())));
  return log.events();
}

std::vector<std::string> constrain_lines(const std::string& formatted) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos < formatted.size()) {
    size_t end = formatted.find('\n', pos);
    std::string line = formatted.substr(pos, end - pos);
    pos = end == std::string::npos ? formatted.size() : end + 1;
    size_t start = line.find_first_not_of("| ");
    if (start == std::string::npos) continue;
    line = line.substr(start);
    if (line.rfind("constrain ", 0) == 0 || line.rfind("expand ", 0) == 0) out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("trace");

TEST_CASE("formatting an empty log is empty") { CHECK(format_trace({}).empty()); }

TEST_CASE("a single entry at depth zero has no prefix") {
  std::vector<TraceEvent> events{{TraceEventKind::TypeTermEnter, 0, "42", "", "", ""}};
  CHECK(format_trace(events) == "typeTerm 42\n");
}

TEST_CASE("depth turns into bars") {
  std::vector<TraceEvent> events{
      {TraceEventKind::TypeTermEnter, 0, "f x", "", "", ""},
      {TraceEventKind::ConstrainEnter, 1, "'a", "int", "", ""},
      {TraceEventKind::Expand, 2, "'r0", "x", "'f0", "'r1"},
      {TraceEventKind::Result, 0, "int", "", "", ""},
  };
  CHECK(format_trace(events) ==
        "typeTerm f x\n"
        "| constrain 'a <= int\n"
        "| | expand 'r0 +x ~> {x: 'f0 ; 'r1}\n"
        "= int\n");
}

TEST_CASE("the derivation of the motivating program hits the expected constraints") {
  TraceLog log;
  std::string formatted = format_trace(trace_of("((fun r -> r with {y = 1}) {x = 1}).x", log));
  std::string normalized = testing::normalize_var_names(formatted);
  auto lines = constrain_lines(normalized);

  // in order: the application constraint, the expansion of the lambda's row
  // at x, the field constraints, the expansion at y during projection, and
  // the final flow into the result variable
  const char* expected[] = {
      "constrain 'a <= {y: 'f0 ; 'r0}",
      "constrain 'a -> {y: int ; 'r0} <= {x: int} -> 'b",
      "constrain {x: int} <= 'a",
      "constrain {x: int} <= {y: 'f0 ; 'r0}",
      "expand 'r0 +x ~> {x: 'f1 ; 'r1}",
      "constrain int <= 'f1",
      "constrain abs <= 'f0",
      "constrain {y: int, x: 'f1 ; 'r1} <= 'b",
      "constrain 'b <= {x: 'c ; 'r2}",
      "constrain {y: int, x: 'f1 ; 'r1} <= {x: 'c ; 'r2}",
      "expand 'r2 +y ~> {y: 'f2 ; 'r3}",
      "constrain int <= 'f2",
      "constrain 'f1 <= 'c",
      "constrain int <= 'c",
  };
  REQUIRE(lines.size() == sizeof(expected) / sizeof(expected[0]));
  for (size_t i = 0; i < lines.size(); ++i) CHECK(lines[i] == expected[i]);
}

TEST_CASE("the final result event matches the inferred type") {
  TraceLog log;
  auto events = trace_of("((fun r -> r with {y = 1}) {x = 1}).x", log);
  REQUIRE(!events.empty());
  const TraceEvent& last = events.back();
  CHECK(last.kind == TraceEventKind::Result);
  CHECK(last.depth == 0);
  CHECK(last.a == "int");
}

TEST_CASE("tracing is deterministic") {
  TraceLog a, b;
  CHECK(format_trace(trace_of("fun r -> (r with {x = 1}).x", a)) ==
        format_trace(trace_of("fun r -> (r with {x = 1}).x", b)));
}

TEST_SUITE_END();
