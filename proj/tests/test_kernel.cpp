#include <doctest.h>

#include <algorithm>

#include "support/helpers.hpp"
#include "support/oracles.hpp"
#include "support/random_model.hpp"
#include "tandem/bundled_models.hpp"
#include "tandem/kernel.hpp"
#include "tandem/parser.hpp"
#include "tandem/random.hpp"

using namespace tandem;
using namespace tandem::testing;

namespace {

std::vector<std::string> names(const Model& m, const std::vector<Transition>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(format_transition(m, t));
  return out;
}

}  // namespace

TEST_CASE("counter semantics") {
  const Model m = parse_model(kCounter);
  const State s0 = init_state(m);
  CHECK(get(m, s0, "x") == 0);
  CHECK(names(m, enabled_bindings(m, s0)) == std::vector<std::string>{"inc"});
  const State s2 = with(m, s0, {{"x", 2}});
  CHECK(names(m, enabled_bindings(m, s2)) == std::vector<std::string>{"inc", "dec"});
  CHECK(get(m, apply(m, s0, step(m, "inc")), "x") == 1);
  CHECK(get(m, apply(m, with(m, s0, {{"x", 1}}), step(m, "dec")), "x") == 0);
  CHECK(violated_invariants(m, s2).empty());
  CHECK_THROWS_AS(apply(m, s0, step(m, "dec")), GuardViolation);
}

TEST_CASE("init violation names the invariant") {
  std::string source = kCounter;
  source.replace(source.find("bounded: x <= 3"), 15, "positive: x >= 1");
  const Model m = parse_model(source);
  try {
    init_state(m);
    FAIL("expected InitViolation");
  } catch (const InitViolation& e) {
    CHECK(e.invariant() == "positive");
  }
}

TEST_CASE("extra invariant is reported by name") {
  std::string source = kCounter;
  source.replace(source.find("bounded: x <= 3"), 15, "bounded: x <= 3; no-two: x /= 2");
  const Model m = parse_model(source);
  CHECK(violated_invariants(m, with(m, init_state(m), {{"x", 2}})) == std::vector<std::string>{"no-two"});
}

TEST_CASE("integer overflow is a runtime error naming the update") {
  const Model m = parse_model(R"(MACHINE M VAR x : 0..1 INIT x := 0 OP up THEN x := x + 1 END END)");
  State s = apply(m, init_state(m), step(m, "up"));
  try {
    apply(m, s, step(m, "up"));
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    const std::string what = e.what();
    CHECK(what.find("up") != std::string::npos);
    CHECK(what.find("x") != std::string::npos);
    CHECK(what.find("0..1") != std::string::npos);
  }
}

TEST_CASE("broker-lossy initial state") {
  const Model m = load_bundled_model("broker-lossy");
  const State s = init_state(m);
  CHECK(get(m, s, "network") == Json::array());
  CHECK(get(m, s, "status") == Json{{"L1", "Idle"}, {"L2", "Idle"}, {"I1", "Idle"}});
  CHECK(get(m, s, "user") == "Browsing");
  CHECK(names(m, enabled_bindings(m, s)) == std::vector<std::string>{"RequestQuote"});
}

TEST_CASE("broker-lossy: every in-flight message can be delivered or dropped") {
  const Model m = load_bundled_model("broker-lossy");
  const State s = with(m, init_state(m), {{"user", "Requested"}, {"phase", "Quoting"}, {"network", {"RFQ_L1", "Commit_L2"}}});
  const auto enabled = names(m, enabled_bindings(m, s));
  for (const char* t : {"Deliver(msg = RFQ_L1)", "Deliver(msg = Commit_L2)", "Drop(msg = RFQ_L1)", "Drop(msg = Commit_L2)"}) {
    CHECK_MESSAGE(std::find(enabled.begin(), enabled.end(), t) != enabled.end(), t);
  }
}

TEST_CASE("broker-fixed: priority messages go first and are never dropped") {
  const Model m = load_bundled_model("broker-fixed");
  const State s = with(m, init_state(m), {{"user", "Requested"}, {"phase", "Quoting"}, {"network", {"RFQ_L1", "Commit_L2"}}});
  const auto enabled = names(m, enabled_bindings(m, s));
  auto has = [&](const char* t) { return std::find(enabled.begin(), enabled.end(), t) != enabled.end(); };
  CHECK(has("Deliver(msg = Commit_L2)"));
  CHECK(has("Drop(msg = RFQ_L1)"));
  CHECK_FALSE(has("Deliver(msg = RFQ_L1)"));
  CHECK_FALSE(has("Drop(msg = Commit_L2)"));
}

TEST_CASE("dropping the only commit message leaves the lender uncommitted") {
  const Model m = load_bundled_model("broker-lossy");
  const State s = with(m, init_state(m),
                       {{"user", "Accepted"},
                        {"phase", "Committing"},
                        {"network", {"Commit_L1"}},
                        {"status", {{"L1", "Offered"}, {"L2", "Idle"}, {"I1", "Offered"}}},
                        {"chosen", {"L1", "I1"}},
                        {"commitRequested", {"L1"}}});
  CHECK(violated_invariants(m, s).empty());
  const State after = apply(m, s, step(m, "Drop", {{"msg", "Commit_L1"}}));
  CHECK(get(m, after, "network") == Json::array());
  CHECK(get(m, after, "status") == get(m, s, "status"));
  CHECK(violated_invariants(m, after) == std::vector<std::string>{"commit-agreement"});
}

TEST_CASE("enabled_bindings equals brute-force filtering of the whole vocabulary") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    CAPTURE(seed);
    const Model m = random_model(seed);
    Rng rng(seed);
    State s = init_state(m);
    const auto vocab = vocabulary(m);
    for (int i = 0; i < 30; ++i) {
      std::vector<Transition> expected;
      for (const auto& t : vocab) {
        if (guard_holds(m, s, t)) expected.push_back(t);
      }
      const auto enabled = enabled_bindings(m, s);
      CHECK(enabled == expected);
      if (enabled.empty()) break;
      s = apply(m, s, enabled[rng.below(enabled.size())]);
    }
  }
}

TEST_CASE("frame condition and domain closure under random steps") {
  std::size_t steps_taken = 0;
  for (std::uint64_t seed = 0; steps_taken < 20'000; ++seed) {
    CAPTURE(seed);
    const Model m = random_model(seed);
    Rng rng(seed + 1);
    State s = init_state(m);
    for (int i = 0; i < 100; ++i) {
      const auto enabled = enabled_bindings(m, s);
      if (enabled.empty()) break;
      const auto& t = enabled[rng.below(enabled.size())];
      const State next = apply(m, s, t);
      ++steps_taken;
      const auto& op = m.operations[t.op];
      for (std::size_t v = 0; v < m.variables.size(); ++v) {
        const bool updated = std::any_of(op.updates.begin(), op.updates.end(),
                                         [&](const Assignment& a) { return a.var_index == v; });
        if (!updated) CHECK(read_variable(m, next, v) == read_variable(m, s, v));
        CHECK(in_domain(m.enums, m.variables[v].domain, read_variable(m, next, v)));
      }
      // Determinism: the same step from the same state gives the same state.
      CHECK(apply(m, s, t) == next);
      s = next;
    }
  }
  CHECK(steps_taken >= 10'000);
}

TEST_CASE("state encoding is injective over the cross-product") {
  const Model m = parse_model(R"(MACHINE M TYPE E = {a, b, c} VAR s : SET E; m : MAP E TO BOOL; x : -1..1
INIT s := {}; m := [e : E |-> FALSE]; x := 0 END)");
  const auto all_s = domain_values(m.enums, m.variables[0].domain);
  const auto all_m = domain_values(m.enums, m.variables[1].domain);
  const auto all_x = domain_values(m.enums, m.variables[2].domain);
  std::vector<State> states;
  for (const auto& a : all_s) {
    for (const auto& b : all_m) {
      for (const auto& c : all_x) {
        State st{std::vector<std::int64_t>(m.width, 0)};
        write_variable(m, st, 0, a);
        write_variable(m, st, 1, b);
        write_variable(m, st, 2, c);
        states.push_back(st);
      }
    }
  }
  CHECK(states.size() == 8 * 8 * 3);
  std::sort(states.begin(), states.end(), [](const State& p, const State& q) { return p.slots < q.slots; });
  CHECK(std::adjacent_find(states.begin(), states.end()) == states.end());
}

TEST_CASE("canonical value order") {
  const Model m = parse_model(R"(MACHINE M TYPE E = {a, b, c} VAR s : SET E INIT s := {} END)");
  const auto values = domain_values(m.enums, m.variables[0].domain);
  std::vector<std::string> shown;
  for (const auto& v : values) shown.push_back(format_value(m.enums, m.variables[0].domain, v));
  // Sets ordered by their sorted element lists.
  CHECK(shown == std::vector<std::string>{"{}", "{a}", "{a, b}", "{a, b, c}", "{a, c}", "{b}", "{b, c}", "{c}"});
}
