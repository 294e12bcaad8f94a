#include <doctest.h>

#include <algorithm>
#include <map>

#include "support/helpers.hpp"
#include "support/oracles.hpp"
#include "support/random_model.hpp"
#include "tandem/bundled_models.hpp"
#include "tandem/explorer.hpp"
#include "tandem/kernel.hpp"
#include "tandem/parser.hpp"
#include "tandem/report.hpp"

using namespace tandem;
using namespace tandem::testing;

namespace {

// Pinned from fixpoint_oracle; see "broker-fixed agrees with the fixpoint oracle".
constexpr std::size_t kFixedStates = 16392;
constexpr std::size_t kLossyStates = 19530;
constexpr std::size_t kLossyShortest = 13;

ExploreConfig all_violations() {
  ExploreConfig c;
  c.stop_at_first_violation = false;
  c.max_states = std::nullopt;
  return c;
}

std::map<std::string, std::size_t> shortest_by_invariant(const ExplorationReport& r) {
  std::map<std::string, std::size_t> out;
  for (const auto& v : r.violations) {
    auto [it, fresh] = out.emplace(v.invariant, v.path.size());
    if (!fresh) it->second = std::min(it->second, v.path.size());
  }
  return out;
}

// A model whose "bad" state is reachable only via a longer route first found by DFS.
constexpr const char* kDiamond = R"(MACHINE Diamond
VAR x : 0..5
INIT x := 0
INVARIANT below-four: x < 4
OP slow WHEN x < 5 THEN x := x + 1 END
OP jump WHEN x = 0 THEN x := 2 END
END
)";

}  // namespace

TEST_CASE("counter: four states, no violations, no deadlocks") {
  const auto r = explore(parse_model(kCounter));
  CHECK(r.states_visited == 4);
  CHECK(r.transitions_fired == 6);
  CHECK(r.frontier_exhausted);
  CHECK(r.violations.empty());
  CHECK(r.deadlocks.empty());
}

TEST_CASE("BFS finds a shortest counterexample") {
  const Model m = parse_model(kDiamond);
  const auto r = explore(m);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].invariant == "below-four");
  CHECK(r.violations[0].path.size() == 3);  // jump, slow, slow
  CHECK_FALSE(r.frontier_exhausted);
  const auto states = replay(m, r.violations[0].path);
  CHECK(states.back() == r.violations[0].state);
  CHECK(get(m, states.back(), "x") == 4);
}

TEST_CASE("violating states are not expanded") {
  const auto r = explore(parse_model(kDiamond), all_violations());
  // x = 5 is only reachable through the violating x = 4.
  CHECK(r.states_visited == 5);
  CHECK(r.violations.size() == 1);
  CHECK(r.frontier_exhausted);
}

TEST_CASE("replay reports the first disabled step") {
  const Model m = parse_model(kCounter);
  CHECK(replay(m, steps(m, {"inc", "inc", "dec"})).size() == 4);
  try {
    replay(m, steps(m, {"inc", "dec", "dec"}));
    FAIL("expected ReplayError");
  } catch (const ReplayError& e) {
    CHECK(e.step() == 2);
  }
}

TEST_CASE("broker-lossy: minimal counterexample loses a Commit") {
  const Model m = load_bundled_model("broker-lossy");
  const auto r = explore(m);
  REQUIRE(r.violations.size() == 1);
  const auto& v = r.violations[0];
  CHECK(v.invariant == "commit-agreement");
  CHECK(v.path.size() == kLossyShortest);
  const auto& drop = std::find_if(v.path.begin(), v.path.end(), [&](const Transition& t) {
    return m.operations[t.op].name == "Drop" &&
           format_transition(m, t).find("Commit_") != std::string::npos;
  });
  CHECK(drop != v.path.end());
  const auto states = replay(m, v.path);
  CHECK(states.back() == v.state);
  CHECK(violated_invariants(m, states.back()) == std::vector<std::string>{"commit-agreement"});
  // Every earlier state on the path is fine.
  for (std::size_t i = 0; i + 1 < states.size(); ++i) CHECK(violated_invariants(m, states[i]).empty());
}

TEST_CASE("broker-fixed agrees with the fixpoint oracle") {
  const Model m = load_bundled_model("broker-fixed");
  const auto r = explore(m);
  CHECK(r.frontier_exhausted);
  CHECK(r.violations.empty());
  CHECK(r.deadlocks.empty());
  CHECK(r.states_visited == kFixedStates);
  const auto oracle = fixpoint_oracle(m);
  CHECK(oracle.reachable == kFixedStates);
  CHECK(oracle.shortest.empty());
}

TEST_CASE("broker-lossy agrees with the fixpoint oracle") {
  const Model m = load_bundled_model("broker-lossy");
  const auto r = explore(m, all_violations());
  CHECK(r.states_visited == kLossyStates);
  const auto oracle = fixpoint_oracle(m);
  CHECK(oracle.reachable == kLossyStates);
  CHECK(oracle.shortest == shortest_by_invariant(r));
  CHECK(oracle.shortest.at("commit-agreement") == kLossyShortest);
}

TEST_CASE("broker-fixed reachable states are a subset of broker-lossy's") {
  const auto fixed = fixpoint_oracle(load_bundled_model("broker-fixed"));
  const auto lossy = fixpoint_oracle(load_bundled_model("broker-lossy"));
  CHECK(std::includes(lossy.states.begin(), lossy.states.end(), fixed.states.begin(), fixed.states.end()));
  CHECK(lossy.states.size() > fixed.states.size());
}

TEST_CASE("product oracle agrees on counter, travel-agent and random models") {
  std::vector<Model> models{parse_model(kCounter), load_bundled_model("travel-agent"), parse_model(kDiamond)};
  std::size_t with_violation = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) models.push_back(random_model(seed));
  for (std::size_t i = 0; i < models.size(); ++i) {
    CAPTURE(i);
    const Model& m = models[i];
    REQUIRE(product_states(m) <= 10'000);
    const auto oracle = product_oracle(m);
    const auto full = explore(m, all_violations());
    CHECK(full.states_visited == oracle.reachable);
    CHECK(shortest_by_invariant(full) == oracle.shortest);
    CHECK(full.deadlocks.size() == oracle.deadlocks);
    for (const auto& v : full.violations) CHECK(replay(m, v.path).back() == v.state);

    // Default mode: verdict and first counterexample length.
    const auto first = explore(m);
    CHECK(first.violations.empty() == oracle.shortest.empty());
    if (!oracle.shortest.empty()) {
      ++with_violation;
      std::size_t best = SIZE_MAX;
      for (const auto& [_, len] : oracle.shortest) best = std::min(best, len);
      // One violating state, reported once per invariant it breaks.
      REQUIRE_FALSE(first.violations.empty());
      for (const auto& v : first.violations) {
        CHECK(v.state == first.violations[0].state);
        CHECK(v.path.size() == best);
      }
    }
  }
  // The generator must exercise both verdicts.
  CHECK(with_violation > 10);
  CHECK(with_violation < models.size() - 10);
}

TEST_CASE("depth-first and random strategies are deterministic and complete") {
  const Model m = load_bundled_model("travel-agent");
  for (const auto strategy : {Strategy::DepthFirst, Strategy::Random}) {
    ExploreConfig c = all_violations();
    c.strategy = strategy;
    c.seed = 42;
    const auto a = explore(m, c);
    const auto b = explore(m, c);
    CHECK(report_to_json(m, a, false) == report_to_json(m, b, false));
    CHECK(a.states_visited == 64);
    CHECK(a.frontier_exhausted);
  }
  ExploreConfig c;
  c.strategy = Strategy::Random;
  CHECK_THROWS_AS(explore(m, c), std::invalid_argument);
}

TEST_CASE("depth-first counterexamples replay even when not shortest") {
  const Model m = load_bundled_model("broker-lossy");
  ExploreConfig c;
  c.strategy = Strategy::DepthFirst;
  const auto r = explore(m, c);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].path.size() >= kLossyShortest);
  CHECK(replay(m, r.violations[0].path).back() == r.violations[0].state);
}

TEST_CASE("limits leave the frontier unexhausted") {
  const Model m = load_bundled_model("broker-fixed");
  ExploreConfig c;
  c.max_states = 100;
  auto r = explore(m, c);
  CHECK(r.states_visited == 100);
  CHECK_FALSE(r.frontier_exhausted);

  c.max_states = std::nullopt;
  c.max_depth = 3;
  r = explore(m, c);
  CHECK_FALSE(r.frontier_exhausted);
  CHECK(r.states_visited < kFixedStates);

  c.max_depth = 0;
  CHECK_THROWS_AS(explore(m, c), std::invalid_argument);

  // A bound that is never reached is not a truncation.
  c.max_depth = 10'000;
  CHECK(explore(m, c).frontier_exhausted);
}

TEST_CASE("deadlocks are reported with a path") {
  const Model m = parse_model(R"(MACHINE M VAR x : 0..2 INIT x := 0 OP up WHEN x < 2 THEN x := x + 1 END END)");
  auto r = explore(m);
  REQUIRE(r.deadlocks.size() == 1);
  CHECK(r.deadlocks[0].path.size() == 2);
  CHECK(get(m, r.deadlocks[0].state, "x") == 2);
  ExploreConfig c;
  c.report_deadlocks = false;
  CHECK(explore(m, c).deadlocks.empty());
}

TEST_CASE("runtime errors during exploration name state and transition") {
  const Model m = parse_model(R"(MACHINE M VAR x : 0..1 INIT x := 0 OP up THEN x := x + 1 END END)");
  try {
    explore(m);
    FAIL("expected ExplorationError");
  } catch (const ExplorationError& e) {
    CHECK(e.transition().has_value());
    CHECK(get(m, e.state(), "x") == 1);
  }
}

TEST_CASE("random walks are seeded, replayable and flag deadlocks") {
  const Model m = load_bundled_model("broker-fixed");
  const auto a = random_walk(m, 9, 200);
  const auto b = random_walk(m, 9, 200);
  CHECK(write_trace(a) == write_trace(b));
  CHECK(write_trace(a) != write_trace(random_walk(m, 10, 200)));
  REQUIRE(a.header.has_value());
  CHECK(a.header->source == "random_walk");
  CHECK(a.header->seed == 9);
  CHECK(a.events.size() == 200);

  const Model stuck = parse_model(R"(MACHINE M VAR x : BOOL INIT x := TRUE OP o WHEN not x THEN skip END END)");
  const auto none = random_walk(stuck, 3, 10);
  CHECK(none.events.empty());
  CHECK(none.header->deadlocked);

  const auto ten = random_walk(parse_model(kCounter), 5, 10);
  CHECK(ten.events.size() == 10);
  CHECK_FALSE(ten.header->deadlocked);

  const Model d = parse_model(R"(MACHINE M VAR x : 0..2 INIT x := 0 OP up WHEN x < 2 THEN x := x + 1 END END)");
  const auto w = random_walk(d, 1, 50);
  CHECK(w.events.size() == 2);
  CHECK(w.header->deadlocked);
}
