#include "tandem/explorer.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "tandem/kernel.hpp"
#include "tandem/random.hpp"

namespace tandem {

ExplorationError::ExplorationError(const std::string& what, State state, std::optional<Transition> transition)
    : std::runtime_error(what), state_(std::move(state)), transition_(std::move(transition)) {}

ReplayError::ReplayError(std::size_t step, const std::string& what)
    : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

namespace {

constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

struct Node {
  std::size_t parent = kNoParent;
  Transition via;
  std::size_t depth = 0;
};

// Visited set keyed by index into the state store, so each state is kept once.
class StateStore {
 public:
  StateStore() : index_(1024, Hash{&states_}, Eq{&states_}) {}

  // Returns (index, inserted).
  std::pair<std::size_t, bool> insert(State s) {
    states_.push_back(std::move(s));
    const auto candidate = states_.size() - 1;
    auto [it, inserted] = index_.insert(candidate);
    if (!inserted) states_.pop_back();
    return {*it, inserted};
  }

  bool contains(const State& s) {
    states_.push_back(s);
    const bool found = index_.count(states_.size() - 1) != 0;
    states_.pop_back();
    return found;
  }

  const State& operator[](std::size_t i) const { return states_[i]; }
  std::size_t size() const { return index_.size(); }

 private:
  struct Hash {
    const std::vector<State>* states;
    std::size_t operator()(std::size_t i) const noexcept { return StateHash{}((*states)[i]); }
  };
  struct Eq {
    const std::vector<State>* states;
    bool operator()(std::size_t a, std::size_t b) const noexcept { return (*states)[a] == (*states)[b]; }
  };

  std::vector<State> states_;
  std::unordered_set<std::size_t, Hash, Eq> index_;
};

class Frontier {
 public:
  Frontier(Strategy s, std::optional<std::uint64_t> seed) : strategy_(s), rng_(seed.value_or(0)) {}

  void push(std::size_t i) { items_.push_back(i); }
  bool empty() const { return items_.empty(); }

  std::size_t pop() {
    std::size_t out = 0;
    switch (strategy_) {
      case Strategy::BreadthFirst:
        out = items_.front();
        items_.pop_front();
        break;
      case Strategy::DepthFirst:
        out = items_.back();
        items_.pop_back();
        break;
      case Strategy::Random: {
        const auto k = rng_.below(items_.size());
        out = items_[k];
        items_[k] = items_.back();
        items_.pop_back();
        break;
      }
    }
    return out;
  }

 private:
  Strategy strategy_;
  Rng rng_;
  std::deque<std::size_t> items_;
};

Path path_to(const std::vector<Node>& nodes, std::size_t i) {
  Path path;
  while (nodes[i].parent != kNoParent) {
    path.push_back(nodes[i].via);
    i = nodes[i].parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

ExplorationReport explore(const Model& m, const ExploreConfig& config) {
  if (config.strategy == Strategy::Random && !config.seed) {
    throw std::invalid_argument("random exploration requires a seed");
  }
  if (config.max_states && *config.max_states == 0) throw std::invalid_argument("max_states must be positive");
  if (config.max_depth && *config.max_depth == 0) throw std::invalid_argument("max_depth must be positive");

  const auto started = std::chrono::steady_clock::now();
  ExplorationReport report;
  StateStore store;
  std::vector<Node> nodes;
  Frontier frontier(config.strategy, config.seed);
  bool stopped = false;
  bool limited = false;

  // Records a freshly discovered state; returns false when exploration must stop.
  auto discover = [&](std::size_t idx) {
    std::vector<std::string> bad;
    try {
      bad = violated_invariants(m, store[idx]);
    } catch (const EvalError& e) {
      throw ExplorationError(e.what(), store[idx], std::nullopt);
    }
    if (bad.empty()) {
      frontier.push(idx);
      return true;
    }
    for (auto& name : bad) report.violations.push_back({std::move(name), store[idx], path_to(nodes, idx)});
    return !config.stop_at_first_violation;
  };

  State init;
  try {
    init = initial_assignment(m);
  } catch (const EvalError& e) {
    throw ExplorationError(e.what(), State{}, std::nullopt);
  }
  store.insert(init);
  nodes.push_back({});
  if (!discover(0)) stopped = true;

  while (!stopped && !frontier.empty()) {
    const auto current = frontier.pop();
    const auto depth = nodes[current].depth;
    if (config.max_depth && depth >= *config.max_depth) {
      limited = true;
      continue;
    }
    const State& s = store[current];
    const auto enabled = enabled_bindings(m, s);
    if (enabled.empty() && config.report_deadlocks) {
      report.deadlocks.push_back({s, path_to(nodes, current)});
    }
    for (const auto& t : enabled) {
      State next;
      try {
        next = apply(m, store[current], t);
      } catch (const EvalError& e) {
        throw ExplorationError(std::string(e.what()) + " in state " + format_state(m, store[current]) +
                                   " firing " + format_transition(m, t),
                               store[current], t);
      }
      ++report.transitions_fired;
      if (config.max_states && store.size() >= *config.max_states && !store.contains(next)) {
        limited = true;
        stopped = true;
        break;
      }
      const auto [idx, inserted] = store.insert(std::move(next));
      if (!inserted) continue;
      nodes.push_back({current, t, depth + 1});
      if (!discover(idx)) {
        stopped = true;
        break;
      }
    }
  }

  report.states_visited = store.size();
  report.frontier_exhausted = !stopped && !limited && frontier.empty();
  report.wall_time =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  return report;
}

std::vector<State> replay(const Model& m, std::span<const Transition> path) {
  std::vector<State> states{initial_assignment(m)};
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i].op >= m.operations.size()) throw ReplayError(i, "unknown operation");
    if (path[i].binding.size() != m.operations[path[i].op].params.size()) {
      throw ReplayError(i, "wrong number of parameters for " + m.operations[path[i].op].name);
    }
    if (!guard_holds(m, states.back(), path[i])) {
      throw ReplayError(i, "guard of " + format_transition(m, path[i]) + " is false");
    }
    states.push_back(apply(m, states.back(), path[i]));
  }
  return states;
}

Trace random_walk(const Model& m, std::uint64_t seed, std::size_t max_steps) {
  Rng rng(seed);
  Trace trace;
  trace.header = TraceHeader{m.name, "random_walk", seed, false};
  State s = initial_assignment(m);
  for (std::size_t step = 0; step < max_steps; ++step) {
    const auto enabled = enabled_bindings(m, s);
    if (enabled.empty()) {
      trace.header->deadlocked = true;
      break;
    }
    const auto& t = enabled[rng.below(enabled.size())];
    s = apply(m, s, t);
    trace.events.push_back(make_event(m, step, t, s));
  }
  return trace;
}

}  // namespace tandem
