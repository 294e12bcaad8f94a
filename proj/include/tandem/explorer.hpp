#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tandem/model.hpp"
#include "tandem/trace.hpp"

namespace tandem {

enum class Strategy { BreadthFirst, DepthFirst, Random };

struct ExploreConfig {
  std::optional<std::size_t> max_states = 1'000'000;  // nullopt: unlimited
  std::optional<std::size_t> max_depth;               // nullopt: unlimited
  Strategy strategy = Strategy::BreadthFirst;
  std::optional<std::uint64_t> seed;  // required by Strategy::Random
  bool stop_at_first_violation = true;
  bool report_deadlocks = true;
};

using Path = std::vector<Transition>;

struct Violation {
  std::string invariant;
  State state;
  Path path;  // from the initial state
};

struct Deadlock {
  State state;
  Path path;
};

struct ExplorationReport {
  std::size_t states_visited = 0;
  std::size_t transitions_fired = 0;
  bool frontier_exhausted = false;
  std::vector<Violation> violations;
  std::vector<Deadlock> deadlocks;
  std::chrono::milliseconds wall_time{0};
};

/// Evaluation failed while exploring; names the state and transition.
class ExplorationError : public std::runtime_error {
 public:
  ExplorationError(const std::string& what, State state, std::optional<Transition> transition);
  const State& state() const noexcept { return state_; }
  const std::optional<Transition>& transition() const noexcept { return transition_; }

 private:
  State state_;
  std::optional<Transition> transition_;
};

/// Explicit-state reachability from the initial state. States are
/// deduplicated by their canonical encoding; states that violate an
/// invariant are reported and not expanded. Hitting max_states or max_depth
/// leaves frontier_exhausted false. Throws std::invalid_argument for a
/// random strategy without a seed.
ExplorationReport explore(const Model& m, const ExploreConfig& config = {});

class ReplayError : public std::runtime_error {
 public:
  ReplayError(std::size_t step, const std::string& what);
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// States visited along `path`, starting with the initial state. Throws
/// ReplayError naming the first step whose guard is false.
std::vector<State> replay(const Model& m, std::span<const Transition> path);

/// Seeded uniform random walk over enabled bindings, recorded as a trace with
/// full post-state observations. Stops after max_steps or at a deadlock
/// (flagged in the header).
Trace random_walk(const Model& m, std::uint64_t seed, std::size_t max_steps);

}  // namespace tandem
