#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tandem/random.hpp"
#include "tandem/trace.hpp"
#include "tandem/value_io.hpp"

namespace tandem::broker {

enum class Fault { None, CommitWrongLender, SkipReject, IgnoreDeadline };

std::string_view to_string(Fault f);
std::optional<Fault> parse_fault(std::string_view s);

/// Model operation at which a trace from a run with this fault is expected
/// to stop conforming.
std::string_view fault_event_kind(Fault f);

struct SimConfig {
  int lenders = 2;
  int insurers = 1;
  Probability drop_probability{1, 10};
  bool commit_priority = false;  // Commit/Reject go first and are never lost
  int offer_ttl = 2;
  std::uint64_t seed = 0;
  int max_ticks = 40;
  Fault fault = Fault::None;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ConfigError on out-of-range settings.
void validate(const SimConfig& c);

/// Reads a JSON config object; absent keys keep their defaults from `base`.
/// Unknown keys are errors.
SimConfig config_from_json(const Json& j, SimConfig base = {});
Json config_to_json(const SimConfig& c);

struct SimResult {
  Trace trace;
  Json snapshot;  // final state of every actor
  bool quiescent = false;
};

/// Runs one transaction to quiescence or max_ticks. Identical configs give
/// identical traces.
SimResult run_sim(const SimConfig& config);

/// Runs seeds seed .. seed+runs-1 and writes run-NNNN.trace files into `dir`
/// (created if missing). Returns the written paths in run order.
std::vector<std::filesystem::path> testbot(const SimConfig& config, int runs, const std::filesystem::path& dir);

}  // namespace tandem::broker
