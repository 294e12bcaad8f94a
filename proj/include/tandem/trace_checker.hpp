#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tandem/model.hpp"
#include "tandem/trace.hpp"

namespace tandem {

enum class Verdict { Conforms, Diverges, InvariantViolation };

std::string_view to_string(Verdict v);

struct ConformanceReport {
  Verdict verdict = Verdict::Conforms;
  std::optional<std::uint64_t> first_bad_seq;
  std::vector<std::size_t> frontier_sizes;  // candidates after each processed event
  std::string diagnosis;
  std::vector<std::string> violated;  // invariants failed by every candidate
  std::vector<std::string> warnings;
};

/// Replays the trace against the model from the initial state, keeping the
/// set of model states consistent with the events seen so far. Stops at the
/// first event that empties the set (diverges) or after which every
/// candidate breaks an invariant (invariant-violation).
ConformanceReport check_trace(const Model& m, const Trace& trace);

struct CorpusEntry {
  std::string file;
  std::optional<ConformanceReport> report;
  std::string error;  // set when the file could not be read or parsed
};

struct CorpusSummary {
  std::vector<CorpusEntry> entries;  // ordered by file name
  std::size_t conforms = 0;
  std::size_t diverges = 0;
  std::size_t violations = 0;
  std::size_t unreadable = 0;
  std::size_t events = 0;
  std::chrono::milliseconds wall_time{0};

  bool all_conform() const { return conforms == entries.size(); }
};

/// Checks every file; directories contribute their `*.trace` files.
/// Unreadable or malformed files are counted, not fatal.
CorpusSummary check_corpus(const Model& m, std::span<const std::filesystem::path> inputs);

}  // namespace tandem
