#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tandem/model.hpp"
#include "tandem/value_io.hpp"

namespace tandem {

/// Malformed trace file; carries the 1-based line number.
class TraceFormatError : public std::runtime_error {
 public:
  TraceFormatError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct TraceHeader {
  std::optional<std::string> model;
  std::string source;
  std::optional<std::uint64_t> seed;
  bool deadlocked = false;
};

/// One recorded transition. `params` and `observed` stay in wire form until
/// a model is at hand to decode them.
struct TraceEvent {
  std::uint64_t seq = 0;
  std::string op;
  Json params = Json::object();
  std::optional<Json> observed;  // partial post-state: variable -> value
  std::optional<std::string> ts;
  std::size_t line = 0;
};

struct Trace {
  std::optional<TraceHeader> header;
  std::vector<TraceEvent> events;
};

/// Line-delimited format: an optional first line `{"header": {...}}`, then one
/// JSON object per event with fields seq, op, params, observed, ts. Unknown
/// fields, non-monotone seq and malformed lines are errors.
Trace parse_trace(std::string_view text);

std::string write_trace(const Trace& trace);
std::string write_event(const TraceEvent& e);
std::string write_header(const TraceHeader& h);

/// Event for a model transition, observing the full post-state.
TraceEvent make_event(const Model& m, std::uint64_t seq, const Transition& t, const State& post);

}  // namespace tandem
