#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tandem/model.hpp"
#include "tandem/trace.hpp"
#include "tandem/value_io.hpp"

namespace tandem {

class SessionNotFound : public std::runtime_error {
 public:
  explicit SessionNotFound(const std::string& id) : std::runtime_error("no session " + id) {}
};

/// A step or backtrack that cannot be performed. Carries the session's
/// current (unchanged) view so callers can refresh.
class StepRejected : public std::runtime_error {
 public:
  StepRejected(const std::string& what, Json view) : std::runtime_error(what), view_(std::move(view)) {}
  const Json& view() const noexcept { return view_; }

 private:
  Json view_;
};

struct HistoryEntry {
  Transition transition;
  State post;
};

/// One animation: the model, the steps taken from its initial state, and a
/// version counter bumped on every change.
struct Session {
  std::string id;
  Model model;
  std::vector<HistoryEntry> history;
  State current;
  std::uint64_t version = 0;
};

/// In-memory sessions. Each session is guarded by its own mutex, so
/// requests against different sessions run in parallel.
class SessionManager {
 public:
  explicit SessionManager(std::size_t enabled_cap = 500) : enabled_cap_(enabled_cap) {}
  ~SessionManager();

  /// Parses the model and starts at its initial state. Throws ModelError.
  std::pair<std::string, Json> create(std::string_view source);
  std::pair<std::string, Json> create(Model model);

  Json view(const std::string& id);

  /// Throws StepRejected if the operation is unknown, the params do not
  /// decode, or the binding is not enabled in the current state.
  Json step(const std::string& id, const std::string& op, const Json& params);
  Json backtrack(const std::string& id, long n);

  Trace export_trace(const std::string& id);
  bool remove(const std::string& id);
  std::vector<std::string> ids();

  /// Blocks until the session's version differs from `seen` or the timeout
  /// passes; returns the new view and version, or nothing on timeout.
  std::optional<std::pair<std::uint64_t, Json>> wait_for_change(const std::string& id, std::uint64_t seen,
                                                                std::chrono::milliseconds timeout);

  /// Wakes every waiter; later waits return immediately.
  void shutdown();

 private:
  struct Slot {
    std::mutex mu;
    std::condition_variable changed;
    Session session;
  };

  std::shared_ptr<Slot> find(const std::string& id);
  Json render(const Session& s) const;
  std::string fresh_id();

  std::size_t enabled_cap_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::uint64_t counter_ = 0;
  bool stopping_ = false;
};

}  // namespace tandem
