#include "tandem/animator.hpp"

#include <random>
#include <sstream>

#include "tandem/explorer.hpp"
#include "tandem/kernel.hpp"
#include "tandem/parser.hpp"

namespace tandem {

namespace {

Json step_json(const Model& m, const Transition& t) {
  const auto& op = m.operations[t.op];
  return {{"op", op.name}, {"params", encode_binding(m, op, t.binding)}, {"label", format_transition(m, t)}};
}

// `// @layout party status` becomes {"kind": "party", "variable": "status"}.
Json layout_hints(const Model& m) {
  Json out = Json::array();
  for (const auto& note : m.annotations) {
    std::istringstream words(note);
    std::string tag, kind, variable;
    words >> tag >> kind >> variable;
    if (tag != "@layout" || kind.empty()) continue;
    Json hint{{"kind", kind}};
    if (!variable.empty()) hint["variable"] = variable;
    out.push_back(std::move(hint));
  }
  return out;
}

#ifndef NDEBUG
void assert_integrity(const Session& s) {
  std::vector<Transition> path;
  for (const auto& h : s.history) path.push_back(h.transition);
  if (!(replay(s.model, path).back() == s.current)) throw std::logic_error("session " + s.id + " lost integrity");
}
#else
void assert_integrity(const Session&) {}
#endif

}  // namespace

SessionManager::~SessionManager() { shutdown(); }

std::string SessionManager::fresh_id() {
  static thread_local std::mt19937_64 gen{std::random_device{}()};
  std::ostringstream os;
  os << std::hex << gen() << '-' << ++counter_;
  return os.str();
}

std::pair<std::string, Json> SessionManager::create(std::string_view source) { return create(parse_model(source)); }

std::pair<std::string, Json> SessionManager::create(Model model) {
  auto slot = std::make_shared<Slot>();
  // The initial state is shown even if it breaks an invariant.
  slot->session.current = initial_assignment(model);
  slot->session.model = std::move(model);
  std::lock_guard lock(mu_);
  slot->session.id = fresh_id();
  sessions_[slot->session.id] = slot;
  return {slot->session.id, render(slot->session)};
}

std::shared_ptr<SessionManager::Slot> SessionManager::find(const std::string& id) {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw SessionNotFound(id);
  return it->second;
}

Json SessionManager::render(const Session& s) const {
  const Model& m = s.model;
  Json v;
  v["session"] = s.id;
  v["version"] = s.version;
  v["model"] = m.name;
  v["state"] = encode_state(m, s.current);
  const auto enabled = enabled_bindings(m, s.current);
  v["enabled"] = Json::array();
  for (std::size_t i = 0; i < enabled.size() && i < enabled_cap_; ++i) v["enabled"].push_back(step_json(m, enabled[i]));
  v["truncated"] = enabled.size() > enabled_cap_;
  v["enabled_total"] = enabled.size();
  v["violated"] = violated_invariants(m, s.current);
  v["deadlocked"] = enabled.empty();
  v["history"] = Json::array();
  for (const auto& h : s.history) v["history"].push_back(step_json(m, h.transition));
  v["layout"] = layout_hints(m);
  return v;
}

Json SessionManager::view(const std::string& id) {
  auto slot = find(id);
  std::lock_guard lock(slot->mu);
  return render(slot->session);
}

Json SessionManager::step(const std::string& id, const std::string& op_name, const Json& params) {
  auto slot = find(id);
  std::lock_guard lock(slot->mu);
  Session& s = slot->session;
  const auto op = s.model.find_operation(op_name);
  if (!op) throw StepRejected("unknown operation " + op_name, render(s));
  Transition t{*op, {}};
  try {
    t.binding = decode_binding(s.model, s.model.operations[*op], params);
  } catch (const std::invalid_argument& e) {
    throw StepRejected(e.what(), render(s));
  }
  if (!guard_holds(s.model, s.current, t)) {
    throw StepRejected(format_transition(s.model, t) + " is not enabled", render(s));
  }
  State next;
  try {
    next = apply(s.model, s.current, t);
  } catch (const EvalError& e) {
    throw StepRejected(e.what(), render(s));
  }
  s.history.push_back({t, next});
  s.current = std::move(next);
  ++s.version;
  assert_integrity(s);
  slot->changed.notify_all();
  return render(s);
}

Json SessionManager::backtrack(const std::string& id, long n) {
  auto slot = find(id);
  std::lock_guard lock(slot->mu);
  Session& s = slot->session;
  if (n < 1) throw StepRejected("backtrack count must be positive", render(s));
  if (static_cast<std::size_t>(n) > s.history.size()) {
    throw StepRejected("cannot backtrack " + std::to_string(n) + " steps, history has " +
                           std::to_string(s.history.size()),
                       render(s));
  }
  s.history.resize(s.history.size() - static_cast<std::size_t>(n));
  s.current = s.history.empty() ? initial_assignment(s.model) : s.history.back().post;
  ++s.version;
  assert_integrity(s);
  slot->changed.notify_all();
  return render(s);
}

Trace SessionManager::export_trace(const std::string& id) {
  auto slot = find(id);
  std::lock_guard lock(slot->mu);
  const Session& s = slot->session;
  Trace trace;
  trace.header = TraceHeader{s.model.name, "animator", std::nullopt, false};
  for (std::size_t i = 0; i < s.history.size(); ++i) {
    trace.events.push_back(make_event(s.model, i, s.history[i].transition, s.history[i].post));
  }
  return trace;
}

bool SessionManager::remove(const std::string& id) {
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return false;
    slot = it->second;
    sessions_.erase(it);
  }
  std::lock_guard lock(slot->mu);
  ++slot->session.version;
  slot->changed.notify_all();
  return true;
}

std::vector<std::string> SessionManager::ids() {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

std::optional<std::pair<std::uint64_t, Json>> SessionManager::wait_for_change(const std::string& id,
                                                                              std::uint64_t seen,
                                                                              std::chrono::milliseconds timeout) {
  auto slot = find(id);
  std::unique_lock lock(slot->mu);
  const bool changed = slot->changed.wait_for(lock, timeout, [&] {
    if (slot->session.version != seen) return true;
    std::lock_guard outer(mu_);
    return stopping_;
  });
  if (!changed || slot->session.version == seen) return std::nullopt;
  return std::make_pair(slot->session.version, render(slot->session));
}

void SessionManager::shutdown() {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
    for (const auto& [_, slot] : sessions_) slots.push_back(slot);
  }
  for (const auto& slot : slots) {
    std::lock_guard lock(slot->mu);
    slot->changed.notify_all();
  }
}

}  // namespace tandem
