#include "oracles.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "tandem/kernel.hpp"
#include "tandem/value_io.hpp"

namespace tandem::testing {

namespace {

using Key = std::vector<std::pair<std::size_t, std::vector<std::int64_t>>>;

std::vector<std::int64_t> flatten(const Binding& b) {
  std::vector<std::int64_t> out;
  for (const auto& v : b) {
    out.push_back(v.bits);
    out.insert(out.end(), v.entries.begin(), v.entries.end());
  }
  return out;
}

// Odometer over per-variable value lists.
std::vector<State> cross_product(const Model& m) {
  std::vector<std::vector<Value>> values;
  for (const auto& v : m.variables) values.push_back(domain_values(m.enums, v.domain));
  std::vector<State> out;
  std::vector<std::size_t> digit(values.size(), 0);
  while (true) {
    State s{std::vector<std::int64_t>(m.width, 0)};
    for (std::size_t i = 0; i < values.size(); ++i) write_variable(m, s, i, values[i][digit[i]]);
    out.push_back(std::move(s));
    std::size_t i = 0;
    for (; i < digit.size(); ++i) {
      if (++digit[i] < values[i].size()) break;
      digit[i] = 0;
    }
    if (i == digit.size()) break;
  }
  return out;
}

}  // namespace

std::vector<Transition> vocabulary(const Model& m) {
  std::vector<Transition> out;
  for (std::size_t op = 0; op < m.operations.size(); ++op) {
    std::vector<Binding> partial{{}};
    for (const auto& p : m.operations[op].params) {
      std::vector<Binding> next;
      for (const auto& b : partial) {
        for (const auto& v : domain_values(m.enums, p.domain)) {
          auto c = b;
          c.push_back(v);
          next.push_back(std::move(c));
        }
      }
      partial = std::move(next);
    }
    for (auto& b : partial) out.push_back({op, std::move(b)});
  }
  return out;
}

ProductOracle product_oracle(const Model& m) {
  const auto states = cross_product(m);
  std::map<std::vector<std::int64_t>, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i].slots] = i;
  const auto vocab = vocabulary(m);

  // Successor lists and violation flags for every state of the product.
  std::vector<std::vector<std::size_t>> succ(states.size());
  std::vector<std::vector<std::string>> bad(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    bad[i] = violated_invariants(m, states[i]);
    for (const auto& t : vocab) {
      if (!guard_holds(m, states[i], t)) continue;
      try {
        succ[i].push_back(index.at(apply(m, states[i], t).slots));
      } catch (const EvalError&) {
        // Only matters if reachable; explore would throw there.
      }
    }
  }

  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(states.size(), kInf);
  dist[index.at(initial_assignment(m).slots)] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    auto next = dist;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (dist[i] == kInf || !bad[i].empty()) continue;
      for (const auto j : succ[i]) {
        if (dist[i] + 1 < next[j]) {
          next[j] = dist[i] + 1;
          changed = true;
        }
      }
    }
    dist = std::move(next);
  }

  ProductOracle out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (dist[i] == kInf) continue;
    ++out.reachable;
    if (succ[i].empty() && bad[i].empty()) ++out.deadlocks;
    for (const auto& name : bad[i]) {
      auto [it, fresh] = out.shortest.emplace(name, dist[i]);
      if (!fresh) it->second = std::min(it->second, dist[i]);
    }
  }
  return out;
}

FixpointOracle fixpoint_oracle(const Model& m, std::size_t max_rounds) {
  const auto vocab = vocabulary(m);
  std::set<std::vector<std::int64_t>> reached{initial_assignment(m).slots};
  FixpointOracle out;
  auto note_violations = [&](const std::set<std::vector<std::int64_t>>& states, std::size_t round) {
    for (const auto& slots : states) {
      for (const auto& name : violated_invariants(m, State{slots})) out.shortest.emplace(name, round);
    }
  };
  note_violations(reached, 0);
  // After round r, `reached` holds every state within distance r.
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    auto next = reached;
    for (const auto& slots : reached) {
      const State s{slots};
      if (!violated_invariants(m, s).empty()) continue;
      for (const auto& t : vocab) {
        if (guard_holds(m, s, t)) next.insert(apply(m, s, t).slots);
      }
    }
    if (next.size() == reached.size()) {
      out.reachable = reached.size();
      out.states = std::move(reached);
      return out;
    }
    note_violations(next, round);
    reached = std::move(next);
  }
  return out;
}

PathOracle::PathOracle(const Model& m, std::size_t max_length) : m_(m) {
  const auto vocab = vocabulary(m);
  const State init = initial_assignment(m);
  // Breadth-first over path length; every path of length k extends every
  // path of length k-1 by every binding whose guard holds at its end.
  std::vector<Path> layer{Path{}};
  for (std::size_t k = 0; k < max_length; ++k) {
    std::vector<Path> next;
    for (const auto& p : layer) {
      const State& end = p.states.empty() ? init : p.states.back();
      for (const auto& t : vocab) {
        if (!guard_holds(m, end, t)) continue;
        Path q = p;
        q.labels.push_back(t);
        q.states.push_back(apply(m, end, t));
        next.push_back(std::move(q));
      }
    }
    for (auto& p : next) paths_.push_back(p);
    layer = std::move(next);
  }
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    Key key;
    for (const auto& t : paths_[i].labels) key.emplace_back(t.op, flatten(t.binding));
    by_labels_[key].push_back(i);
  }
}

bool PathOracle::matches(const Path& p, const Trace& t, std::size_t k) const {
  for (std::size_t i = 0; i <= k; ++i) {
    const auto& e = t.events[i];
    if (!e.observed) continue;
    const Json actual = encode_state(m_, p.states[i]);
    for (const auto& [name, v] : e.observed->items()) {
      if (!actual.contains(name) || actual[name] != v) return false;
    }
  }
  return true;
}

std::pair<Verdict, std::optional<std::uint64_t>> PathOracle::judge(const Trace& t) const {
  Key key;
  for (std::size_t k = 0; k < t.events.size(); ++k) {
    const auto& e = t.events[k];
    const auto op = m_.find_operation(e.op);
    if (!op) return {Verdict::Diverges, e.seq};
    Binding b;
    try {
      b = decode_binding(m_, m_.operations[*op], e.params);
    } catch (const std::invalid_argument&) {
      return {Verdict::Diverges, e.seq};
    }
    key.emplace_back(*op, flatten(b));
    const auto it = by_labels_.find(key);
    std::vector<std::size_t> matching;
    if (it != by_labels_.end()) {
      for (const auto i : it->second) {
        if (matches(paths_[i], t, k)) matching.push_back(i);
      }
    }
    if (matching.empty()) return {Verdict::Diverges, e.seq};
    const bool all_bad = std::all_of(matching.begin(), matching.end(), [&](std::size_t i) {
      return !violated_invariants(m_, paths_[i].states[k]).empty();
    });
    if (all_bad) return {Verdict::InvariantViolation, e.seq};
  }
  return {Verdict::Conforms, std::nullopt};
}

}  // namespace tandem::testing
