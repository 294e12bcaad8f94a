#pragma once

#include <string>
#include <vector>

#include "tandem/model.hpp"
#include "tandem/value_io.hpp"

namespace tandem::testing {

inline constexpr const char* kCounter = R"(MACHINE Counter
VAR x : 0..3
INIT x := 0
INVARIANT bounded: x <= 3
OP inc WHEN x < 3 THEN x := x + 1 END
OP dec WHEN x > 0 THEN x := x - 1 END
END
)";

/// Transition by operation name and wire-form params.
inline Transition step(const Model& m, const std::string& op, const Json& params = Json::object()) {
  const auto i = m.find_operation(op).value();
  return {i, decode_binding(m, m.operations[i], params)};
}

inline std::vector<Transition> steps(const Model& m, std::initializer_list<const char*> ops) {
  std::vector<Transition> out;
  for (const auto* op : ops) out.push_back(step(m, op));
  return out;
}

/// A state built from a base state with some variables overwritten.
inline State with(const Model& m, State s, const Json& values) {
  for (const auto& [name, v] : values.items()) {
    const auto i = m.find_variable(name).value();
    write_variable(m, s, i, decode_value(m, m.variables[i].domain, v));
  }
  return s;
}

inline Json get(const Model& m, const State& s, const std::string& var) {
  const auto i = m.find_variable(var).value();
  return encode_value(m, m.variables[i].domain, read_variable(m, s, i));
}

}  // namespace tandem::testing
