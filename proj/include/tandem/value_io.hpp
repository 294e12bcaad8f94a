#pragma once

#include <json.hpp>

#include "tandem/model.hpp"

namespace tandem {

using Json = nlohmann::ordered_json;

/// Wire encoding shared by traces, reports and the animator API:
/// booleans and integers as JSON scalars, enum elements as strings, sets as
/// arrays in declaration order, maps as objects in key order.
Json encode_value(const Model& m, const Domain& d, const Value& v);

/// Inverse of encode_value. Throws std::invalid_argument on a type or
/// domain mismatch.
Value decode_value(const Model& m, const Domain& d, const Json& j);

Json encode_state(const Model& m, const State& s);
Json encode_binding(const Model& m, const Operation& op, const Binding& b);

/// Decodes a params object; every parameter must be present, no extras.
Binding decode_binding(const Model& m, const Operation& op, const Json& j);

}  // namespace tandem
