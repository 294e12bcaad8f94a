#include "tandem/value_io.hpp"

#include <stdexcept>

namespace tandem {

namespace {

Json encode_scalar(const Model& m, const Domain& d, std::int64_t bits) {
  switch (d.kind) {
    case DomainKind::Boolean:
      return Json(bits != 0);
    case DomainKind::IntRange:
      return Json(bits);
    case DomainKind::Enum:
      return Json(m.enums[d.enum_id].elements[static_cast<std::size_t>(bits)]);
    case DomainKind::SetOf: {
      Json arr = Json::array();
      const auto& elems = m.enums[d.enum_id].elements;
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if ((static_cast<std::uint64_t>(bits) >> i) & 1U) arr.push_back(elems[i]);
      }
      return arr;
    }
    case DomainKind::Map:
      break;
  }
  return nullptr;
}

std::size_t element_index(const Model& m, EnumId id, const Json& j) {
  if (!j.is_string()) throw std::invalid_argument("expected an element of " + m.enums[id].name + ", got " + j.dump());
  const auto& elems = m.enums[id].elements;
  const auto name = j.get<std::string>();
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (elems[i] == name) return i;
  }
  throw std::invalid_argument(name + " is not an element of " + m.enums[id].name);
}

std::int64_t decode_scalar(const Model& m, const Domain& d, const Json& j) {
  switch (d.kind) {
    case DomainKind::Boolean:
      if (!j.is_boolean()) throw std::invalid_argument("expected a boolean, got " + j.dump());
      return j.get<bool>() ? 1 : 0;
    case DomainKind::IntRange: {
      if (!j.is_number_integer()) throw std::invalid_argument("expected an integer, got " + j.dump());
      const auto v = j.get<std::int64_t>();
      if (v < d.lo || v > d.hi) throw std::invalid_argument(std::to_string(v) + " is outside " + format_domain(m.enums, d));
      return v;
    }
    case DomainKind::Enum:
      return static_cast<std::int64_t>(element_index(m, d.enum_id, j));
    case DomainKind::SetOf: {
      if (!j.is_array()) throw std::invalid_argument("expected a set (array), got " + j.dump());
      std::uint64_t bits = 0;
      for (const auto& x : j) {
        const auto bit = std::uint64_t{1} << element_index(m, d.enum_id, x);
        if (bits & bit) throw std::invalid_argument("duplicate set element " + x.dump());
        bits |= bit;
      }
      return static_cast<std::int64_t>(bits);
    }
    case DomainKind::Map:
      break;
  }
  throw std::invalid_argument("nested map value");
}

}  // namespace

Json encode_value(const Model& m, const Domain& d, const Value& v) {
  if (d.kind != DomainKind::Map) return encode_scalar(m, d, v.bits);
  Json obj = Json::object();
  const auto& keys = m.enums[d.enum_id].elements;
  for (std::size_t i = 0; i < keys.size(); ++i) obj[keys[i]] = encode_scalar(m, *d.value, v.entries.at(i));
  return obj;
}

Value decode_value(const Model& m, const Domain& d, const Json& j) {
  if (d.kind != DomainKind::Map) return Value::scalar(decode_scalar(m, d, j));
  if (!j.is_object()) throw std::invalid_argument("expected a map (object), got " + j.dump());
  const auto& keys = m.enums[d.enum_id].elements;
  Value v;
  v.entries.assign(keys.size(), 0);
  std::vector<bool> seen(keys.size(), false);
  for (const auto& [k, x] : j.items()) {
    const auto idx = element_index(m, d.enum_id, Json(k));
    v.entries[idx] = decode_scalar(m, *d.value, x);
    seen[idx] = true;
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!seen[i]) throw std::invalid_argument("map value is missing key " + keys[i]);
  }
  return v;
}

Json encode_state(const Model& m, const State& s) {
  Json obj = Json::object();
  for (std::size_t i = 0; i < m.variables.size(); ++i) {
    obj[m.variables[i].name] = encode_value(m, m.variables[i].domain, read_variable(m, s, i));
  }
  return obj;
}

Json encode_binding(const Model& m, const Operation& op, const Binding& b) {
  Json obj = Json::object();
  for (std::size_t i = 0; i < op.params.size(); ++i) {
    obj[op.params[i].name] = encode_value(m, op.params[i].domain, b.at(i));
  }
  return obj;
}

Binding decode_binding(const Model& m, const Operation& op, const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("params must be an object");
  for (const auto& [k, _] : j.items()) {
    bool known = false;
    for (const auto& p : op.params) known = known || p.name == k;
    if (!known) throw std::invalid_argument(op.name + " has no parameter " + k);
  }
  Binding b;
  for (const auto& p : op.params) {
    if (!j.contains(p.name)) throw std::invalid_argument("missing parameter " + p.name + " of " + op.name);
    try {
      b.push_back(decode_value(m, p.domain, j.at(p.name)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("parameter " + p.name + " of " + op.name + ": " + e.what());
    }
  }
  return b;
}

}  // namespace tandem
