#include "tandem/model.hpp"

#include <algorithm>

namespace tandem {

InitViolation::InitViolation(std::string invariant)
    : std::runtime_error("initial state violates invariant " + invariant), invariant_(std::move(invariant)) {}

std::optional<std::size_t> Model::find_variable(std::string_view n) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == n) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Model::find_operation(std::string_view n) const {
  for (std::size_t i = 0; i < operations.size(); ++i) {
    if (operations[i].name == n) return i;
  }
  return std::nullopt;
}

std::optional<EnumId> Model::find_enum(std::string_view n) const {
  for (EnumId i = 0; i < enums.size(); ++i) {
    if (enums[i].name == n) return i;
  }
  return std::nullopt;
}

namespace {

template <typename T, typename Eq>
bool all_equal(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), eq);
}

bool same_assignment(const Assignment& a, const Assignment& b) {
  return a.variable == b.variable && structurally_equal(a.value, b.value);
}

}  // namespace

bool structurally_equal(const Model& a, const Model& b) {
  return a.name == b.name && a.annotations == b.annotations && a.enums == b.enums &&
         all_equal(a.definitions, b.definitions,
                   [](const Definition& x, const Definition& y) {
                     return x.name == y.name && structurally_equal(x.body, y.body);
                   }) &&
         all_equal(a.variables, b.variables,
                   [](const Variable& x, const Variable& y) { return x.name == y.name && x.domain == y.domain; }) &&
         all_equal(a.init, b.init, same_assignment) &&
         all_equal(a.invariants, b.invariants,
                   [](const Invariant& x, const Invariant& y) {
                     return x.name == y.name && structurally_equal(x.predicate, y.predicate);
                   }) &&
         all_equal(a.operations, b.operations, [](const Operation& x, const Operation& y) {
           return x.name == y.name &&
                  all_equal(x.params, y.params,
                            [](const Parameter& p, const Parameter& q) {
                              return p.name == q.name && p.domain == q.domain;
                            }) &&
                  structurally_equal(x.guard, y.guard) && all_equal(x.updates, y.updates, same_assignment);
         });
}

std::size_t StateHash::operator()(const State& s) const noexcept {
  // FNV-1a over the slot words.
  std::uint64_t h = 1469598103934665603ULL;
  for (auto v : s.slots) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

Value read_variable(const Model& m, const State& s, std::size_t var) {
  const auto off = m.offsets[var];
  const auto& d = m.variables[var].domain;
  if (d.kind != DomainKind::Map) return Value::scalar(s.slots[off]);
  Value v;
  const auto n = slot_width(m.enums, d);
  v.entries.assign(s.slots.begin() + static_cast<std::ptrdiff_t>(off),
                   s.slots.begin() + static_cast<std::ptrdiff_t>(off + n));
  return v;
}

void write_variable(const Model& m, State& s, std::size_t var, const Value& v) {
  const auto off = m.offsets[var];
  if (m.variables[var].domain.kind != DomainKind::Map) {
    s.slots[off] = v.bits;
    return;
  }
  std::copy(v.entries.begin(), v.entries.end(), s.slots.begin() + static_cast<std::ptrdiff_t>(off));
}

}  // namespace tandem
