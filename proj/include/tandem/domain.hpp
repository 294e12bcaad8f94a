#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace tandem {

using EnumId = std::size_t;
inline constexpr EnumId kNoEnum = static_cast<EnumId>(-1);

/// Set-valued domains are stored as bitmasks, so an enum used under SET
/// may have at most this many elements.
inline constexpr std::size_t kMaxSetElements = 62;

struct EnumDecl {
  std::string name;
  std::vector<std::string> elements;
  int line = 0;  // source position, not part of equality
  int column = 0;

  friend bool operator==(const EnumDecl& a, const EnumDecl& b) {
    return a.name == b.name && a.elements == b.elements;
  }
};

enum class DomainKind : std::uint8_t { Boolean, IntRange, Enum, SetOf, Map };

/// A finite value domain. Maps are one level deep: `value` is never a map.
struct Domain {
  DomainKind kind = DomainKind::Boolean;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  EnumId enum_id = kNoEnum;  // element enum for Enum/SetOf, key enum for Map
  std::shared_ptr<const Domain> value;

  static Domain boolean() { return {}; }
  static Domain int_range(std::int64_t lo, std::int64_t hi) {
    return {DomainKind::IntRange, lo, hi, kNoEnum, nullptr};
  }
  static Domain enumeration(EnumId id) { return {DomainKind::Enum, 0, 0, id, nullptr}; }
  static Domain set_of(EnumId id) { return {DomainKind::SetOf, 0, 0, id, nullptr}; }
  static Domain map(EnumId key, Domain value) {
    return {DomainKind::Map, 0, 0, key, std::make_shared<const Domain>(std::move(value))};
  }

  friend bool operator==(const Domain& a, const Domain& b);
};

/// Runtime value. Scalars live in `bits` (bool 0/1, integer, enum element
/// index, set bitmask); maps keep one scalar per key, in key order.
struct Value {
  std::int64_t bits = 0;
  std::vector<std::int64_t> entries;

  static Value scalar(std::int64_t b) { return {b, {}}; }

  friend bool operator==(const Value&, const Value&) = default;
};

/// Number of state slots a value of this domain occupies.
std::size_t slot_width(const std::vector<EnumDecl>& enums, const Domain& d);

/// Number of values in the domain (saturates at SIZE_MAX).
std::size_t domain_size(const std::vector<EnumDecl>& enums, const Domain& d);

/// All values of a domain in canonical order: false < true, integers
/// ascending, enum elements by declaration, sets by sorted element list,
/// maps lexicographically by key.
std::vector<Value> domain_values(const std::vector<EnumDecl>& enums, const Domain& d);

bool in_domain(const std::vector<EnumDecl>& enums, const Domain& d, const Value& v);

/// Three-way comparison in the canonical order of `d`.
int compare_values(const Domain& d, const Value& a, const Value& b);

/// Canonical comparison of two set bitmasks (sorted element lists compared
/// lexicographically).
int compare_sets(std::uint64_t a, std::uint64_t b);

std::string format_domain(const std::vector<EnumDecl>& enums, const Domain& d);

/// Human-readable rendering in model syntax, e.g. `{L1, L2}` or `[L1 |-> Idle, L2 |-> Offered]`.
std::string format_value(const std::vector<EnumDecl>& enums, const Domain& d, const Value& v);

}  // namespace tandem
