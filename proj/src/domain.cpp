#include "tandem/domain.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace tandem {

bool operator==(const Domain& a, const Domain& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case DomainKind::Boolean:
      return true;
    case DomainKind::IntRange:
      return a.lo == b.lo && a.hi == b.hi;
    case DomainKind::Enum:
    case DomainKind::SetOf:
      return a.enum_id == b.enum_id;
    case DomainKind::Map:
      return a.enum_id == b.enum_id && *a.value == *b.value;
  }
  return false;
}

std::size_t slot_width(const std::vector<EnumDecl>& enums, const Domain& d) {
  return d.kind == DomainKind::Map ? enums[d.enum_id].elements.size() : 1;
}

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    return std::numeric_limits<std::size_t>::max();
  }
  return a * b;
}

std::vector<std::int64_t> scalar_values(const std::vector<EnumDecl>& enums, const Domain& d) {
  std::vector<std::int64_t> out;
  switch (d.kind) {
    case DomainKind::Boolean:
      out = {0, 1};
      break;
    case DomainKind::IntRange:
      for (auto v = d.lo; v <= d.hi; ++v) out.push_back(v);
      break;
    case DomainKind::Enum:
      for (std::size_t i = 0; i < enums[d.enum_id].elements.size(); ++i) {
        out.push_back(static_cast<std::int64_t>(i));
      }
      break;
    case DomainKind::SetOf: {
      const auto n = enums[d.enum_id].elements.size();
      const std::uint64_t count = std::uint64_t{1} << n;
      for (std::uint64_t mask = 0; mask < count; ++mask) out.push_back(static_cast<std::int64_t>(mask));
      std::sort(out.begin(), out.end(), [](std::int64_t a, std::int64_t b) {
        return compare_sets(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)) < 0;
      });
      break;
    }
    case DomainKind::Map:
      break;
  }
  return out;
}

int compare_scalar(const Domain& d, std::int64_t a, std::int64_t b) {
  if (d.kind == DomainKind::SetOf) {
    return compare_sets(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  }
  return a < b ? -1 : (a > b ? 1 : 0);
}

bool scalar_in_domain(const std::vector<EnumDecl>& enums, const Domain& d, std::int64_t v) {
  switch (d.kind) {
    case DomainKind::Boolean:
      return v == 0 || v == 1;
    case DomainKind::IntRange:
      return v >= d.lo && v <= d.hi;
    case DomainKind::Enum:
      return v >= 0 && static_cast<std::size_t>(v) < enums[d.enum_id].elements.size();
    case DomainKind::SetOf: {
      const auto n = enums[d.enum_id].elements.size();
      return (static_cast<std::uint64_t>(v) >> n) == 0;
    }
    case DomainKind::Map:
      return false;
  }
  return false;
}

std::string format_scalar(const std::vector<EnumDecl>& enums, const Domain& d, std::int64_t v) {
  switch (d.kind) {
    case DomainKind::Boolean:
      return v ? "TRUE" : "FALSE";
    case DomainKind::IntRange:
      return std::to_string(v);
    case DomainKind::Enum:
      return enums[d.enum_id].elements[static_cast<std::size_t>(v)];
    case DomainKind::SetOf: {
      std::string out = "{";
      const auto& elems = enums[d.enum_id].elements;
      bool first = true;
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if ((static_cast<std::uint64_t>(v) >> i) & 1U) {
          if (!first) out += ", ";
          out += elems[i];
          first = false;
        }
      }
      return out + "}";
    }
    case DomainKind::Map:
      break;
  }
  return "?";
}

}  // namespace

int compare_sets(std::uint64_t a, std::uint64_t b) {
  if (a == b) return 0;
  const auto diff = a ^ b;
  const auto lowest = static_cast<unsigned>(std::countr_zero(diff));
  const auto above = lowest + 1 >= 64 ? 0 : (~std::uint64_t{0} << (lowest + 1));
  // The set holding the lowest differing element is smaller unless the other
  // set has nothing beyond it (then the other is a proper prefix).
  if ((a >> lowest) & 1U) return (b & above) != 0 ? -1 : 1;
  return (a & above) != 0 ? 1 : -1;
}

std::size_t domain_size(const std::vector<EnumDecl>& enums, const Domain& d) {
  switch (d.kind) {
    case DomainKind::Boolean:
      return 2;
    case DomainKind::IntRange:
      return static_cast<std::size_t>(d.hi - d.lo + 1);
    case DomainKind::Enum:
      return enums[d.enum_id].elements.size();
    case DomainKind::SetOf: {
      const auto n = enums[d.enum_id].elements.size();
      return n >= 64 ? std::numeric_limits<std::size_t>::max() : std::size_t{1} << n;
    }
    case DomainKind::Map: {
      std::size_t total = 1;
      const auto per_key = domain_size(enums, *d.value);
      for (std::size_t i = 0; i < enums[d.enum_id].elements.size(); ++i) {
        total = saturating_mul(total, per_key);
      }
      return total;
    }
  }
  return 0;
}

std::vector<Value> domain_values(const std::vector<EnumDecl>& enums, const Domain& d) {
  std::vector<Value> out;
  if (d.kind != DomainKind::Map) {
    for (auto v : scalar_values(enums, d)) out.push_back(Value::scalar(v));
    return out;
  }
  const auto keys = enums[d.enum_id].elements.size();
  const auto per_key = scalar_values(enums, *d.value);
  std::vector<std::size_t> digits(keys, 0);
  while (true) {
    Value v;
    v.entries.reserve(keys);
    for (auto idx : digits) v.entries.push_back(per_key[idx]);
    out.push_back(std::move(v));
    // Odometer with the last key varying fastest gives lexicographic order.
    std::size_t pos = keys;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < per_key.size()) break;
      digits[pos] = 0;
      if (pos == 0) return out;
    }
    if (keys == 0) return out;
  }
}

bool in_domain(const std::vector<EnumDecl>& enums, const Domain& d, const Value& v) {
  if (d.kind != DomainKind::Map) return v.entries.empty() && scalar_in_domain(enums, d, v.bits);
  if (v.entries.size() != enums[d.enum_id].elements.size()) return false;
  return std::all_of(v.entries.begin(), v.entries.end(),
                     [&](std::int64_t e) { return scalar_in_domain(enums, *d.value, e); });
}

int compare_values(const Domain& d, const Value& a, const Value& b) {
  if (d.kind != DomainKind::Map) return compare_scalar(d, a.bits, b.bits);
  for (std::size_t i = 0; i < a.entries.size() && i < b.entries.size(); ++i) {
    if (int c = compare_scalar(*d.value, a.entries[i], b.entries[i]); c != 0) return c;
  }
  return 0;
}

std::string format_domain(const std::vector<EnumDecl>& enums, const Domain& d) {
  switch (d.kind) {
    case DomainKind::Boolean:
      return "BOOL";
    case DomainKind::IntRange:
      return std::to_string(d.lo) + ".." + std::to_string(d.hi);
    case DomainKind::Enum:
      return enums[d.enum_id].name;
    case DomainKind::SetOf:
      return "SET " + enums[d.enum_id].name;
    case DomainKind::Map:
      return "MAP " + enums[d.enum_id].name + " TO " + format_domain(enums, *d.value);
  }
  return "?";
}

std::string format_value(const std::vector<EnumDecl>& enums, const Domain& d, const Value& v) {
  if (d.kind != DomainKind::Map) return format_scalar(enums, d, v.bits);
  std::string out = "[";
  const auto& keys = enums[d.enum_id].elements;
  for (std::size_t i = 0; i < keys.size() && i < v.entries.size(); ++i) {
    if (i) out += ", ";
    out += keys[i] + " |-> " + format_scalar(enums, *d.value, v.entries[i]);
  }
  return out + "]";
}

}  // namespace tandem
