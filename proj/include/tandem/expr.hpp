#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tandem/domain.hpp"

namespace tandem {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

enum class TypeKind : std::uint8_t { Bool, Int, Enum, Set, Map };

/// Static type of an expression. Integers are unbounded at the type level;
/// ranges are enforced when a value is stored into a variable.
/// `elem == kNoEnum` on a Set marks the empty literal `{}`, compatible with
/// every set type.
struct Type {
  TypeKind kind = TypeKind::Bool;
  EnumId elem = kNoEnum;  // Enum/Set element enum, Map key enum
  TypeKind value_kind = TypeKind::Bool;
  EnumId value_elem = kNoEnum;

  friend bool operator==(const Type&, const Type&) = default;
};

enum class ExprKind : std::uint8_t {
  BoolLit,
  IntLit,
  Name,
  SetLit,
  Not,
  Neg,
  And,
  Or,
  Implies,
  Eq,
  Neq,
  Lt,
  Le,
  Gt,
  Ge,
  Add,
  Sub,
  In,
  NotIn,
  Union,
  Inter,
  Diff,
  Card,
  Index,     // m[k]
  Override,  // m[k := v]
  IfThenElse,
  Forall,
  Exists,
  MapComp,  // [x : E |-> body]
};

enum class RefKind : std::uint8_t { Unresolved, Variable, Local, Definition, EnumElement };

/// Expression tree. The syntactic fields (kind, name, sort, number, args)
/// define structural equality; the remaining fields are filled in by the
/// type checker.
struct Expr {
  ExprKind kind = ExprKind::BoolLit;
  std::string name;  // Name: identifier; binders: bound variable
  std::string sort;  // binders: enum type ranged over
  std::int64_t number = 0;
  std::vector<Expr> args;
  SourceLoc loc;

  RefKind ref = RefKind::Unresolved;
  std::size_t index = 0;  // variable / local slot / definition / element index
  EnumId enum_id = kNoEnum;
  Type type;
};

bool structurally_equal(const Expr& a, const Expr& b);

bool is_binder(ExprKind k);

}  // namespace tandem
