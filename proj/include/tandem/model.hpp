#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tandem/domain.hpp"
#include "tandem/expr.hpp"

namespace tandem {

/// Parse, type, or well-formedness problem in model source.
class ModelError : public std::runtime_error {
 public:
  ModelError(SourceLoc loc, const std::string& what);
  const SourceLoc& loc() const noexcept { return loc_; }
  const std::string& message() const noexcept { return message_; }

 private:
  SourceLoc loc_;
  std::string message_;
};

/// Runtime evaluation failure (integer out of a variable's range).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was applied with a false guard.
class GuardViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The initial state fails an invariant.
class InitViolation : public std::runtime_error {
 public:
  explicit InitViolation(std::string invariant);
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

struct Variable {
  std::string name;
  Domain domain;
  SourceLoc loc;
};

struct Definition {
  std::string name;
  Expr body;
  SourceLoc loc;
  std::size_t locals = 0;
  bool constant = false;  // references no state variable
};

struct Assignment {
  std::string variable;
  Expr value;
  SourceLoc loc;
  std::size_t var_index = 0;
};

struct Parameter {
  std::string name;
  Domain domain;
};

using Binding = std::vector<Value>;

struct Operation {
  std::string name;
  std::vector<Parameter> params;
  Expr guard;
  std::vector<Assignment> updates;  // evaluated in parallel against the pre-state
  SourceLoc loc;
  std::size_t locals = 0;
  std::vector<Binding> bindings;  // every parameter binding, canonical order
};

struct Invariant {
  std::string name;
  Expr predicate;
  SourceLoc loc;
  std::size_t locals = 0;
};

/// A type-checked machine. Everything is immutable once `parse_model`
/// returns; share it freely.
struct Model {
  std::string name;
  std::vector<std::string> annotations;  // `// @...` comment lines
  std::vector<EnumDecl> enums;
  std::vector<Definition> definitions;
  std::vector<Variable> variables;
  std::vector<Assignment> init;  // sorted by declaration order of variables
  std::size_t init_locals = 0;
  std::vector<Invariant> invariants;
  std::vector<Operation> operations;

  std::vector<std::size_t> offsets;  // first state slot of each variable
  std::size_t width = 0;
  std::vector<std::optional<Value>> constant_values;  // per definition

  std::optional<std::size_t> find_variable(std::string_view n) const;
  std::optional<std::size_t> find_operation(std::string_view n) const;
  std::optional<EnumId> find_enum(std::string_view n) const;
};

bool structurally_equal(const Model& a, const Model& b);

/// Total assignment of values to a model's variables, flattened into slots.
/// Slot vectors are the canonical encoding: equal states have equal slots.
struct State {
  std::vector<std::int64_t> slots;

  friend bool operator==(const State&, const State&) = default;
  friend auto operator<=>(const State&, const State&) = default;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept;
};

struct Transition {
  std::size_t op = 0;
  Binding binding;

  friend bool operator==(const Transition&, const Transition&) = default;
};

Value read_variable(const Model& m, const State& s, std::size_t var);
void write_variable(const Model& m, State& s, std::size_t var, const Value& v);

}  // namespace tandem
