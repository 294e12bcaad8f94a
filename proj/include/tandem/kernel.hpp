#pragma once

#include <span>
#include <string>
#include <vector>

#include "tandem/model.hpp"

namespace tandem {

/// Evaluates every init clause. Throws InitViolation if the result breaks an
/// invariant, EvalError if an init value is out of its variable's domain.
State init_state(const Model& m);

/// The state produced by the init clauses, without the invariant check.
State initial_assignment(const Model& m);

/// Every (operation, binding) pair whose guard holds in `s`, operations in
/// declaration order and bindings in canonical domain order. Guards are
/// total on type-correct models, so no pair is ever skipped for an error.
std::vector<Transition> enabled_bindings(const Model& m, const State& s);

bool guard_holds(const Model& m, const State& s, const Transition& t);

/// Parallel-assignment successor. Throws GuardViolation if the guard is
/// false and EvalError if an update leaves its variable's domain.
State apply(const Model& m, const State& s, const Transition& t);

/// Names of the invariants that are false in `s`, in declaration order.
std::vector<std::string> violated_invariants(const Model& m, const State& s);

/// Evaluates a type-checked expression. `locals` must hold at least as many
/// slots as the enclosing construct reserves.
Value evaluate(const Model& m, const Expr& e, const State& s, std::span<Value> locals);

std::string format_transition(const Model& m, const Transition& t);
std::string format_state(const Model& m, const State& s);

}  // namespace tandem
