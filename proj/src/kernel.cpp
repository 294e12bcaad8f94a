#include "tandem/kernel.hpp"

#include <bit>

namespace tandem {

namespace {

std::uint64_t as_set(const Value& v) { return static_cast<std::uint64_t>(v.bits); }

Value boolean(bool b) { return Value::scalar(b ? 1 : 0); }

class Evaluator {
 public:
  Evaluator(const Model& m, const State& s, std::span<Value> locals) : m_(m), s_(s), locals_(locals) {}

  Value eval(const Expr& e) {
    const auto& a = e.args;
    switch (e.kind) {
      case ExprKind::BoolLit:
      case ExprKind::IntLit:
        return Value::scalar(e.number);
      case ExprKind::Name:
        return name(e);
      case ExprKind::SetLit: {
        std::uint64_t bits = 0;
        for (const auto& x : a) bits |= std::uint64_t{1} << eval(x).bits;
        return Value::scalar(static_cast<std::int64_t>(bits));
      }
      case ExprKind::Not:
        return boolean(!truth(a[0]));
      case ExprKind::And:
        return boolean(truth(a[0]) && truth(a[1]));
      case ExprKind::Or:
        return boolean(truth(a[0]) || truth(a[1]));
      case ExprKind::Implies:
        return boolean(!truth(a[0]) || truth(a[1]));
      case ExprKind::Eq:
        return boolean(eval(a[0]) == eval(a[1]));
      case ExprKind::Neq:
        return boolean(!(eval(a[0]) == eval(a[1])));
      case ExprKind::Lt:
        return boolean(num(a[0]) < num(a[1]));
      case ExprKind::Le:
        return boolean(num(a[0]) <= num(a[1]));
      case ExprKind::Gt:
        return boolean(num(a[0]) > num(a[1]));
      case ExprKind::Ge:
        return boolean(num(a[0]) >= num(a[1]));
      case ExprKind::Add:
        return Value::scalar(num(a[0]) + num(a[1]));
      case ExprKind::Sub:
        return Value::scalar(num(a[0]) - num(a[1]));
      case ExprKind::Neg:
        return Value::scalar(-num(a[0]));
      case ExprKind::In:
      case ExprKind::NotIn: {
        const auto x = num(a[0]);
        const bool member = (as_set(eval(a[1])) >> x) & 1U;
        return boolean(e.kind == ExprKind::In ? member : !member);
      }
      case ExprKind::Union:
        return Value::scalar(eval(a[0]).bits | eval(a[1]).bits);
      case ExprKind::Inter:
        return Value::scalar(eval(a[0]).bits & eval(a[1]).bits);
      case ExprKind::Diff:
        return Value::scalar(eval(a[0]).bits & ~eval(a[1]).bits);
      case ExprKind::Card:
        return Value::scalar(std::popcount(as_set(eval(a[0]))));
      case ExprKind::Index:
        return index(e);
      case ExprKind::Override: {
        Value map = eval(a[0]);
        const auto key = static_cast<std::size_t>(num(a[1]));
        map.entries[key] = eval(a[2]).bits;
        return map;
      }
      case ExprKind::IfThenElse:
        return truth(a[0]) ? eval(a[1]) : eval(a[2]);
      case ExprKind::Forall:
      case ExprKind::Exists: {
        const bool want = e.kind == ExprKind::Exists;
        const auto n = m_.enums[e.enum_id].elements.size();
        for (std::size_t i = 0; i < n; ++i) {
          locals_[e.index] = Value::scalar(static_cast<std::int64_t>(i));
          if (truth(a[0]) == want) return boolean(want);
        }
        return boolean(!want);
      }
      case ExprKind::MapComp: {
        Value map;
        const auto n = m_.enums[e.enum_id].elements.size();
        map.entries.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
          locals_[e.index] = Value::scalar(static_cast<std::int64_t>(i));
          map.entries.push_back(eval(a[0]).bits);
        }
        return map;
      }
    }
    return {};
  }

  bool truth(const Expr& e) { return eval(e).bits != 0; }
  std::int64_t num(const Expr& e) { return eval(e).bits; }

 private:
  Value name(const Expr& e) {
    switch (e.ref) {
      case RefKind::Variable:
        return read_variable(m_, s_, e.index);
      case RefKind::Local:
        return locals_[e.index];
      case RefKind::EnumElement:
        return Value::scalar(static_cast<std::int64_t>(e.index));
      case RefKind::Definition: {
        if (const auto& cached = m_.constant_values[e.index]) return *cached;
        const auto& def = m_.definitions[e.index];
        std::vector<Value> frame(def.locals);
        return Evaluator(m_, s_, frame).eval(def.body);
      }
      case RefKind::Unresolved:
        break;
    }
    throw EvalError("unresolved name " + e.name);
  }

  // Reads a map variable's entry straight from the state slots.
  Value index(const Expr& e) {
    const auto key = static_cast<std::size_t>(num(e.args[1]));
    const Expr& base = e.args[0];
    if (base.kind == ExprKind::Name && base.ref == RefKind::Variable) {
      return Value::scalar(s_.slots[m_.offsets[base.index] + key]);
    }
    return Value::scalar(eval(base).entries[key]);
  }

  const Model& m_;
  const State& s_;
  std::span<Value> locals_;
};

void check_in_domain(const Model& m, const Assignment& a, const Value& v, const std::string& context) {
  const auto& var = m.variables[a.var_index];
  if (in_domain(m.enums, var.domain, v)) return;
  std::string shown;
  if (var.domain.kind == DomainKind::IntRange) {
    shown = std::to_string(v.bits);
  } else if (var.domain.kind == DomainKind::Map && var.domain.value->kind == DomainKind::IntRange) {
    shown = "[";
    for (std::size_t i = 0; i < v.entries.size(); ++i) {
      shown += (i ? ", " : "") + std::to_string(v.entries[i]);
    }
    shown += "]";
  } else {
    shown = "out-of-domain value";
  }
  throw EvalError(context + ": value " + shown + " of " + a.variable + " is outside " +
                  format_domain(m.enums, var.domain) + " (line " + std::to_string(a.loc.line) + ")");
}

}  // namespace

Value evaluate(const Model& m, const Expr& e, const State& s, std::span<Value> locals) {
  return Evaluator(m, s, locals).eval(e);
}

State initial_assignment(const Model& m) {
  State s{std::vector<std::int64_t>(m.width, 0)};
  std::vector<Value> locals(m.init_locals);
  for (const auto& a : m.init) {
    const Value v = evaluate(m, a.value, s, locals);
    check_in_domain(m, a, v, "init");
    write_variable(m, s, a.var_index, v);
  }
  return s;
}

State init_state(const Model& m) {
  State s = initial_assignment(m);
  if (auto bad = violated_invariants(m, s); !bad.empty()) throw InitViolation(bad.front());
  return s;
}

namespace {

std::vector<Value> frame_for(const Operation& op, const Binding& b) {
  std::vector<Value> locals(op.locals);
  for (std::size_t i = 0; i < b.size() && i < locals.size(); ++i) locals[i] = b[i];
  return locals;
}

}  // namespace

bool guard_holds(const Model& m, const State& s, const Transition& t) {
  const auto& op = m.operations.at(t.op);
  auto locals = frame_for(op, t.binding);
  return evaluate(m, op.guard, s, locals).bits != 0;
}

std::vector<Transition> enabled_bindings(const Model& m, const State& s) {
  std::vector<Transition> out;
  for (std::size_t i = 0; i < m.operations.size(); ++i) {
    const auto& op = m.operations[i];
    std::vector<Value> locals(op.locals);
    for (const auto& b : op.bindings) {
      std::copy(b.begin(), b.end(), locals.begin());
      if (evaluate(m, op.guard, s, locals).bits != 0) out.push_back({i, b});
    }
  }
  return out;
}

State apply(const Model& m, const State& s, const Transition& t) {
  const auto& op = m.operations.at(t.op);
  if (t.binding.size() != op.params.size()) {
    throw GuardViolation(op.name + " expects " + std::to_string(op.params.size()) + " parameters");
  }
  auto locals = frame_for(op, t.binding);
  if (evaluate(m, op.guard, s, locals).bits == 0) {
    throw GuardViolation("guard of " + format_transition(m, t) + " is false");
  }
  std::vector<Value> fresh;
  fresh.reserve(op.updates.size());
  for (const auto& u : op.updates) fresh.push_back(evaluate(m, u.value, s, locals));
  State next = s;
  for (std::size_t i = 0; i < op.updates.size(); ++i) {
    check_in_domain(m, op.updates[i], fresh[i], op.name);
    write_variable(m, next, op.updates[i].var_index, fresh[i]);
  }
  return next;
}

std::vector<std::string> violated_invariants(const Model& m, const State& s) {
  std::vector<std::string> out;
  for (const auto& inv : m.invariants) {
    std::vector<Value> locals(inv.locals);
    if (evaluate(m, inv.predicate, s, locals).bits == 0) out.push_back(inv.name);
  }
  return out;
}

std::string format_transition(const Model& m, const Transition& t) {
  const auto& op = m.operations.at(t.op);
  if (op.params.empty()) return op.name;
  std::string out = op.name + "(";
  for (std::size_t i = 0; i < op.params.size(); ++i) {
    if (i) out += ", ";
    out += op.params[i].name + " = " + format_value(m.enums, op.params[i].domain, t.binding.at(i));
  }
  return out + ")";
}

std::string format_state(const Model& m, const State& s) {
  std::string out;
  for (std::size_t i = 0; i < m.variables.size(); ++i) {
    if (i) out += ", ";
    out += m.variables[i].name + " = " + format_value(m.enums, m.variables[i].domain, read_variable(m, s, i));
  }
  return out;
}

}  // namespace tandem
