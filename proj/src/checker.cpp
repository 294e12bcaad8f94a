#include "checker.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "tandem/kernel.hpp"

namespace tandem::detail {

namespace {

std::string type_name(const Model& m, const Type& t) {
  auto elem_name = [&](EnumId id) { return id == kNoEnum ? std::string("?") : m.enums[id].name; };
  switch (t.kind) {
    case TypeKind::Bool:
      return "BOOL";
    case TypeKind::Int:
      return "INT";
    case TypeKind::Enum:
      return elem_name(t.elem);
    case TypeKind::Set:
      return "SET " + elem_name(t.elem);
    case TypeKind::Map: {
      Type v{t.value_kind, t.value_elem, TypeKind::Bool, kNoEnum};
      return "MAP " + elem_name(t.elem) + " TO " + type_name(m, v);
    }
  }
  return "?";
}

Type type_of(const Domain& d) {
  switch (d.kind) {
    case DomainKind::Boolean:
      return {TypeKind::Bool};
    case DomainKind::IntRange:
      return {TypeKind::Int};
    case DomainKind::Enum:
      return {TypeKind::Enum, d.enum_id};
    case DomainKind::SetOf:
      return {TypeKind::Set, d.enum_id};
    case DomainKind::Map: {
      const Type v = type_of(*d.value);
      return {TypeKind::Map, d.enum_id, v.kind, v.elem};
    }
  }
  return {};
}

bool elem_compatible(TypeKind kind, EnumId a, EnumId b) {
  if (kind == TypeKind::Set) return a == kNoEnum || b == kNoEnum || a == b;
  if (kind == TypeKind::Enum) return a == b;
  return true;
}

bool compatible(const Type& a, const Type& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == TypeKind::Map) {
    return a.elem == b.elem && a.value_kind == b.value_kind &&
           elem_compatible(a.value_kind, a.value_elem, b.value_elem);
  }
  return elem_compatible(a.kind, a.elem, b.elem);
}

EnumId known(EnumId a, EnumId b) { return a != kNoEnum ? a : b; }

Type unify(const Type& a, const Type& b) {
  Type t = a;
  t.elem = known(a.elem, b.elem);
  t.value_elem = known(a.value_elem, b.value_elem);
  return t;
}

struct Local {
  std::string name;
  Type type;
  std::size_t slot;
};

class Checker {
 public:
  explicit Checker(Model& m) : m_(m) {}

  void run() {
    check_enums();
    check_variables();
    check_definitions();
    check_init();
    check_invariants();
    check_operations();
    compute_layout();
    compute_bindings();
    compute_constants();
  }

 private:
  [[noreturn]] static void fail(SourceLoc loc, const std::string& msg) { throw ModelError(loc, msg); }

  void claim_global(const std::string& name, SourceLoc loc, const char* what) {
    auto [it, inserted] = globals_.emplace(name, what);
    if (!inserted) fail(loc, "duplicate name " + name + " (already declared as " + it->second + ")");
  }

  void check_enums() {
    for (EnumId id = 0; id < m_.enums.size(); ++id) {
      const auto& e = m_.enums[id];
      const SourceLoc loc{e.line, e.column};
      claim_global(e.name, loc, "type");
      if (e.elements.empty()) fail(loc, "type " + e.name + " has no elements");
      for (std::size_t i = 0; i < e.elements.size(); ++i) {
        claim_global(e.elements[i], loc, "enum element");
        elements_[e.elements[i]] = {id, i};
      }
    }
  }

  void check_definitions() {
    for (std::size_t i = 0; i < m_.definitions.size(); ++i) {
      auto& def = m_.definitions[i];
      claim_global(def.name, def.loc, "definition");
      locals_.clear();
      max_locals_ = 0;
      uses_state_ = false;
      const Type t = infer(def.body, 0);
      def.locals = max_locals_;
      def.constant = !uses_state_;
      def_types_.push_back(t);
      def_uses_state_.push_back(uses_state_);
      defs_visible_ = i + 1;
    }
  }

  void check_variables() {
    for (std::size_t i = 0; i < m_.variables.size(); ++i) {
      claim_global(m_.variables[i].name, m_.variables[i].loc, "variable");
    }
    vars_visible_ = true;
  }

  void check_init() {
    std::vector<std::optional<Assignment>> slots(m_.variables.size());
    for (auto& a : m_.init) {
      const auto var = m_.find_variable(a.variable);
      if (!var) fail(a.loc, "init of unknown variable " + a.variable);
      if (slots[*var]) fail(a.loc, "duplicate init for " + a.variable);
      a.var_index = *var;
      locals_.clear();
      max_locals_ = 0;
      uses_state_ = false;
      const Type t = infer(a.value, 0);
      if (uses_state_) fail(a.loc, "init for " + a.variable + " is not a constant expression");
      expect_assignable(a, t);
      if (max_locals_ > init_locals_) init_locals_ = max_locals_;
      slots[*var] = std::move(a);
    }
    m_.init_locals = init_locals_;
    m_.init.clear();
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i]) fail(m_.variables[i].loc, "init does not cover variable " + m_.variables[i].name);
      m_.init.push_back(std::move(*slots[i]));
    }
  }

  void check_invariants() {
    std::set<std::string> names;
    for (auto& inv : m_.invariants) {
      if (!names.insert(inv.name).second) fail(inv.loc, "duplicate invariant " + inv.name);
      locals_.clear();
      max_locals_ = 0;
      expect_bool(inv.predicate, infer(inv.predicate, 0), "invariant " + inv.name);
      inv.locals = max_locals_;
    }
  }

  void check_operations() {
    std::set<std::string> names;
    for (auto& op : m_.operations) {
      if (!names.insert(op.name).second) fail(op.loc, "duplicate operation " + op.name);
      locals_.clear();
      std::set<std::string> params;
      for (std::size_t i = 0; i < op.params.size(); ++i) {
        const auto& p = op.params[i];
        if (!params.insert(p.name).second) fail(op.loc, "duplicate parameter " + p.name + " of " + op.name);
        if (globals_.count(p.name)) fail(op.loc, "parameter " + p.name + " of " + op.name + " shadows a global name");
        locals_.push_back({p.name, type_of(p.domain), i});
      }
      max_locals_ = op.params.size();
      const auto base = op.params.size();
      expect_bool(op.guard, infer(op.guard, base), "guard of " + op.name);
      std::set<std::size_t> assigned;
      for (auto& u : op.updates) {
        const auto var = m_.find_variable(u.variable);
        if (!var) fail(u.loc, "update of unknown variable " + u.variable);
        if (!assigned.insert(*var).second) fail(u.loc, "duplicate update of " + u.variable + " in " + op.name);
        u.var_index = *var;
        expect_assignable(u, infer(u.value, base));
      }
      op.locals = max_locals_;
    }
  }

  void compute_layout() {
    m_.offsets.clear();
    std::size_t off = 0;
    for (const auto& v : m_.variables) {
      m_.offsets.push_back(off);
      off += slot_width(m_.enums, v.domain);
    }
    m_.width = off;
  }

  void compute_bindings() {
    constexpr std::size_t kMaxBindings = 1'000'000;
    for (auto& op : m_.operations) {
      std::size_t total = 1;
      std::vector<std::vector<Value>> per_param;
      for (const auto& p : op.params) {
        per_param.push_back(domain_values(m_.enums, p.domain));
        total *= per_param.back().size();
        if (total > kMaxBindings) fail(op.loc, "parameter space of " + op.name + " is too large");
      }
      op.bindings.clear();
      op.bindings.reserve(total);
      std::vector<std::size_t> digits(per_param.size(), 0);
      for (std::size_t n = 0; n < total; ++n) {
        Binding b;
        for (std::size_t i = 0; i < digits.size(); ++i) b.push_back(per_param[i][digits[i]]);
        op.bindings.push_back(std::move(b));
        for (std::size_t pos = digits.size(); pos > 0; --pos) {
          if (++digits[pos - 1] < per_param[pos - 1].size()) break;
          digits[pos - 1] = 0;
        }
      }
    }
  }

  void compute_constants() {
    m_.constant_values.assign(m_.definitions.size(), std::nullopt);
    const State empty{std::vector<std::int64_t>(m_.width, 0)};
    for (std::size_t i = 0; i < m_.definitions.size(); ++i) {
      const auto& def = m_.definitions[i];
      if (!def.constant) continue;
      std::vector<Value> locals(def.locals);
      m_.constant_values[i] = evaluate(m_, def.body, empty, locals);
    }
  }

  // ---- expression typing ----------------------------------------------

  void expect_bool(const Expr& e, const Type& t, const std::string& what) {
    if (t.kind != TypeKind::Bool) fail(e.loc, what + " must be boolean, found " + type_name(m_, t));
  }

  void expect_assignable(const Assignment& a, const Type& t) {
    const auto& var = m_.variables[*m_.find_variable(a.variable)];
    const Type want = type_of(var.domain);
    if (!compatible(want, t)) {
      fail(a.loc, "cannot assign " + type_name(m_, t) + " to " + a.variable + " of type " + type_name(m_, want));
    }
  }

  Type expect(Expr& e, std::size_t base, TypeKind kind, const char* what) {
    const Type t = infer(e, base);
    if (t.kind != kind) {
      fail(e.loc, std::string(what) + " expects " + type_name(m_, Type{kind}) + ", found " + type_name(m_, t));
    }
    return t;
  }

  EnumId resolve_sort(const Expr& e) {
    const auto id = m_.find_enum(e.sort);
    if (!id) fail(e.loc, "unknown type " + e.sort);
    return *id;
  }

  Type resolve_name(Expr& e) {
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
      if (it->name == e.name) {
        e.ref = RefKind::Local;
        e.index = it->slot;
        return it->type;
      }
    }
    if (vars_visible_) {
      if (auto v = m_.find_variable(e.name)) {
        e.ref = RefKind::Variable;
        e.index = *v;
        uses_state_ = true;
        return type_of(m_.variables[*v].domain);
      }
    }
    for (std::size_t i = 0; i < defs_visible_; ++i) {
      if (m_.definitions[i].name == e.name) {
        e.ref = RefKind::Definition;
        e.index = i;
        if (def_uses_state_[i]) uses_state_ = true;
        return def_types_[i];
      }
    }
    if (auto it = elements_.find(e.name); it != elements_.end()) {
      e.ref = RefKind::EnumElement;
      e.enum_id = it->second.first;
      e.index = it->second.second;
      return {TypeKind::Enum, e.enum_id};
    }
    fail(e.loc, "unknown name " + e.name);
  }

  Type infer(Expr& e, std::size_t base) {
    e.type = infer_inner(e, base);
    return e.type;
  }

  Type infer_inner(Expr& e, std::size_t base) {
    auto& a = e.args;
    switch (e.kind) {
      case ExprKind::BoolLit:
        return {TypeKind::Bool};
      case ExprKind::IntLit:
        return {TypeKind::Int};
      case ExprKind::Name:
        return resolve_name(e);
      case ExprKind::SetLit: {
        EnumId elem = kNoEnum;
        for (auto& x : a) {
          const Type t = infer(x, base);
          if (t.kind != TypeKind::Enum) fail(x.loc, "set elements must be enum values, found " + type_name(m_, t));
          if (elem != kNoEnum && elem != t.elem) fail(x.loc, "set literal mixes element types");
          elem = t.elem;
        }
        return {TypeKind::Set, elem};
      }
      case ExprKind::Not:
        expect(a[0], base, TypeKind::Bool, "not");
        return {TypeKind::Bool};
      case ExprKind::And:
      case ExprKind::Or:
      case ExprKind::Implies:
        expect(a[0], base, TypeKind::Bool, "boolean connective");
        expect(a[1], base, TypeKind::Bool, "boolean connective");
        return {TypeKind::Bool};
      case ExprKind::Eq:
      case ExprKind::Neq: {
        const Type l = infer(a[0], base);
        const Type r = infer(a[1], base);
        if (!compatible(l, r)) {
          fail(e.loc, "cannot compare " + type_name(m_, l) + " with " + type_name(m_, r));
        }
        return {TypeKind::Bool};
      }
      case ExprKind::Lt:
      case ExprKind::Le:
      case ExprKind::Gt:
      case ExprKind::Ge:
        expect(a[0], base, TypeKind::Int, "comparison");
        expect(a[1], base, TypeKind::Int, "comparison");
        return {TypeKind::Bool};
      case ExprKind::Add:
      case ExprKind::Sub:
        expect(a[0], base, TypeKind::Int, "arithmetic");
        expect(a[1], base, TypeKind::Int, "arithmetic");
        return {TypeKind::Int};
      case ExprKind::Neg:
        expect(a[0], base, TypeKind::Int, "negation");
        return {TypeKind::Int};
      case ExprKind::In:
      case ExprKind::NotIn: {
        const Type x = expect(a[0], base, TypeKind::Enum, "membership");
        const Type s = expect(a[1], base, TypeKind::Set, "membership");
        if (s.elem != kNoEnum && s.elem != x.elem) {
          fail(e.loc, "membership of " + type_name(m_, x) + " in " + type_name(m_, s));
        }
        return {TypeKind::Bool};
      }
      case ExprKind::Union:
      case ExprKind::Inter:
      case ExprKind::Diff: {
        const Type l = expect(a[0], base, TypeKind::Set, "set operator");
        const Type r = expect(a[1], base, TypeKind::Set, "set operator");
        if (!compatible(l, r)) fail(e.loc, "set operator on " + type_name(m_, l) + " and " + type_name(m_, r));
        return unify(l, r);
      }
      case ExprKind::Card:
        expect(a[0], base, TypeKind::Set, "card");
        return {TypeKind::Int};
      case ExprKind::Index: {
        const Type mt = expect(a[0], base, TypeKind::Map, "lookup");
        const Type k = expect(a[1], base, TypeKind::Enum, "lookup key");
        if (k.elem != mt.elem) fail(a[1].loc, "key of type " + type_name(m_, k) + " for " + type_name(m_, mt));
        return {mt.value_kind, mt.value_elem};
      }
      case ExprKind::Override: {
        const Type mt = expect(a[0], base, TypeKind::Map, "map update");
        const Type k = expect(a[1], base, TypeKind::Enum, "map update key");
        if (k.elem != mt.elem) fail(a[1].loc, "key of type " + type_name(m_, k) + " for " + type_name(m_, mt));
        const Type v = infer(a[2], base);
        const Type want{mt.value_kind, mt.value_elem};
        if (!compatible(want, v)) fail(a[2].loc, "map update value " + type_name(m_, v) + " for " + type_name(m_, mt));
        Type out = mt;
        out.value_elem = known(mt.value_elem, v.elem);
        return out;
      }
      case ExprKind::IfThenElse: {
        expect(a[0], base, TypeKind::Bool, "IF condition");
        const Type l = infer(a[1], base);
        const Type r = infer(a[2], base);
        if (!compatible(l, r)) fail(e.loc, "IF branches differ: " + type_name(m_, l) + " vs " + type_name(m_, r));
        return unify(l, r);
      }
      case ExprKind::Forall:
      case ExprKind::Exists:
      case ExprKind::MapComp: {
        const EnumId sort = resolve_sort(e);
        if (globals_.count(e.name)) fail(e.loc, "bound variable " + e.name + " shadows a global name");
        for (const auto& l : locals_) {
          if (l.name == e.name) fail(e.loc, "bound variable " + e.name + " shadows an enclosing name");
        }
        const std::size_t slot = std::max(base, bound_depth());
        e.enum_id = sort;
        e.index = slot;
        locals_.push_back({e.name, {TypeKind::Enum, sort}, slot});
        if (slot + 1 > max_locals_) max_locals_ = slot + 1;
        const Type body = infer(a[0], base);
        locals_.pop_back();
        if (e.kind == ExprKind::MapComp) {
          if (body.kind == TypeKind::Map) fail(e.loc, "map values cannot themselves be maps");
          return {TypeKind::Map, sort, body.kind, body.elem};
        }
        if (body.kind != TypeKind::Bool) fail(a[0].loc, "quantifier body must be boolean");
        return {TypeKind::Bool};
      }
    }
    fail(e.loc, "unsupported expression");
  }

  std::size_t bound_depth() const {
    std::size_t n = 0;
    for (const auto& l : locals_) {
      if (l.slot >= n) n = l.slot + 1;
    }
    return n;
  }

  Model& m_;
  std::map<std::string, std::string> globals_;
  std::map<std::string, std::pair<EnumId, std::size_t>> elements_;
  std::vector<Type> def_types_;
  std::vector<bool> def_uses_state_;
  std::size_t defs_visible_ = 0;
  bool vars_visible_ = false;
  std::vector<Local> locals_;
  std::size_t max_locals_ = 0;
  std::size_t init_locals_ = 0;
  bool uses_state_ = false;
};

}  // namespace

void check_model(Model& m) { Checker(m).run(); }

}  // namespace tandem::detail
