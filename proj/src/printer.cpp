#include "tandem/printer.hpp"

#include <sstream>

namespace tandem {

namespace {

// Binding strength; higher binds tighter.
enum Prec : int {
  kImplies = 1,
  kOr = 2,
  kAnd = 3,
  kNot = 4,
  kCompare = 5,
  kSetOp = 6,
  kAdditive = 7,
  kUnary = 8,
  kPostfix = 9,
  kPrimary = 10,
};

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Implies:
      return kImplies;
    case ExprKind::Or:
      return kOr;
    case ExprKind::And:
      return kAnd;
    case ExprKind::Not:
      return kNot;
    case ExprKind::Eq:
    case ExprKind::Neq:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge:
    case ExprKind::In:
    case ExprKind::NotIn:
      return kCompare;
    case ExprKind::Union:
    case ExprKind::Inter:
    case ExprKind::Diff:
      return kSetOp;
    case ExprKind::Add:
    case ExprKind::Sub:
      return kAdditive;
    case ExprKind::Neg:
      return kUnary;
    case ExprKind::Index:
    case ExprKind::Override:
      return kPostfix;
    default:
      return kPrimary;
  }
}

const char* infix(ExprKind k) {
  switch (k) {
    case ExprKind::Implies: return " => ";
    case ExprKind::Or: return " or ";
    case ExprKind::And: return " and ";
    case ExprKind::Eq: return " = ";
    case ExprKind::Neq: return " /= ";
    case ExprKind::Lt: return " < ";
    case ExprKind::Le: return " <= ";
    case ExprKind::Gt: return " > ";
    case ExprKind::Ge: return " >= ";
    case ExprKind::In: return " IN ";
    case ExprKind::NotIn: return " NOTIN ";
    case ExprKind::Union: return " \\/ ";
    case ExprKind::Inter: return " /\\ ";
    case ExprKind::Diff: return " \\ ";
    case ExprKind::Add: return " + ";
    case ExprKind::Sub: return " - ";
    default: return " ? ";
  }
}

void print(std::ostream& os, const Expr& e, int min_prec);

void print_binary(std::ostream& os, const Expr& e) {
  const int p = precedence(e.kind);
  int left = p;
  int right = p + 1;
  if (e.kind == ExprKind::Implies) {
    left = p + 1;
    right = p;
  } else if (p == kCompare) {
    left = p + 1;
  }
  print(os, e.args[0], left);
  os << infix(e.kind);
  print(os, e.args[1], right);
}

void print(std::ostream& os, const Expr& e, int min_prec) {
  const bool paren = precedence(e.kind) < min_prec;
  if (paren) os << '(';
  const auto& a = e.args;
  switch (e.kind) {
    case ExprKind::BoolLit:
      os << (e.number ? "TRUE" : "FALSE");
      break;
    case ExprKind::IntLit:
      os << e.number;
      break;
    case ExprKind::Name:
      os << e.name;
      break;
    case ExprKind::SetLit:
      os << '{';
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) os << ", ";
        print(os, a[i], kImplies);
      }
      os << '}';
      break;
    case ExprKind::Not:
      os << "not ";
      print(os, a[0], kNot);
      break;
    case ExprKind::Neg:
      os << '-';
      print(os, a[0], kUnary);
      break;
    case ExprKind::Card:
      os << "card(";
      print(os, a[0], kImplies);
      os << ')';
      break;
    case ExprKind::Index:
      print(os, a[0], kPostfix);
      os << '[';
      print(os, a[1], kImplies);
      os << ']';
      break;
    case ExprKind::Override:
      print(os, a[0], kPostfix);
      os << '[';
      print(os, a[1], kImplies);
      os << " := ";
      print(os, a[2], kImplies);
      os << ']';
      break;
    case ExprKind::IfThenElse:
      os << "IF ";
      print(os, a[0], kImplies);
      os << " THEN ";
      print(os, a[1], kImplies);
      os << " ELSE ";
      print(os, a[2], kImplies);
      os << " END";
      break;
    case ExprKind::Forall:
    case ExprKind::Exists:
      // The body extends as far right as possible, so always bracket.
      os << '(' << (e.kind == ExprKind::Forall ? "FORALL " : "EXISTS ") << e.name << " : " << e.sort << " . ";
      print(os, a[0], kImplies);
      os << ')';
      break;
    case ExprKind::MapComp:
      os << '[' << e.name << " : " << e.sort << " |-> ";
      print(os, a[0], kImplies);
      os << ']';
      break;
    default:
      print_binary(os, e);
      break;
  }
  if (paren) os << ')';
}

}  // namespace

std::string format_expr(const Expr& e) {
  std::ostringstream os;
  print(os, e, kImplies);
  return os.str();
}

std::string pretty_print(const Model& m) {
  std::ostringstream os;
  for (const auto& note : m.annotations) os << "// " << note << '\n';
  os << "MACHINE " << m.name << "\n";

  auto section = [&](const char* title, std::size_t count, auto&& item) {
    if (count == 0) return;
    os << '\n' << title << '\n';
    for (std::size_t i = 0; i < count; ++i) {
      os << "  ";
      item(i);
      os << (i + 1 < count ? ";\n" : "\n");
    }
  };

  section("TYPE", m.enums.size(), [&](std::size_t i) {
    os << m.enums[i].name << " = {";
    for (std::size_t j = 0; j < m.enums[i].elements.size(); ++j) {
      os << (j ? ", " : "") << m.enums[i].elements[j];
    }
    os << '}';
  });
  section("DEFINE", m.definitions.size(), [&](std::size_t i) {
    os << m.definitions[i].name << " == " << format_expr(m.definitions[i].body);
  });
  section("VAR", m.variables.size(), [&](std::size_t i) {
    os << m.variables[i].name << " : " << format_domain(m.enums, m.variables[i].domain);
  });
  section("INIT", m.init.size(), [&](std::size_t i) {
    os << m.init[i].variable << " := " << format_expr(m.init[i].value);
  });
  section("INVARIANT", m.invariants.size(), [&](std::size_t i) {
    os << m.invariants[i].name << ": " << format_expr(m.invariants[i].predicate);
  });

  for (const auto& op : m.operations) {
    os << "\nOP " << op.name;
    if (!op.params.empty()) {
      os << '(';
      for (std::size_t i = 0; i < op.params.size(); ++i) {
        os << (i ? ", " : "") << op.params[i].name << " : " << format_domain(m.enums, op.params[i].domain);
      }
      os << ')';
    }
    os << "\n  WHEN " << format_expr(op.guard) << "\n  THEN";
    if (op.updates.empty()) {
      os << " skip\n";
    } else {
      os << '\n';
      for (std::size_t i = 0; i < op.updates.size(); ++i) {
        os << "    " << op.updates[i].variable << " := " << format_expr(op.updates[i].value)
           << (i + 1 < op.updates.size() ? ";\n" : "\n");
      }
    }
    os << "END\n";
  }
  os << "\nEND\n";
  return os.str();
}

}  // namespace tandem
