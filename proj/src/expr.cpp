#include "tandem/expr.hpp"

namespace tandem {

bool is_binder(ExprKind k) {
  return k == ExprKind::Forall || k == ExprKind::Exists || k == ExprKind::MapComp;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.sort != b.sort || a.number != b.number ||
      a.args.size() != b.args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!structurally_equal(a.args[i], b.args[i])) return false;
  }
  return true;
}

}  // namespace tandem
