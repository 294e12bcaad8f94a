#include "tandem/parser.hpp"

#include <utility>

#include "checker.hpp"
#include "lexer.hpp"

namespace tandem {

ModelError::ModelError(SourceLoc loc, const std::string& what)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + what),
      loc_(loc),
      message_(what) {}

namespace {

using detail::Token;
using detail::TokenKind;

bool is_section_keyword(const Token& t) {
  if (t.kind != TokenKind::Keyword) return false;
  return t.text == "TYPE" || t.text == "DEFINE" || t.text == "VAR" || t.text == "INIT" ||
         t.text == "INVARIANT" || t.text == "OP" || t.text == "END";
}

class Parser {
 public:
  explicit Parser(detail::LexResult lexed) : toks_(std::move(lexed.tokens)) {
    model_.annotations = std::move(lexed.annotations);
  }

  Model parse() {
    expect_keyword("MACHINE");
    model_.name = expect_identifier("machine name");
    while (true) {
      const Token& t = peek();
      if (at_end()) fail(t, "missing final END");
      if (is_keyword(t, "END")) {
        advance();
        if (!at_end()) fail(peek(), "unexpected input after final END");
        break;
      }
      if (is_keyword(t, "TYPE")) {
        advance();
        parse_list([&] { parse_enum(); });
      } else if (is_keyword(t, "DEFINE")) {
        advance();
        parse_list([&] { parse_definition(); });
      } else if (is_keyword(t, "VAR")) {
        advance();
        parse_list([&] { parse_variable(); });
      } else if (is_keyword(t, "INIT")) {
        advance();
        parse_list([&] { parse_init(); });
      } else if (is_keyword(t, "INVARIANT")) {
        advance();
        parse_list([&] { parse_invariant(); });
      } else if (is_keyword(t, "OP")) {
        advance();
        parse_operation();
      } else {
        fail(t, "expected a section keyword (TYPE, DEFINE, VAR, INIT, INVARIANT, OP), found " + describe(t));
      }
    }
    return std::move(model_);
  }

 private:
  // ---- token plumbing -------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    const auto idx = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[idx];
  }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::EndOfInput; }

  static bool is_keyword(const Token& t, std::string_view kw) {
    return t.kind == TokenKind::Keyword && t.text == kw;
  }
  static bool is_symbol(const Token& t, std::string_view s) {
    return t.kind == TokenKind::Symbol && t.text == s;
  }
  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::EndOfInput:
        return "end of input";
      case TokenKind::Integer:
        return "integer " + t.text;
      default:
        return "'" + t.text + "'";
    }
  }

  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ModelError(t.loc, msg); }

  bool accept_symbol(std::string_view s) {
    if (is_symbol(peek(), s)) {
      advance();
      return true;
    }
    return false;
  }
  bool accept_keyword(std::string_view kw) {
    if (is_keyword(peek(), kw)) {
      advance();
      return true;
    }
    return false;
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) fail(peek(), "expected '" + std::string(s) + "', found " + describe(peek()));
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail(peek(), "expected " + std::string(kw) + ", found " + describe(peek()));
  }
  std::string expect_identifier(const char* what) {
    const Token& t = peek();
    if (t.kind != TokenKind::Identifier) fail(t, std::string("expected ") + what + ", found " + describe(t));
    advance();
    return t.text;
  }

  template <typename F>
  void parse_list(F item) {
    while (!at_end() && !is_section_keyword(peek())) {
      item();
      if (!accept_symbol(";")) break;
    }
  }

  // ---- declarations ---------------------------------------------------

  void parse_enum() {
    const SourceLoc loc = peek().loc;
    EnumDecl decl;
    decl.line = loc.line;
    decl.column = loc.column;
    decl.name = expect_identifier("type name");
    expect_symbol("=");
    expect_symbol("{");
    do {
      decl.elements.push_back(expect_identifier("enum element"));
    } while (accept_symbol(","));
    expect_symbol("}");
    if (model_.find_enum(decl.name)) throw ModelError(loc, "duplicate type " + decl.name);
    model_.enums.push_back(std::move(decl));
  }

  void parse_definition() {
    Definition def;
    def.loc = peek().loc;
    def.name = expect_identifier("definition name");
    expect_symbol("==");
    def.body = parse_expr();
    model_.definitions.push_back(std::move(def));
  }

  void parse_variable() {
    Variable var;
    var.loc = peek().loc;
    var.name = expect_identifier("variable name");
    expect_symbol(":");
    var.domain = parse_domain(true);
    model_.variables.push_back(std::move(var));
  }

  void parse_init() {
    Assignment a;
    a.loc = peek().loc;
    a.variable = expect_identifier("variable name");
    expect_symbol(":=");
    a.value = parse_expr();
    model_.init.push_back(std::move(a));
  }

  // Labels may contain hyphens (`commit-agreement`) as long as the pieces
  // are written without spaces.
  std::string parse_label() {
    const Token& first = peek();
    std::string label = expect_identifier("invariant name");
    int line = first.loc.line;
    int end = first.end_column;
    while (is_symbol(peek(), "-") && peek().loc.line == line && peek().loc.column == end) {
      const Token& next = peek(1);
      // Keywords are fine inside a label: `confirmed-not-held`.
      if ((next.kind != TokenKind::Identifier && next.kind != TokenKind::Keyword &&
           next.kind != TokenKind::Integer) ||
          next.loc.line != line || next.loc.column != end + 1) {
        break;
      }
      advance();
      advance();
      label += "-" + next.text;
      end = next.end_column;
    }
    return label;
  }

  void parse_invariant() {
    Invariant inv;
    inv.loc = peek().loc;
    inv.name = parse_label();
    expect_symbol(":");
    inv.predicate = parse_expr();
    model_.invariants.push_back(std::move(inv));
  }

  void parse_operation() {
    Operation op;
    op.loc = peek().loc;
    op.name = expect_identifier("operation name");
    if (accept_symbol("(")) {
      if (!accept_symbol(")")) {
        do {
          Parameter p;
          p.name = expect_identifier("parameter name");
          expect_symbol(":");
          p.domain = parse_domain(false);
          op.params.push_back(std::move(p));
        } while (accept_symbol(","));
        expect_symbol(")");
      }
    }
    if (accept_keyword("WHEN")) {
      op.guard = parse_expr();
    } else {
      op.guard.kind = ExprKind::BoolLit;
      op.guard.number = 1;
      op.guard.loc = peek().loc;
    }
    expect_keyword("THEN");
    if (!accept_keyword("skip")) {
      while (true) {
        op.updates.push_back(parse_update());
        if (!accept_symbol(";")) break;
        if (is_keyword(peek(), "END")) break;
      }
    }
    expect_keyword("END");
    model_.operations.push_back(std::move(op));
  }

  // `m[k] := v` is sugar for `m := m[k := v]`.
  Assignment parse_update() {
    Assignment a;
    a.loc = peek().loc;
    a.variable = expect_identifier("variable name");
    std::optional<Expr> key;
    if (accept_symbol("[")) {
      key = parse_expr();
      expect_symbol("]");
    }
    expect_symbol(":=");
    Expr rhs = parse_expr();
    if (key) {
      Expr target;
      target.kind = ExprKind::Name;
      target.name = a.variable;
      target.loc = a.loc;
      Expr over;
      over.kind = ExprKind::Override;
      over.loc = a.loc;
      over.args.push_back(std::move(target));
      over.args.push_back(std::move(*key));
      over.args.push_back(std::move(rhs));
      a.value = std::move(over);
    } else {
      a.value = std::move(rhs);
    }
    return a;
  }

  EnumId expect_enum_name() {
    const Token& t = peek();
    const auto name = expect_identifier("type name");
    const auto id = model_.find_enum(name);
    if (!id) fail(t, "unknown type " + name);
    return *id;
  }

  std::int64_t parse_signed_int() {
    const bool neg = accept_symbol("-");
    const Token& t = peek();
    if (t.kind != TokenKind::Integer) fail(t, "expected integer, found " + describe(t));
    advance();
    return neg ? -t.number : t.number;
  }

  Domain parse_domain(bool allow_map) {
    const Token& t = peek();
    if (accept_keyword("BOOL")) return Domain::boolean();
    if (accept_keyword("SET")) {
      const Token& et = peek();
      const auto id = expect_enum_name();
      if (model_.enums[id].elements.size() > kMaxSetElements) {
        fail(et, "SET over " + model_.enums[id].name + " exceeds " + std::to_string(kMaxSetElements) + " elements");
      }
      return Domain::set_of(id);
    }
    if (accept_keyword("MAP")) {
      if (!allow_map) fail(t, "map domain not allowed here");
      const auto key = expect_enum_name();
      expect_keyword("TO");
      if (is_keyword(peek(), "MAP")) fail(peek(), "map values cannot themselves be maps");
      return Domain::map(key, parse_domain(false));
    }
    if (t.kind == TokenKind::Integer || is_symbol(t, "-")) {
      const auto lo = parse_signed_int();
      expect_symbol("..");
      const auto hi = parse_signed_int();
      if (lo > hi) fail(t, "empty integer range " + std::to_string(lo) + ".." + std::to_string(hi));
      return Domain::int_range(lo, hi);
    }
    if (t.kind == TokenKind::Identifier) return Domain::enumeration(expect_enum_name());
    fail(t, "expected a domain, found " + describe(t));
  }

  // ---- expressions ----------------------------------------------------

  static Expr node(ExprKind k, SourceLoc loc, std::vector<Expr> args = {}) {
    Expr e;
    e.kind = k;
    e.loc = loc;
    e.args = std::move(args);
    return e;
  }

  Expr parse_expr() { return parse_implies(); }

  Expr parse_implies() {
    Expr lhs = parse_or();
    const SourceLoc loc = peek().loc;
    if (accept_symbol("=>")) {
      Expr rhs = parse_implies();
      return node(ExprKind::Implies, loc, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (is_keyword(peek(), "or")) {
      const SourceLoc loc = advance().loc;
      Expr rhs = parse_and();
      lhs = node(ExprKind::Or, loc, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_not();
    while (is_keyword(peek(), "and")) {
      const SourceLoc loc = advance().loc;
      Expr rhs = parse_not();
      lhs = node(ExprKind::And, loc, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  Expr parse_not() {
    if (is_keyword(peek(), "not")) {
      const SourceLoc loc = advance().loc;
      return node(ExprKind::Not, loc, {parse_not()});
    }
    return parse_comparison();
  }

  Expr parse_comparison() {
    Expr lhs = parse_setexpr();
    const Token& t = peek();
    std::optional<ExprKind> kind;
    if (is_symbol(t, "=")) kind = ExprKind::Eq;
    else if (is_symbol(t, "/=")) kind = ExprKind::Neq;
    else if (is_symbol(t, "<")) kind = ExprKind::Lt;
    else if (is_symbol(t, "<=")) kind = ExprKind::Le;
    else if (is_symbol(t, ">")) kind = ExprKind::Gt;
    else if (is_symbol(t, ">=")) kind = ExprKind::Ge;
    else if (is_keyword(t, "IN")) kind = ExprKind::In;
    else if (is_keyword(t, "NOTIN")) kind = ExprKind::NotIn;
    if (!kind) return lhs;
    const SourceLoc loc = advance().loc;
    Expr rhs = parse_setexpr();
    return node(*kind, loc, {std::move(lhs), std::move(rhs)});
  }

  Expr parse_setexpr() {
    Expr lhs = parse_additive();
    while (true) {
      const Token& t = peek();
      ExprKind k;
      if (is_symbol(t, "\\/")) k = ExprKind::Union;
      else if (is_symbol(t, "/\\")) k = ExprKind::Inter;
      else if (is_symbol(t, "\\")) k = ExprKind::Diff;
      else return lhs;
      const SourceLoc loc = advance().loc;
      Expr rhs = parse_additive();
      lhs = node(k, loc, {std::move(lhs), std::move(rhs)});
    }
  }

  Expr parse_additive() {
    Expr lhs = parse_unary();
    while (true) {
      const Token& t = peek();
      ExprKind k;
      if (is_symbol(t, "+")) k = ExprKind::Add;
      else if (is_symbol(t, "-")) k = ExprKind::Sub;
      else return lhs;
      const SourceLoc loc = advance().loc;
      Expr rhs = parse_unary();
      lhs = node(k, loc, {std::move(lhs), std::move(rhs)});
    }
  }

  Expr parse_unary() {
    if (is_symbol(peek(), "-")) {
      const SourceLoc loc = advance().loc;
      return node(ExprKind::Neg, loc, {parse_unary()});
    }
    return parse_postfix();
  }

  Expr parse_postfix() {
    Expr base = parse_primary();
    while (is_symbol(peek(), "[")) {
      const SourceLoc loc = advance().loc;
      Expr key = parse_expr();
      if (accept_symbol(":=")) {
        Expr val = parse_expr();
        expect_symbol("]");
        base = node(ExprKind::Override, loc, {std::move(base), std::move(key), std::move(val)});
      } else {
        expect_symbol("]");
        base = node(ExprKind::Index, loc, {std::move(base), std::move(key)});
      }
    }
    return base;
  }

  Expr parse_binder(ExprKind kind, SourceLoc loc) {
    Expr e = node(kind, loc);
    e.name = expect_identifier("bound variable");
    if (kind == ExprKind::MapComp) {
      expect_symbol(":");
      e.sort = expect_identifier("type name");
      expect_symbol("|->");
    } else {
      expect_symbol(":");
      e.sort = expect_identifier("type name");
      expect_symbol(".");
    }
    e.args.push_back(parse_expr());
    return e;
  }

  Expr parse_primary() {
    const Token& t = peek();
    const SourceLoc loc = t.loc;
    switch (t.kind) {
      case TokenKind::Integer: {
        advance();
        Expr e = node(ExprKind::IntLit, loc);
        e.number = t.number;
        return e;
      }
      case TokenKind::Identifier: {
        advance();
        Expr e = node(ExprKind::Name, loc);
        e.name = t.text;
        return e;
      }
      case TokenKind::Keyword: {
        if (t.text == "TRUE" || t.text == "FALSE") {
          advance();
          Expr e = node(ExprKind::BoolLit, loc);
          e.number = t.text == "TRUE" ? 1 : 0;
          return e;
        }
        if (t.text == "card") {
          advance();
          expect_symbol("(");
          Expr inner = parse_expr();
          expect_symbol(")");
          return node(ExprKind::Card, loc, {std::move(inner)});
        }
        if (t.text == "IF") {
          advance();
          Expr c = parse_expr();
          expect_keyword("THEN");
          Expr a = parse_expr();
          expect_keyword("ELSE");
          Expr b = parse_expr();
          expect_keyword("END");
          return node(ExprKind::IfThenElse, loc, {std::move(c), std::move(a), std::move(b)});
        }
        if (t.text == "FORALL") {
          advance();
          return parse_binder(ExprKind::Forall, loc);
        }
        if (t.text == "EXISTS") {
          advance();
          return parse_binder(ExprKind::Exists, loc);
        }
        break;
      }
      case TokenKind::Symbol: {
        if (t.text == "(") {
          advance();
          Expr e = parse_expr();
          expect_symbol(")");
          return e;
        }
        if (t.text == "{") {
          advance();
          Expr e = node(ExprKind::SetLit, loc);
          if (!accept_symbol("}")) {
            do {
              e.args.push_back(parse_expr());
            } while (accept_symbol(","));
            expect_symbol("}");
          }
          return e;
        }
        if (t.text == "[") {
          advance();
          Expr e = parse_binder(ExprKind::MapComp, loc);
          expect_symbol("]");
          return e;
        }
        break;
      }
      case TokenKind::EndOfInput:
        break;
    }
    fail(t, "expected an expression, found " + describe(t));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Model model_;
};

}  // namespace

Model parse_model(std::string_view source) {
  Parser parser(detail::lex(source));
  Model m = parser.parse();
  detail::check_model(m);
  return m;
}

}  // namespace tandem
