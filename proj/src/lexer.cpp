#include "lexer.hpp"

#include <array>
#include <cctype>

#include "tandem/model.hpp"

namespace tandem::detail {

namespace {

constexpr std::array kKeywords = {
    "MACHINE", "TYPE", "DEFINE", "VAR",   "INIT",   "INVARIANT", "OP",    "WHEN",
    "THEN",    "ELSE", "END",    "IF",    "BOOL",   "SET",       "MAP",   "TO",
    "TRUE",    "FALSE", "FORALL", "EXISTS", "IN",   "NOTIN",     "and",   "or",
    "not",     "card", "skip",
};

// Longest first so that e.g. `|->` wins over `|`.
constexpr std::array kSymbols = {
    "|->", ":=", "..", "==", "/=", "<=", ">=", "=>", "\\/", "/\\", ":", ".", ",", ";",
    "(",   ")",  "{",  "}",  "[",  "]",  "=",  "<",  ">",   "+",   "-", "\\",
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

bool is_keyword(std::string_view word) {
  for (const char* k : kKeywords) {
    if (word == k) return true;
  }
  return false;
}

LexResult lex(std::string_view src) {
  LexResult out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      const auto eol = src.find('\n', i);
      const auto body = trim(src.substr(i + 2, eol == std::string_view::npos ? src.npos : eol - i - 2));
      if (!body.empty() && body.front() == '@') out.annotations.push_back(body);
      advance((eol == std::string_view::npos ? src.size() : eol) - i);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      const SourceLoc start{line, col};
      const auto close = src.find("*/", i + 2);
      if (close == std::string_view::npos) throw ModelError(start, "unterminated block comment");
      advance(close + 2 - i);
      continue;
    }

    Token tok;
    tok.loc = {line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      tok.text = std::string(src.substr(i, j - i));
      tok.kind = is_keyword(tok.text) ? TokenKind::Keyword : TokenKind::Identifier;
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tok.kind = TokenKind::Integer;
      tok.text = std::string(src.substr(i, j - i));
      if (tok.text.size() > 15) throw ModelError(tok.loc, "integer literal too large: " + tok.text);
      tok.number = std::stoll(tok.text);
      advance(j - i);
    } else {
      bool matched = false;
      for (const char* sym : kSymbols) {
        const std::string_view s(sym);
        if (src.substr(i, s.size()) == s) {
          tok.kind = TokenKind::Symbol;
          tok.text = std::string(s);
          advance(s.size());
          matched = true;
          break;
        }
      }
      if (!matched) throw ModelError(tok.loc, std::string("unexpected character '") + c + "'");
    }
    tok.end_column = col;
    out.tokens.push_back(std::move(tok));
  }
  Token eof;
  eof.kind = TokenKind::EndOfInput;
  eof.loc = {line, col};
  eof.end_column = col;
  out.tokens.push_back(eof);
  return out;
}

}  // namespace tandem::detail
