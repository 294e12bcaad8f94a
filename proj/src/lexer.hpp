#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tandem/expr.hpp"

namespace tandem::detail {

enum class TokenKind : std::uint8_t { Identifier, Keyword, Integer, Symbol, EndOfInput };

struct Token {
  TokenKind kind = TokenKind::EndOfInput;
  std::string text;
  std::int64_t number = 0;
  SourceLoc loc;
  int end_column = 0;  // one past the last character, same line
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<std::string> annotations;
};

/// Splits `.cmod` source into tokens. `//` and `/* */` comments are
/// dropped, except that `// @...` line comments are kept as annotations.
LexResult lex(std::string_view source);

bool is_keyword(std::string_view word);

}  // namespace tandem::detail
