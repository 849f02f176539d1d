#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/diag.hpp"

namespace fairflow::dsl {

enum class TokKind {
  Ident,
  Int,
  // punctuation / operators
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Colon, Semicolon, Question, Tilde, Slash,
  Plus, Minus, Star,
  EqEq, NotEq, Lt, Le, Gt, Ge,
  AndAnd, OrOr, Not,
  Assign,
  Eof,
};

struct Token {
  TokKind kind;
  std::string text;      // identifier spelling
  std::int64_t value = 0; // Int payload
  SourcePos pos;
};

// Tokenizes a whole source buffer. `#` starts a comment running to end of
// line. Integers are unsigned here; unary minus is handled by the parser.
std::vector<Token> tokenize(const std::string& text, const std::string& origin);

const char* token_kind_name(TokKind kind);

} // namespace fairflow::dsl
