#include "core/lexer.hpp"

#include <cctype>

namespace fairflow::dsl {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_part(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

} // namespace

std::vector<Token> tokenize(const std::string& text, const std::string& origin) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  const size_t n = text.size();

  auto pos_here = [&]() { return SourcePos{line, col}; };
  auto advance = [&](size_t count) {
    for (size_t k = 0; k < count; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto push = [&](TokKind kind, size_t len, SourcePos pos) {
    out.push_back(Token{kind, text.substr(i, len), 0, pos});
    advance(len);
  };

  while (i < n) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < n && text[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos = pos_here();
    if (ident_start(c)) {
      size_t len = 1;
      while (i + len < n && ident_part(text[i + len])) ++len;
      push(TokKind::Ident, len, pos);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t len = 1;
      while (i + len < n && std::isdigit(static_cast<unsigned char>(text[i + len]))) ++len;
      std::string digits = text.substr(i, len);
      std::int64_t value = 0;
      try {
        value = std::stoll(digits);
      } catch (const std::exception&) {
        fail(ErrorCode::Syntax, "integer literal out of range: " + digits, pos);
      }
      out.push_back(Token{TokKind::Int, digits, value, pos});
      advance(len);
      continue;
    }
    auto two = [&](char a, char b) { return c == a && i + 1 < n && text[i + 1] == b; };
    if (two('=', '=')) { push(TokKind::EqEq, 2, pos); continue; }
    if (two('!', '=')) { push(TokKind::NotEq, 2, pos); continue; }
    if (two('<', '=')) { push(TokKind::Le, 2, pos); continue; }
    if (two('>', '=')) { push(TokKind::Ge, 2, pos); continue; }
    if (two('&', '&')) { push(TokKind::AndAnd, 2, pos); continue; }
    if (two('|', '|')) { push(TokKind::OrOr, 2, pos); continue; }
    switch (c) {
      case '(': push(TokKind::LParen, 1, pos); continue;
      case ')': push(TokKind::RParen, 1, pos); continue;
      case '{': push(TokKind::LBrace, 1, pos); continue;
      case '}': push(TokKind::RBrace, 1, pos); continue;
      case '[': push(TokKind::LBracket, 1, pos); continue;
      case ']': push(TokKind::RBracket, 1, pos); continue;
      case ',': push(TokKind::Comma, 1, pos); continue;
      case ':': push(TokKind::Colon, 1, pos); continue;
      case ';': push(TokKind::Semicolon, 1, pos); continue;
      case '?': push(TokKind::Question, 1, pos); continue;
      case '~': push(TokKind::Tilde, 1, pos); continue;
      case '/': push(TokKind::Slash, 1, pos); continue;
      case '+': push(TokKind::Plus, 1, pos); continue;
      case '-': push(TokKind::Minus, 1, pos); continue;
      case '*': push(TokKind::Star, 1, pos); continue;
      case '<': push(TokKind::Lt, 1, pos); continue;
      case '>': push(TokKind::Gt, 1, pos); continue;
      case '!': push(TokKind::Not, 1, pos); continue;
      case '=': push(TokKind::Assign, 1, pos); continue;
      default:
        fail(ErrorCode::Syntax,
             "unexpected character '" + std::string(1, c) + "' in " + origin, pos);
    }
  }
  out.push_back(Token{TokKind::Eof, "", 0, pos_here()});
  return out;
}

const char* token_kind_name(TokKind kind) {
  switch (kind) {
    case TokKind::Ident: return "identifier";
    case TokKind::Int: return "integer";
    case TokKind::LParen: return "'('";
    case TokKind::RParen: return "')'";
    case TokKind::LBrace: return "'{'";
    case TokKind::RBrace: return "'}'";
    case TokKind::LBracket: return "'['";
    case TokKind::RBracket: return "']'";
    case TokKind::Comma: return "','";
    case TokKind::Colon: return "':'";
    case TokKind::Semicolon: return "';'";
    case TokKind::Question: return "'?'";
    case TokKind::Tilde: return "'~'";
    case TokKind::Slash: return "'/'";
    case TokKind::Plus: return "'+'";
    case TokKind::Minus: return "'-'";
    case TokKind::Star: return "'*'";
    case TokKind::EqEq: return "'=='";
    case TokKind::NotEq: return "'!='";
    case TokKind::Lt: return "'<'";
    case TokKind::Le: return "'<='";
    case TokKind::Gt: return "'>'";
    case TokKind::Ge: return "'>='";
    case TokKind::AndAnd: return "'&&'";
    case TokKind::OrOr: return "'||'";
    case TokKind::Not: return "'!'";
    case TokKind::Assign: return "'='";
    case TokKind::Eof: return "end of input";
  }
  return "token";
}

} // namespace fairflow::dsl
