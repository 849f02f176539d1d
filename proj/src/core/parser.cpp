#include "core/parser.hpp"

namespace fairflow::dsl {

const Token& TokenCursor::peek(int ahead) const {
  size_t i = index_ + static_cast<size_t>(ahead);
  if (i >= tokens_.size()) i = tokens_.size() - 1; // Eof
  return tokens_[i];
}

Token TokenCursor::take() {
  Token t = peek();
  if (index_ + 1 < tokens_.size()) ++index_;
  return t;
}

bool TokenCursor::at_ident(const char* spelling) const {
  return at(TokKind::Ident) && peek().text == spelling;
}

bool TokenCursor::accept(TokKind kind) {
  if (!at(kind)) return false;
  take();
  return true;
}

Token TokenCursor::expect(TokKind kind, const char* context) {
  if (!at(kind)) {
    error(std::string("expected ") + token_kind_name(kind) + " " + context + ", found " +
          token_kind_name(peek().kind) +
          (peek().kind == TokKind::Ident || peek().kind == TokKind::Int
               ? " '" + peek().text + "'"
               : ""));
  }
  return take();
}

Token TokenCursor::expect_ident(const char* spelling, const char* context) {
  if (!at_ident(spelling)) {
    error(std::string("expected '") + spelling + "' " + context);
  }
  return take();
}

void TokenCursor::error(const std::string& message) const {
  fail(ErrorCode::Syntax, message + " (in " + origin_ + ")", peek().pos);
}

ExprPtr TokenCursor::parse_expr() {
  ExprPtr cond = parse_or();
  if (accept(TokKind::Question)) {
    SourcePos pos = cond->pos;
    ExprPtr then_value = parse_expr();
    expect(TokKind::Colon, "in conditional expression");
    ExprPtr else_value = parse_expr();
    return make_cond(std::move(cond), std::move(then_value), std::move(else_value), pos);
  }
  return cond;
}

ExprPtr TokenCursor::parse_or() {
  ExprPtr lhs = parse_and();
  while (at(TokKind::OrOr)) {
    SourcePos pos = take().pos;
    lhs = make_binary(BinOp::Or, std::move(lhs), parse_and(), pos);
  }
  return lhs;
}

ExprPtr TokenCursor::parse_and() {
  ExprPtr lhs = parse_cmp();
  while (at(TokKind::AndAnd)) {
    SourcePos pos = take().pos;
    lhs = make_binary(BinOp::And, std::move(lhs), parse_cmp(), pos);
  }
  return lhs;
}

ExprPtr TokenCursor::parse_cmp() {
  ExprPtr lhs = parse_sum();
  BinOp op;
  switch (peek().kind) {
    case TokKind::EqEq: op = BinOp::Eq; break;
    case TokKind::NotEq: op = BinOp::Ne; break;
    case TokKind::Lt: op = BinOp::Lt; break;
    case TokKind::Le: op = BinOp::Le; break;
    case TokKind::Gt: op = BinOp::Gt; break;
    case TokKind::Ge: op = BinOp::Ge; break;
    default: return lhs;
  }
  SourcePos pos = take().pos;
  // comparisons are non-associative: a < b < c is a syntax error
  ExprPtr rhs = parse_sum();
  switch (peek().kind) {
    case TokKind::EqEq:
    case TokKind::NotEq:
    case TokKind::Lt:
    case TokKind::Le:
    case TokKind::Gt:
    case TokKind::Ge:
      error("chained comparison; parenthesize explicitly");
    default: break;
  }
  return make_binary(op, std::move(lhs), std::move(rhs), pos);
}

ExprPtr TokenCursor::parse_sum() {
  ExprPtr lhs = parse_term();
  while (at(TokKind::Plus) || at(TokKind::Minus)) {
    Token t = take();
    BinOp op = t.kind == TokKind::Plus ? BinOp::Add : BinOp::Sub;
    lhs = make_binary(op, std::move(lhs), parse_term(), t.pos);
  }
  return lhs;
}

ExprPtr TokenCursor::parse_term() {
  ExprPtr lhs = parse_factor();
  while (at(TokKind::Star)) {
    SourcePos pos = take().pos;
    lhs = make_binary(BinOp::Mul, std::move(lhs), parse_factor(), pos);
  }
  return lhs;
}

ExprPtr TokenCursor::parse_factor() {
  const Token& t = peek();
  switch (t.kind) {
    case TokKind::Int: {
      Token lit = take();
      return make_int(lit.value, lit.pos);
    }
    case TokKind::Ident: {
      Token id = take();
      return make_var(id.text, id.pos);
    }
    case TokKind::LParen: {
      take();
      ExprPtr inner = parse_expr();
      expect(TokKind::RParen, "to close parenthesized expression");
      return inner;
    }
    case TokKind::Minus: {
      Token m = take();
      return make_unary(UnOp::Neg, parse_factor(), m.pos);
    }
    case TokKind::Not: {
      Token n = take();
      return make_unary(UnOp::Not, parse_factor(), n.pos);
    }
    default:
      error(std::string("expected expression, found ") + token_kind_name(t.kind));
  }
}

std::int64_t TokenCursor::parse_signed_int(const char* context) {
  bool negative = accept(TokKind::Minus);
  Token t = expect(TokKind::Int, context);
  return negative ? -t.value : t.value;
}

Domain TokenCursor::parse_domain() {
  if (accept(TokKind::LBracket)) {
    std::int64_t lo = parse_signed_int("as domain lower bound");
    expect(TokKind::Comma, "in interval domain");
    std::int64_t hi = parse_signed_int("as domain upper bound");
    expect(TokKind::RBracket, "to close interval domain");
    if (hi < lo) error("empty interval domain (upper bound below lower bound)");
    return Domain::interval(lo, hi);
  }
  if (accept(TokKind::LBrace)) {
    std::vector<std::int64_t> values;
    values.push_back(parse_signed_int("in set domain"));
    while (accept(TokKind::Comma)) values.push_back(parse_signed_int("in set domain"));
    expect(TokKind::RBrace, "to close set domain");
    return Domain::explicit_set(std::move(values));
  }
  error("expected domain ('[lo, hi]' or '{v, ...}')");
}

namespace {

StmtPtr parse_stmt(TokenCursor& cursor);

std::vector<StmtPtr> parse_stmt_list(TokenCursor& cursor) {
  std::vector<StmtPtr> body;
  while (!cursor.at(TokKind::RBrace) && !cursor.at(TokKind::Eof)) {
    body.push_back(parse_stmt(cursor));
  }
  return body;
}

StmtPtr parse_if(TokenCursor& cursor) {
  Token kw = cursor.expect_ident("if", "at start of if statement");
  cursor.expect(TokKind::LParen, "after 'if'");
  ExprPtr cond = cursor.parse_expr();
  cursor.expect(TokKind::RParen, "to close if condition");
  cursor.expect(TokKind::LBrace, "to open if body");
  std::vector<StmtPtr> then_body = parse_stmt_list(cursor);
  cursor.expect(TokKind::RBrace, "to close if body");
  std::vector<StmtPtr> else_body;
  if (cursor.at_ident("else")) {
    cursor.take();
    if (cursor.at_ident("if")) {
      else_body.push_back(parse_if(cursor)); // else-if chain
    } else {
      cursor.expect(TokKind::LBrace, "to open else body");
      else_body = parse_stmt_list(cursor);
      cursor.expect(TokKind::RBrace, "to close else body");
    }
  }
  auto stmt = std::make_unique<Stmt>();
  stmt->pos = kw.pos;
  stmt->node = Stmt::If{std::move(cond), std::move(then_body), std::move(else_body)};
  return stmt;
}

StmtPtr parse_stmt(TokenCursor& cursor) {
  if (cursor.at_ident("if")) return parse_if(cursor);
  if (cursor.at_ident("return")) {
    Token kw = cursor.take();
    ExprPtr value = cursor.parse_expr();
    cursor.expect(TokKind::Semicolon, "after return value");
    auto stmt = std::make_unique<Stmt>();
    stmt->pos = kw.pos;
    stmt->node = Stmt::Return{std::move(value)};
    return stmt;
  }
  bool declares = false;
  SourcePos pos = cursor.peek().pos;
  if (cursor.at_ident("let")) {
    cursor.take();
    declares = true;
  }
  Token name = cursor.expect(TokKind::Ident, "as assignment target");
  cursor.expect(TokKind::Assign, "in assignment");
  ExprPtr value = cursor.parse_expr();
  cursor.expect(TokKind::Semicolon, "after assignment");
  auto stmt = std::make_unique<Stmt>();
  stmt->pos = pos;
  stmt->node = Stmt::Assign{name.text, std::move(value), declares, -1};
  return stmt;
}

} // namespace

std::vector<StmtPtr> parse_block(TokenCursor& cursor) {
  cursor.expect(TokKind::LBrace, "to open block");
  std::vector<StmtPtr> body = parse_stmt_list(cursor);
  cursor.expect(TokKind::RBrace, "to close block");
  return body;
}

DecisionProgram parse_program(const SourceProgram& src,
                              const std::map<std::string, std::int64_t>& defines) {
  TokenCursor cursor(tokenize(src.text, src.origin), src.origin);
  if (cursor.at(TokKind::Eof)) {
    cursor.error("empty program source");
  }
  cursor.expect_ident("program", "at start of program");
  Token name = cursor.expect(TokKind::Ident, "as program name");

  DecisionProgram program;
  program.name = name.text;

  cursor.expect(TokKind::LParen, "to open parameter list");
  if (!cursor.at(TokKind::RParen)) {
    do {
      Token pname = cursor.expect(TokKind::Ident, "as parameter name");
      cursor.expect(TokKind::Colon, "after parameter name");
      Domain domain = cursor.parse_domain();
      program.params.push_back(Param{pname.text, domain, pname.pos});
    } while (cursor.accept(TokKind::Comma));
  }
  cursor.expect(TokKind::RParen, "to close parameter list");

  program.body = parse_block(cursor);
  if (!cursor.at(TokKind::Eof)) {
    cursor.error("trailing input after program body");
  }

  substitute_defines(program, defines);
  return program;
}

} // namespace fairflow::dsl
