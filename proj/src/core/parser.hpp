#pragma once

#include <map>

#include "core/ast.hpp"
#include "core/lexer.hpp"

namespace fairflow::dsl {

// Parses a `.dp` source into an AST. `defines` substitutes named integer
// constants for otherwise-free identifiers after parsing (so the same file
// can be instantiated at several threshold values).
DecisionProgram parse_program(const SourceProgram& src,
                              const std::map<std::string, std::int64_t>& defines = {});

// Recursive-descent cursor over a token stream; shared by the program parser
// and the causal-model parser.
class TokenCursor {
 public:
  TokenCursor(std::vector<Token> tokens, std::string origin)
      : tokens_(std::move(tokens)), origin_(std::move(origin)) {}

  const Token& peek(int ahead = 0) const;
  Token take();
  bool at(TokKind kind) const { return peek().kind == kind; }
  bool at_ident(const char* spelling) const;
  bool accept(TokKind kind);
  Token expect(TokKind kind, const char* context);
  Token expect_ident(const char* spelling, const char* context);
  [[noreturn]] void error(const std::string& message) const;
  const std::string& origin() const { return origin_; }

  // Grammar entry points reused across file kinds.
  ExprPtr parse_expr();
  Domain parse_domain();
  std::int64_t parse_signed_int(const char* context);

 private:
  ExprPtr parse_or();
  ExprPtr parse_and();
  ExprPtr parse_cmp();
  ExprPtr parse_sum();
  ExprPtr parse_term();
  ExprPtr parse_factor();

  std::vector<Token> tokens_;
  std::string origin_;
  size_t index_ = 0;
};

std::vector<StmtPtr> parse_block(TokenCursor& cursor);

} // namespace fairflow::dsl
