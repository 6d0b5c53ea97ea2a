#pragma once

// Token stream shared by the grammar reader and the trace reader. Not part
// of the public interface.

#include <string>
#include <string_view>
#include <vector>

#include "gcv/gin.hpp"

namespace gcv::detail {

enum class Tok {
  Ident,
  String,  // text holds the unescaped literal
  Int,
  Define,     // ::=
  Select,     // ::
  Pipe,
  Quest,
  Star,
  Plus,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LAngle,
  RAngle,
  Semi,
  Comma,
  Dash,
  End,
};

struct Token {
  Tok type = Tok::End;
  std::string text;
  long value = 0;  // Int payload
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text);

  const Token& peek(std::size_t ahead = 0);
  Token next();
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] static void failAt(const std::string& message, SourceSpan at);

 private:
  Token scan();

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::vector<Token> lookahead_;
};

std::string describe(const Token& t);

}  // namespace gcv::detail
