#include "lexer.hpp"

#include <cctype>

namespace gcv::detail {

Lexer::Lexer(std::string_view text) : text_(text) {}

const Token& Lexer::peek(std::size_t ahead) {
  while (lookahead_.size() <= ahead) lookahead_.push_back(scan());
  return lookahead_[ahead];
}

Token Lexer::next() {
  peek(0);
  Token t = lookahead_.front();
  lookahead_.erase(lookahead_.begin());
  return t;
}

void Lexer::fail(const std::string& message) const {
  throw ParseError(message, {line_, col_});
}

void Lexer::failAt(const std::string& message, SourceSpan at) {
  throw ParseError(message, at);
}

static bool identStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
static bool identChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

Token Lexer::scan() {
  // skip whitespace and # comments
  while (pos_ < text_.size()) {
    char c = text_[pos_];
    if (c == '\n') {
      ++pos_;
      ++line_;
      col_ = 1;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++pos_;
      ++col_;
    } else if (c == '#') {
      while (pos_ < text_.size() && text_[pos_] != '\n') {
        ++pos_;
        ++col_;
      }
    } else {
      break;
    }
  }
  Token t;
  t.span = {line_, col_};
  if (pos_ >= text_.size()) {
    t.type = Tok::End;
    return t;
  }
  char c = text_[pos_];
  auto take = [&](Tok type, int n) {
    t.type = type;
    t.text = std::string(text_.substr(pos_, static_cast<std::size_t>(n)));
    pos_ += static_cast<std::size_t>(n);
    col_ += n;
    return t;
  };
  if (identStart(c)) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && identChar(text_[pos_])) {
      ++pos_;
      ++col_;
    }
    t.type = Tok::Ident;
    t.text = std::string(text_.substr(start, pos_ - start));
    return t;
  }
  if (std::isdigit(static_cast<unsigned char>(c))) {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      ++col_;
    }
    t.type = Tok::Int;
    t.text = std::string(text_.substr(start, pos_ - start));
    t.value = std::stol(t.text);
    return t;
  }
  if (c == '"') {
    SourceSpan open = t.span;
    ++pos_;
    ++col_;
    std::string out;
    while (true) {
      if (pos_ >= text_.size() || text_[pos_] == '\n')
        failAt("unterminated string literal", open);
      char d = text_[pos_];
      ++pos_;
      ++col_;
      if (d == '"') break;
      if (d == '\\') {
        if (pos_ >= text_.size()) failAt("unterminated string literal", open);
        char e = text_[pos_];
        ++pos_;
        ++col_;
        if (e == '"' || e == '\\')
          out.push_back(e);
        else
          fail(std::string("unknown escape '\\") + e + "' in literal");
      } else {
        out.push_back(d);
      }
    }
    t.type = Tok::String;
    t.text = std::move(out);
    return t;
  }
  switch (c) {
    case ':':
      if (text_.substr(pos_, 3) == "::=") return take(Tok::Define, 3);
      if (text_.substr(pos_, 2) == "::") return take(Tok::Select, 2);
      fail("stray ':'");
    case '|':
      return take(Tok::Pipe, 1);
    case '?':
      return take(Tok::Quest, 1);
    case '*':
      return take(Tok::Star, 1);
    case '+':
      return take(Tok::Plus, 1);
    case '(':
      return take(Tok::LParen, 1);
    case ')':
      return take(Tok::RParen, 1);
    case '{':
      return take(Tok::LBrace, 1);
    case '}':
      return take(Tok::RBrace, 1);
    case '[':
      return take(Tok::LBracket, 1);
    case ']':
      return take(Tok::RBracket, 1);
    case '<':
      return take(Tok::LAngle, 1);
    case '>':
      return take(Tok::RAngle, 1);
    case ';':
      return take(Tok::Semi, 1);
    case ',':
      return take(Tok::Comma, 1);
    case '-':
      return take(Tok::Dash, 1);
    default:
      fail(std::string("unexpected character '") + c + "'");
  }
}

std::string describe(const Token& t) {
  switch (t.type) {
    case Tok::End:
      return "end of input";
    case Tok::String:
      return "literal \"" + t.text + "\"";
    case Tok::Ident:
    case Tok::Int:
      return "'" + t.text + "'";
    default:
      return "'" + t.text + "'";
  }
}

}  // namespace gcv::detail
