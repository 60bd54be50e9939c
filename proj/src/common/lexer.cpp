#include "nomhoas/common/lexer.hpp"

#include <cctype>

#include "nomhoas/nominal/syntax.hpp"

namespace nomhoas {

namespace {
constexpr std::string_view kMulti[] = {":-", "->", "/\\", "\\/", ":=", "=>"};
constexpr std::string_view kSingle = "()<>,.;#=~*:\\[]";
}  // namespace

std::vector<Token> tokenize(std::string_view text, bool allow_generated) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') { ++line; col = 1; }
      else ++col;
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) { advance(1); continue; }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size()) {
        char d = text[j];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'' || (allow_generated && d == '$')) ++j;
        else break;
      }
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), line, col});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      throw nominal::SyntaxError("unexpected digit", line, col);
    }
    bool matched = false;
    for (auto m : kMulti) {
      if (text.substr(i, m.size()) == m) {
        out.push_back({Tok::Punct, std::string(m), line, col});
        advance(m.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kSingle.find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), line, col});
      advance(1);
      continue;
    }
    throw nominal::SyntaxError(std::string("unexpected character '") + c + "'", line, col);
  }
  out.push_back({Tok::End, "<end of input>", line, col});
  return out;
}

const Token& TokenStream::peek(size_t k) const {
  size_t p = pos_ + k;
  return p < toks_.size() ? toks_[p] : toks_.back();
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::is(std::string_view punct, size_t k) const {
  const Token& t = peek(k);
  return t.kind == Tok::Punct && t.text == punct;
}

bool TokenStream::is_keyword(std::string_view kw, size_t k) const {
  const Token& t = peek(k);
  return t.kind == Tok::Ident && t.text == kw;
}

bool TokenStream::accept(std::string_view punct) {
  if (!is(punct)) return false;
  next();
  return true;
}

const Token& TokenStream::expect(std::string_view punct) {
  if (!is(punct)) fail("expected '" + std::string(punct) + "' but found '" + peek().text + "'");
  return next();
}

const Token& TokenStream::expect_ident(std::string_view what) {
  if (!is_ident()) fail("expected " + std::string(what) + " but found '" + peek().text + "'");
  return next();
}

void TokenStream::fail(const std::string& msg) const { fail_at(peek(), msg); }

void TokenStream::fail_at(const Token& t, const std::string& msg) {
  throw nominal::SyntaxError(msg, t.line, t.col);
}

}  // namespace nomhoas
