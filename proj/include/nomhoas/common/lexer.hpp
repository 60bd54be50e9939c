#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace nomhoas {

enum class Tok { Ident, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

// Tokenizer shared by the .apl, .gm and .lp2 readers.  '%' starts a line
// comment.  Identifiers are [A-Za-z_][A-Za-z0-9_']*; when allow_generated is
// set, '$' is also accepted inside identifiers (machine-generated names).
// Throws nominal::SyntaxError.
std::vector<Token> tokenize(std::string_view text, bool allow_generated = false);

// Cursor over a token vector with the usual peek/expect helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(size_t k = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == Tok::End; }
  size_t mark() const { return pos_; }
  void reset(size_t m) { pos_ = m; }
  bool is(std::string_view punct, size_t k = 0) const;
  bool is_ident(size_t k = 0) const { return peek(k).kind == Tok::Ident; }
  bool is_keyword(std::string_view kw, size_t k = 0) const;
  bool accept(std::string_view punct);
  const Token& expect(std::string_view punct);
  const Token& expect_ident(std::string_view what = "identifier");
  [[noreturn]] void fail(const std::string& msg) const;
  [[noreturn]] static void fail_at(const Token& t, const std::string& msg);

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

inline bool is_upper_id(const std::string& s) { return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_'); }

}  // namespace nomhoas
