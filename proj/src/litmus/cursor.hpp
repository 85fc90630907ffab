#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <string>

#include "lct/litmus/error.hpp"

namespace lct::litmus::detail {

// Character cursor with line/column tracking. Comment skipping collects
// `(* lct: key=value *)` metadata annotations as a side effect.
class Cursor {
 public:
  explicit Cursor(const std::string& text) : text_(text) {}

  std::map<std::string, std::string> metadata;

  bool eof() {
    skip();
    return pos_ >= text_.size();
  }

  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  char raw_peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void advance() {
    if (pos_ >= text_.size()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool try_consume(const std::string& s) {
    skip();
    if (text_.compare(pos_, s.size(), s) != 0) return false;
    for (size_t i = 0; i < s.size(); ++i) advance();
    return true;
  }

  void expect(const std::string& s) {
    if (!try_consume(s)) throw syntax_error(line_, col_, "'" + s + "'");
  }

  bool peek_is(const std::string& s) {
    skip();
    return text_.compare(pos_, s.size(), s) == 0;
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  bool peek_ident() {
    skip();
    return pos_ < text_.size() && ident_start(text_[pos_]);
  }

  std::string ident() {
    skip();
    if (!peek_ident()) throw syntax_error(line_, col_, "identifier");
    size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
    return text_.substr(start, pos_ - start);
  }

  bool peek_number() {
    skip();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    if (c == '-')
      return pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]));
    return std::isdigit(static_cast<unsigned char>(c));
  }

  int64_t number() {
    skip();
    if (!peek_number()) throw syntax_error(line_, col_, "integer");
    size_t start = pos_;
    if (text_[pos_] == '-') advance();
    bool hex = false;
    if (text_.compare(pos_, 2, "0x") == 0 || text_.compare(pos_, 2, "0X") == 0) {
      hex = true;
      advance();
      advance();
      while (pos_ < text_.size() && std::isxdigit(static_cast<unsigned char>(text_[pos_]))) advance();
    } else {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
    }
    std::string s = text_.substr(start, pos_ - start);
    return static_cast<int64_t>(std::stoll(s, nullptr, hex ? 16 : 10));
  }

  [[noreturn]] void fail(const std::string& expected) {
    skip();
    throw syntax_error(line_, col_, expected);
  }

  int line() {
    skip();
    return line_;
  }
  int col() {
    skip();
    return col_;
  }

  // Rest of the current physical line, comments included (asm bodies are
  // line-oriented).
  std::string rest_of_line() {
    size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '\n') advance();
    return text_.substr(start, pos_ - start);
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '(' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        size_t body_start = pos_ + 2;
        advance();
        advance();
        while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == ')')) advance();
        std::string body = text_.substr(body_start, pos_ - body_start);
        if (pos_ + 1 < text_.size()) {
          advance();
          advance();
        }
        record_metadata(body);
      } else {
        break;
      }
    }
  }

  void record_metadata(const std::string& body) {
    const std::string tag = " lct: ";
    if (body.compare(0, tag.size(), tag) != 0) return;
    std::string kv = body.substr(tag.size());
    auto eq = kv.find('=');
    if (eq == std::string::npos) return;
    std::string key = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    while (!value.empty() && value.back() == ' ') value.pop_back();
    metadata[key] = value;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace lct::litmus::detail
