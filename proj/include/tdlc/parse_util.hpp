#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tdlc {

// Raised by all element/subgroup/config parsers. The position is a byte
// offset into the input string and is embedded in what().
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        pos_(pos) {}

  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Raised when an operation is applied outside its structural preconditions
// (mixed group instances, non-compact subgroup where a compact one is
// required, and so on). Distinct from parse_error so the CLI can map the two
// onto different exit codes.
class structural_error : public std::runtime_error {
 public:
  explicit structural_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Minimal cursor for hand-rolled recursive-descent parsing of the canonical
// serialization formats.
struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  explicit Cursor(std::string_view text) : s(text) {}

  bool done() const { return pos >= s.size(); }
  char peek() const { return done() ? '\0' : s[pos]; }

  void skip_ws() {
    while (!done() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }

  bool try_eat(char c) {
    skip_ws();
    if (!done() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (done() || s[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }

  void expect(std::string_view lit) {
    skip_ws();
    if (s.substr(pos, lit.size()) != lit)
      fail("expected \"" + std::string(lit) + "\"");
    pos += lit.size();
  }

  bool try_eat(std::string_view lit) {
    skip_ws();
    if (s.substr(pos, lit.size()) == lit) {
      pos += lit.size();
      return true;
    }
    return false;
  }

  // Signed decimal integer literal as a string (digits only, optional '-').
  std::string integer_token() {
    skip_ws();
    std::size_t start = pos;
    if (!done() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    std::size_t digits = pos;
    while (!done() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == digits) fail("expected an integer");
    return std::string(s.substr(start, pos - start));
  }

  long long integer() {
    std::size_t at = pos;
    try {
      return std::stoll(integer_token());
    } catch (const std::out_of_range&) {
      throw parse_error("integer out of range", at);
    }
  }

  void expect_end() {
    skip_ws();
    if (!done()) fail("trailing input");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error(what, pos);
  }
};

}  // namespace tdlc
