#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "tdlc/parse_util.hpp"

namespace tdlc {

// Element of Sym(3), stored as an image table on {0,1,2}. Serialized in
// cycle notation on {1,2,3}: e, (12), (13), (23), (123), (132), where (123)
// maps 1->2->3->1.
class Perm3 {
 public:
  constexpr Perm3() : img_{0, 1, 2} {}
  constexpr explicit Perm3(std::array<std::uint8_t, 3> img) : img_(img) {}

  static constexpr Perm3 identity() { return Perm3(); }
  static constexpr Perm3 t12() { return Perm3({1, 0, 2}); }
  static constexpr Perm3 t13() { return Perm3({2, 1, 0}); }
  static constexpr Perm3 t23() { return Perm3({0, 2, 1}); }
  static constexpr Perm3 c123() { return Perm3({1, 2, 0}); }  // 1->2->3->1
  static constexpr Perm3 c132() { return Perm3({2, 0, 1}); }  // 1->3->2->1

  int operator()(int i) const { return img_[static_cast<std::size_t>(i)]; }

  // (a*b)(i) = a(b(i)): b acts first.
  Perm3 compose(const Perm3& b) const {
    std::array<std::uint8_t, 3> r{};
    for (int i = 0; i < 3; ++i)
      r[static_cast<std::size_t>(i)] =
          img_[b.img_[static_cast<std::size_t>(i)]];
    return Perm3(r);
  }
  Perm3 operator*(const Perm3& b) const { return compose(b); }

  Perm3 inverse() const {
    std::array<std::uint8_t, 3> r{};
    for (std::uint8_t i = 0; i < 3; ++i) r[img_[i]] = i;
    return Perm3(r);
  }

  // this conjugated by g: g * this * g^{-1}.
  Perm3 conjugated_by(const Perm3& g) const {
    return g.compose(*this).compose(g.inverse());
  }

  bool is_identity() const { return *this == identity(); }

  bool is_transposition() const {
    int fixed = 0;
    for (int i = 0; i < 3; ++i)
      if (img_[static_cast<std::size_t>(i)] == i) ++fixed;
    return fixed == 1;
  }

  bool is_three_cycle() const {
    return !is_identity() && !is_transposition();
  }

  int order() const {
    Perm3 a = *this;
    int n = 1;
    while (!a.is_identity()) {
      a = a.compose(*this);
      ++n;
    }
    return n;
  }

  bool operator==(const Perm3& o) const { return img_ == o.img_; }
  bool operator!=(const Perm3& o) const { return img_ != o.img_; }
  // Arbitrary stable order, for use as a map key and for canonical output.
  bool operator<(const Perm3& o) const { return img_ < o.img_; }

  std::string str() const {
    if (*this == identity()) return "e";
    if (*this == t12()) return "(12)";
    if (*this == t13()) return "(13)";
    if (*this == t23()) return "(23)";
    if (*this == c123()) return "(123)";
    return "(132)";
  }

  static const std::array<Perm3, 6>& all() {
    static const std::array<Perm3, 6> k = {identity(), t12(),  t13(),
                                           t23(),      c123(), c132()};
    return k;
  }

  static Perm3 read(Cursor& c) {
    c.skip_ws();
    if (c.try_eat('e')) return identity();
    std::size_t at = c.pos;
    c.expect('(');
    std::string digits;
    while (!c.done() && c.peek() >= '1' && c.peek() <= '3') {
      digits += c.peek();
      ++c.pos;
    }
    c.expect(')');
    if (digits == "12") return t12();
    if (digits == "13") return t13();
    if (digits == "23") return t23();
    if (digits == "123") return c123();
    if (digits == "132") return c132();
    throw parse_error("unknown cycle \"(" + digits + ")\"", at);
  }

  static Perm3 parse(std::string_view text) {
    Cursor c(text);
    Perm3 p = read(c);
    c.expect_end();
    return p;
  }

 private:
  std::array<std::uint8_t, 3> img_;
};

}  // namespace tdlc
