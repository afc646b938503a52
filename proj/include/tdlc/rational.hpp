#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <limits>
#include <string>
#include <string_view>

#include "tdlc/parse_util.hpp"

namespace tdlc {

using Int = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Exact rational number, always in lowest terms with a positive denominator.
// Backed by Boost.Multiprecision, which maintains the canonical form after
// every operation; this wrapper adds the serialization and p-adic machinery
// used throughout the library. There is no floating point anywhere.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(const Int& n) : v_(n) {}
  Rational(const Int& num, const Int& den) {
    if (den == 0) throw structural_error("rational with zero denominator");
    // the backend's component constructor wants the inputs pre-normalized
    Int n = num, d = den;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    Int g = boost::multiprecision::gcd(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    v_ = BigRat(n, d);
  }
  explicit Rational(const BigRat& v) : v_(v) {}

  Int num() const { return boost::multiprecision::numerator(v_); }
  Int den() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_ == 0; }
  bool is_integer() const { return den() == 1; }

  Rational operator-() const { return Rational(BigRat(-v_)); }
  Rational operator+(const Rational& o) const { return Rational(BigRat(v_ + o.v_)); }
  Rational operator-(const Rational& o) const { return Rational(BigRat(v_ - o.v_)); }
  Rational operator*(const Rational& o) const { return Rational(BigRat(v_ * o.v_)); }
  Rational operator/(const Rational& o) const {
    if (o.is_zero()) throw structural_error("rational division by zero");
    return Rational(BigRat(v_ / o.v_));
  }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator!=(const Rational& o) const { return v_ != o.v_; }
  bool operator<(const Rational& o) const { return v_ < o.v_; }
  bool operator<=(const Rational& o) const { return v_ <= o.v_; }
  bool operator>(const Rational& o) const { return v_ > o.v_; }
  bool operator>=(const Rational& o) const { return v_ >= o.v_; }

  // Canonical form "num/den", e.g. "-3/4", "0/1". Parsing also accepts a bare
  // integer "num"; printing always includes the denominator.
  std::string str() const {
    return num().str() + "/" + den().str();
  }

  static Rational read(Cursor& c) {
    std::size_t at = c.pos;
    Int n(c.integer_token());
    if (c.try_eat('/')) {
      Int d(c.integer_token());
      if (d == 0) throw parse_error("zero denominator", at);
      return Rational(n, d);
    }
    return Rational(n);
  }

  static Rational parse(std::string_view text) {
    Cursor c(text);
    Rational r = read(c);
    c.expect_end();
    return r;
  }

  const BigRat& value() const { return v_; }

 private:
  BigRat v_;
};

// p-adic valuation value: an integer or +infinity (the valuation of zero).
// +infinity compares greater than every finite value and absorbs addition.
struct Valuation {
  bool infinite = false;
  long long v = 0;

  static Valuation of(long long value) { return Valuation{false, value}; }
  static Valuation inf() { return Valuation{true, 0}; }

  bool is_infinite() const { return infinite; }

  bool operator==(const Valuation& o) const {
    return infinite == o.infinite && (infinite || v == o.v);
  }
  bool operator<(const Valuation& o) const {
    if (infinite) return false;
    if (o.infinite) return true;
    return v < o.v;
  }
  bool operator>=(const Valuation& o) const { return !(*this < o); }
  bool operator<=(const Valuation& o) const { return *this == o || *this < o; }
  bool operator>(const Valuation& o) const { return o < *this; }

  Valuation operator+(const Valuation& o) const {
    if (infinite || o.infinite) return inf();
    return of(v + o.v);
  }

  std::string str() const { return infinite ? "+inf" : std::to_string(v); }
};

// Multiplicity of the prime p in a nonzero integer.
inline long long p_multiplicity(Int n, const Int& p) {
  if (n == 0) throw structural_error("p-adic multiplicity of zero");
  long long count = 0;
  Int q, r;
  for (;;) {
    boost::multiprecision::divide_qr(n, p, q, r);
    if (r != 0) return count;
    n = q;
    ++count;
  }
}

// val_p(q) for a rational q; val_p(0) = +infinity. Exact, via repeated
// division of numerator and denominator.
inline Valuation val_p(const Rational& q, const Int& p) {
  if (q.is_zero()) return Valuation::inf();
  return Valuation::of(p_multiplicity(q.num(), p) - p_multiplicity(q.den(), p));
}

// Deterministic primality by trial division; configuration primes are small,
// so this is exact and fast enough for validation.
inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (Int d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

// p^k for integer k of either sign, as an exact rational.
inline Rational rational_pow(const Int& p, long long k) {
  Int t = 1;
  long long a = k < 0 ? -k : k;
  for (long long i = 0; i < a; ++i) t *= p;
  if (k < 0) return Rational(Int(1), t);
  return Rational(t);
}

}  // namespace tdlc
