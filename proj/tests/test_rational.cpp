#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "tdlc/rational.hpp"
#include "tdlc/rng.hpp"

using namespace tdlc;

TEST_CASE("rationals normalize to lowest terms with positive denominator") {
  CHECK(Rational(Int(2), Int(4)).str() == "1/2");
  CHECK(Rational(Int(1), Int(-2)).str() == "-1/2");
  CHECK(Rational(Int(-6), Int(-4)).str() == "3/2");
  CHECK(Rational(0).str() == "0/1");
  CHECK(Rational(7).str() == "7/1");
  CHECK_THROWS_AS(Rational(Int(1), Int(0)), structural_error);
}

TEST_CASE("rational arithmetic is exact") {
  Rational a(Int(3), Int(4)), b(Int(-5), Int(6));
  CHECK((a + b).str() == "-1/12");
  CHECK((a - b).str() == "19/12");
  CHECK((a * b).str() == "-5/8");
  CHECK((a / b).str() == "-9/10");
  CHECK((-a).str() == "-3/4");
  CHECK_THROWS_AS(a / Rational(0), structural_error);

  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    long long n1 = rng.range(-20, 20), d1 = rng.range(1, 12);
    long long n2 = rng.range(-20, 20), d2 = rng.range(1, 12);
    Rational x{Int(n1), Int(d1)}, y{Int(n2), Int(d2)};
    // cross-multiplied reference values
    CHECK(x + y == Rational(Int(n1 * d2 + n2 * d1), Int(d1 * d2)));
    CHECK(x * y == Rational(Int(n1 * n2), Int(d1 * d2)));
    CHECK(x - y == Rational(Int(n1 * d2 - n2 * d1), Int(d1 * d2)));
  }
}

TEST_CASE("rational parsing round-trips and reports positions") {
  for (const char* text : {"0/1", "-3/4", "19/12", "7/1", "-1/2"}) {
    Rational r = Rational::parse(text);
    CHECK(r.str() == text);
  }
  CHECK(Rational::parse("5") == Rational(5));
  CHECK(Rational::parse("-12") == Rational(-12));
  CHECK(Rational::parse("4/6") == Rational(Int(2), Int(3)));
  CHECK_THROWS_AS(Rational::parse("1/0"), parse_error);
  CHECK_THROWS_AS(Rational::parse("x"), parse_error);
  CHECK_THROWS_AS(Rational::parse("1/2 extra"), parse_error);
  try {
    Rational::parse("3/");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.position() == 2);
    CHECK(std::string(e.what()).find("position 2") != std::string::npos);
  }
}

TEST_CASE("p-adic valuation agrees with the naive recount") {
  CHECK(val_p(Rational(8), Int(2)) == Valuation::of(3));
  CHECK(val_p(Rational(Int(3), Int(4)), Int(2)) == Valuation::of(-2));
  CHECK(val_p(Rational(Int(9), Int(5)), Int(3)) == Valuation::of(2));
  CHECK(val_p(Rational(0), Int(3)).is_infinite());
  CHECK(Valuation::inf() > Valuation::of(1000));
  CHECK(Valuation::of(2) + Valuation::of(3) == Valuation::of(5));
  CHECK((Valuation::of(2) + Valuation::inf()).is_infinite());

  Rng rng(5);
  for (long long p : {2LL, 3LL, 5LL}) {
    for (int i = 0; i < 100; ++i) {
      Rational q(Int(rng.range(1, 500) * (rng.coin() ? 1 : -1)),
                 Int(rng.range(1, 500)));
      CHECK(val_p(q, Int(p)) == Valuation::of(oracles::naive_val(q, p)));
    }
  }
  // multiplicativity
  for (int i = 0; i < 100; ++i) {
    Rational a(Int(rng.range(1, 99)), Int(rng.range(1, 99)));
    Rational b(Int(rng.range(1, 99)), Int(rng.range(1, 99)));
    CHECK(val_p(a * b, Int(2)) == val_p(a, Int(2)) + val_p(b, Int(2)));
  }
}

TEST_CASE("prime test and integer powers") {
  for (long long p : {2LL, 3LL, 5LL, 7LL, 11LL, 97LL}) CHECK(is_prime(Int(p)));
  for (long long n : {0LL, 1LL, 4LL, 6LL, 9LL, 91LL}) CHECK(!is_prime(Int(n)));
  CHECK(rational_pow(Int(2), 0) == Rational(1));
  CHECK(rational_pow(Int(2), 5) == Rational(32));
  CHECK(rational_pow(Int(3), -2) == Rational(Int(1), Int(9)));
  CHECK(rational_pow(Int(5), 3) * rational_pow(Int(5), -3) == Rational(1));
}

TEST_CASE("index values multiply and compare") {
  IndexValue a = IndexValue::finite(8);
  CHECK(a.pow(2) == IndexValue::finite(64));
  CHECK(a.pow(0).is_one());
  CHECK((a * IndexValue::inf()).infinite);
  CHECK(IndexValue::one() < a);
  CHECK(a < IndexValue::inf());
  CHECK(IndexValue::inf().pow(3).infinite);
  CHECK(IndexValue::inf().pow(0).is_one());
  CHECK_THROWS_AS(IndexValue::finite(0), structural_error);
  CHECK_THROWS_AS(a.pow(-1), structural_error);
  CHECK(a.str() == "8");
  CHECK(IndexValue::inf().str() == "inf");
}

TEST_CASE("deterministic rng streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 50; ++i) CHECK(a.next() == b.next());
  Rng c = Rng(42).fork(1), d = Rng(42).fork(1), e = Rng(42).fork(2);
  CHECK(c.next() == d.next());
  CHECK(c.seed() != e.seed());
  Rng r(9);
  for (int i = 0; i < 200; ++i) {
    long long v = r.range(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
    CHECK(r.below(5) < 5);
  }
  CHECK(r.below(0) == 0);
  CHECK(r.range(2, 2) == 2);
}
