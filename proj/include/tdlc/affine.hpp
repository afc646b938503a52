#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdlc/group.hpp"
#include "tdlc/parse_util.hpp"
#include "tdlc/rational.hpp"
#include "tdlc/rng.hpp"

namespace tdlc {

// Element (a, n) of Q_p x| Z with multiplication
//   (a, n) * (b, m) = (a + p^n b, n + m),
// i.e. the shift n acts on the translation part by multiplication by p^n.
// The prime is carried by the element so that instances with different
// primes cannot be mixed silently; the serialization is "(num/den,n)@p".
struct AffineElement {
  Rational lamp;
  long long shift = 0;
  long long prime = 2;

  bool operator==(const AffineElement& o) const {
    return prime == o.prime && shift == o.shift && lamp == o.lamp;
  }
};

// Compact open subgroups are the levels p^k Z_p x {0}. The two extra kinds
// appear as limits: the trivial group as a decreasing limit of levels, the
// full line Q_p x {0} as an increasing union of levels. Neither extra kind
// is open.
struct AffineSubgroup {
  enum class Kind { level, trivial_group, lamp_line };

  Kind kind = Kind::level;
  long long level = 0;  // meaningful for Kind::level only

  static AffineSubgroup make_level(long long k) {
    return AffineSubgroup{Kind::level, k};
  }
  static AffineSubgroup trivial() {
    return AffineSubgroup{Kind::trivial_group, 0};
  }
  static AffineSubgroup lamp_line() {
    return AffineSubgroup{Kind::lamp_line, 0};
  }

  bool is_compact() const { return kind != Kind::lamp_line; }
  bool is_open() const { return kind == Kind::level; }
  bool is_trivial() const { return kind == Kind::trivial_group; }

  bool operator==(const AffineSubgroup& o) const {
    return kind == o.kind && (kind != Kind::level || level == o.level);
  }
};

class AffineFamily {
 public:
  using Element = AffineElement;
  using Subgroup = AffineSubgroup;

  static constexpr const char* name = "affine";

  explicit AffineFamily(long long p) : p_(p) {
    if (!is_prime(Int(p)))
      throw structural_error("affine family requires a prime, got " +
                             std::to_string(p));
  }

  long long prime() const { return p_; }
  std::string instance_label() const {
    return std::string(name) + "(p=" + std::to_string(p_) + ")";
  }

  Element identity() const { return Element{Rational(0), 0, p_}; }

  Element make(Rational lamp, long long shift) const {
    return Element{std::move(lamp), shift, p_};
  }

  Element mul(const Element& a, const Element& b) const {
    check(a);
    check(b);
    return Element{a.lamp + rational_pow(Int(p_), a.shift) * b.lamp,
                   a.shift + b.shift, p_};
  }

  Element inv(const Element& a) const {
    check(a);
    return Element{-(rational_pow(Int(p_), -a.shift) * a.lamp), -a.shift, p_};
  }

  Element conj(const Element& x, const Element& g) const {
    return mul(mul(x, g), inv(x));
  }

  bool element_equal(const Element& a, const Element& b) const {
    check(a);
    check(b);
    return a == b;
  }

  Subgroup conj_subgroup(const Element& x, const Subgroup& V) const {
    check(x);
    if (V.kind != Subgroup::Kind::level) return V;  // both limits are normal
    return Subgroup::make_level(V.level + x.shift);
  }

  Subgroup intersect(const Subgroup& A, const Subgroup& B) const {
    using K = Subgroup::Kind;
    if (A.kind == K::trivial_group || B.kind == K::trivial_group)
      return Subgroup::trivial();
    if (A.kind == K::lamp_line) return B;
    if (B.kind == K::lamp_line) return A;
    return Subgroup::make_level(std::max(A.level, B.level));
  }

  // True iff B <= A.
  bool subgroup_contains(const Subgroup& A, const Subgroup& B) const {
    using K = Subgroup::Kind;
    if (B.kind == K::trivial_group) return true;
    if (A.kind == K::lamp_line) return true;
    if (A.kind == K::trivial_group || B.kind == K::lamp_line) return false;
    return A.level <= B.level;
  }

  bool subgroup_equal(const Subgroup& A, const Subgroup& B) const {
    return A == B;
  }

  IndexValue index(const Subgroup& A, const Subgroup& B) const {
    if (!subgroup_contains(A, B))
      throw structural_error("index requires B <= A");
    using K = Subgroup::Kind;
    if (A == B) return IndexValue::one();
    if (A.kind == K::level && B.kind == K::level) {
      Int v = 1;
      for (long long i = A.level; i < B.level; ++i) v *= p_;
      return IndexValue::finite(v);
    }
    // [level : trivial], [line : level], [line : trivial]: infinitely many
    // cosets, exhibited by the powers of p (resp. residues), so +infinity is
    // proved rather than guessed.
    return IndexValue::inf();
  }

  bool member(const Element& g, const Subgroup& V) const {
    check(g);
    using K = Subgroup::Kind;
    switch (V.kind) {
      case K::trivial_group: return g == identity();
      case K::lamp_line: return g.shift == 0;
      default:
        return g.shift == 0 &&
               val_p(g.lamp, Int(p_)) >= Valuation::of(V.level);
    }
  }

  // Limit of x^m V x^{-m}: the conjugates of a level move monotonically, so
  // a strictly shrinking chain contracts to the trivial group.
  std::optional<Subgroup> closed_form_limit(const Element& x,
                                            const Subgroup& V,
                                            Direction dir) const {
    check(x);
    if (V.kind != Subgroup::Kind::level) return std::nullopt;
    long long d = dir == Direction::forward ? x.shift : -x.shift;
    if (d > 0) return Subgroup::trivial();
    return V;  // d <= 0: the chain is constant or increasing, limit is V
  }

  // V = V+ V- holds exactly when one factor is all of V (the other limit is
  // then the trivial group) or V itself is trivial.
  std::pair<bool, std::string> factorization_holds(const Subgroup& V,
                                                   const Subgroup& P,
                                                   const Subgroup& M) const {
    if (subgroup_equal(P, V) || subgroup_equal(M, V))
      return {true, "one factor is all of V"};
    if (V.is_trivial() && P.is_trivial() && M.is_trivial())
      return {true, "V is trivial"};
    return {false, "both stable parts are proper in V"};
  }

  std::optional<std::pair<Element, Element>> factor_element(
      const Element& v, const Subgroup& P, const Subgroup& M) const {
    if (member(v, P)) return std::make_pair(v, identity());
    if (member(v, M)) return std::make_pair(identity(), v);
    return std::nullopt;
  }

  ClosureNote plus_plus_closure(const Element& x, const Subgroup& P) const {
    check(x);
    if (P.kind != Subgroup::Kind::level)
      return {true, "V++ stays " + format(P) + ", closed"};
    if (x.shift >= 0)
      return {true, "conjugation by x does not lower levels; V++ = " +
                        format(P) + ", closed"};
    return {true,
            "the union of levels p^(k+m*shift) exhausts the lamp line "
            "Q_p x {0}, which is closed"};
  }

  ContractionDecision in_contraction(const Element& g, const Element& x) const {
    check(g);
    check(x);
    if (g.shift != 0)
      return {false, ContractionDecision::Kind::shift_obstruction,
              "shift(g) = " + std::to_string(g.shift) +
                  " is invariant under conjugation, so x^n g x^-n never "
                  "approaches the identity"};
    std::string law = "val_p(x^n g x^-n) = n*" + std::to_string(x.shift) +
                      " + val_p(" + g.lamp.str() + ")";
    if (g.lamp.is_zero())
      return {true, ContractionDecision::Kind::valuation_growth,
              "g is the identity; " + law + " is +inf for every n"};
    if (x.shift > 0)
      return {true, ContractionDecision::Kind::valuation_growth,
              law + " grows without bound"};
    return {false, ContractionDecision::Kind::valuation_growth,
            law + " does not grow (shift(x) <= 0)"};
  }

  ContractionGroupKind contraction_group(const Element& x) const {
    check(x);
    return x.shift > 0 ? ContractionGroupKind::affine_lamp_line
                       : ContractionGroupKind::trivial;
  }

  ClosureNote contraction_closure(const Element& x) const {
    check(x);
    if (x.shift > 0)
      return {true, "con(x) is the lamp line Q_p x {0}, a closed subgroup"};
    return {true, "con(x) is trivial, hence closed"};
  }

  // Closed-form conjugator for y in VxV with shift(x) < 0: with
  // s = shift(x), t = (tau, 0) where tau = (lamp(y) - lamp(x)) / (1 - p^s)
  // satisfies t^{-1} y^k t x^{-k} = identity for every k >= 0.
  Element conjugator(const Element& y, const Element& x, const Subgroup&,
                     const Subgroup&) const {
    check(y);
    check(x);
    if (y.shift != x.shift)
      throw structural_error("conjugator requires shift(y) = shift(x)");
    if (x.shift == 0) return identity();
    Rational denom = Rational(1) - rational_pow(Int(p_), x.shift);
    return Element{(y.lamp - x.lamp) / denom, 0, p_};
  }

  // Every level is tidy for every element here, so the candidate set is the
  // levels in [-bound, bound], ordered by representation size.
  std::vector<Subgroup> scale_candidates(const Element&, int bound) const {
    std::vector<Subgroup> out;
    out.push_back(Subgroup::make_level(0));
    for (int k = 1; k <= bound; ++k) {
      out.push_back(Subgroup::make_level(k));
      out.push_back(Subgroup::make_level(-k));
    }
    return out;
  }

  Element random_element(Rng& rng, int bound) const {
    Rational lamp(0);
    if (rng.below(8) != 0) {
      long long num = rng.range(1, 9) * (rng.coin() ? 1 : -1);
      long long den = rng.range(1, 9);
      lamp = Rational(Int(num), Int(den)) *
             rational_pow(Int(p_), rng.range(-bound, bound));
    }
    return Element{lamp, rng.range(-bound, bound), p_};
  }

  Subgroup random_subgroup(Rng& rng, int bound) const {
    return Subgroup::make_level(rng.range(-bound, bound));
  }

  Element sample_member(const Subgroup& V, Rng& rng, int bound) const {
    using K = Subgroup::Kind;
    if (V.kind == K::trivial_group) return identity();
    if (V.kind == K::lamp_line) {
      Element e = random_element(rng, bound);
      return Element{e.lamp, 0, p_};
    }
    if (rng.below(8) == 0) return Element{Rational(0), 0, p_};
    long long num = rng.range(1, 9) * (rng.coin() ? 1 : -1);
    long long den = rng.range(1, 9);
    while (den % p_ == 0) den = rng.range(1, 9);
    long long extra = rng.range(0, bound);
    Rational r = Rational(Int(num), Int(den)) *
                 rational_pow(Int(p_), V.level + extra);
    return Element{r, 0, p_};
  }

  std::string format(const Element& g) const {
    check(g);
    return "(" + g.lamp.str() + "," + std::to_string(g.shift) + ")@" +
           std::to_string(p_);
  }

  std::string format(const Subgroup& V) const {
    using K = Subgroup::Kind;
    switch (V.kind) {
      case K::trivial_group: return "trivial";
      case K::lamp_line: return "lampline";
      default: return "level:" + std::to_string(V.level);
    }
  }

  Element parse_element(std::string_view text) const {
    Cursor c(text);
    c.expect('(');
    Rational lamp = Rational::read(c);
    c.expect(',');
    long long shift = c.integer();
    c.expect(')');
    if (c.try_eat('@')) {
      long long p = c.integer();
      if (p != p_)
        c.fail("element is tagged @" + std::to_string(p) +
               " but this instance has p=" + std::to_string(p_));
    }
    c.expect_end();
    return Element{lamp, shift, p_};
  }

  Subgroup parse_subgroup(std::string_view text) const {
    Cursor c(text);
    if (c.try_eat("level:")) {
      long long k = c.integer();
      c.expect_end();
      return Subgroup::make_level(k);
    }
    if (c.try_eat("trivial")) {
      c.expect_end();
      return Subgroup::trivial();
    }
    if (c.try_eat("lampline")) {
      c.expect_end();
      return Subgroup::lamp_line();
    }
    c.fail("expected level:k, trivial, or lampline");
  }

 private:
  void check(const Element& g) const {
    if (g.prime != p_)
      throw structural_error("mixed affine instances: element @" +
                             std::to_string(g.prime) + " used with p=" +
                             std::to_string(p_));
  }

  long long p_;
};

}  // namespace tdlc
