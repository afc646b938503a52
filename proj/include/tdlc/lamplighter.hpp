#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdlc/group.hpp"
#include "tdlc/parse_util.hpp"
#include "tdlc/rational.hpp"
#include "tdlc/rng.hpp"

namespace tdlc {

// Subset of Q that is either finite or co-finite, as the on-set of a lamp
// configuration in C_2^Q. Symmetric difference works uniformly: the stored
// point set of the result is always the symmetric difference of the stored
// point sets, and the result is co-finite iff exactly one operand is.
struct SupportSet {
  bool cofinite = false;
  std::set<Rational> pts;  // the support, or its complement when cofinite

  static SupportSet finite(std::set<Rational> p) {
    return SupportSet{false, std::move(p)};
  }
  static SupportSet cofinite_complement(std::set<Rational> p) {
    return SupportSet{true, std::move(p)};
  }

  bool contains(const Rational& t) const {
    return cofinite ? pts.count(t) == 0 : pts.count(t) > 0;
  }

  bool is_zero() const { return !cofinite && pts.empty(); }

  SupportSet sym_diff(const SupportSet& o) const {
    std::set<Rational> r;
    for (const auto& t : pts)
      if (!o.pts.count(t)) r.insert(t);
    for (const auto& t : o.pts)
      if (!pts.count(t)) r.insert(t);
    return SupportSet{cofinite != o.cofinite, std::move(r)};
  }

  SupportSet shifted(const Rational& q) const {
    std::set<Rational> r;
    for (const auto& t : pts) r.insert(t + q);
    return SupportSet{cofinite, std::move(r)};
  }

  bool operator==(const SupportSet& o) const {
    return cofinite == o.cofinite && pts == o.pts;
  }
};

// Element (f, q) of C_2^Q x| Q, where Q acts by translating lamp positions:
//   (f, q) * (g, r) = (f + g(. - q), q + r).
struct LampElement {
  SupportSet lamps;
  Rational shift;

  bool operator==(const LampElement& o) const {
    return shift == o.shift && lamps == o.lamps;
  }
};

// Subgroup descriptor. A window over a finite set S is the compact open
// subgroup {(f, 0) : f vanishes on S}; the empty window is the full lamp
// group. A ray window constrains f on the infinite set U = union of S + m*q
// over m >= 0; ray windows arise as limits of translated windows and are
// compact (closed inside the full lamp group) but not open.
struct LampSubgroup {
  enum class Kind { window, ray };

  Kind kind = Kind::window;
  std::set<Rational> base;
  Rational step;  // ray only; nonzero

  static LampSubgroup window(std::set<Rational> s) {
    return LampSubgroup{Kind::window, std::move(s), Rational(0)};
  }

  static LampSubgroup ray(std::set<Rational> s, const Rational& q) {
    if (q.is_zero()) throw structural_error("ray window requires nonzero step");
    if (s.empty()) return window({});
    // canonical generators: drop points reachable from another by k*q, k >= 1
    std::set<Rational> keep;
    for (const auto& t : s) {
      bool redundant = false;
      for (const auto& u : s) {
        if (u == t) continue;
        Rational d = (t - u) / q;
        if (d.is_integer() && d > Rational(0)) {
          redundant = true;
          break;
        }
      }
      if (!redundant) keep.insert(t);
    }
    return LampSubgroup{Kind::ray, std::move(keep), q};
  }

  bool contains_point(const Rational& t) const {
    if (kind == Kind::window) return base.count(t) > 0;
    for (const auto& s : base) {
      Rational d = (t - s) / step;
      if (d.is_integer() && d >= Rational(0)) return true;
    }
    return false;
  }

  bool is_compact() const { return true; }
  bool is_open() const { return kind == Kind::window; }
  bool is_trivial() const { return false; }

  bool operator==(const LampSubgroup& o) const {
    return kind == o.kind && base == o.base &&
           (kind == Kind::window || step == o.step);
  }
};

class LampFamily {
 public:
  using Element = LampElement;
  using Subgroup = LampSubgroup;

  static constexpr const char* name = "lamplighter";

  std::string instance_label() const { return name; }

  Element identity() const { return Element{SupportSet{}, Rational(0)}; }

  Element make(SupportSet lamps, Rational shift) const {
    return Element{std::move(lamps), std::move(shift)};
  }

  Element mul(const Element& a, const Element& b) const {
    return Element{a.lamps.sym_diff(b.lamps.shifted(a.shift)),
                   a.shift + b.shift};
  }

  Element inv(const Element& a) const {
    return Element{a.lamps.shifted(-a.shift), -a.shift};
  }

  Element conj(const Element& x, const Element& g) const {
    return mul(mul(x, g), inv(x));
  }

  bool element_equal(const Element& a, const Element& b) const {
    return a == b;
  }

  Subgroup conj_subgroup(const Element& x, const Subgroup& V) const {
    std::set<Rational> moved;
    for (const auto& t : V.base) moved.insert(t + x.shift);
    if (V.kind == Subgroup::Kind::window)
      return Subgroup::window(std::move(moved));
    return Subgroup::ray(std::move(moved), V.step);
  }

  Subgroup intersect(const Subgroup& A, const Subgroup& B) const {
    if (A.kind != Subgroup::Kind::window || B.kind != Subgroup::Kind::window)
      throw structural_error("intersection of ray windows is not needed and "
                             "not implemented");
    std::set<Rational> u = A.base;
    u.insert(B.base.begin(), B.base.end());
    return Subgroup::window(std::move(u));
  }

  // B <= A iff every point constrained by A is constrained by B.
  bool subgroup_contains(const Subgroup& A, const Subgroup& B) const {
    if (A.kind == Subgroup::Kind::window) {
      for (const auto& t : A.base)
        if (!B.contains_point(t)) return false;
      return true;
    }
    if (B.kind == Subgroup::Kind::ray && A.step == B.step) {
      for (const auto& t : A.base)
        if (!B.contains_point(t)) return false;
      return true;
    }
    if (B.kind == Subgroup::Kind::window) return false;  // infinite vs finite
    throw structural_error("containment of rays with different steps is not "
                           "implemented");
  }

  bool subgroup_equal(const Subgroup& A, const Subgroup& B) const {
    return A == B;
  }

  IndexValue index(const Subgroup& A, const Subgroup& B) const {
    if (A.kind != Subgroup::Kind::window || B.kind != Subgroup::Kind::window)
      throw structural_error("index is defined here for finite windows only");
    if (!subgroup_contains(A, B))
      throw structural_error("index requires B <= A");
    Int v = 1;
    for (const auto& t : B.base)
      if (!A.base.count(t)) v *= 2;
    return IndexValue::finite(v);
  }

  bool member(const Element& g, const Subgroup& V) const {
    if (!g.shift.is_zero()) return false;
    if (V.kind == Subgroup::Kind::window) {
      for (const auto& t : V.base)
        if (g.lamps.contains(t)) return false;
      return true;
    }
    if (g.lamps.cofinite) return false;  // co-finite support meets any ray
    for (const auto& t : g.lamps.pts)
      if (V.contains_point(t)) return false;
    return true;
  }

  // A translated window never returns: for nonzero shift the conjugates
  // W_{S + m q} contract monotonically onto the ray window.
  std::optional<Subgroup> closed_form_limit(const Element& x,
                                            const Subgroup& V,
                                            Direction dir) const {
    if (V.kind != Subgroup::Kind::window) return std::nullopt;
    if (x.shift.is_zero() || V.base.empty()) return V;
    Rational step = dir == Direction::forward ? x.shift : -x.shift;
    return Subgroup::ray(V.base, step);
  }

  std::pair<bool, std::string> factorization_holds(const Subgroup& V,
                                                   const Subgroup& P,
                                                   const Subgroup& M) const {
    if (V.kind != Subgroup::Kind::window)
      throw structural_error("factorization test requires a compact open V");
    std::set<Rational> overlap = common_points(P, M);
    std::set<Rational> excess;
    for (const auto& t : overlap)
      if (!V.base.count(t)) excess.insert(t);
    if (excess.empty())
      return {true, "the windows of V+ and V- overlap only inside the window "
                    "of V"};
    std::string pts;
    for (const auto& t : excess) {
      if (!pts.empty()) pts += ",";
      pts += t.str();
    }
    return {false, "a lamp at {" + pts + "} lies in V but in neither factor"};
  }

  // Split v = a * b with a avoiding the window of P and b the rest. Returns
  // nothing only when the split is not representable (co-finite support
  // against an infinite ray window), which cannot occur for a tidy V.
  std::optional<std::pair<Element, Element>> factor_element(
      const Element& v, const Subgroup& P, const Subgroup& M) const {
    if (!v.shift.is_zero()) return std::nullopt;
    std::set<Rational> onto_b;
    if (P.kind == Subgroup::Kind::window) {
      for (const auto& t : P.base)
        if (v.lamps.contains(t)) onto_b.insert(t);
    } else {
      if (v.lamps.cofinite) return std::nullopt;
      for (const auto& t : v.lamps.pts)
        if (P.contains_point(t)) onto_b.insert(t);
    }
    Element b{SupportSet::finite(onto_b), Rational(0)};
    Element a{v.lamps.sym_diff(b.lamps), Rational(0)};
    if (!member(a, P) || !member(b, M)) return std::nullopt;
    return std::make_pair(a, b);
  }

  ClosureNote plus_plus_closure(const Element& x, const Subgroup& P) const {
    if (P.kind == Subgroup::Kind::window) {
      if (!x.shift.is_zero() && !P.base.empty())
        throw structural_error("V+ is not x-invariant");
      return {true, "V+ is fixed by conjugation by x, so V++ = V+ is compact, "
                    "hence closed"};
    }
    return {false,
            "V++ is the strictly increasing union of the subgroups W_{U+k*q}; "
            "it omits configurations lighting infinitely many ray points that "
            "its closure contains, so it is not closed"};
  }

  ContractionDecision in_contraction(const Element& g, const Element& x) const {
    if (!g.shift.is_zero())
      return {false, ContractionDecision::Kind::shift_obstruction,
              "shift(g) = " + g.shift.str() +
                  " is invariant under conjugation, so x^n g x^-n never "
                  "approaches the identity"};
    if (x.shift.is_zero()) {
      std::string detail =
          "conjugation by x fixes every pure lamp configuration (lamps "
          "commute and shift(x) = 0), so the trajectory is constant";
      if (g.lamps.is_zero())
        return {true, ContractionDecision::Kind::coordinate_periodicity,
                detail + " and equal to e"};
      return {false, ContractionDecision::Kind::coordinate_periodicity,
              detail + " and never e"};
    }
    if (g.lamps.cofinite)
      return {false, ContractionDecision::Kind::support_escape,
              "supp(g) is co-finite, so supp(g) + n*shift(x) meets every "
              "nonempty finite window for all large n"};
    return {true, ContractionDecision::Kind::support_escape,
            "supp(g) is finite, so supp(g) + n*shift(x) leaves every finite "
            "window eventually"};
  }

  ContractionGroupKind contraction_group(const Element& x) const {
    return x.shift.is_zero() ? ContractionGroupKind::trivial
                             : ContractionGroupKind::lamp_finite_support;
  }

  ClosureNote contraction_closure(const Element& x) const {
    if (x.shift.is_zero()) return {true, "con(x) is trivial, hence closed"};
    return {false,
            "con(x) is the group of finitely supported lamp configurations; "
            "it is dense in the full lamp group C_2^Q but omits, e.g., the "
            "all-on configuration, so it is not closed"};
  }

  // For tidy V and y in VxV the conjugator can always be taken to be t = e:
  // the only tidy subgroups with nonzero shift are full-lamp-group windows,
  // whose membership constrains the shift alone.
  Element conjugator(const Element&, const Element&, const Subgroup&,
                     const Subgroup&) const {
    return identity();
  }

  std::vector<Subgroup> scale_candidates(const Element& x, int bound) const {
    std::vector<Subgroup> out;
    auto push = [&out](Subgroup v) {
      for (const auto& seen : out)
        if (seen == v) return;
      out.push_back(std::move(v));
    };
    push(Subgroup::window({}));
    int taken = 0;
    for (const auto& t : x.lamps.pts) {
      if (taken >= std::min(bound, 2)) break;
      push(Subgroup::window({t}));
      if (!x.shift.is_zero()) push(Subgroup::window({t, t + x.shift}));
      ++taken;
    }
    if (x.lamps.pts.empty()) push(Subgroup::window({Rational(0)}));
    return out;
  }

  Element random_element(Rng& rng, int bound) const {
    SupportSet lamps;
    if (rng.below(8) == 0) lamps.cofinite = true;
    std::uint64_t n = rng.below(static_cast<std::uint64_t>(bound) + 1);
    for (std::uint64_t j = 0; j < n; ++j) lamps.pts.insert(grid_point(rng));
    Rational shift(0);
    if (rng.below(4) != 0) shift = grid_point(rng);
    return Element{std::move(lamps), shift};
  }

  Subgroup random_subgroup(Rng& rng, int bound) const {
    std::set<Rational> s;
    std::uint64_t n = rng.below(static_cast<std::uint64_t>(bound) + 1);
    for (std::uint64_t j = 0; j < n; ++j) s.insert(grid_point(rng));
    return Subgroup::window(std::move(s));
  }

  Element sample_member(const Subgroup& V, Rng& rng, int bound) const {
    SupportSet lamps;
    if (V.kind == Subgroup::Kind::window && rng.below(8) == 0) {
      lamps.cofinite = true;
      lamps.pts = V.base;  // complement contains the window: vanishes on it
      return Element{std::move(lamps), Rational(0)};
    }
    std::uint64_t n = rng.below(static_cast<std::uint64_t>(bound) + 1);
    for (std::uint64_t j = 0; j < n; ++j) {
      Rational t = grid_point(rng);
      if (!V.contains_point(t)) lamps.pts.insert(t);
    }
    return Element{std::move(lamps), Rational(0)};
  }

  std::string format(const Element& g) const {
    std::string out = format_points(g.lamps.pts);
    if (g.lamps.cofinite) out += "+cofinite";
    out += "|shift:" + g.shift.str();
    return out;
  }

  std::string format(const Subgroup& V) const {
    std::string out = "window:" + format_points(V.base);
    if (V.kind == Subgroup::Kind::ray) out += "@ray:" + V.step.str();
    return out;
  }

  Element parse_element(std::string_view text) const {
    Cursor c(text);
    std::set<Rational> pts = read_points(c);
    bool cof = c.try_eat("+cofinite");
    c.expect('|');
    c.expect("shift:");
    Rational shift = Rational::read(c);
    c.expect_end();
    return Element{SupportSet{cof, std::move(pts)}, shift};
  }

  Subgroup parse_subgroup(std::string_view text) const {
    Cursor c(text);
    c.expect("window:");
    std::set<Rational> pts = read_points(c);
    if (c.try_eat("@ray:")) {
      std::size_t at = c.pos;
      Rational step = Rational::read(c);
      if (step.is_zero()) throw parse_error("ray step must be nonzero", at);
      c.expect_end();
      return Subgroup::ray(std::move(pts), step);
    }
    c.expect_end();
    return Subgroup::window(std::move(pts));
  }

 private:
  // Finite-by-construction overlap of the forward and backward windows: a
  // point s1 + a*q = s2 - b*q (a, b >= 0) exists iff (s2 - s1)/q is a
  // nonnegative integer d, contributing s1, s1+q, ..., s1+d*q.
  static std::set<Rational> common_points(const Subgroup& P,
                                          const Subgroup& M) {
    using K = Subgroup::Kind;
    std::set<Rational> out;
    if (P.kind == K::window && M.kind == K::window) {
      for (const auto& t : P.base)
        if (M.base.count(t)) out.insert(t);
      return out;
    }
    if (P.kind == K::window) {
      for (const auto& t : P.base)
        if (M.contains_point(t)) out.insert(t);
      return out;
    }
    if (M.kind == K::window) {
      for (const auto& t : M.base)
        if (P.contains_point(t)) out.insert(t);
      return out;
    }
    if (P.step != -M.step)
      throw structural_error("ray overlap needs opposite steps");
    for (const auto& s1 : P.base) {
      for (const auto& s2 : M.base) {
        Rational d = (s2 - s1) / P.step;
        if (!d.is_integer() || d < Rational(0)) continue;
        for (Rational a(0); a <= d; a += Rational(1))
          out.insert(s1 + a * P.step);
      }
    }
    return out;
  }

  static std::string format_points(const std::set<Rational>& pts) {
    std::string out = "{";
    bool first = true;
    for (const auto& t : pts) {
      if (!first) out += ",";
      first = false;
      out += t.str();
    }
    return out + "}";
  }

  static std::set<Rational> read_points(Cursor& c) {
    std::set<Rational> out;
    c.expect('{');
    if (!c.try_eat('}')) {
      for (;;) {
        out.insert(Rational::read(c));
        if (c.try_eat('}')) break;
        c.expect(',');
      }
    }
    return out;
  }

  static Rational grid_point(Rng& rng) {
    return Rational(Int(rng.range(-4, 4)), Int(rng.range(1, 3)));
  }
};

}  // namespace tdlc
