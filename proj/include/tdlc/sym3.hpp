#pragma once

#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdlc/group.hpp"
#include "tdlc/parse_util.hpp"
#include "tdlc/perm3.hpp"
#include "tdlc/rng.hpp"

namespace tdlc {

// Element of the restricted power of Sym(3) over N: a sequence (x_0, x_1, ...)
// with x_i in {e,(12)} for almost all i. Representable elements are the
// eventually constant ones: finitely many explicit exceptions over a tail
// value in {e,(12)}. This class of sequences is closed under products and
// inverses because {e,(12)} is a subgroup. Serialization:
// "{idx:cycle,...}|tail:cycle@cutoff" with the cutoff derived as one past the
// largest exception index.
class Sym3Element {
 public:
  Sym3Element() : tail_(Perm3::identity()) {}

  Sym3Element(std::map<long long, Perm3> exceptions, Perm3 tail)
      : tail_(tail) {
    if (!(tail == Perm3::identity() || tail == Perm3::t12()))
      throw structural_error("tail must be e or (12), got " + tail.str());
    for (auto& [idx, value] : exceptions) {
      if (idx < 0) throw structural_error("negative coordinate index");
      if (value != tail) exceptions_.emplace(idx, value);
    }
  }

  Perm3 coordinate(long long i) const {
    auto it = exceptions_.find(i);
    return it == exceptions_.end() ? tail_ : it->second;
  }

  Perm3 tail() const { return tail_; }
  const std::map<long long, Perm3>& exceptions() const { return exceptions_; }

  long long cutoff() const {
    return exceptions_.empty() ? 0 : exceptions_.rbegin()->first + 1;
  }

  int order() const {
    int n = tail_.order();
    for (const auto& [idx, value] : exceptions_)
      n = std::lcm(n, value.order());
    return n;
  }

  bool operator==(const Sym3Element& o) const {
    return tail_ == o.tail_ && exceptions_ == o.exceptions_;
  }

 private:
  std::map<long long, Perm3> exceptions_;
  Perm3 tail_;
};

// Compact open subgroup descriptor: coordinates below the floor are pinned to
// e; coordinate i >= floor ranges over {e, pattern(i)} where the pattern is
// (12) by default with finitely many exceptions in {e,(12),(13),(23)}. An
// exception value e pins that single coordinate. Only the default (12) can
// occur: any other default would describe a subgroup that is not open (its
// elements would have to be trivial in almost every coordinate). Canonical
// form: exceptions below the floor are dropped, a pinned coordinate at the
// floor is absorbed into the floor, and (12) entries are elided.
class Sym3Subgroup {
 public:
  Sym3Subgroup() : floor_(0) {}

  Sym3Subgroup(long long floor, std::map<long long, Perm3> pattern)
      : floor_(floor) {
    if (floor < 0) throw structural_error("negative floor");
    for (auto& [idx, value] : pattern) {
      if (idx < floor_) continue;
      if (value.is_three_cycle())
        throw structural_error("pattern value must be e or a transposition");
      if (value != Perm3::t12()) pattern_.emplace(idx, value);
    }
    // absorb pinned coordinates adjacent to the floor
    for (;;) {
      auto it = pattern_.find(floor_);
      if (it == pattern_.end() || !it->second.is_identity()) break;
      pattern_.erase(it);
      ++floor_;
    }
  }

  long long floor() const { return floor_; }
  const std::map<long long, Perm3>& pattern() const { return pattern_; }

  // The permutation sigma with coordinate group {e, sigma}; sigma = e means
  // the coordinate is pinned.
  Perm3 coordinate_group(long long i) const {
    if (i < floor_) return Perm3::identity();
    auto it = pattern_.find(i);
    return it == pattern_.end() ? Perm3::t12() : it->second;
  }

  bool is_compact() const { return true; }
  bool is_open() const { return true; }
  bool is_trivial() const { return false; }

  bool operator==(const Sym3Subgroup& o) const {
    return floor_ == o.floor_ && pattern_ == o.pattern_;
  }

 private:
  long long floor_;
  std::map<long long, Perm3> pattern_;
};

class Sym3Family {
 public:
  using Element = Sym3Element;
  using Subgroup = Sym3Subgroup;

  static constexpr const char* name = "sym3";

  std::string instance_label() const { return name; }

  Element identity() const { return Element(); }

  Element mul(const Element& a, const Element& b) const {
    std::map<long long, Perm3> ex;
    for (long long i : relevant_indices(a, b))
      ex.emplace(i, a.coordinate(i) * b.coordinate(i));
    return Element(std::move(ex), a.tail() * b.tail());
  }

  Element inv(const Element& a) const {
    std::map<long long, Perm3> ex;
    for (const auto& [idx, value] : a.exceptions())
      ex.emplace(idx, value.inverse());
    return Element(std::move(ex), a.tail());  // tail has order <= 2
  }

  Element conj(const Element& x, const Element& g) const {
    return mul(mul(x, g), inv(x));
  }

  bool element_equal(const Element& a, const Element& b) const {
    return a == b;
  }

  Subgroup conj_subgroup(const Element& x, const Subgroup& V) const {
    std::map<long long, Perm3> pat;
    std::set<long long> idxs;
    for (const auto& [idx, value] : V.pattern()) idxs.insert(idx);
    for (const auto& [idx, value] : x.exceptions()) idxs.insert(idx);
    for (long long i : idxs) {
      if (i < V.floor()) continue;
      pat.emplace(i, V.coordinate_group(i).conjugated_by(x.coordinate(i)));
    }
    return Subgroup(V.floor(), std::move(pat));
  }

  Subgroup intersect(const Subgroup& A, const Subgroup& B) const {
    long long fl = std::max(A.floor(), B.floor());
    std::map<long long, Perm3> pat;
    for (long long i : pattern_indices(A, B)) {
      if (i < fl) continue;
      Perm3 a = A.coordinate_group(i);
      Perm3 b = B.coordinate_group(i);
      pat.emplace(i, a == b ? a : Perm3::identity());
    }
    return Subgroup(fl, std::move(pat));
  }

  bool subgroup_contains(const Subgroup& A, const Subgroup& B) const {
    long long hi = std::max(A.floor(), B.floor());
    std::set<long long> idxs = pattern_indices(A, B);
    for (long long i = 0; i < hi; ++i) idxs.insert(i);
    for (long long i : idxs) {
      Perm3 b = B.coordinate_group(i);
      if (b.is_identity()) continue;
      if (A.coordinate_group(i) != b) return false;
    }
    return true;
  }

  bool subgroup_equal(const Subgroup& A, const Subgroup& B) const {
    return A == B;
  }

  IndexValue index(const Subgroup& A, const Subgroup& B) const {
    if (!subgroup_contains(A, B))
      throw structural_error("index requires B <= A");
    long long hi = std::max(A.floor(), B.floor());
    std::set<long long> idxs = pattern_indices(A, B);
    for (long long i = 0; i < hi; ++i) idxs.insert(i);
    Int v = 1;
    for (long long i : idxs)
      if (!A.coordinate_group(i).is_identity() &&
          B.coordinate_group(i).is_identity())
        v *= 2;
    return IndexValue::finite(v);
  }

  bool member(const Element& g, const Subgroup& V) const {
    if (!(g.tail() == Perm3::identity() || g.tail() == Perm3::t12()))
      return false;  // unreachable; the element invariant enforces this
    std::set<long long> idxs;
    for (const auto& [idx, value] : g.exceptions()) idxs.insert(idx);
    for (const auto& [idx, value] : V.pattern()) idxs.insert(idx);
    for (long long i = 0; i < V.floor(); ++i) idxs.insert(i);
    for (long long i : idxs) {
      Perm3 gi = g.coordinate(i);
      if (gi.is_identity()) continue;
      if (gi != V.coordinate_group(i)) return false;
    }
    return true;
  }

  // The conjugation orbit of every descriptor is finite (each coordinate
  // orbit has size dividing the order of x there), so the limit machinery
  // needs no closed form: the generic periodic-orbit loop terminates.
  std::optional<Subgroup> closed_form_limit(const Element&, const Subgroup&,
                                            Direction) const {
    return std::nullopt;
  }

  std::pair<bool, std::string> factorization_holds(const Subgroup& V,
                                                   const Subgroup& P,
                                                   const Subgroup& M) const {
    if (subgroup_equal(P, V) || subgroup_equal(M, V))
      return {true, "one factor is all of V"};
    if (subgroup_equal(P, M))
      return {false,
              "V+ = V- is the x-stable part and V strictly contains it"};
    throw structural_error("unexpected stable parts in factorization test");
  }

  std::optional<std::pair<Element, Element>> factor_element(
      const Element& v, const Subgroup& P, const Subgroup& M) const {
    if (member(v, P)) return std::make_pair(v, identity());
    if (member(v, M)) return std::make_pair(identity(), v);
    return std::nullopt;
  }

  ClosureNote plus_plus_closure(const Element& x, const Subgroup& P) const {
    if (!subgroup_equal(conj_subgroup(x, P), P))
      throw structural_error("V+ is not x-invariant");
    return {true, "V+ is invariant under conjugation by x, so V++ = V+ is "
                  "compact, hence closed"};
  }

  ContractionDecision in_contraction(const Element& g, const Element& x) const {
    int d = x.order();
    std::string detail = "x has order " + std::to_string(d) +
                         ", so x^n g x^-n is periodic in n";
    if (g == identity())
      return {true, ContractionDecision::Kind::coordinate_periodicity,
              detail + " and constantly e"};
    return {false, ContractionDecision::Kind::coordinate_periodicity,
            detail + "; a periodic sequence converges to e only if it is "
                     "constantly e, and g != e"};
  }

  ContractionGroupKind contraction_group(const Element&) const {
    return ContractionGroupKind::trivial;
  }

  ClosureNote contraction_closure(const Element&) const {
    return {true, "con(x) is trivial, hence closed"};
  }

  // Unreachable through the engine: con(x^{-1}) is always trivial here, so
  // the identity conjugator branch applies.
  Element conjugator(const Element&, const Element&, const Subgroup&,
                     const Subgroup&) const {
    return identity();
  }

  // Candidates per floor: the standard subgroup and the one adapted to x
  // (pattern matching the transposition coordinates of x, pinned at its
  // 3-cycle coordinates). The adapted subgroup is normalized by x, so the
  // set provably contains a tidy candidate.
  std::vector<Subgroup> scale_candidates(const Element& x, int bound) const {
    std::vector<Subgroup> out;
    auto push = [&out](Subgroup v) {
      for (const auto& seen : out)
        if (seen == v) return;
      out.push_back(std::move(v));
    };
    for (long long fl = 0; fl <= bound; ++fl) {
      push(Subgroup(fl, {}));
      std::map<long long, Perm3> pat;
      for (const auto& [idx, value] : x.exceptions()) {
        if (idx < fl) continue;
        if (value.is_three_cycle())
          pat.emplace(idx, Perm3::identity());
        else if (value.is_transposition())
          pat.emplace(idx, value);
      }
      push(Subgroup(fl, std::move(pat)));
    }
    return out;
  }

  Element random_element(Rng& rng, int bound) const {
    std::map<long long, Perm3> ex;
    std::uint64_t n = rng.below(static_cast<std::uint64_t>(bound) + 1);
    for (std::uint64_t j = 0; j < n; ++j) {
      long long idx = rng.range(0, 2 * bound);
      ex[idx] = Perm3::all()[rng.below(6)];
    }
    Perm3 tail = rng.coin() ? Perm3::t12() : Perm3::identity();
    return Element(std::move(ex), tail);
  }

  Subgroup random_subgroup(Rng& rng, int bound) const {
    static const std::array<Perm3, 4> values = {
        Perm3::identity(), Perm3::t12(), Perm3::t13(), Perm3::t23()};
    long long fl = rng.range(0, std::min(bound, 2));
    std::map<long long, Perm3> pat;
    std::uint64_t n = rng.below(static_cast<std::uint64_t>(bound) + 1);
    for (std::uint64_t j = 0; j < n; ++j) {
      long long idx = rng.range(0, 2 * bound);
      pat[idx] = values[rng.below(4)];
    }
    return Subgroup(fl, std::move(pat));
  }

  Element sample_member(const Subgroup& V, Rng& rng, int bound) const {
    Perm3 tail = rng.coin() ? Perm3::t12() : Perm3::identity();
    std::map<long long, Perm3> ex;
    for (long long i = 0; i < V.floor(); ++i) ex[i] = Perm3::identity();
    for (const auto& [idx, value] : V.pattern())
      ex[idx] = rng.coin() ? value : Perm3::identity();
    for (int j = 0; j < bound; ++j) {
      long long idx = V.floor() + rng.range(0, 2 * bound);
      if (V.pattern().count(idx)) continue;
      ex[idx] = rng.coin() ? Perm3::t12() : Perm3::identity();
    }
    return Element(std::move(ex), tail);
  }

  std::string format(const Element& g) const {
    std::string out = "{";
    bool first = true;
    for (const auto& [idx, value] : g.exceptions()) {
      if (!first) out += ",";
      first = false;
      out += std::to_string(idx) + ":" + value.str();
    }
    out += "}|tail:" + g.tail().str() + "@" + std::to_string(g.cutoff());
    return out;
  }

  std::string format(const Subgroup& V) const {
    std::string out = "floor:" + std::to_string(V.floor()) + ";pat:{";
    bool first = true;
    for (const auto& [idx, value] : V.pattern()) {
      if (!first) out += ",";
      first = false;
      out += std::to_string(idx) + ":" + value.str();
    }
    out += "};default:(12)";
    return out;
  }

  Element parse_element(std::string_view text) const {
    Cursor c(text);
    std::map<long long, Perm3> ex = read_perm_map(c);
    c.expect('|');
    c.expect("tail:");
    Perm3 tail = Perm3::read(c);
    if (!(tail == Perm3::identity() || tail == Perm3::t12()))
      c.fail("tail must be e or (12)");
    if (c.try_eat('@')) {
      long long cut = c.integer();
      if (cut < 0) c.fail("negative cutoff");
      // the cutoff is advisory; the canonical value is recomputed
    }
    c.expect_end();
    return Element(std::move(ex), tail);
  }

  Subgroup parse_subgroup(std::string_view text) const {
    Cursor c(text);
    c.expect("floor:");
    long long fl = c.integer();
    c.skip_ws();
    if (c.done()) return Subgroup(fl, {});  // shorthand for an empty pattern
    c.expect(';');
    c.expect("pat:");
    std::map<long long, Perm3> pat = read_perm_map(c);
    c.expect(';');
    c.expect("default:");
    std::size_t at = c.pos;
    Perm3 def = Perm3::read(c);
    if (def != Perm3::t12())
      throw parse_error(
          "only default:(12) describes a compact open subgroup here", at);
    c.expect_end();
    return Subgroup(fl, std::move(pat));
  }

 private:
  static std::map<long long, Perm3> read_perm_map(Cursor& c) {
    std::map<long long, Perm3> out;
    c.expect('{');
    if (!c.try_eat('}')) {
      for (;;) {
        std::size_t at = c.pos;
        long long idx = c.integer();
        if (idx < 0) throw parse_error("negative coordinate index", at);
        c.expect(':');
        out[idx] = Perm3::read(c);
        if (c.try_eat('}')) break;
        c.expect(',');
      }
    }
    return out;
  }

  static std::set<long long> relevant_indices(const Element& a,
                                              const Element& b) {
    std::set<long long> idxs;
    for (const auto& [idx, value] : a.exceptions()) idxs.insert(idx);
    for (const auto& [idx, value] : b.exceptions()) idxs.insert(idx);
    return idxs;
  }

  static std::set<long long> pattern_indices(const Subgroup& A,
                                             const Subgroup& B) {
    std::set<long long> idxs;
    for (const auto& [idx, value] : A.pattern()) idxs.insert(idx);
    for (const auto& [idx, value] : B.pattern()) idxs.insert(idx);
    return idxs;
  }
};

}  // namespace tdlc
