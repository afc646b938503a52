#pragma once

#include <concepts>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/parse_util.hpp"
#include "tdlc/rational.hpp"
#include "tdlc/rng.hpp"

namespace tdlc {

// Index of one subgroup in another: a positive integer, exact, or +infinity
// when the family can prove the quotient is infinite.
struct IndexValue {
  bool infinite = false;
  Int value{1};

  static IndexValue one() { return IndexValue{false, Int(1)}; }
  static IndexValue finite(Int v) {
    if (v < 1) throw structural_error("index must be >= 1");
    return IndexValue{false, std::move(v)};
  }
  static IndexValue inf() { return IndexValue{true, Int(0)}; }

  bool is_one() const { return !infinite && value == 1; }

  bool operator==(const IndexValue& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
  bool operator!=(const IndexValue& o) const { return !(*this == o); }
  bool operator<(const IndexValue& o) const {
    if (infinite) return false;
    if (o.infinite) return true;
    return value < o.value;
  }

  IndexValue operator*(const IndexValue& o) const {
    if (infinite || o.infinite) return inf();
    return finite(value * o.value);
  }

  IndexValue pow(long long n) const {
    if (n < 0) throw structural_error("negative index power");
    if (infinite) return n == 0 ? one() : inf();
    IndexValue r = one();
    for (long long i = 0; i < n; ++i) r = r * *this;
    return r;
  }

  std::string str() const { return infinite ? "inf" : value.str(); }
};

// Conjugation direction for limit subgroups: forward iterates x V x^{-1}
// (yielding V+), backward iterates x^{-1} V x (yielding V-).
enum class Direction { forward, backward };

inline const char* direction_name(Direction d) {
  return d == Direction::forward ? "forward" : "backward";
}

// Structural classification of a contraction group within the implemented
// families; used for the decidable part of contraction comparisons.
enum class ContractionGroupKind {
  trivial,              // {identity}
  affine_lamp_line,     // the full translation part Q_p x {0}
  lamp_finite_support,  // finitely supported lamp configurations
};

inline const char* contraction_group_name(ContractionGroupKind k) {
  switch (k) {
    case ContractionGroupKind::trivial: return "trivial";
    case ContractionGroupKind::affine_lamp_line: return "affine-lamp-line";
    default: return "lamp-finite-support";
  }
}

// Exact yes/no answer for g in con(x), together with the reason the
// trajectory x^n g x^{-n} does or does not converge to the identity.
struct ContractionDecision {
  enum class Kind {
    valuation_growth,        // affine: valuation of the lamp part grows/shrinks linearly
    support_escape,          // lamp: support translates off (or keeps meeting) finite windows
    coordinate_periodicity,  // finite conjugation orbit: converges only if constant e
    shift_obstruction,       // nonzero discrete part is conjugation-invariant
  };

  bool verdict = false;
  Kind kind = Kind::shift_obstruction;
  std::string detail;

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::valuation_growth: return "valuation-growth";
      case Kind::support_escape: return "support-escape";
      case Kind::coordinate_periodicity: return "coordinate-periodicity";
      default: return "shift-obstruction";
    }
  }
};

// Closedness classification of con(x) as a subset of the ambient group.
struct ClosureNote {
  bool closed = false;
  std::string description;
};

// Contract satisfied by the three concrete families. Elements and subgroup
// descriptors are plain values; every operation is exact. Cross-family
// confusion is a compile error by construction; mixed instances of the same
// family (e.g. different primes) raise structural_error at runtime.
template <class F>
concept GroupFamily = requires(const F f, const typename F::Element& g,
                               const typename F::Subgroup& V, Rng& rng,
                               Direction dir, int bound) {
  typename F::Element;
  typename F::Subgroup;
  { V.is_compact() } -> std::convertible_to<bool>;
  { V.is_open() } -> std::convertible_to<bool>;
  { V.is_trivial() } -> std::convertible_to<bool>;
  { f.identity() } -> std::same_as<typename F::Element>;
  { f.mul(g, g) } -> std::same_as<typename F::Element>;
  { f.inv(g) } -> std::same_as<typename F::Element>;
  { f.element_equal(g, g) } -> std::convertible_to<bool>;
  { f.conj(g, g) } -> std::same_as<typename F::Element>;
  { f.conj_subgroup(g, V) } -> std::same_as<typename F::Subgroup>;
  { f.intersect(V, V) } -> std::same_as<typename F::Subgroup>;
  { f.subgroup_equal(V, V) } -> std::convertible_to<bool>;
  { f.subgroup_contains(V, V) } -> std::convertible_to<bool>;
  { f.index(V, V) } -> std::same_as<IndexValue>;
  { f.member(g, V) } -> std::convertible_to<bool>;
  { f.closed_form_limit(g, V, dir) } -> std::same_as<std::optional<typename F::Subgroup>>;
  { f.factorization_holds(V, V, V) } -> std::same_as<std::pair<bool, std::string>>;
  { f.factor_element(g, V, V) } -> std::same_as<std::optional<std::pair<typename F::Element, typename F::Element>>>;
  { f.plus_plus_closure(g, V) } -> std::same_as<ClosureNote>;
  { f.in_contraction(g, g) } -> std::same_as<ContractionDecision>;
  { f.contraction_group(g) } -> std::same_as<ContractionGroupKind>;
  { f.contraction_closure(g) } -> std::same_as<ClosureNote>;
  { f.conjugator(g, g, V, V) } -> std::same_as<typename F::Element>;
  { f.scale_candidates(g, bound) } -> std::same_as<std::vector<typename F::Subgroup>>;
  { f.random_element(rng, bound) } -> std::same_as<typename F::Element>;
  { f.random_subgroup(rng, bound) } -> std::same_as<typename F::Subgroup>;
  { f.sample_member(V, rng, bound) } -> std::same_as<typename F::Element>;
  { f.format(g) } -> std::convertible_to<std::string>;
  { f.format(V) } -> std::convertible_to<std::string>;
  { f.parse_element(std::string_view{}) } -> std::same_as<typename F::Element>;
  { f.parse_subgroup(std::string_view{}) } -> std::same_as<typename F::Subgroup>;
  { F::name } -> std::convertible_to<const char*>;
  { f.instance_label() } -> std::convertible_to<std::string>;
};

// g^n by repeated squaring; negative n goes through the inverse.
template <GroupFamily F>
typename F::Element power(const F& f, const typename F::Element& g,
                          long long n) {
  if (n < 0) return power(f, f.inv(g), -n);
  typename F::Element acc = f.identity();
  typename F::Element base = g;
  while (n > 0) {
    if (n & 1) acc = f.mul(acc, base);
    n >>= 1;
    if (n > 0) base = f.mul(base, base);
  }
  return acc;
}

}  // namespace tdlc
