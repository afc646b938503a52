#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tdlc/group.hpp"
#include "tdlc/parse_util.hpp"
#include "tdlc/rational.hpp"
#include "tdlc/rng.hpp"

namespace tdlc {

// Knobs shared by the engine entry points. Every computation below is exact;
// the limits on steps and samples only bound how much evidence is gathered,
// and running out of budget is a loud "undetermined", never a guess.
struct EngineOptions {
  int max_steps = 64;       // conjugation steps for limit subgroups
  int spot_samples = 100;   // sampled members factored in the tidiness check
  int candidate_bound = 2;  // size bound for the family's candidate subgroups
  int sample_bound = 3;     // size bound handed to the family's samplers
};

// [xVx^{-1} : xVx^{-1} n V], the displacement index of x at V.
template <GroupFamily F>
IndexValue displacement_index(const F& f, const typename F::Element& x,
                              const typename F::Subgroup& V) {
  if (!V.is_compact() || !V.is_open())
    throw structural_error("displacement index requires a compact open V");
  typename F::Subgroup w = f.conj_subgroup(x, V);
  return f.index(w, f.intersect(w, V));
}

template <GroupFamily F>
struct LimitResult {
  bool determined = false;
  typename F::Subgroup value;
  std::string method;  // stable | increasing | closed-form | periodic-orbit
  int steps = 0;
};

// V+ (forward) or V- (backward): the intersection of the conjugates
// x^{+-n} V x^{-+n} over n >= 0. Terminates by stabilization, by an
// increasing chain (the intersection is V itself), by the family's closed
// form for monotone contraction, or by detecting that the conjugation orbit
// of descriptors is finite and intersecting the whole orbit.
template <GroupFamily F>
LimitResult<F> limit_subgroup(const F& f, const typename F::Element& x,
                              const typename F::Subgroup& V, Direction dir,
                              int max_steps = 64) {
  using Subgroup = typename F::Subgroup;
  if (!V.is_compact() || !V.is_open())
    throw structural_error("limit subgroup requires a compact open V");
  if (max_steps < 1) return {false, V, "undetermined: no step budget", 0};
  typename F::Element y = dir == Direction::forward ? x : f.inv(x);
  Subgroup d1 = f.conj_subgroup(y, V);
  if (f.subgroup_equal(d1, V)) return {true, V, "stable", 1};
  if (f.subgroup_contains(d1, V))
    // the chain of conjugates increases, so the intersection is V itself
    return {true, V, "increasing", 1};
  if (auto closed = f.closed_form_limit(x, V, dir))
    return {true, *closed, "closed-form", 1};
  std::vector<Subgroup> seen = {V};
  Subgroup acc = f.intersect(V, d1);
  Subgroup cur = d1;
  for (int step = 2; step <= max_steps; ++step) {
    seen.push_back(cur);
    cur = f.conj_subgroup(y, cur);
    for (const Subgroup& s : seen)
      if (f.subgroup_equal(cur, s))
        // conjugation maps descriptors bijectively, so a repeat closes the
        // orbit and acc already is the full intersection
        return {true, acc, "periodic-orbit", step};
    acc = f.intersect(acc, cur);
  }
  return {false, V, "undetermined after " + std::to_string(max_steps) +
                        " steps",
          max_steps};
}

template <GroupFamily F>
struct TidyReport {
  bool determined = false;
  bool tidy = false;
  typename F::Subgroup v_plus;
  typename F::Subgroup v_minus;
  std::string limit_method_plus;
  std::string limit_method_minus;
  std::string factorization_note;
  ClosureNote closure;
  int spot_checked = 0;
  int spot_skipped = 0;  // sampled members whose split is not representable
  std::string reason;    // first failed condition, or why undetermined
};

// V is tidy for x when V = V+ V- and V++ is closed. The factorization is
// decided symbolically on descriptors and then spot-verified by factoring
// sampled members of V; closedness of V++ uses the family's classification.
template <GroupFamily F>
TidyReport<F> is_tidy(const F& f, const typename F::Element& x,
                      const typename F::Subgroup& V, Rng& rng,
                      EngineOptions opt = {}) {
  TidyReport<F> r;
  r.v_plus = V;
  r.v_minus = V;
  LimitResult<F> lp = limit_subgroup(f, x, V, Direction::forward,
                                     opt.max_steps);
  LimitResult<F> lm = limit_subgroup(f, x, V, Direction::backward,
                                     opt.max_steps);
  r.limit_method_plus = lp.method;
  r.limit_method_minus = lm.method;
  if (!lp.determined || !lm.determined) {
    r.reason = "limit subgroup " +
               std::string(!lp.determined ? lp.method : lm.method);
    return r;
  }
  r.determined = true;
  r.v_plus = lp.value;
  r.v_minus = lm.value;
  auto [holds, note] = f.factorization_holds(V, r.v_plus, r.v_minus);
  r.factorization_note = note;
  if (!holds) {
    r.reason = "V != V+V-: " + note;
    return r;
  }
  for (int i = 0; i < opt.spot_samples; ++i) {
    typename F::Element v = f.sample_member(V, rng, opt.sample_bound);
    auto split = f.factor_element(v, r.v_plus, r.v_minus);
    if (!split) {
      ++r.spot_skipped;
      continue;
    }
    if (!f.member(split->first, r.v_plus) ||
        !f.member(split->second, r.v_minus) ||
        !f.element_equal(f.mul(split->first, split->second), v)) {
      r.reason = "spot factorization failed on " + f.format(v);
      return r;
    }
    ++r.spot_checked;
  }
  r.closure = f.plus_plus_closure(x, r.v_plus);
  if (!r.closure.closed) {
    r.reason = "V++ is not closed: " + r.closure.description;
    return r;
  }
  r.tidy = true;
  return r;
}

template <GroupFamily F>
struct ScaleCertificate {
  IndexValue scale;
  typename F::Subgroup tidy_v;
  typename F::Subgroup v_plus;
  typename F::Subgroup v_minus;
  std::vector<std::pair<typename F::Subgroup, IndexValue>> examined;
};

template <GroupFamily F>
struct ScaleOutcome {
  bool certified = false;
  ScaleCertificate<F> cert;
  IndexValue raw_min;  // minimum examined index, certified or not
  std::string failure;
};

// s(x) = min over compact open V of the displacement index. The family's
// candidate set is scanned; the minimum is certified by exhibiting a tidy
// argmin, which by the tidiness criterion makes it the global minimum over
// all compact open subgroups, not just the examined ones.
template <GroupFamily F>
ScaleOutcome<F> scale(const F& f, const typename F::Element& x, Rng& rng,
                      EngineOptions opt = {}) {
  ScaleOutcome<F> out;
  std::vector<typename F::Subgroup> candidates =
      f.scale_candidates(x, opt.candidate_bound);
  if (candidates.empty())
    throw structural_error("family produced no scale candidates");
  for (const auto& v : candidates)
    out.cert.examined.emplace_back(v, displacement_index(f, x, v));
  out.raw_min = out.cert.examined.front().second;
  for (const auto& [v, idx] : out.cert.examined)
    if (idx < out.raw_min) out.raw_min = idx;
  for (const auto& [v, idx] : out.cert.examined) {
    if (idx != out.raw_min) continue;
    TidyReport<F> report = is_tidy(f, x, v, rng, opt);
    if (report.determined && report.tidy) {
      out.certified = true;
      out.cert.scale = idx;
      out.cert.tidy_v = v;
      out.cert.v_plus = report.v_plus;
      out.cert.v_minus = report.v_minus;
      return out;
    }
    if (out.failure.empty())
      out.failure = "candidate " + f.format(v) + " attains the minimum but: " +
                    report.reason;
  }
  if (out.failure.empty()) out.failure = "no candidate attains the minimum";
  out.failure = "uncertified: " + out.failure;
  return out;
}

struct ModularOutcome {
  bool certified = false;
  Rational value;
  std::string failure;
};

// Delta(x) = s(x) / s(x^{-1}), exact.
template <GroupFamily F>
ModularOutcome modular(const F& f, const typename F::Element& x, Rng& rng,
                       EngineOptions opt = {}) {
  ScaleOutcome<F> sx = scale(f, x, rng, opt);
  ScaleOutcome<F> si = scale(f, f.inv(x), rng, opt);
  if (!sx.certified || !si.certified)
    return {false, Rational(0),
            !sx.certified ? "scale(x) " + sx.failure
                          : "scale(x^-1) " + si.failure};
  return {true, Rational(sx.cert.scale.value, si.cert.scale.value), ""};
}

// Membership y in V- x^n V+. For the shapes the limits take in these
// families one of the factors is trivial or the two factors coincide, and
// the membership reduces to a single subgroup test.
template <GroupFamily F>
bool in_double_coset(const F& f, const typename F::Element& y,
                     const typename F::Element& x, long long n,
                     const typename F::Subgroup& v_minus,
                     const typename F::Subgroup& v_plus) {
  typename F::Element xn = power(f, x, n);
  if (v_plus.is_trivial()) return f.member(f.mul(y, f.inv(xn)), v_minus);
  if (v_minus.is_trivial()) return f.member(f.mul(f.inv(xn), y), v_plus);
  if (f.subgroup_equal(v_minus, v_plus))
    // the common factor is normalized by x, so left and right tests agree
    return f.member(f.mul(f.inv(xn), y), v_plus);
  throw structural_error(
      "double coset membership needs a trivial factor or equal factors");
}

template <GroupFamily F>
struct DoubleCosetReport {
  bool determined = false;
  bool in_coset = false;
  bool scale_match = false;
  IndexValue scale_y;
  IndexValue expected;  // scale(x)^n
  std::string note;

  bool pass() const { return determined && in_coset && scale_match; }
};

// For y in (VxV)^n with V tidy: y lies in V- x^n V+ and s(y) = s(x)^n.
template <GroupFamily F>
DoubleCosetReport<F> double_coset_check(const F& f,
                                        const typename F::Element& y,
                                        const typename F::Element& x,
                                        const typename F::Subgroup& V,
                                        long long n, Rng& rng,
                                        EngineOptions opt = {}) {
  DoubleCosetReport<F> r;
  LimitResult<F> lp = limit_subgroup(f, x, V, Direction::forward,
                                     opt.max_steps);
  LimitResult<F> lm = limit_subgroup(f, x, V, Direction::backward,
                                     opt.max_steps);
  if (!lp.determined || !lm.determined) {
    r.note = "limits undetermined";
    return r;
  }
  ScaleOutcome<F> sy = scale(f, y, rng, opt);
  ScaleOutcome<F> sx = scale(f, x, rng, opt);
  if (!sy.certified || !sx.certified) {
    r.note = !sy.certified ? sy.failure : sx.failure;
    return r;
  }
  r.determined = true;
  r.in_coset = in_double_coset(f, y, x, n, lm.value, lp.value);
  r.scale_y = sy.cert.scale;
  r.expected = sx.cert.scale.pow(n);
  r.scale_match = r.scale_y == r.expected;
  if (!r.in_coset) r.note = "y is not in V- x^n V+";
  if (!r.scale_match)
    r.note += std::string(r.note.empty() ? "" : "; ") + "scale(y) = " +
              r.scale_y.str() + " != " + r.expected.str();
  return r;
}

template <GroupFamily F>
struct ConjugatorOutcome {
  bool found = false;
  typename F::Element t;
  std::string path;  // identity (trivial con(x^-1)) | closed-form
  int checked_k = 0;
  std::string failure;
};

// Conjugator for y in VxV with V tidy for x: t in V+ n con(x^{-1}) with
// t^{-1} y^k t x^{-k} in V for all 0 <= k <= K. When con(x^{-1}) is trivial
// the only candidate is t = e and x V x^{-1} <= V already gives y^k x^{-k}
// in V; otherwise the family's closed form is used and then verified.
template <GroupFamily F>
ConjugatorOutcome<F> find_conjugator(const F& f, const typename F::Element& y,
                                     const typename F::Element& x,
                                     const typename F::Subgroup& V, int K,
                                     Rng& rng, EngineOptions opt = {}) {
  ConjugatorOutcome<F> out;
  out.t = f.identity();
  TidyReport<F> tidy = is_tidy(f, x, V, rng, opt);
  if (!tidy.determined || !tidy.tidy)
    throw structural_error("find_conjugator requires a tidy V: " +
                           tidy.reason);
  if (!in_double_coset(f, y, x, 1, tidy.v_minus, tidy.v_plus))
    throw structural_error("find_conjugator requires y in VxV");
  typename F::Element xinv = f.inv(x);
  if (f.contraction_group(xinv) == ContractionGroupKind::trivial) {
    out.path = "identity";
    if (!f.subgroup_contains(V, f.conj_subgroup(x, V))) {
      out.failure = "con(x^-1) is trivial but x V x^-1 is not inside V";
      return out;
    }
  } else {
    out.path = "closed-form";
    out.t = f.conjugator(y, x, tidy.v_plus, V);
    if (!f.member(out.t, tidy.v_plus)) {
      out.failure = "t = " + f.format(out.t) + " is not in V+";
      return out;
    }
    if (!f.in_contraction(out.t, xinv).verdict) {
      out.failure = "t = " + f.format(out.t) + " is not in con(x^-1)";
      return out;
    }
  }
  typename F::Element tinv = f.inv(out.t);
  typename F::Element yk = f.identity();
  typename F::Element xk_inv = f.identity();
  for (int k = 0; k <= K; ++k) {
    typename F::Element w = f.mul(f.mul(tinv, yk), f.mul(out.t, xk_inv));
    if (!f.member(w, V)) {
      out.failure = "t^-1 y^k t x^-k leaves V at k = " + std::to_string(k);
      return out;
    }
    out.checked_k = k;
    yk = f.mul(yk, y);
    xk_inv = f.mul(xk_inv, xinv);
  }
  out.found = true;
  return out;
}

struct ConjugacyReport {
  bool structural = false;  // contraction group kinds agree
  bool samples = false;     // membership equivalence on every sample
  int checked = 0;
  std::string detail;

  bool pass() const { return structural && samples; }
};

// Does t conjugate con(x) onto con(y)? Checked structurally on the decidable
// classification and extensionally on a sample suite:
// g in con(x) <=> t g t^{-1} in con(y).
template <GroupFamily F>
ConjugacyReport contraction_conjugate_equal(
    const F& f, const typename F::Element& x, const typename F::Element& y,
    const typename F::Element& t,
    const std::vector<typename F::Element>& samples) {
  ConjugacyReport r;
  ContractionGroupKind kx = f.contraction_group(x);
  ContractionGroupKind ky = f.contraction_group(y);
  r.structural = kx == ky;
  r.detail = std::string("con(x) is ") + contraction_group_name(kx) +
             ", con(y) is " + contraction_group_name(ky);
  r.samples = true;
  for (const auto& g : samples) {
    bool in_x = f.in_contraction(g, x).verdict;
    bool in_y = f.in_contraction(f.conj(t, g), y).verdict;
    ++r.checked;
    if (in_x != in_y) {
      r.samples = false;
      r.detail += "; membership differs at " + f.format(g);
      break;
    }
  }
  return r;
}

}  // namespace tdlc
