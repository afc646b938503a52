#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/affine.hpp"
#include "tdlc/group.hpp"
#include "tdlc/lamplighter.hpp"
#include "tdlc/parse_util.hpp"
#include "tdlc/perm3.hpp"
#include "tdlc/rational.hpp"
#include "tdlc/rng.hpp"
#include "tdlc/scale.hpp"
#include "tdlc/sym3.hpp"

namespace tdlc {

// The three closed finite-covolume subgroups H <= G. Finite covolume holds
// by construction (the quotients are a finite cyclic group, a compact
// product of order-2 coordinate groups, and a compact lamp group
// respectively); the code relies only on exact membership and sampling.

// H = Q_p x| mZ inside the affine family: the shift must be divisible by m.
struct AffineCovolume {
  long long modulus = 1;

  explicit AffineCovolume(long long m) : modulus(m) {
    if (m < 1) throw structural_error("modulus must be >= 1");
  }

  bool member(const AffineFamily&, const AffineElement& g) const {
    return g.shift % modulus == 0;
  }

  AffineElement sample(const AffineFamily& f, Rng& rng, int bound) const {
    AffineElement e = f.random_element(rng, bound);
    return f.make(e.lamp, modulus * rng.range(-bound, bound));
  }

  std::string label() const { return "mod-" + std::to_string(modulus); }
  std::string describe() const {
    return "Q_p x| " + std::to_string(modulus) + "Z";
  }
};

// H = restricted product of the cyclic groups C3 = {e,(123),(132)} inside
// the Sym3 family. A representable element lies in H iff its tail is e and
// no exception is a transposition.
struct Sym3CovolumeLattice {
  bool member(const Sym3Family&, const Sym3Element& h) const {
    if (h.tail() != Perm3::identity()) return false;
    for (const auto& [idx, value] : h.exceptions())
      if (value.is_transposition()) return false;
    return true;
  }

  Sym3Element sample(const Sym3Family&, Rng& rng, int bound) const {
    static const Perm3 values[3] = {Perm3::identity(), Perm3::c123(),
                                    Perm3::c132()};
    std::map<long long, Perm3> ex;
    std::uint64_t n = rng.below(static_cast<std::uint64_t>(bound) + 1);
    for (std::uint64_t j = 0; j < n; ++j)
      ex[rng.range(0, 2 * bound)] = values[rng.below(3)];
    return Sym3Element(std::move(ex), Perm3::identity());
  }

  std::string label() const { return "C3-lattice"; }
  std::string describe() const {
    return "restricted product of the 3-cycle coordinate groups";
  }
};

// H = Q, the pure shifts inside the lamplighter family.
struct RationalShiftLattice {
  bool member(const LampFamily&, const LampElement& h) const {
    return h.lamps.is_zero();
  }

  LampElement sample(const LampFamily& f, Rng& rng, int bound) const {
    return f.make(SupportSet{},
                  Rational(Int(rng.range(-bound - 1, bound + 1)),
                           Int(rng.range(1, 3))));
  }

  std::string label() const { return "Q-lattice"; }
  std::string describe() const { return "the rationals, as pure shifts"; }
};

// Some h in H n V x^n V, or nothing if the intersection is empty. Solved in
// closed form per family; V is the tidy subgroup from the scale certificate.

inline std::optional<AffineElement> coset_meets(const AffineFamily& f,
                                                const AffineCovolume& H,
                                                const AffineElement& x,
                                                long long n,
                                                const AffineSubgroup&) {
  // the shift is constant on V x^n V, so the only candidate shift is n*s
  if ((n * x.shift) % H.modulus != 0) return std::nullopt;
  return power(f, x, n);  // x^n = e * x^n * e
}

inline std::optional<Sym3Element> coset_meets(const Sym3Family& f,
                                              const Sym3CovolumeLattice&,
                                              const Sym3Element& x,
                                              long long n,
                                              const Sym3Subgroup& V) {
  // x^n v coordinate-wise: where (x^n)_i is a transposition, multiply by a
  // transposition of the coordinate group to land in C3; where the
  // coordinate group is pinned to e this is impossible.
  Sym3Element xn = power(f, x, n);
  std::set<long long> idxs;
  for (const auto& [idx, value] : xn.exceptions()) idxs.insert(idx);
  for (const auto& [idx, value] : V.pattern()) idxs.insert(idx);
  for (long long i = 0; i < V.floor(); ++i) idxs.insert(i);
  std::map<long long, Perm3> vex;
  for (long long i : idxs) {
    if (xn.coordinate(i).is_transposition()) {
      Perm3 sigma = V.coordinate_group(i);
      if (sigma.is_identity()) return std::nullopt;
      vex[i] = sigma;
    } else {
      vex[i] = Perm3::identity();
    }
  }
  Sym3Element v(std::move(vex), xn.tail());
  return f.mul(xn, v);
}

inline std::optional<LampElement> coset_meets(const LampFamily& f,
                                              const RationalShiftLattice&,
                                              const LampElement& x,
                                              long long n,
                                              const LampSubgroup& V) {
  if (V.kind != LampSubgroup::Kind::window)
    throw structural_error("coset_meets requires a compact open window");
  // h = (0, n q) works iff the lamp part of x^n can be split into a factor
  // vanishing on S and one vanishing on S + n q, i.e. iff supp(lamp(x^n))
  // avoids S n (S + n q).
  LampElement xn = power(f, x, n);
  for (const Rational& t : V.base) {
    if (!V.base.count(t - xn.shift)) continue;  // t not in S + n q
    if (xn.lamps.contains(t)) return std::nullopt;
  }
  return f.make(SupportSet{}, xn.shift);
}

template <GroupFamily F>
struct LatticeWitness {
  bool found = false;
  long long n = 0;
  typename F::Element h;
  typename F::Element t;
  ScaleOutcome<F> scale_x;
  ScaleOutcome<F> scale_h;
  ConjugatorOutcome<F> conjugator;
  ConjugacyReport conjugacy;
  std::vector<std::pair<std::string, bool>> checks;
  std::string failure;

  bool pass() const {
    if (!found) return false;
    for (const auto& [name, ok] : checks)
      if (!ok) return false;
    return true;
  }
};

// Witness data for one x: the smallest n <= n_max with H n V x^n V
// nonempty, the h found there, and the conjugator t, together with the
// verified equalities s(x)^n = s(h) and the contraction-conjugacy sample
// suite.
template <GroupFamily F, class Lattice>
LatticeWitness<F> find_witness(const F& f, const Lattice& H,
                               const typename F::Element& x, long long n_max,
                               int K, int conjugacy_samples, Rng& rng,
                               EngineOptions opt = {}) {
  LatticeWitness<F> w;
  w.h = f.identity();
  w.t = f.identity();
  w.scale_x = scale(f, x, rng, opt);
  if (!w.scale_x.certified) {
    w.failure = "scale(x) " + w.scale_x.failure;
    return w;
  }
  const typename F::Subgroup& V = w.scale_x.cert.tidy_v;
  std::optional<typename F::Element> h;
  for (long long i = 1; i <= n_max && !h; ++i) {
    h = coset_meets(f, H, x, i, V);
    if (h) w.n = i;
  }
  if (!h) {
    w.failure = "H misses V x^n V for every n <= " + std::to_string(n_max);
    return w;
  }
  w.found = true;
  w.h = *h;
  w.checks.emplace_back("h in H", H.member(f, w.h));
  bool minimal = true;
  for (long long i = 1; i < w.n; ++i)
    if (coset_meets(f, H, x, i, V)) minimal = false;
  w.checks.emplace_back("n is minimal", minimal);
  LimitResult<F> lp = limit_subgroup(f, x, V, Direction::forward,
                                     opt.max_steps);
  LimitResult<F> lm = limit_subgroup(f, x, V, Direction::backward,
                                     opt.max_steps);
  bool in_coset = lp.determined && lm.determined &&
                  in_double_coset(f, w.h, x, w.n, lm.value, lp.value);
  w.checks.emplace_back("h in V- x^n V+", in_coset);
  w.scale_h = scale(f, w.h, rng, opt);
  w.checks.emplace_back("scale(h) certified", w.scale_h.certified);
  bool powers_match =
      w.scale_h.certified &&
      w.scale_x.cert.scale.pow(w.n) == w.scale_h.cert.scale;
  w.checks.emplace_back("scale(x)^n = scale(h)", powers_match);
  typename F::Element xn = power(f, x, w.n);
  w.conjugator = find_conjugator(f, w.h, xn, V, K, rng, opt);
  w.t = w.conjugator.t;
  w.checks.emplace_back("conjugator verified to K", w.conjugator.found);
  std::vector<typename F::Element> samples;
  samples.reserve(static_cast<std::size_t>(conjugacy_samples));
  for (int i = 0; i < conjugacy_samples; ++i)
    samples.push_back(f.random_element(rng, opt.sample_bound));
  w.conjugacy = contraction_conjugate_equal(f, xn, w.h, w.t, samples);
  w.checks.emplace_back("contraction conjugacy on samples",
                        w.conjugacy.pass());
  if (!w.pass() && w.failure.empty()) {
    for (const auto& [name, ok] : w.checks)
      if (!ok) {
        w.failure = "check failed: " + name;
        break;
      }
  }
  return w;
}

// Pre-compactness of every cyclic subgroup in the Sym3 family: finite lattice
// orders, the exponent identity x^6 = e, and the decomposition x^n = h v
// exhibiting x^n inside <h, V>.
struct PeriodicReport {
  int lattice_checked = 0;
  bool lattice_orders_finite = true;
  int exponent_checked = 0;
  bool exponent_holds = true;
  int decompositions_checked = 0;
  bool decompositions_hold = true;
  std::string detail;

  bool pass() const {
    return lattice_orders_finite && exponent_holds && decompositions_hold;
  }
};

inline PeriodicReport verify_periodic(const Sym3Family& f,
                                      const Sym3CovolumeLattice& H,
                                      int lattice_samples, int x_samples,
                                      long long n_max, Rng& rng,
                                      EngineOptions opt = {}) {
  PeriodicReport r;
  for (int i = 0; i < lattice_samples; ++i) {
    Sym3Element h = H.sample(f, rng, opt.sample_bound);
    ++r.lattice_checked;
    int order = h.order();
    if (order < 1 || order > 6 ||
        !f.element_equal(power(f, h, order), f.identity())) {
      r.lattice_orders_finite = false;
      r.detail = "order check failed at " + f.format(h);
      return r;
    }
  }
  for (int i = 0; i < x_samples; ++i) {
    Sym3Element x = f.random_element(rng, opt.sample_bound);
    ++r.exponent_checked;
    if (!f.element_equal(power(f, x, 6), f.identity())) {
      r.exponent_holds = false;
      r.detail = "x^6 != e at " + f.format(x);
      return r;
    }
    ScaleOutcome<Sym3Family> sc = scale(f, x, rng, opt);
    if (!sc.certified) {
      r.decompositions_hold = false;
      r.detail = "scale(x) " + sc.failure;
      return r;
    }
    const Sym3Subgroup& V = sc.cert.tidy_v;
    std::optional<Sym3Element> h;
    long long n = 0;
    for (long long j = 1; j <= n_max && !h; ++j) {
      h = coset_meets(f, H, x, j, V);
      if (h) n = j;
    }
    Sym3Element xn = power(f, x, n);
    // h = x^n v' gives x^n = h (v')^{-1}, an element of <h, V>
    bool ok = h.has_value();
    if (ok) {
      Sym3Element v = f.mul(f.inv(*h), xn);
      ok = H.member(f, *h) && f.member(v, V) &&
           f.element_equal(f.mul(*h, v), xn);
    }
    ++r.decompositions_checked;
    if (!ok) {
      r.decompositions_hold = false;
      r.detail = "no decomposition x^n = h v at " + f.format(x);
      return r;
    }
  }
  return r;
}

// Infinite divisibility of the lamplighter shift lattice: x_k = q / k!
// satisfies x_k^{k!} = (0, q); the family stays uniscalar on the divisors
// and is not anisotropic (a one-lamp configuration contracts under any
// nonzero shift).
struct DivisibleReport {
  int divisibility_checked = 0;
  bool divisibility_holds = true;
  int scale_checked = 0;
  bool uniscalar_holds = true;
  int contraction_checked = 0;
  bool contraction_nontrivial = true;
  std::string detail;

  bool pass() const {
    return divisibility_holds && uniscalar_holds && contraction_nontrivial;
  }
};

inline DivisibleReport verify_divisible(const LampFamily& f,
                                        const std::vector<Rational>& shifts,
                                        int k_max, Rng& rng,
                                        EngineOptions opt = {}) {
  DivisibleReport r;
  for (const Rational& q : shifts) {
    LampElement target = f.make(SupportSet{}, q);
    long long factorial = 1;
    for (int k = 1; k <= k_max; ++k) {
      factorial *= k;
      LampElement xk =
          f.make(SupportSet{}, q / Rational(Int(factorial)));
      ++r.divisibility_checked;
      if (!f.element_equal(power(f, xk, factorial), target)) {
        r.divisibility_holds = false;
        r.detail = "x_k^{k!} != (0," + q.str() + ") at k=" +
                   std::to_string(k);
        return r;
      }
      ScaleOutcome<LampFamily> sc = scale(f, xk, rng, opt);
      ++r.scale_checked;
      if (!sc.certified || !sc.cert.scale.is_one()) {
        r.uniscalar_holds = false;
        r.detail = "scale(x_k) != 1 at k=" + std::to_string(k);
        return r;
      }
    }
    if (!q.is_zero()) {
      LampElement one_lamp =
          f.make(SupportSet::finite({Rational(0)}), Rational(0));
      ++r.contraction_checked;
      if (!f.in_contraction(one_lamp, target).verdict) {
        r.contraction_nontrivial = false;
        r.detail = "one-lamp configuration fails to contract under shift " +
                   q.str();
        return r;
      }
    }
  }
  return r;
}

}  // namespace tdlc
