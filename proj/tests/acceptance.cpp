// Acceptance battery: every shipped claim, exact arithmetic, one line per
// criterion. Exits nonzero if any criterion fails or overruns its budget.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tdlc/tdlc.hpp"

using namespace tdlc;

namespace {

Rational q(long long n, long long d = 1) { return Rational(Int(n), Int(d)); }

Int ipow(long long b, long long e) {
  Int r = 1;
  for (long long i = 0; i < e; ++i) r *= b;
  return r;
}

struct Outcome {
  bool pass = true;
  long long cases = 0;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) {
    o.pass = false;
    o.detail = why;
  }
}

// 1: the affine scale value sets, for G and for the finite-covolume H.
Outcome value_sets() {
  Outcome o;
  Rng rng(101);
  for (long long p : {2LL, 3LL, 5LL}) {
    AffineFamily f(p);
    for (long long k = 0; k <= 6; ++k) {
      for (int rep = 0; rep < 2 && o.pass; ++rep) {
        Rational lamp = rep == 0 ? Rational(0)
                                 : f.random_element(rng, 3).lamp;
        ScaleOutcome<AffineFamily> down = scale(f, f.make(lamp, -k), rng);
        ++o.cases;
        if (!down.certified ||
            down.cert.scale != IndexValue::finite(ipow(p, k)))
          fail(o, "scale((a,-" + std::to_string(k) + ")) != p^k at p = " +
                  std::to_string(p));
        ScaleOutcome<AffineFamily> up = scale(f, f.make(lamp, k), rng);
        ++o.cases;
        if (!up.certified || !up.cert.scale.is_one())
          fail(o, "scale((a," + std::to_string(k) + ")) != 1 at p = " +
                  std::to_string(p));
      }
    }
    for (long long m : {2LL, 3LL, 4LL}) {
      AffineCovolume H(m);
      for (long long k = 0; k <= 4 && o.pass; ++k) {
        AffineElement h = f.make(Rational(0), -m * k);
        ScaleOutcome<AffineFamily> sc = scale(f, h, rng);
        ++o.cases;
        if (!H.member(f, h) || !sc.certified ||
            sc.cert.scale != IndexValue::finite(ipow(p, m * k)))
          fail(o, "H value set misses p^(mk) at p = " + std::to_string(p) +
                  ", m = " + std::to_string(m) + ", k = " +
                  std::to_string(k));
      }
    }
  }
  return o;
}

// 2: witnesses (n, h, t) for 200 random x per family, each with the full
// check list and 20-sample contraction conjugacy.
template <GroupFamily F, class Lattice>
void witness_block(const F& f, const Lattice& H, int count, Rng& rng,
                   Outcome& o) {
  for (int i = 0; i < count && o.pass; ++i) {
    typename F::Element x = f.random_element(rng, 3);
    LatticeWitness<F> w = find_witness(f, H, x, 36, 16, 20, rng);
    ++o.cases;
    if (!w.pass()) {
      std::string why = w.failure;
      for (const auto& [name, ok] : w.checks)
        if (!ok) why = "check failed: " + name;
      fail(o, std::string(F::name) + " witness at x = " + f.format(x) +
              ": " + why);
    }
  }
}

Outcome witnesses() {
  Outcome o;
  Rng rng(102);
  witness_block(AffineFamily(2), AffineCovolume(3), 200, rng, o);
  witness_block(Sym3Family{}, Sym3CovolumeLattice{}, 200, rng, o);
  witness_block(LampFamily{}, RationalShiftLattice{}, 200, rng, o);
  return o;
}

// 3: 500 constructed members of (VxV)^n, n <= 4, each verified to lie in
// V- x^n V+ with scale(y) = scale(x)^n.
template <GroupFamily F>
void coset_block(const F& f, int count, Rng& rng, Outcome& o) {
  for (int i = 0; i < count && o.pass; ++i) {
    typename F::Element x = f.random_element(rng, 3);
    ScaleOutcome<F> sc = scale(f, x, rng);
    ++o.cases;
    if (!sc.certified) {
      fail(o, std::string(F::name) + " scale uncertified at " + f.format(x));
      return;
    }
    const typename F::Subgroup& V = sc.cert.tidy_v;
    long long n = 1 + static_cast<long long>(rng.below(4));
    typename F::Element y = f.identity();
    for (long long j = 0; j < n; ++j)
      y = f.mul(y, f.mul(f.sample_member(V, rng, 3),
                         f.mul(x, f.sample_member(V, rng, 3))));
    DoubleCosetReport<F> dc = double_coset_check(f, y, x, V, n, rng);
    if (!dc.pass())
      fail(o, std::string(F::name) + " double coset at x = " + f.format(x) +
              ", n = " + std::to_string(n) + ": " + dc.note);
  }
}

Outcome double_cosets() {
  Outcome o;
  Rng rng(103);
  coset_block(AffineFamily(2), 167, rng, o);
  coset_block(Sym3Family{}, 167, rng, o);
  coset_block(LampFamily{}, 166, rng, o);
  return o;
}

// 4: tidiness is equivalent to the displacement index attaining the scale,
// on 200 random (x, V) per family, plus the mandatory non-tidy example.
template <GroupFamily F>
void tidy_block(const F& f, int count, Rng& rng, Outcome& o) {
  for (int i = 0; i < count && o.pass; ++i) {
    typename F::Element x = f.random_element(rng, 3);
    typename F::Subgroup V = f.random_subgroup(rng, 3);
    TidyReport<F> rep = is_tidy(f, x, V, rng);
    IndexValue disp = displacement_index(f, x, V);
    ScaleOutcome<F> sc = scale(f, x, rng);
    ++o.cases;
    if (!rep.determined || !sc.certified ||
        rep.tidy != (disp == sc.cert.scale))
      fail(o, std::string(F::name) + " tidy criterion at x = " +
              f.format(x) + ", V = " + f.format(V));
  }
}

Outcome tidy_criterion() {
  Outcome o;
  Rng rng(104);
  tidy_block(AffineFamily(2), 200, rng, o);
  tidy_block(Sym3Family{}, 200, rng, o);
  tidy_block(LampFamily{}, 200, rng, o);
  Sym3Family fs;
  Sym3Element x({{0, Perm3::c123()}}, Perm3::identity());
  Sym3Subgroup V(0, {});
  TidyReport<Sym3Family> rep = is_tidy(fs, x, V, rng);
  ++o.cases;
  if (!rep.determined || rep.tidy ||
      displacement_index(fs, x, V) != IndexValue::finite(2))
    fail(o, "the standard non-tidy pair was not refuted");
  return o;
}

// 5: conjugators for 100 constructed y in VxV per family, membership
// verified to k = 16, plus the pinned exact conjugator.
template <GroupFamily F>
void conjugator_block(const F& f, int count, Rng& rng, Outcome& o) {
  for (int i = 0; i < count && o.pass; ++i) {
    typename F::Element x = f.random_element(rng, 3);
    ScaleOutcome<F> sc = scale(f, x, rng);
    ++o.cases;
    if (!sc.certified) {
      fail(o, std::string(F::name) + " scale uncertified at " + f.format(x));
      return;
    }
    const typename F::Subgroup& V = sc.cert.tidy_v;
    typename F::Element y = f.mul(f.sample_member(V, rng, 3),
                                  f.mul(x, f.sample_member(V, rng, 3)));
    ConjugatorOutcome<F> co = find_conjugator(f, y, x, V, 16, rng);
    if (!co.found || co.checked_k != 16)
      fail(o, std::string(F::name) + " conjugator at x = " + f.format(x) +
              ": " + co.failure);
  }
}

Outcome conjugators() {
  Outcome o;
  Rng rng(105);
  conjugator_block(AffineFamily(2), 100, rng, o);
  conjugator_block(Sym3Family{}, 100, rng, o);
  conjugator_block(LampFamily{}, 100, rng, o);
  AffineFamily f(2);
  AffineElement x = f.make(Rational(0), -1);
  AffineElement y = f.make(Rational(1), -1);
  ConjugatorOutcome<AffineFamily> co =
      find_conjugator(f, y, x, AffineSubgroup::make_level(0), 16, rng);
  ++o.cases;
  if (!co.found || !f.element_equal(co.t, f.make(Rational(2), 0)) ||
      !f.element_equal(f.conj(f.inv(co.t), y), x))
    fail(o, "pinned conjugator is not t = (2/1,0)@2");
  return o;
}

// 6: the structure of the contraction groups, per family.
Outcome contraction_structure() {
  Outcome o;
  Rng rng(106);
  Sym3Family fs;
  for (int i = 0; i < 100 && o.pass; ++i) {
    Sym3Element x = fs.random_element(rng, 3);
    Sym3Element g = fs.random_element(rng, 3);
    ScaleOutcome<Sym3Family> sc = scale(fs, x, rng);
    ++o.cases;
    bool ok = fs.contraction_group(x) == ContractionGroupKind::trivial &&
              fs.in_contraction(g, x).verdict ==
                  fs.element_equal(g, fs.identity()) &&
              fs.contraction_closure(x).closed && sc.certified &&
              sc.cert.scale.is_one();
    if (!ok) fail(o, "sym3 anisotropy/uniscalarity at x = " + fs.format(x));
  }
  LampFamily fl;
  LampElement one_lamp = fl.make(SupportSet::finite({Rational(0)}),
                                 Rational(0));
  LampElement all_on = fl.make(SupportSet::cofinite_complement({}),
                               Rational(0));
  for (int i = 0; i < 100 && o.pass; ++i) {
    LampElement x = fl.random_element(rng, 3);
    ScaleOutcome<LampFamily> sc = scale(fl, x, rng);
    ++o.cases;
    if (!sc.certified || !sc.cert.scale.is_one()) {
      fail(o, "lamplighter scale != 1 at x = " + fl.format(x));
      break;
    }
    if (x.shift.is_zero())
      x = fl.make(x.lamps, Rational(Int(rng.range(1, 3)), Int(2)));
    bool density = true;
    for (int j = 0; j < 3 && density; ++j) {
      LampSubgroup W = fl.random_subgroup(rng, 3);
      LampElement gS = fl.make(SupportSet::finite(W.base), Rational(0));
      density = fl.in_contraction(gS, x).verdict &&
                fl.member(fl.mul(all_on, fl.inv(gS)), W);
    }
    bool ok = fl.in_contraction(one_lamp, x).verdict &&
              !fl.in_contraction(all_on, x).verdict &&
              !fl.contraction_closure(x).closed && density;
    if (!ok) fail(o, "lamplighter con(x) closure at x = " + fl.format(x));
  }
  AffineFamily fa(2);
  for (int i = 0; i < 100 && o.pass; ++i) {
    AffineElement x = fa.random_element(rng, 3);
    ++o.cases;
    ContractionGroupKind kind = fa.contraction_group(x);
    bool ok = fa.contraction_closure(x).closed &&
              kind == (x.shift > 0 ? ContractionGroupKind::affine_lamp_line
                                   : ContractionGroupKind::trivial);
    if (!ok) fail(o, "affine con(x) closure at x = " + fa.format(x));
  }
  return o;
}

// 7: every cyclic subgroup of the sym3 family is pre-compact (x^6 = e on
// 1000 samples, with lattice decompositions), and the lamplighter shift
// lattice is infinitely divisible up to k = 8.
Outcome periodic_divisible() {
  Outcome o;
  Rng rng(107);
  Sym3Family fs;
  Sym3CovolumeLattice hs;
  PeriodicReport pr = verify_periodic(fs, hs, 1000, 1000, 36, rng);
  o.cases += pr.lattice_checked + pr.exponent_checked +
             pr.decompositions_checked;
  if (!pr.pass() || pr.exponent_checked != 1000 ||
      pr.decompositions_checked != 1000)
    fail(o, "periodicity: " + pr.detail);
  LampFamily fl;
  DivisibleReport dr =
      verify_divisible(fl, {q(3, 2), q(1), q(0), q(-5, 3), q(7)}, 8, rng);
  o.cases += dr.divisibility_checked + dr.scale_checked +
             dr.contraction_checked;
  if (!dr.pass() || dr.divisibility_checked != 5 * 8)
    fail(o, "divisibility: " + dr.detail);
  return o;
}

// 8: the algebraic laws of the scale on 500 samples, >= 100 enumeration
// crosschecks of the index per family, and byte-identical determinism of
// the shipped full config.
template <GroupFamily F>
void law_block(const F& f, int count, Rng& rng, Outcome& o) {
  for (int i = 0; i < count && o.pass; ++i) {
    typename F::Element x = f.random_element(rng, 3);
    ScaleOutcome<F> sx = scale(f, x, rng);
    long long n = static_cast<long long>(rng.below(5));
    ScaleOutcome<F> sxn = scale(f, power(f, x, n), rng);
    ++o.cases;
    if (!sx.certified || !sxn.certified ||
        sxn.cert.scale != sx.cert.scale.pow(n)) {
      fail(o, std::string(F::name) + " power law at x = " + f.format(x) +
              ", n = " + std::to_string(n));
      return;
    }
    typename F::Element g = f.random_element(rng, 3);
    long long m = 1 + static_cast<long long>(rng.below(4));
    if (f.in_contraction(g, x).verdict !=
        f.in_contraction(g, power(f, x, m)).verdict) {
      fail(o, std::string(F::name) + " con(x) != con(x^m) at x = " +
              f.format(x));
      return;
    }
    ModularOutcome mx = modular(f, x, rng);
    ModularOutcome mi = modular(f, f.inv(x), rng);
    if (!mx.certified || !mi.certified || mx.value * mi.value != Rational(1)) {
      fail(o, std::string(F::name) + " modular identity at x = " +
              f.format(x));
      return;
    }
  }
}

Outcome laws_and_determinism() {
  Outcome o;
  Rng rng(108);
  law_block(AffineFamily(2), 167, rng, o);
  law_block(Sym3Family{}, 167, rng, o);
  law_block(LampFamily{}, 166, rng, o);

  for (int i = 0; i < 100 && o.pass; ++i) {
    long long p = std::vector<long long>{2, 3, 5}[i % 3];
    AffineFamily f(p);
    long long span_max = p == 2 ? 4 : (p == 3 ? 3 : 2);
    long long kA = rng.range(-2, 2);
    long long kB = kA + rng.range(0, span_max);
    Int count = oracles::affine_coset_count(f, kA, kB, rng, 20);
    ++o.cases;
    if (f.index(AffineSubgroup::make_level(kA),
                AffineSubgroup::make_level(kB)) != IndexValue::finite(count))
      fail(o, "affine index crosscheck at levels " + std::to_string(kA) +
              ", " + std::to_string(kB) + " (p = " + std::to_string(p) +
              ")");
  }
  Sym3Family fs;
  for (int i = 0; i < 100 && o.pass; ++i) {
    Sym3Subgroup A = fs.random_subgroup(rng, 3);
    Sym3Subgroup B = fs.intersect(A, fs.random_subgroup(rng, 3));
    Int count = oracles::sym3_coset_count(fs, A, B);
    ++o.cases;
    if (fs.index(A, B) != IndexValue::finite(count))
      fail(o, "sym3 index crosscheck at A = " + fs.format(A) + ", B = " +
              fs.format(B));
  }
  LampFamily fl;
  for (int i = 0; i < 100 && o.pass; ++i) {
    LampSubgroup A = fl.random_subgroup(rng, 2);
    LampSubgroup B = fl.intersect(A, fl.random_subgroup(rng, 3));
    Int count = oracles::lamp_coset_count(fl, A, B, rng, 20);
    ++o.cases;
    if (fl.index(A, B) != IndexValue::finite(count))
      fail(o, "lamplighter index crosscheck at A = " + fl.format(A) +
              ", B = " + fl.format(B));
  }

  if (o.pass) {
    ExperimentConfig cfg =
        load_config(std::string(TDLC_CONFIG_DIR) + "/full.ini");
    RunReport run1 = run_battery(cfg);
    RunReport run2 = run_battery(cfg);
    o.cases += static_cast<long long>(run1.records.size()) +
               static_cast<long long>(run2.records.size());
    if (!run1.all_passed())
      fail(o, "full config battery failed: " +
              std::to_string(run1.failures()) + " failing records");
    else if (run1.records.empty() || run1.jsonl() != run2.jsonl())
      fail(o, "full config battery is not byte-identical across runs");
  }
  return o;
}

struct Criterion {
  const char* name;
  double limit_s;  // 0 = no budget stated
  Outcome (*body)();
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"affine scale value sets (G and H)", 5.0, value_sets},
      {"lattice witnesses (n, h, t), 200 per family", 60.0, witnesses},
      {"double-coset scale products, 500 samples", 60.0, double_cosets},
      {"tidy iff displacement = scale, 200 pairs per family", 0,
       tidy_criterion},
      {"conjugator certificates to k = 16, 100 per family", 0, conjugators},
      {"contraction-group structure", 0, contraction_structure},
      {"sym3 periodicity and lamplighter divisibility", 0,
       periodic_divisible},
      {"scale laws, index crosschecks, determinism", 0,
       laws_and_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    auto t0 = std::chrono::steady_clock::now();
    Outcome o = c.body();
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (o.pass && c.limit_s > 0 && secs > c.limit_s) {
      o.pass = false;
      o.detail = "time budget exceeded: " + std::to_string(secs) + "s > " +
                 std::to_string(c.limit_s) + "s";
    }
    std::printf("[%zu/%zu] %s ... %s (%.1fs, %lld cases)\n", i + 1,
                criteria.size(), c.name, o.pass ? "PASS" : "FAIL", secs,
                o.cases);
    if (!o.pass) {
      std::printf("        %s\n", o.detail.c_str());
      ++failures;
    }
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
