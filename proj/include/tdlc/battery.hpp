#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/config.hpp"
#include "tdlc/lattice.hpp"
#include "tdlc/report.hpp"
#include "tdlc/scale.hpp"

namespace tdlc {

namespace battery_detail {

template <GroupFamily F>
json scale_json(const F& f, const ScaleOutcome<F>& s) {
  json j;
  j["certified"] = s.certified;
  j["raw_min"] = s.raw_min.str();
  if (s.certified) {
    j["scale"] = s.cert.scale.str();
    j["tidy_v"] = f.format(s.cert.tidy_v);
    j["v_plus"] = f.format(s.cert.v_plus);
    j["v_minus"] = f.format(s.cert.v_minus);
  } else {
    j["failure"] = s.failure;
  }
  json ex = json::array();
  for (const auto& [v, idx] : s.cert.examined) {
    json e;
    e["subgroup"] = f.format(v);
    e["index"] = idx.str();
    ex.push_back(e);
  }
  j["examined"] = ex;
  return j;
}

template <GroupFamily F>
json witness_json(const F& f, const LatticeWitness<F>& w) {
  json j;
  j["found"] = w.found;
  if (w.found) {
    j["n"] = w.n;
    j["h"] = f.format(w.h);
    j["t"] = f.format(w.t);
    j["conjugator_path"] = w.conjugator.path;
    j["conjugacy"] = w.conjugacy.detail;
    json checks = json::array();
    for (const auto& [name, ok] : w.checks) {
      json c;
      c["name"] = name;
      c["ok"] = ok;
      checks.push_back(c);
    }
    j["checks"] = checks;
  }
  if (!w.failure.empty()) j["failure"] = w.failure;
  return j;
}

// Per-family sample counts for criteria stated as totals across families.
inline int split_count(int total, int enabled, int position) {
  if (enabled <= 0) return 0;
  return total / enabled + (position < total % enabled ? 1 : 0);
}

template <GroupFamily F>
void check_tidy_criterion(const F& f, const ExperimentConfig& cfg, Rng rng,
                          RunReport& rep) {
  EngineOptions opt = cfg.engine();
  for (int i = 0; i < cfg.tidy_pairs; ++i) {
    typename F::Element x = f.random_element(rng, opt.sample_bound);
    typename F::Subgroup V = f.random_subgroup(rng, opt.sample_bound);
    TidyReport<F> tidy = is_tidy(f, x, V, rng, opt);
    IndexValue disp = displacement_index(f, x, V);
    ScaleOutcome<F> sc = scale(f, x, rng, opt);
    Record r;
    r.family = F::name;
    r.check = "tidy-criterion";
    r.inputs["x"] = f.format(x);
    r.inputs["V"] = f.format(V);
    r.outputs["tidy"] = tidy.tidy;
    r.outputs["displacement"] = disp.str();
    r.outputs["scale"] = sc.certified ? sc.cert.scale.str() : "uncertified";
    bool minimizes = sc.certified && disp == sc.cert.scale;
    r.verdict = tidy.determined && sc.certified && tidy.tidy == minimizes;
    r.certificate["reason"] = tidy.tidy ? tidy.factorization_note
                                        : tidy.reason;
    r.certificate["v_plus"] = f.format(tidy.v_plus);
    r.certificate["v_minus"] = f.format(tidy.v_minus);
    rep.add(std::move(r));
  }
}

template <GroupFamily F, class Lattice>
void check_witnesses(const F& f, const Lattice& H,
                     const ExperimentConfig& cfg, Rng rng, RunReport& rep) {
  EngineOptions opt = cfg.engine();
  for (int i = 0; i < cfg.witness_samples; ++i) {
    typename F::Element x = f.random_element(rng, opt.sample_bound);
    LatticeWitness<F> w =
        find_witness(f, H, x, cfg.n_max, cfg.conjugator_k,
                     cfg.witness_membership_samples, rng, opt);
    Record r;
    r.family = F::name;
    r.check = "witness";
    r.inputs["x"] = f.format(x);
    r.inputs["H"] = H.label();
    r.outputs = witness_json(f, w);
    r.verdict = w.pass();
    r.certificate["scale_x"] = scale_json(f, w.scale_x);
    r.certificate["scale_h"] = scale_json(f, w.scale_h);
    rep.add(std::move(r));
  }
}

template <GroupFamily F>
void check_double_coset(const F& f, const ExperimentConfig& cfg, Rng rng,
                        int samples, RunReport& rep) {
  EngineOptions opt = cfg.engine();
  for (int i = 0; i < samples; ++i) {
    typename F::Element x = f.random_element(rng, opt.sample_bound);
    ScaleOutcome<F> sc = scale(f, x, rng, opt);
    Record r;
    r.family = F::name;
    r.check = "double-coset";
    r.inputs["x"] = f.format(x);
    if (!sc.certified) {
      r.verdict = false;
      r.certificate["failure"] = sc.failure;
      rep.add(std::move(r));
      continue;
    }
    const typename F::Subgroup& V = sc.cert.tidy_v;
    long long n =
        1 + static_cast<long long>(rng.below(
                static_cast<std::uint64_t>(cfg.double_coset_n_max)));
    typename F::Element y = f.identity();
    for (long long j = 0; j < n; ++j) {
      y = f.mul(y, f.mul(f.sample_member(V, rng, opt.sample_bound),
                         f.mul(x, f.sample_member(V, rng, opt.sample_bound))));
    }
    DoubleCosetReport<F> dc = double_coset_check(f, y, x, V, n, rng, opt);
    r.inputs["V"] = f.format(V);
    r.inputs["n"] = n;
    r.inputs["y"] = f.format(y);
    r.outputs["in_coset"] = dc.in_coset;
    r.outputs["scale_y"] = dc.scale_y.str();
    r.outputs["expected"] = dc.expected.str();
    r.verdict = dc.pass();
    if (!dc.note.empty()) r.certificate["note"] = dc.note;
    rep.add(std::move(r));
  }
}

template <GroupFamily F>
void check_conjugator(const F& f, const ExperimentConfig& cfg, Rng rng,
                      RunReport& rep) {
  EngineOptions opt = cfg.engine();
  for (int i = 0; i < cfg.conjugator_samples; ++i) {
    typename F::Element x = f.random_element(rng, opt.sample_bound);
    ScaleOutcome<F> sc = scale(f, x, rng, opt);
    Record r;
    r.family = F::name;
    r.check = "conjugator";
    r.inputs["x"] = f.format(x);
    if (!sc.certified) {
      r.verdict = false;
      r.certificate["failure"] = sc.failure;
      rep.add(std::move(r));
      continue;
    }
    const typename F::Subgroup& V = sc.cert.tidy_v;
    typename F::Element y =
        f.mul(f.sample_member(V, rng, opt.sample_bound),
              f.mul(x, f.sample_member(V, rng, opt.sample_bound)));
    ConjugatorOutcome<F> co =
        find_conjugator(f, y, x, V, cfg.conjugator_k, rng, opt);
    r.inputs["V"] = f.format(V);
    r.inputs["y"] = f.format(y);
    r.outputs["t"] = f.format(co.t);
    r.outputs["path"] = co.path;
    r.outputs["checked_k"] = co.checked_k;
    r.verdict = co.found;
    if (!co.failure.empty()) r.certificate["failure"] = co.failure;
    rep.add(std::move(r));
  }
}

template <GroupFamily F>
void check_power_laws(const F& f, const ExperimentConfig& cfg, Rng rng,
                      int samples, RunReport& rep) {
  EngineOptions opt = cfg.engine();
  for (int i = 0; i < samples; ++i) {
    typename F::Element x = f.random_element(rng, opt.sample_bound);
    long long n = rng.range(0, 4);
    ScaleOutcome<F> sx = scale(f, x, rng, opt);
    ScaleOutcome<F> sxn = scale(f, power(f, x, n), rng, opt);
    {
      Record r;
      r.family = F::name;
      r.check = "power-law";
      r.inputs["x"] = f.format(x);
      r.inputs["n"] = n;
      bool ok = sx.certified && sxn.certified &&
                sx.cert.scale.pow(n) == sxn.cert.scale;
      r.outputs["scale_x"] = sx.certified ? sx.cert.scale.str() : "uncertified";
      r.outputs["scale_xn"] =
          sxn.certified ? sxn.cert.scale.str() : "uncertified";
      r.verdict = ok;
      rep.add(std::move(r));
    }
    {
      Record r;
      r.family = F::name;
      r.check = "contraction-power";
      long long m = rng.range(1, 4);
      typename F::Element g = f.random_element(rng, opt.sample_bound);
      ContractionDecision dx = f.in_contraction(g, x);
      ContractionDecision dm = f.in_contraction(g, power(f, x, m));
      r.inputs["x"] = f.format(x);
      r.inputs["g"] = f.format(g);
      r.inputs["m"] = m;
      r.outputs["in_con_x"] = dx.verdict;
      r.outputs["in_con_xm"] = dm.verdict;
      r.outputs["kind"] = ContractionDecision::kind_name(dx.kind);
      r.verdict = dx.verdict == dm.verdict;
      rep.add(std::move(r));
    }
    {
      Record r;
      r.family = F::name;
      r.check = "modular-identity";
      ModularOutcome mx = modular(f, x, rng, opt);
      ModularOutcome mi = modular(f, f.inv(x), rng, opt);
      r.inputs["x"] = f.format(x);
      bool ok = mx.certified && mi.certified &&
                mx.value * mi.value == Rational(1);
      r.outputs["modular_x"] = mx.certified ? mx.value.str() : "uncertified";
      r.outputs["modular_x_inv"] =
          mi.certified ? mi.value.str() : "uncertified";
      r.verdict = ok;
      rep.add(std::move(r));
    }
  }
}

inline void check_value_sets(const ExperimentConfig& cfg, Rng rng,
                             RunReport& rep) {
  EngineOptions opt = cfg.engine();
  for (long long p : cfg.value_set_primes) {
    AffineFamily f(p);
    for (int k = 0; k <= cfg.value_set_k_max; ++k) {
      for (int sign : {-1, +1}) {
        AffineElement x = f.make(Rational(0), sign * k);
        ScaleOutcome<AffineFamily> sc = scale(f, x, rng, opt);
        IndexValue expected =
            sign < 0 ? IndexValue::finite(rational_pow(Int(p), k).num())
                     : IndexValue::one();
        Record r;
        r.family = "affine";
        r.check = "value-set-G";
        r.inputs["p"] = p;
        r.inputs["x"] = f.format(x);
        r.outputs["scale"] =
            sc.certified ? sc.cert.scale.str() : "uncertified";
        r.outputs["expected"] = expected.str();
        r.verdict = sc.certified && sc.cert.scale == expected;
        r.certificate = scale_json(f, sc);
        rep.add(std::move(r));
        if (k == 0) break;  // (0,0) once
      }
    }
    for (long long m : cfg.moduli) {
      for (int k = 0; k <= cfg.value_set_h_k_max; ++k) {
        AffineElement h = f.make(Rational(0), -m * k);
        ScaleOutcome<AffineFamily> sc = scale(f, h, rng, opt);
        IndexValue expected =
            IndexValue::finite(rational_pow(Int(p), m * k).num());
        Record r;
        r.family = "affine";
        r.check = "value-set-H";
        r.inputs["p"] = p;
        r.inputs["m"] = m;
        r.inputs["h"] = f.format(h);
        r.outputs["scale"] =
            sc.certified ? sc.cert.scale.str() : "uncertified";
        r.outputs["expected"] = expected.str();
        r.verdict = sc.certified && sc.cert.scale == expected;
        rep.add(std::move(r));
      }
    }
  }
}

inline void check_affine_contraction(const AffineFamily& f,
                                     const ExperimentConfig& cfg, Rng rng,
                                     RunReport& rep) {
  EngineOptions opt = cfg.engine();
  for (int i = 0; i < cfg.witness_samples; ++i) {
    AffineElement x = f.random_element(rng, opt.sample_bound);
    ClosureNote note = f.contraction_closure(x);
    ContractionGroupKind kind = f.contraction_group(x);
    Record r;
    r.family = "affine";
    r.check = "contraction-closed";
    r.inputs["x"] = f.format(x);
    r.outputs["kind"] = contraction_group_name(kind);
    r.outputs["closed"] = note.closed;
    r.verdict = note.closed &&
                (kind == ContractionGroupKind::affine_lamp_line) ==
                    (x.shift > 0);
    r.certificate["description"] = note.description;
    rep.add(std::move(r));
  }
  // "H uniscalar forces G uniscalar" has nothing to propagate here: H
  // itself has elements of scale p^m — exhibit one
  AffineElement h = f.make(Rational(0), -cfg.modulus);
  ScaleOutcome<AffineFamily> sc = scale(f, h, rng, opt);
  Record r;
  r.family = "affine";
  r.check = "uniscalar-propagation-vacuous";
  r.inputs["h"] = f.format(h);
  r.inputs["H"] = "mod-" + std::to_string(cfg.modulus);
  IndexValue expected =
      IndexValue::finite(rational_pow(Int(f.prime()), cfg.modulus).num());
  r.outputs["scale_h"] = sc.certified ? sc.cert.scale.str() : "uncertified";
  r.outputs["expected"] = expected.str();
  r.verdict = sc.certified && sc.cert.scale == expected;
  r.certificate["note"] =
      "H contains elements of scale > 1, so uniscalar propagation from H "
      "to G has a failing precondition and claims nothing for this pair";
  rep.add(std::move(r));
}

inline void check_sym3_negative(const Sym3Family& f,
                                const ExperimentConfig& cfg, Rng rng,
                                RunReport& rep) {
  EngineOptions opt = cfg.engine();
  Sym3Element x({{0, Perm3::c123()}}, Perm3::identity());
  Sym3Subgroup V(0, {});
  TidyReport<Sym3Family> tidy = is_tidy(f, x, V, rng, opt);
  IndexValue disp = displacement_index(f, x, V);
  ScaleOutcome<Sym3Family> sc = scale(f, x, rng, opt);
  Record r;
  r.family = "sym3";
  r.check = "tidy-negative";
  r.inputs["x"] = f.format(x);
  r.inputs["V"] = f.format(V);
  r.outputs["tidy"] = tidy.tidy;
  r.outputs["displacement"] = disp.str();
  r.outputs["scale"] = sc.certified ? sc.cert.scale.str() : "uncertified";
  r.verdict = tidy.determined && !tidy.tidy &&
              disp == IndexValue::finite(2) && sc.certified &&
              sc.cert.scale.is_one();
  r.certificate["reason"] = tidy.reason;
  r.certificate["v_plus"] = f.format(tidy.v_plus);
  rep.add(std::move(r));
}

inline void check_sym3_anisotropy(const Sym3Family& f,
                                   const ExperimentConfig& cfg, Rng rng,
                                   RunReport& rep) {
  EngineOptions opt = cfg.engine();
  for (int i = 0; i < cfg.witness_samples; ++i) {
    Sym3Element x = f.random_element(rng, opt.sample_bound);
    Sym3Element g = f.random_element(rng, opt.sample_bound);
    ContractionDecision d = f.in_contraction(g, x);
    ScaleOutcome<Sym3Family> sc = scale(f, x, rng, opt);
    Record r;
    r.family = "sym3";
    r.check = "anisotropic-uniscalar";
    r.inputs["x"] = f.format(x);
    r.inputs["g"] = f.format(g);
    r.outputs["in_contraction"] = d.verdict;
    r.outputs["scale"] = sc.certified ? sc.cert.scale.str() : "uncertified";
    bool anisotropic = d.verdict == f.element_equal(g, f.identity());
    r.verdict = anisotropic && sc.certified && sc.cert.scale.is_one() &&
                f.contraction_closure(x).closed;
    rep.add(std::move(r));
  }
}

inline void check_lamp_contraction(const LampFamily& f,
                                   const ExperimentConfig& cfg, Rng rng,
                                   RunReport& rep) {
  EngineOptions opt = cfg.engine();
  for (int i = 0; i < cfg.witness_samples; ++i) {
    LampElement x = f.random_element(rng, opt.sample_bound);
    ScaleOutcome<LampFamily> sc = scale(f, x, rng, opt);
    Record r;
    r.family = "lamplighter";
    r.check = "uniscalar";
    r.inputs["x"] = f.format(x);
    r.outputs["scale"] = sc.certified ? sc.cert.scale.str() : "uncertified";
    r.verdict = sc.certified && sc.cert.scale.is_one();
    rep.add(std::move(r));
  }
  for (int i = 0; i < cfg.witness_samples; ++i) {
    LampElement x = f.random_element(rng, opt.sample_bound);
    if (x.shift.is_zero())
      x = f.make(x.lamps, Rational(Int(rng.range(1, 3)), Int(2)));
    Record r;
    r.family = "lamplighter";
    r.check = "contraction-not-closed";
    r.inputs["x"] = f.format(x);
    LampElement one_lamp = f.make(SupportSet::finite({Rational(0)}),
                                  Rational(0));
    LampElement all_on = f.make(SupportSet::cofinite_complement({}),
                                Rational(0));
    bool nontrivial = f.in_contraction(one_lamp, x).verdict;
    bool cofinite_outside = !f.in_contraction(all_on, x).verdict;
    ClosureNote closure = f.contraction_closure(x);
    // density: the all-on configuration is approximated inside con(x) on
    // every sampled window
    bool density = true;
    for (int j = 0; j < 3 && density; ++j) {
      LampSubgroup W = f.random_subgroup(rng, opt.sample_bound);
      LampElement gS = f.make(SupportSet::finite(W.base), Rational(0));
      density = f.in_contraction(gS, x).verdict &&
                f.member(f.mul(all_on, f.inv(gS)), W);
    }
    r.outputs["con_nontrivial"] = nontrivial;
    r.outputs["all_on_outside_con"] = cofinite_outside;
    r.outputs["closed"] = closure.closed;
    r.outputs["density_witnessed"] = density;
    r.verdict = nontrivial && cofinite_outside && !closure.closed && density;
    r.certificate["description"] = closure.description;
    rep.add(std::move(r));
  }
}

inline void check_sym3_periodic(const Sym3Family& f,
                                const Sym3CovolumeLattice& H,
                                const ExperimentConfig& cfg, Rng rng,
                                RunReport& rep) {
  PeriodicReport pr = verify_periodic(f, H, cfg.periodic_samples,
                                      cfg.periodic_samples, cfg.n_max, rng,
                                      cfg.engine());
  Record r;
  r.family = "sym3";
  r.check = "periodic";
  r.inputs["lattice_samples"] = pr.lattice_checked;
  r.inputs["x_samples"] = pr.exponent_checked;
  r.outputs["lattice_orders_finite"] = pr.lattice_orders_finite;
  r.outputs["exponent_x6"] = pr.exponent_holds;
  r.outputs["decompositions"] = pr.decompositions_checked;
  r.outputs["decompositions_hold"] = pr.decompositions_hold;
  r.verdict = pr.pass();
  if (!pr.detail.empty()) r.certificate["detail"] = pr.detail;
  rep.add(std::move(r));
}

inline void check_lamp_divisible(const LampFamily& f,
                                 const ExperimentConfig& cfg, Rng rng,
                                 RunReport& rep) {
  std::vector<Rational> shifts;
  shifts.emplace_back(Int(3), Int(2));  // the worked k! example
  shifts.emplace_back(1);
  shifts.emplace_back(0);
  for (int i = 0; i < cfg.divisible_samples; ++i)
    shifts.emplace_back(Int(rng.range(-6, 6)), Int(rng.range(1, 4)));
  DivisibleReport dr =
      verify_divisible(f, shifts, cfg.divisible_k_max, rng, cfg.engine());
  Record r;
  r.family = "lamplighter";
  r.check = "divisible";
  r.inputs["shifts"] = static_cast<int>(shifts.size());
  r.inputs["k_max"] = cfg.divisible_k_max;
  r.outputs["divisibility"] = dr.divisibility_holds;
  r.outputs["roots_checked"] = dr.divisibility_checked;
  r.outputs["uniscalar"] = dr.uniscalar_holds;
  r.outputs["contraction_nontrivial"] = dr.contraction_nontrivial;
  r.verdict = dr.pass();
  if (!dr.detail.empty()) r.certificate["detail"] = dr.detail;
  rep.add(std::move(r));
}

}  // namespace battery_detail

// Run every configured check, sequentially and deterministically: the record
// stream is a pure function of the config. Timings are kept out of the
// records on purpose.
inline RunReport run_battery(const ExperimentConfig& cfg) {
  using namespace battery_detail;
  cfg.validate();
  auto started = std::chrono::steady_clock::now();
  RunReport rep;
  Rng root(cfg.seed);
  std::uint64_t stream = 0;
  auto next = [&] { return root.fork(stream++); };

  int enabled = static_cast<int>(cfg.families.size());
  int position = 0;

  if (cfg.has_family("affine")) {
    AffineFamily f(cfg.prime);
    AffineCovolume H(cfg.modulus);
    check_value_sets(cfg, next(), rep);
    check_tidy_criterion(f, cfg, next(), rep);
    check_witnesses(f, H, cfg, next(), rep);
    check_double_coset(
        f, cfg, next(),
        split_count(cfg.double_coset_samples, enabled, position), rep);
    check_conjugator(f, cfg, next(), rep);
    check_power_laws(f, cfg, next(),
                     split_count(cfg.power_samples, enabled, position), rep);
    check_affine_contraction(f, cfg, next(), rep);
    ++position;
  }
  if (cfg.has_family("sym3")) {
    Sym3Family f;
    Sym3CovolumeLattice H;
    check_tidy_criterion(f, cfg, next(), rep);
    check_sym3_negative(f, cfg, next(), rep);
    check_witnesses(f, H, cfg, next(), rep);
    check_double_coset(
        f, cfg, next(),
        split_count(cfg.double_coset_samples, enabled, position), rep);
    check_conjugator(f, cfg, next(), rep);
    check_power_laws(f, cfg, next(),
                     split_count(cfg.power_samples, enabled, position), rep);
    check_sym3_anisotropy(f, cfg, next(), rep);
    check_sym3_periodic(f, H, cfg, next(), rep);
    ++position;
  }
  if (cfg.has_family("lamplighter")) {
    LampFamily f;
    RationalShiftLattice H;
    check_tidy_criterion(f, cfg, next(), rep);
    check_witnesses(f, H, cfg, next(), rep);
    check_double_coset(
        f, cfg, next(),
        split_count(cfg.double_coset_samples, enabled, position), rep);
    check_conjugator(f, cfg, next(), rep);
    check_power_laws(f, cfg, next(),
                     split_count(cfg.power_samples, enabled, position), rep);
    check_lamp_contraction(f, cfg, next(), rep);
    check_lamp_divisible(f, cfg, next(), rep);
    ++position;
  }

  auto ended = std::chrono::steady_clock::now();
  rep.wall_ms =
      std::chrono::duration<double, std::milli>(ended - started).count();
  return rep;
}

}  // namespace tdlc
