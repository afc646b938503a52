#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "tdlc/lamplighter.hpp"

using namespace tdlc;

namespace {
Rational r(long long n, long long d = 1) { return Rational(Int(n), Int(d)); }
}  // namespace

TEST_CASE("support sets: finite and co-finite symmetric differences") {
  SupportSet a = SupportSet::finite({r(0), r(1)});
  SupportSet b = SupportSet::finite({r(1), r(2)});
  CHECK(a.sym_diff(b) == SupportSet::finite({r(0), r(2)}));
  SupportSet all = SupportSet::cofinite_complement({});
  CHECK(all.contains(r(5)));
  CHECK(!SupportSet::cofinite_complement({r(5)}).contains(r(5)));
  // finite + co-finite stays co-finite
  SupportSet c = a.sym_diff(all);
  CHECK(c.cofinite);
  CHECK(!c.contains(r(0)));
  CHECK(c.contains(r(7)));
  // co-finite + co-finite is finite again
  SupportSet d = all.sym_diff(SupportSet::cofinite_complement({r(3)}));
  CHECK(!d.cofinite);
  CHECK(d == SupportSet::finite({r(3)}));
  CHECK(a.shifted(r(1, 2)) == SupportSet::finite({r(1, 2), r(3, 2)}));
  CHECK(SupportSet{}.is_zero());
  CHECK(!all.is_zero());
}

TEST_CASE("lamplighter group laws hold on samples") {
  LampFamily f;
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    LampElement a = f.random_element(rng, 3);
    LampElement b = f.random_element(rng, 3);
    LampElement c = f.random_element(rng, 3);
    CHECK(f.element_equal(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c))));
    CHECK(f.element_equal(f.mul(a, f.inv(a)), f.identity()));
    CHECK(f.element_equal(f.mul(f.inv(a), a), f.identity()));
    CHECK(f.element_equal(f.mul(f.identity(), a), a));
  }
  // the action translates lamp positions
  LampElement x = f.make(SupportSet{}, r(1, 2));
  LampElement g = f.make(SupportSet::finite({r(0)}), r(0));
  CHECK(f.conj(x, g) == f.make(SupportSet::finite({r(1, 2)}), r(0)));
}

TEST_CASE("ray windows canonicalize their generators") {
  LampSubgroup ray1 = LampSubgroup::ray({r(0), r(1)}, r(1));
  CHECK(ray1.base == std::set<Rational>{r(0)});
  LampSubgroup ray2 = LampSubgroup::ray({r(0), r(1, 2)}, r(1));
  CHECK(ray2.base.size() == 2);
  CHECK(LampSubgroup::ray({}, r(1)) == LampSubgroup::window({}));
  CHECK_THROWS_AS(LampSubgroup::ray({r(0)}, r(0)), structural_error);
  CHECK(ray1.contains_point(r(3)));
  CHECK(!ray1.contains_point(r(-1)));
  CHECK(!ray1.contains_point(r(1, 2)));
  CHECK(ray1.is_compact());
  CHECK(!ray1.is_open());
  CHECK(LampSubgroup::window({r(0)}).is_open());
}

TEST_CASE("lamplighter membership and intersections") {
  LampFamily f;
  LampSubgroup w = LampSubgroup::window({r(0), r(1)});
  CHECK(f.member(f.make(SupportSet::finite({r(2)}), r(0)), w));
  CHECK(!f.member(f.make(SupportSet::finite({r(1)}), r(0)), w));
  CHECK(!f.member(f.make(SupportSet{}, r(1)), w));  // nonzero shift
  CHECK(f.member(f.make(SupportSet::cofinite_complement({r(0), r(1)}), r(0)),
                 w));
  LampSubgroup ray = LampSubgroup::ray({r(0)}, r(1));
  CHECK(f.member(f.make(SupportSet::finite({r(-1), r(1, 2)}), r(0)), ray));
  CHECK(!f.member(f.make(SupportSet::finite({r(2)}), r(0)), ray));
  // co-finite support meets every ray
  CHECK(!f.member(f.make(SupportSet::cofinite_complement({r(0)}), r(0)), ray));
  CHECK(f.intersect(w, LampSubgroup::window({r(2)})) ==
        LampSubgroup::window({r(0), r(1), r(2)}));
  CHECK_THROWS_AS(f.intersect(ray, w), structural_error);
  CHECK(f.subgroup_contains(w, f.intersect(w, LampSubgroup::window({r(2)}))));
  CHECK(f.subgroup_contains(LampSubgroup::window({}), w));
  CHECK(!f.subgroup_contains(w, LampSubgroup::window({r(0)})));
  // every window point lies on the ray, so the ray is contained in it
  CHECK(f.subgroup_contains(LampSubgroup::window({r(0), r(2)}), ray));
}

TEST_CASE("lamplighter index agrees with coset enumeration") {
  LampFamily f;
  Rng rng(42);
  for (int i = 0; i < 60; ++i) {
    LampSubgroup a = f.random_subgroup(rng, 3);
    LampSubgroup b = f.intersect(a, f.random_subgroup(rng, 3));
    REQUIRE(f.subgroup_contains(a, b));
    IndexValue idx = f.index(a, b);
    CHECK(!idx.infinite);
    CHECK(idx.value == oracles::lamp_coset_count(f, a, b, rng, 10));
  }
  CHECK(f.index(LampSubgroup::window({}), LampSubgroup::window({r(0), r(7)}))
            .value == 4);
  CHECK_THROWS_AS(f.index(LampSubgroup::window({r(0)}),
                          LampSubgroup::window({r(1)})),
                  structural_error);
}

TEST_CASE("lamplighter factorization splits sampled members") {
  LampFamily f;
  Rng rng(43);
  LampSubgroup P = LampSubgroup::ray({r(0)}, r(1));
  LampSubgroup M = LampSubgroup::ray({r(0)}, r(-1));
  LampSubgroup V = LampSubgroup::window({r(0)});
  for (int i = 0; i < 100; ++i) {
    LampElement v = f.sample_member(V, rng, 3);
    auto split = f.factor_element(v, P, M);
    if (v.lamps.cofinite) {
      CHECK(!split.has_value());  // not representable against a ray
      continue;
    }
    REQUIRE(split.has_value());
    CHECK(f.member(split->first, P));
    CHECK(f.member(split->second, M));
    CHECK(f.element_equal(f.mul(split->first, split->second), v));
  }
}

TEST_CASE("lamplighter serialization round-trips") {
  LampFamily f;
  Rng rng(44);
  for (int i = 0; i < 100; ++i) {
    LampElement g = f.random_element(rng, 3);
    CHECK(f.element_equal(f.parse_element(f.format(g)), g));
    LampSubgroup v = f.random_subgroup(rng, 3);
    CHECK(f.subgroup_equal(f.parse_subgroup(f.format(v)), v));
  }
  LampElement g = f.make(SupportSet::cofinite_complement({r(1, 2)}), r(-2));
  CHECK(f.format(g) == "{1/2}+cofinite|shift:-2/1");
  CHECK(f.element_equal(f.parse_element(f.format(g)), g));
  LampSubgroup ray = LampSubgroup::ray({r(0)}, r(1, 2));
  CHECK(f.format(ray) == "window:{0/1}@ray:1/2");
  CHECK(f.subgroup_equal(f.parse_subgroup(f.format(ray)), ray));
  CHECK_THROWS_AS(f.parse_subgroup("window:{0}@ray:0"), parse_error);
  CHECK_THROWS_AS(f.parse_element("{0,}|shift:1"), parse_error);
  CHECK_THROWS_AS(f.parse_element("{0}|shift:"), parse_error);
}

TEST_CASE("lamplighter sampled members satisfy membership") {
  LampFamily f;
  Rng rng(45);
  for (int i = 0; i < 200; ++i) {
    LampSubgroup v = f.random_subgroup(rng, 3);
    CHECK(f.member(f.sample_member(v, rng, 3), v));
  }
  LampSubgroup ray = LampSubgroup::ray({r(0)}, r(1));
  for (int i = 0; i < 50; ++i)
    CHECK(f.member(f.sample_member(ray, rng, 3), ray));
}
