#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "enum_oracle.hpp"
#include "klgame/program.hpp"

using namespace klgame;
using klgame::testing::EnumSet;

namespace {

Restriction R(const std::string& s) { return Restriction::parse(s); }

CylinderSet random_set(Universe u, std::uint64_t seed, int pieces) {
  std::vector<Restriction> cyls;
  std::uint64_t h = seed;
  for (int i = 0; i < pieces; ++i) {
    h = mix64(h);
    std::uint64_t dom = h & u.mask();
    h = mix64(h);
    cyls.emplace_back(dom, h & dom);
  }
  return CylinderSet::of(u.mask(), cyls);
}

}  // namespace

TEST_CASE("dyadic arithmetic is exact and canonical") {
  CHECK(Dyadic(6).mantissa() == 3);
  CHECK(Dyadic(6).exponent() == 1);
  CHECK(Dyadic(0).exponent() == 0);
  CHECK(Dyadic::pow2(-3) + Dyadic::pow2(-3) == Dyadic::pow2(-2));
  CHECK(Dyadic(3) * Dyadic::pow2(-2) == Dyadic::scaled(3, -2));
  CHECK(Dyadic(1) - Dyadic::pow2(-4) == Dyadic::scaled(15, -4));
  CHECK(Dyadic(5) < Dyadic(6));
  CHECK(Dyadic::scaled(-3, -1) < Dyadic(0));
  CHECK(Dyadic::scaled(1, 3) == Dyadic(8));

  CHECK(Dyadic(3).div_exact(Dyadic::pow2(1)) == Dyadic::scaled(3, -1));
  CHECK(Dyadic(6).div_exact(Dyadic(3)) == Dyadic(2));
  CHECK(!Dyadic::exact_div(Dyadic(1), Dyadic(3)).has_value());
  CHECK_THROWS_AS((void)Dyadic(1).div_exact(Dyadic(3)), Error);

  // Round-trip through the serialized form.
  for (long long m : {0ll, 1ll, -7ll, 12345ll})
    for (long e : {-9l, 0l, 4l}) {
      Dyadic d = Dyadic::scaled(m, e);
      CHECK(Dyadic::parse(d.str()) == d);
    }
  CHECK(Dyadic::parse("3*2^-2").str() == "3*2^-2");
}

TEST_CASE("ratio comparisons never divide") {
  Ratio a(Dyadic(1), Dyadic(3) * Dyadic::pow2(-2));  // 4/3
  CHECK(a.compare(Dyadic(1)) > 0);
  CHECK(a.compare(Dyadic(2)) < 0);
  Ratio b(Dyadic(3), Dyadic(2));
  CHECK(a.compare(b) < 0);
  CHECK(Ratio::max(a, b).compare(b) == 0);
  CHECK(b.value() == Dyadic::scaled(3, -1));
  CHECK_THROWS_AS((void)a.value(), Error);
}

TEST_CASE("restriction basics") {
  CHECK(R("@").is_empty());
  CHECK(R("3=1").str() == "3=1");
  CHECK(R("1=0,2=1").arity() == 2);

  // concat: identity on the empty restriction, disjoint union, overlap error.
  CHECK(Restriction{}.concat(R("3=1")) == R("3=1"));
  CHECK(R("1=0").concat(R("2=1")) == R("1=0,2=1"));
  CHECK_THROWS_AS(R("1=0").concat(R("1=1")), Error);

  // extends: subset domain with agreeing values; reflexive; inconsistent.
  CHECK(R("1=0,2=1").extends(R("1=0")));
  CHECK(R("1=0,2=1").extends(R("1=0,2=1")));
  CHECK(!R("1=1").extends(R("1=0")));

  CHECK(R("1=0").consistent(R("2=1")));
  CHECK(!R("1=0").consistent(R("1=1,5=0")));
}

TEST_CASE("canonical restriction order") {
  // Domain lists lexicographically, proper prefixes first, then values.
  CHECK(canonical_less(R("0=0,2=0"), R("1=0")));
  CHECK(canonical_less(R("0=0"), R("0=0,2=0")));
  CHECK(canonical_less(R("1=0"), R("1=1")));
  CHECK(canonical_less(R("1=0,2=1"), R("1=1,2=0")));
  CHECK(!canonical_less(R("1=0"), R("1=0")));
}

TEST_CASE("measure of cylinders") {
  Universe u(6);
  CHECK(CylinderSet::of_cylinder(u.mask(), R("0=1,3=0,5=1")).measure() == Dyadic::pow2(-3));
  CHECK(CylinderSet::full(u.mask()).measure() == Dyadic(1));
  CylinderSet both =
      CylinderSet::of(u.mask(), {R("2=0"), R("2=1")});
  CHECK(both.measure() == Dyadic(1));
  CHECK(both.is_full());
  CHECK(CylinderSet::empty_set(u.mask()).measure() == Dyadic(0));
}

TEST_CASE("set operations against the enumeration oracle") {
  Universe u(8);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    CylinderSet a = random_set(u, seed, 3);
    CylinderSet b = random_set(u, mix64(seed), 2);
    EnumSet ea = EnumSet::from(a), eb = EnumSet::from(b);

    CHECK(EnumSet::from(a.intersect(b)) == ea.intersect(eb));
    CHECK(EnumSet::from(a.unite(b)) == ea.unite(eb));
    CHECK(EnumSet::from(a.subtract(b)) == ea.subtract(eb));
    CHECK(EnumSet::from(a.complement()) == ea.complement());
    CHECK(a.measure() == klgame::testing::enum_measure(ea));
    CHECK(a.count() == ea.count());

    // measure(set) + measure(complement) = 1, exactly.
    CHECK(a.measure() + a.complement().measure() == Dyadic(1));
    // count_consistent(set, empty) = measure * 2^L.
    CHECK(Dyadic::scaled(BigInt(static_cast<long long>(a.count_consistent(Restriction{}))), 0) ==
          a.measure() * Dyadic::scaled(pow2i(u.length), 0));
  }
}

TEST_CASE("canonical form is deterministic and idempotent") {
  Universe u(8);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    CylinderSet a = random_set(u, seed, 4);
    // Rebuilding from any representation of the same set gives the same form:
    // from its own cylinders, and from singleton elements.
    CHECK(CylinderSet::of(u.mask(), a.cylinders()) == a);
    std::vector<Restriction> singles;
    for (auto e : EnumSet::from(a).elems) singles.emplace_back(u.mask(), e);
    CHECK(CylinderSet::of(u.mask(), singles) == a);
    // Cylinders are pairwise inconsistent.
    const auto& cyls = a.cylinders();
    for (std::size_t i = 0; i < cyls.size(); ++i)
      for (std::size_t j = i + 1; j < cyls.size(); ++j) CHECK(!cyls[i].consistent(cyls[j]));
  }
  // The three-element set has one canonical form regardless of input shape.
  Universe u2(2);
  CylinderSet s1 = CylinderSet::of(u2.mask(), {R("0=0,1=0"), R("0=0,1=1"), R("0=1,1=0")});
  CylinderSet s2 = CylinderSet::of(u2.mask(), {R("1=0"), R("0=0,1=1")});
  CylinderSet s3 = CylinderSet::of(u2.mask(), {R("0=0"), R("0=1,1=0")});
  CHECK(s1 == s2);
  CHECK(s2 == s3);
}

TEST_CASE("count_consistent") {
  Universe u(6);
  // Universe against a tail fixing all but 4 positions.
  CHECK(CylinderSet::full(u.mask()).count_consistent(R("4=0,5=1")) == 16);
  // Inconsistent tail.
  CHECK(CylinderSet::of_cylinder(u.mask(), R("2=0")).count_consistent(R("2=1")) == 0);
  // L=6, set restricting position 0, tail on positions 4 and 5: enumeration
  // gives 8.
  CylinderSet set = CylinderSet::of_cylinder(u.mask(), R("0=0"));
  Restriction rho = R("4=1,5=0");
  std::uint64_t expect = 0;
  for (std::uint64_t e = 0; e < 64; ++e) {
    Restriction sigma(u.mask(), e);
    if (sigma.extends(R("0=0")) && sigma.extends(rho)) ++expect;
  }
  CHECK(expect == 8);
  CHECK(set.count_consistent(rho) == 8);
}

TEST_CASE("set ops reject mismatched spaces") {
  CylinderSet a = CylinderSet::full((1ull << 4) - 1);
  CylinderSet b = CylinderSet::full((1ull << 5) - 1);
  CHECK_THROWS_AS(a.intersect(b), Error);
}

TEST_CASE("projections and element enumeration") {
  Universe u(5);
  CylinderSet a = CylinderSet::of(u.mask(), {R("0=0,2=1"), R("0=1,2=0,3=1")});
  // exists_proj keeps consistent cylinders restricted to the kept positions.
  CylinderSet proj = a.exists_proj(0b1101ull & u.mask(), R("2=1"));
  CHECK(proj.space() == 0b1101ull);
  CHECK(proj.intersects(R("0=0")));

  auto members = CylinderSet::of_cylinder(0b110ull, R("1=1")).enumerate_over(0b110ull);
  REQUIRE(members.size() == 2);
  CHECK(members[0] == R("1=1,2=0"));
  CHECK(members[1] == R("1=1,2=1"));

  CHECK(CylinderSet::full(0b11ull).lex_least_element() == R("0=0,1=0"));
  CHECK(CylinderSet::of_cylinder(0b11ull, R("0=1")).lex_least_element() == R("0=1,1=0"));
}
