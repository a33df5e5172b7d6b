#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "klgame/oracle.hpp"
#include "klgame/program.hpp"
#include "klgame/projection.hpp"

using namespace klgame;

namespace {

Restriction R(const std::string& s) { return Restriction::parse(s); }

void kl_split(BettingStrategy& s, const Coordinate& x, int p, const Dyadic& m0, const Dyadic& m1,
              int t) {
  const Restriction& c = s.part(x).cylinders()[0];
  s.split_part(x, CylinderSet::of_cylinder(s.universe().mask(), c.concat(Restriction::single(p, false))),
               CylinderSet::of_cylinder(s.universe().mask(), c.concat(Restriction::single(p, true))),
               m0, m1, t);
}

// Brute-force elementary check: some terminal part contains every extension.
bool elementary_brute(const Restriction& r, const BettingStrategy& s, int t) {
  for (const auto& coordinate : s.terminal_coords_at(t)) {
    std::uint64_t size_r = 1ull << (s.universe().length - r.arity());
    if (s.part(coordinate).count_consistent(r) == size_r) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("elementary restrictions") {
  Universe u(4);
  BettingStrategy s(u, Dyadic(1));

  CHECK(is_elementary(R("@"), s, 0));  // only part is the whole universe
  CHECK(is_elementary(R("0=0,1=1,2=0,3=1"), s, 0));

  kl_split(s, "", 1, Dyadic::pow2(-1), Dyadic::pow2(-1), 1);
  CHECK(is_elementary(R("1=0"), s, 1));
  CHECK(!is_elementary(R("@"), s, 1));
  CHECK(is_elementary(R("@"), s, 0));  // time-indexed
  CHECK(is_elementary(R("0=0,1=1,2=0,3=1"), s, 1));

  // Agreement with the brute-force check across a random strategy.
  BettingStrategy rs = build_from_program(make_generator("random_kl", 3, {{"depth", "3"}}), u, 20);
  for (int t : {0, 3, 7, 20})
    for (std::uint64_t d = 0; d < 16; ++d)
      for (std::uint64_t v = 0; v < 16; ++v) {
        Restriction r(d, v & d);
        CHECK(is_elementary(r, rs, t) == elementary_brute(r, rs, t));
      }
}

TEST_CASE("inspected positions") {
  Universe u(6);

  SUBCASE("nothing inspected at time zero") {
    BettingStrategy s(u, Dyadic(1));
    CHECK(inspected_positions(s, 0) == 0);
  }
  SUBCASE("KL bets on positions 3 and 5") {
    StrategyProgram p = make_generator("sequential", 0, {{"order", "3,5"}});
    BettingStrategy s = build_from_program(p, u, 100);
    CHECK(inspected_positions(s, 100) == ((1ull << 3) | (1ull << 5)));
    CHECK(inspected_positions(s, 1) == (1ull << 3));
  }
  SUBCASE("scripted parts over position 2 only") {
    BettingStrategy s(u, Dyadic(1));
    CylinderSet c0 = CylinderSet::of_cylinder(u.mask(), R("2=0"));
    s.split_part("", c0, c0.complement(), Dyadic::pow2(-1), Dyadic::pow2(-1), 1);
    CHECK(inspected_positions(s, 1) == (1ull << 2));
  }
  SUBCASE("minimality by brute force") {
    BettingStrategy s = build_from_program(make_generator("random_kl", 17, {{"depth", "3"}}),
                                           Universe(5), 30);
    for (int t : {0, 4, 12, 30}) {
      std::uint64_t k = inspected_positions(s, t);
      // All restrictions over K are elementary.
      for (const auto& r : all_assignments(k)) CHECK(is_elementary(r, s, t));
      // Dropping any position of K breaks elementarity somewhere.
      for (int p : mask_positions(k)) {
        std::uint64_t kk = k & ~(1ull << p);
        bool all_ok = true;
        for (const auto& r : all_assignments(kk))
          if (!is_elementary(r, s, t)) all_ok = false;
        CHECK(!all_ok);
      }
    }
  }
}

TEST_CASE("granular restrictions") {
  Universe u(5);
  std::uint64_t I = 0b00011;

  SUBCASE("full tails are always granular") {
    BettingStrategy s = build_from_program(make_generator("random_kl", 9, {{"depth", "4"}}), u, 30);
    for (const auto& rho : all_assignments(u.mask() & ~I))
      for (int t : {0, 5, 17, 30}) CHECK(is_granular(rho, I, s, t));
  }
  SUBCASE("empty tail at time zero, spoiled by an outside-I split") {
    BettingStrategy s(u, Dyadic(1));
    CHECK(is_granular(R("@"), I, s, 0));
    kl_split(s, "", 3, Dyadic::pow2(-1), Dyadic::pow2(-1), 1);
    CHECK(!is_granular(R("@"), I, s, 1));
    CHECK(is_granular(R("3=0"), I, s, 1));
  }
  SUBCASE("overlap with I is rejected") {
    BettingStrategy s(u, Dyadic(1));
    CHECK_THROWS_AS(is_granular(R("0=1"), I, s, 0), Error);
  }
}

TEST_CASE("common granular set") {
  Universe u(5);
  std::uint64_t I = 0b00011;

  SUBCASE("time zero") {
    BettingStrategy a(u, Dyadic(1)), b(u, Dyadic(1));
    auto common = common_granular(a, b, I, 0);
    REQUIRE(common.size() == 1);
    CHECK(common[0].is_empty());
  }
  SUBCASE("one bet outside I") {
    BettingStrategy a(u, Dyadic(1)), b(u, Dyadic(1));
    kl_split(a, "", 3, Dyadic::pow2(-1), Dyadic::pow2(-1), 1);
    auto common = common_granular(a, b, I, 1);
    REQUIRE(common.size() == 2);
    CHECK(common[0] == R("3=0"));
    CHECK(common[1] == R("3=1"));
    for (const auto& r : common) {
      CHECK(is_granular(r, I, a, 1));
      CHECK(is_granular(r, I, b, 1));
    }
  }
  SUBCASE("bets inside I only") {
    BettingStrategy a(u, Dyadic(1)), b(u, Dyadic(1));
    kl_split(a, "", 0, Dyadic::pow2(-1), Dyadic::pow2(-1), 1);
    auto common = common_granular(a, b, I, 1);
    REQUIRE(common.size() == 1);
    CHECK(common[0].is_empty());
  }
}

TEST_CASE("projection") {
  Universe u(5);
  std::uint64_t I = 0b00011;

  SUBCASE("source never splitting on the tail leaves one part") {
    BettingStrategy s(u, Dyadic(1));
    kl_split(s, "", 3, Dyadic::scaled(3, -3), Dyadic(5) * Dyadic::pow2(-3), 1);
    PartitionEvaluation pe = project(s, I, R("3=1"), 10);
    CHECK(pe.terminal_coords_at(10) == std::vector<Coordinate>{""});
    // Evaluation tracks the correspondent's running maximum: side 1 has
    // capital 5/4 > 1.
    CHECK(pe.eval(0, "").compare(Dyadic(1)) == 0);
    CHECK(pe.eval(1, "").compare(Dyadic(5) * Dyadic::pow2(-2)) == 0);
  }
  SUBCASE("bet inside I splits the projection into halves") {
    BettingStrategy s(u, Dyadic(1));
    kl_split(s, "", 0, Dyadic::pow2(-1), Dyadic::pow2(-1), 1);
    PartitionEvaluation pe = project(s, I, R("2=0,3=0,4=0"), 10);
    auto terms = pe.terminal_coords_at(10);
    REQUIRE(terms.size() == 2);
    CHECK(pe.part_count("0") == 2);
    CHECK(pe.part_count("1") == 2);
    CHECK(pe.node("0").birth == 1);
  }
  SUBCASE("projection equals projection on any granular extension") {
    for (std::uint64_t seed : {4u, 11u, 23u}) {
      BettingStrategy s =
          build_from_program(make_generator("random_kl", seed, {{"depth", "4"}}), u, 30);
      std::uint64_t k = inspected_positions(s, 30) & ~I;
      for (const auto& r : all_assignments(k)) {
        PartitionEvaluation p1 = project(s, I, r, 30);
        for (const auto& ext : all_assignments(u.mask() & ~I & ~k)) {
          PartitionEvaluation p2 = project(s, I, r.concat(ext), 30);
          // Same structure and evaluations.
          for (int t : {0, 9, 21, 30}) {
            auto t1 = p1.terminal_coords_at(t);
            REQUIRE(t1 == p2.terminal_coords_at(t));
            for (const auto& x : t1) {
              CHECK(p1.node(x).heads == p2.node(x).heads);
              CHECK(p1.eval(t, x).compare(p2.eval(t, x)) == 0);
            }
          }
        }
      }
    }
  }
  SUBCASE("non-granular tails are rejected with the offending time") {
    BettingStrategy s(u, Dyadic(1));
    kl_split(s, "", 3, Dyadic::pow2(-1), Dyadic::pow2(-1), 1);
    kl_split(s, "0", 4, Dyadic::pow2(-2), Dyadic::pow2(-2), 2);
    try {
      project(s, I, R("@"), 10);
      FAIL("expected NotGranular");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::not_granular);
      CHECK(e.event_time() == 1);
    }
  }
  SUBCASE("correspondence invariant: projected parts match source parts") {
    BettingStrategy s =
        build_from_program(make_generator("random_kl", 31, {{"depth", "4"}}), u, 30);
    for (const auto& rho : all_assignments(u.mask() & ~I)) {
      PartitionEvaluation pe = project(s, I, rho, 30);
      for (int t : {0, 7, 15, 30}) {
        for (const auto& x : pe.terminal_coords_at(t)) {
          // Union over heads of [s^rho] equals the source part within [rho].
          const auto& corr = pe.node(x).correspondence;
          Coordinate src;
          for (const auto& [tc, sc] : corr) {
            if (tc > t) break;
            src = sc;
          }
          std::uint64_t got = 0;
          for (const auto& head : all_assignments(I))
            if (pe.node(x).heads.intersects(head)) {
              CHECK(s.part(src).count_consistent(head.concat(rho)) == 1);
              ++got;
            }
          CHECK(got == s.part(src).count_consistent(rho));
        }
      }
    }
  }
  SUBCASE("library oracle agrees") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      BettingStrategy s =
          build_from_program(make_generator("random_kl", seed, {{"depth", "4"}}), u, 24);
      GoodnessParams params(2, 1);
      for (const auto& rho : all_assignments(u.mask() & ~I)) {
        PartitionEvaluation pe = project(s, I, rho, 24);
        OracleReport rep = oracle_check_projection(s, I, rho, 24, pe, params);
        if (!rep.ok()) CAPTURE(rep.mismatches.front());
        CHECK(rep.ok());
      }
    }
  }
}

TEST_CASE("scripted partition evaluations validate monotonicity") {
  PartitionEvaluation pe = PartitionEvaluation::scripted(0b11, Ratio(Dyadic(1), Dyadic(1)));
  pe.raise_eval(2, "", Ratio(Dyadic(3), Dyadic(2)));
  CHECK_THROWS_AS(pe.raise_eval(3, "", Ratio(Dyadic(1), Dyadic(1))), Error);
  pe.apply_split(4, "", CylinderSet::of_cylinder(0b11, R("0=0")),
                 CylinderSet::of_cylinder(0b11, R("0=1")));
  CHECK(pe.eval(5, "0").compare(Ratio(Dyadic(3), Dyadic(2))) == 0);
  CHECK_THROWS_AS(pe.raise_eval(6, "", Ratio(Dyadic(2), Dyadic(1))), Error);
  CHECK(pe.terminal_of_element(R("0=1,1=0"), 4) == "1");
}
