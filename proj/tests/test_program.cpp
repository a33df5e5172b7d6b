#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "klgame/program.hpp"

using namespace klgame;

namespace {
Restriction R(const std::string& s) { return Restriction::parse(s); }
}

TEST_CASE("wager to masses") {
  // Fair halves, wager 1/2 on side 0: masses (3/4, 1/4).
  auto [m0, m1] = wager_to_masses(Dyadic(1), Dyadic(1), Dyadic::pow2(-1), Dyadic::pow2(-1),
                                  Dyadic::pow2(-1), false);
  CHECK(m0 == Dyadic::scaled(3, -2));
  CHECK(m1 == Dyadic::pow2(-2));

  // No wager splits mass by size.
  auto [z0, z1] = wager_to_masses(Dyadic(1), Dyadic(1), Dyadic::pow2(-2),
                                  Dyadic(3) * Dyadic::pow2(-2), Dyadic(0), false);
  CHECK(z0 == Dyadic::pow2(-2));
  CHECK(z1 == Dyadic(3) * Dyadic::pow2(-2));

  // All-in on a quarter-size side: capital quadruples there, nothing remains
  // on the other side.
  auto [a0, a1] = wager_to_masses(Dyadic(1), Dyadic(1), Dyadic::pow2(-2),
                                  Dyadic(3) * Dyadic::pow2(-2), Dyadic(1), false);
  CHECK(a0 == Dyadic(1));
  CHECK(a1 == Dyadic(0));

  CHECK_THROWS_AS(wager_to_masses(Dyadic(1), Dyadic(1), Dyadic::pow2(-1), Dyadic::pow2(-1),
                                  Dyadic(2), false),
                  Error);
  CHECK_THROWS_AS(wager_to_masses(Dyadic(1), Dyadic(1), Dyadic::pow2(-1), Dyadic::pow2(-2),
                                  Dyadic(0), false),
                  Error);
}

TEST_CASE("building from programs") {
  Universe u(4);

  SUBCASE("immediate halt leaves one node") {
    StrategyProgram p;  // empty table: HALT at the root
    BettingStrategy s = build_from_program(p, u, 10);
    CHECK(s.terminal_coords_at(10) == std::vector<Coordinate>{""});
  }
  SUBCASE("zero wagers leave all capitals equal") {
    StrategyProgram p;
    p.table.push_back({R("@"), {0, false, Dyadic(0)}});
    p.table.push_back({R("0=0"), {1, false, Dyadic(0)}});
    p.table.push_back({R("0=1"), {1, false, Dyadic(0)}});
    BettingStrategy s = build_from_program(p, u, 10);
    auto terms = s.terminal_coords_at(10);
    REQUIRE(terms.size() == 4);
    for (const auto& x : terms) {
      CHECK(x.size() == 2);
      CHECK(s.capital(x) == Dyadic(1));
      CHECK(s.part(x).cylinders().size() == 1);
    }
  }
  SUBCASE("single bet on position 2 guessing 1 with wager 1/2") {
    StrategyProgram p;
    p.table.push_back({R("@"), {2, true, Dyadic::pow2(-1)}});
    BettingStrategy s = build_from_program(p, u, 10);
    CHECK(s.mass("0") == Dyadic::pow2(-2));
    CHECK(s.mass("1") == Dyadic::scaled(3, -2));
    CHECK(s.part("1").cylinders()[0] == R("2=1"));
  }
  SUBCASE("re-betting a position is rejected") {
    StrategyProgram p;
    p.table.push_back({R("@"), {2, true, Dyadic(0)}});
    p.table.push_back({R("2=0"), {2, false, Dyadic(0)}});
    CHECK_THROWS_AS(build_from_program(p, u, 10), Error);
  }
  SUBCASE("horizon caps the build") {
    StrategyProgram p = make_generator("sequential", 0, {});
    BettingStrategy s = build_from_program(p, u, 2);
    CHECK(s.last_event_time() <= 2);
  }
  SUBCASE("clock schedule interleaves") {
    StrategyProgram p = make_generator("sequential", 0, {});
    BettingStrategy a = build_from_program(p, u, 9, 1, 2);
    for (const auto& ev : a.events()) CHECK(ev.time % 2 == 1);
    BettingStrategy b = build_from_program(p, u, 9, 2, 2);
    for (const auto& ev : b.events()) CHECK(ev.time % 2 == 0);
  }
}

TEST_CASE("program file format round-trips") {
  std::vector<StrategyProgram> programs;

  StrategyProgram table;
  table.initial_mass = Dyadic::pow2(-1);
  table.table.push_back({R("@"), {2, true, Dyadic::pow2(-1)}});
  table.table.push_back({R("2=0"), {0, false, Dyadic(3) * Dyadic::pow2(-2)}});
  programs.push_back(table);
  programs.push_back(savings_transform(table));

  StrategyProgram scripted;
  scripted.kind = ProgramKind::scripted;
  scripted.script.push_back({"", {R("0=0,1=0")}, {R("0=1"), R("0=0,1=1")},
                             Dyadic::pow2(-2), Dyadic(3) * Dyadic::pow2(-2)});
  scripted.script.push_back({"1", {R("0=1")}, {R("0=0,1=1")}, Dyadic::pow2(-1),
                             Dyadic::pow2(-2)});
  programs.push_back(scripted);

  programs.push_back(make_generator("random_kl", 99, {{"depth", "4"}}));
  programs.push_back(make_generator("skip", 3, {{"stride", "2"}, {"wager", "1*2^-2"}}));

  for (const auto& p : programs) {
    std::string text = emit_program(p);
    StrategyProgram back = parse_program(text);
    CHECK(back == p);
    CHECK(emit_program(back) == text);
  }
}

TEST_CASE("program parse errors") {
  CHECK_THROWS_AS(parse_program("kind kl_table\n"), Error);  // missing header
  CHECK_THROWS_AS(parse_program("klprog 1\nkind nonsense\n"), Error);
  CHECK_THROWS_AS(parse_program("klprog 1\nkind kl_table\nentry zzz\n"), Error);
}

TEST_CASE("generators") {
  Universe u(6);

  SUBCASE("idle never bets") {
    BettingStrategy s = build_from_program(make_generator("idle", 0), u, 50);
    CHECK(s.events().empty());
  }
  SUBCASE("skip bettor hits every other position") {
    BettingStrategy s =
        build_from_program(make_generator("skip", 0, {{"stride", "2"}}), u, 1000);
    Restriction sigma(u.mask(), 0);
    CHECK(split_count(sigma, 0b111111, s, 1000) == 3);  // positions 0, 2, 4
    CHECK(split_count(sigma, 0b010101, s, 1000) == 3);
    CHECK(split_count(sigma, 0b101010, s, 1000) == 0);
  }
  SUBCASE("random programs are deterministic in the seed") {
    BettingStrategy s1 = build_from_program(make_generator("random_kl", 7), u, 30);
    BettingStrategy s2 = build_from_program(make_generator("random_kl", 7), u, 30);
    BettingStrategy s3 = build_from_program(make_generator("random_kl", 8), u, 30);
    REQUIRE(s1.events().size() == s2.events().size());
    for (std::size_t i = 0; i < s1.events().size(); ++i)
      CHECK(s1.events()[i].coord == s2.events()[i].coord);
    bool same = s1.events().size() == s3.events().size();
    if (same)
      for (std::size_t i = 0; i < s1.events().size(); ++i)
        if (s1.events()[i].coord != s3.events()[i].coord ||
            s1.mass(s1.events()[i].coord + "0") != s3.mass(s3.events()[i].coord + "0"))
          same = false;
    CHECK(!same);
  }
  SUBCASE("scripted_random is general and conserves mass") {
    BettingStrategy s =
        build_from_program(make_generator("scripted_random", 21, {{"splits", "7"}}), u, 50);
    CHECK(s.conservation_violations().empty());
    CHECK(s.events().size() == 7);
  }
}

TEST_CASE("savings transform") {
  Universe u(4);

  SUBCASE("scripted programs cannot be wrapped") {
    StrategyProgram p;
    p.kind = ProgramKind::scripted;
    CHECK_THROWS_AS(savings_transform(p), Error);
  }
  SUBCASE("a never-winning branch saves nothing") {
    StrategyProgram p;
    p.table.push_back({R("@"), {0, false, Dyadic::pow2(-1)}});
    BettingStrategy s = build_from_program(savings_transform(p), u, 10);
    const auto& lost = s.node("1").savings;  // guess was 0, branch 1 loses
    REQUIRE(lost.has_value());
    CHECK(lost->first == Dyadic(0));
    CHECK(lost->second == Dyadic::pow2(-1));
    // Untransformed capital on the losing branch is the same.
    BettingStrategy plain = build_from_program(p, u, 10);
    CHECK(s.capital("1") == plain.capital("1"));
  }
  SUBCASE("three consecutive doublings bank three units") {
    // All-in wagers, always guessing 0: the winning branch doubles the active
    // account each step and each transfer banks one unit.
    StrategyProgram p;
    p.table.push_back({R("@"), {0, false, Dyadic(1)}});
    p.table.push_back({R("0=0"), {1, false, Dyadic(1)}});
    p.table.push_back({R("0=0,1=0"), {2, false, Dyadic(1)}});
    BettingStrategy s = build_from_program(savings_transform(p), u, 10);
    const auto& st = s.node("000").savings;
    REQUIRE(st.has_value());
    CHECK(st->first == Dyadic(3));
    CHECK(st->second == Dyadic(1));
  }
  SUBCASE("gap bound and monotone savings on random programs") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      StrategyProgram p = make_generator("random_kl", seed, {{"depth", "4"}});
      BettingStrategy s = build_from_program(savings_transform(p), u, 40);
      Dyadic unit = s.mass("");
      for (const auto& x : s.terminal_coords_at(40)) {
        for (std::size_t i = 0; i <= x.size(); ++i) {
          Coordinate y = x.substr(0, i);
          const auto& sv = s.node(y).savings;
          REQUIRE(sv.has_value());
          // saved + active = capital, exactly.
          CHECK(Ratio(s.mass(y), s.part(y).measure()).compare(sv->first + sv->second) == 0);
          // gap: the running maximum stays within 2 units of the capital.
          CHECK(s.max_capital_ratio(y).compare(sv->first + sv->second + unit.mul_pow2(1)) <= 0);
          if (i > 0) {
            const auto& pv = s.node(x.substr(0, i - 1)).savings;
            CHECK(pv->first <= sv->first);  // saved never shrinks
          }
        }
      }
    }
  }
}
