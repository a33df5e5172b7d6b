#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "klgame/strategy.hpp"

namespace klgame {

enum class ProgramKind { kl_table, scripted, generator };

struct KlBet {
  int position;
  bool guess;
  Dyadic wager_fraction;  // dyadic fraction of current capital, in [0,1]

  bool operator==(const KlBet& o) const {
    return position == o.position && guess == o.guess && wager_fraction == o.wager_fraction;
  }
};

struct KlEntry {
  Restriction observed;  // history of bet positions and revealed bits
  KlBet bet;

  bool operator==(const KlEntry& o) const { return observed == o.observed && bet == o.bet; }
};

struct ScriptedSplit {
  Coordinate coord;
  std::vector<Restriction> set0, set1;
  Dyadic mass0, mass1;

  bool operator==(const ScriptedSplit& o) const {
    return coord == o.coord && set0 == o.set0 && set1 == o.set1 && mass0 == o.mass0 &&
           mass1 == o.mass1;
  }
};

struct GeneratorSpec {
  std::string name;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;

  bool operator==(const GeneratorSpec& o) const {
    return name == o.name && seed == o.seed && params == o.params;
  }
};

// Serializable strategy description. Decision tables map observed histories
// to bets (absent entry = HALT); scripted programs list raw splits; builtin
// generators are expanded at build time.
struct StrategyProgram {
  ProgramKind kind = ProgramKind::kl_table;
  Dyadic initial_mass = Dyadic(1);
  bool savings = false;  // wrap the wagering rule in the savings account
  std::vector<KlEntry> table;
  std::vector<ScriptedSplit> script;
  GeneratorSpec gen;

  bool operator==(const StrategyProgram& o) const {
    return kind == o.kind && initial_mass == o.initial_mass && savings == o.savings &&
           table == o.table && script == o.script && gen == o.gen;
  }
};

// Mass split implementing a wager w on one side of a part of size lambda_v
// split into sides of sizes lambda0, lambda1: the wagered side's capital
// becomes c - w + w / lambda(v_side | v).
std::pair<Dyadic, Dyadic> wager_to_masses(const Dyadic& mu, const Dyadic& lambda_v,
                                          const Dyadic& lambda0, const Dyadic& lambda1,
                                          const Dyadic& w, bool side);

// Wraps the program so its wagers apply to the active account while winnings
// past twice the initial capital are moved to a non-decreasing saved account.
StrategyProgram savings_transform(const StrategyProgram& program);

BettingStrategy build_from_program(const StrategyProgram& program, Universe u, int horizon,
                                   int clock_start = 1, int clock_stride = 1);

std::string emit_program(const StrategyProgram& program);
StrategyProgram parse_program(const std::string& text);

// Builtin generator names: "idle", "sequential" (order, wager, guess, depth),
// "skip" (stride, offset, wager, guess, depth), "random_kl" (depth, halt),
// "scripted_random" (splits).
StrategyProgram make_generator(const std::string& name, std::uint64_t seed,
                               std::map<std::string, std::string> params = {});

// Deterministic stream used by seeded generators.
std::uint64_t mix64(std::uint64_t x);

}  // namespace klgame
