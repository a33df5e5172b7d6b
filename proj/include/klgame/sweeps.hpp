#pragma once

#include <string>
#include <vector>

#include "klgame/basic_game.hpp"
#include "klgame/oracle.hpp"
#include "klgame/program.hpp"

namespace klgame {

// Seeded strategy-pair sweep asserting the counting and measure bounds over
// exhaustive tails. Shared by the verify CLI mode and the acceptance suite.
struct SweepConfig {
  int universe_length = 8;
  std::vector<int> interval_sizes = {3, 4};
  int seeds = 10;
  std::vector<std::pair<long long, long long>> phi_h = {{2, 1}, {4, 1}};
  int horizon = 40;
  bool include_kl = true;
  bool include_general = true;
  bool with_games = true;
  bool oracle = false;
  std::uint64_t seed_base = 1;
};

struct RuleStat {
  std::string rule;
  long long runs = 0;
  long long failures = 0;
  std::string detail;  // first failure or worst margin notes
};

struct SweepResult {
  std::vector<RuleStat> stats;
  bool ok() const {
    for (const auto& s : stats)
      if (s.failures > 0) return false;
    return true;
  }
  RuleStat& stat(const std::string& rule);
  const RuleStat* find(const std::string& rule) const;
};

SweepResult run_verify_sweep(const SweepConfig& config);

// The strategy pair used by one sweep run (A at odd times, B at even).
std::pair<BettingStrategy, BettingStrategy> build_pair(const StrategyProgram& a,
                                                       const StrategyProgram& b, Universe u,
                                                       int horizon);

}  // namespace klgame
