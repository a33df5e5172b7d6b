#pragma once

#include <optional>
#include <string>
#include <vector>

#include "klgame/basic_game.hpp"

namespace klgame {

enum class ZoneFlavor { general, half_splitting };

struct Zone {
  std::vector<int> interval;  // consecutive entries of pi
  long long N;
  long long phi;
  int index;  // 1-based

  std::uint64_t mask() const { return positions_mask(interval); }
  GoodnessParams params() const { return GoodnessParams(N, phi); }
};

// Partition of pi into the smallest consecutive intervals satisfying the
// flavor's gap inequality; gap_table[l-1] = g(l) for l in [1, |pi|].
std::vector<Zone> build_zones(const std::vector<int>& pi, const std::vector<long long>& gap_table,
                              int count, ZoneFlavor flavor);

struct ZoneCheck {
  int index;
  bool q_bound;        // Q_k <= 2^{|I_k|-k-1}, exact
  bool n_bound_floor;  // N_k + k + floor(log2 phi_k) <= |I_k|
  bool n_bound_exact;  // phi_k * 2^{N_k+k} <= 2^{|I_k|}
};
std::vector<ZoneCheck> verify_zone_conditions(const std::vector<Zone>& zones, ZoneFlavor flavor);

// Measure of assignments on which either strategy splits on the zone's
// interval more than N_k times by t.
Dyadic violation_measure(const BettingStrategy& a, const BettingStrategy& b, const Zone& zone,
                         int t);

struct LevelEntry {
  Restriction r;
  int zone_index;
  int parent;  // index into the previous level, -1 for level 1 entries
};

struct TestLevels {
  std::vector<std::vector<LevelEntry>> levels;  // levels[n-1] holds level n
  std::vector<Dyadic> level_measures;           // sums of lambda over each level
};

TestLevels run_levels(const BettingStrategy& a, const BettingStrategy& b,
                      const std::vector<Zone>& zones, int n_levels, int horizon);

// A full assignment consistent with a chain through the levels on which both
// achieved capitals stay at most the threshold; absence at this scale is an
// outcome, not a refutation.
std::optional<Restriction> witness_low_capital(const TestLevels& levels, const BettingStrategy& a,
                                               const BettingStrategy& b, const Dyadic& threshold,
                                               int horizon);

std::string export_levels(const TestLevels& levels);

}  // namespace klgame
