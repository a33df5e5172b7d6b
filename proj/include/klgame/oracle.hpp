#pragma once

#include <string>
#include <vector>

#include "klgame/finite_game.hpp"

namespace klgame {

// Brute-force enumeration over all 2^L assignments (L <= 12). Everything here
// recomputes from first principles: set membership by per-cylinder
// consistency, measures by popcount, capitals by mass over popcount size, so
// the checks stay independent of the symbolic cylinder calculus.
struct OracleReport {
  long long checks = 0;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
  void merge(const OracleReport& o) {
    checks += o.checks;
    mismatches.insert(mismatches.end(), o.mismatches.begin(), o.mismatches.end());
  }
};

// Set membership, measure, count_consistent, canonical-form determinism.
OracleReport oracle_check_set(const CylinderSet& set, Universe u);

// Parts partition their parents element-wise; measures and counts agree;
// canonicalizing the enumerated elements reproduces each part exactly.
OracleReport oracle_check_strategy(const BettingStrategy& s, int t);

// Replays the projection definition element-wise over a full tail rho (all
// positions outside I assigned) and compares structure, correspondence,
// evaluations, and goodness classifications.
OracleReport oracle_check_projection(const BettingStrategy& s, std::uint64_t I_mask,
                                     const Restriction& rho, int t_max,
                                     const PartitionEvaluation& pe, const GoodnessParams& params);

}  // namespace klgame
