#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "klgame/finite_game.hpp"

namespace klgame {

enum class StaleCause { part_split, eval_exceeds };

struct FailEntry {
  Restriction tail;
  bool viable;
  StaleCause cause;
  char side;  // 'A' or 'B': the strategy whose event triggered the failure
};

struct FailBatch {
  int time;
  std::vector<FailEntry> entries;
};

using ChoiceIndex = std::vector<int>;

struct ChoiceRecord {
  ChoiceIndex index;
  Restriction head;  // assigns every position of I
  Restriction tail;  // I-granular at the choice time
  int time_chosen;
  std::vector<FailBatch> failures;  // per-time F^t logs (viable = G, else H)
};

struct GameTrace {
  Universe universe{1};
  std::uint64_t I_mask = 0;
  Restriction z;
  GoodnessParams params;
  int horizon = 0;
  std::map<ChoiceIndex, ChoiceRecord> records;

  Dyadic lambda_chosen(const ChoiceIndex& m) const;  // lambda([C(m)])
};

// The choice function on z, I against the pair, replayed over the merged
// event log up to the horizon. Strategies are expected to split at distinct
// times (ties process A before B).
GameTrace run_basic_game(const BettingStrategy& a, const BettingStrategy& b, std::uint64_t I_mask,
                         const Restriction& z, const GoodnessParams& params, int horizon);

// Value-lex least head making head^tail good for both strategies at t, if any.
std::optional<Restriction> least_good_head(const BettingStrategy& a, const BettingStrategy& b,
                                           std::uint64_t I_mask, const Restriction& tail, int t,
                                           const GoodnessParams& params);

struct ChosenMeasure {
  Dyadic sum;            // sum over records of lambda([C(m)])
  Dyadic bound_num;      // Q * 2^-|I| * lambda([z]) as (numerator, denominator)
  BigInt bound_den;
  bool within_bound;     // sum strictly below the bound
  Dyadic max_slice;      // worst per-index-length slice of the sum
  Dyadic slice_bound;    // 2^-|I| * lambda([z])
  bool slices_ok;        // every slice at most the slice bound
};
ChosenMeasure chosen_measure(const GameTrace& trace, bool half_splitting);

struct LowCapReport {
  Dyadic theta;       // low-capital fraction of [z]
  Dyadic eps;         // fraction of [z] where either strategy I-splits > N times
  Dyadic gap_num;     // theta - eps - 2^-h
  BigInt q_num, q_den;
  bool applicable;    // gap_num > 0
  Dyadic max_fraction;
  std::map<ChoiceIndex, Dyadic> fractions;
  bool ok;            // max_fraction >= gap / Q whenever applicable
};
LowCapReport low_capital_fraction(const GameTrace& trace, const BettingStrategy& a,
                                  const BettingStrategy& b, const Dyadic& threshold, long long h,
                                  bool half_splitting);

struct TraceCheck {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};
TraceCheck verify_trace_structure(const GameTrace& trace, const BettingStrategy& a,
                                  const BettingStrategy& b, bool half_splitting);

std::string export_trace(const GameTrace& trace);

std::string index_str(const ChoiceIndex& m);

}  // namespace klgame
