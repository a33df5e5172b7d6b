#pragma once

#include <string>
#include <vector>

#include "klgame/program.hpp"

namespace klgame {

struct LowerBoundStep {
  int n;                 // 1-based step
  int position;          // p'_n
  int time;              // t'_n, strictly increasing
  Dyadic split_measure;  // measure of assignments both strategies split on p'_n by t'_n
  bool bit;              // chosen value of p'_n (ties go to 0)
  Dyadic q;              // mass of the surviving parts of both strategies
  Dyadic w_measure;      // lambda(W^n)
  bool q_halves;         // q_n <= q_{n-1} / 2
  bool q_bound;          // q_n <= 2^-n
  bool w_bound;          // lambda(W^n) >= (1 + 2^-n)/2 * lambda([z_n])
  bool w_recursion;      // lambda(W^n) >= (lambda(W^{n-1}) - 2^-2n) / 2
};

struct LowerBoundTrace {
  std::vector<Restriction> chain;  // z_0 .. z_n
  std::vector<LowerBoundStep> steps;
  Restriction witness;             // full assignment
  Dyadic witness_capital_a, witness_capital_b;  // achieved, transformed strategies
  Dyadic gap_a, gap_b;                          // 2 * initial capital per strategy
  bool witness_ok;                 // both achieved capitals <= 2 + gap
  bool all_bounds_hold() const {
    for (const auto& s : steps)
      if (!(s.q_halves && s.q_bound && s.w_bound && s.w_recursion)) return false;
    return witness_ok;
  }
};

// Applies the savings transform to both programs, builds them on interleaved
// clocks, extracts positions and times where both strategies have split
// almost surely, and follows the mass-minimizing restriction chain.
// Requires mu_A + mu_B = 1 and KL programs; throws Errc::split_density_too_low
// (with the measured profile in the message) when the scan fails.
LowerBoundTrace run_lower_bound(const StrategyProgram& prog_a, const StrategyProgram& prog_b,
                                Universe u, const std::vector<int>& pi, int n_steps, int horizon);

std::string export_lower_bound(const LowerBoundTrace& trace);

}  // namespace klgame
