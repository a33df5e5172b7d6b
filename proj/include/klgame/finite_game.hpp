#pragma once

#include <optional>
#include <vector>

#include "klgame/projection.hpp"

namespace klgame {

struct GoodnessParams {
  long long N = 1;          // parts must have split strictly fewer times
  long long phi = 1;        // parts must have strictly more elements
  Dyadic threshold = Dyadic(2);  // evaluations must stay strictly below

  GoodnessParams() = default;
  GoodnessParams(long long n, long long p, Dyadic thr = Dyadic(2))
      : N(n), phi(p), threshold(std::move(thr)) {
    if (N < 0 || phi < 1 || threshold.sign() <= 0)
      fail(Errc::param_violation, "bad goodness parameters");
  }
};

bool is_good(const Restriction& element, int t, const PartitionEvaluation& p,
             const GoodnessParams& params);
bool is_good_pair(const Restriction& element, int t, const PartitionEvaluation& pa,
                  const PartitionEvaluation& pb, const GoodnessParams& params);

// Smallest t' > after_t at which a part containing the element splits or its
// evaluation first exceeds the threshold; absent within the horizon.
std::optional<int> stale_time(const Restriction& element, int after_t,
                              const PartitionEvaluation& p, const Dyadic& threshold);
std::optional<int> stale_time_pair(const Restriction& element, int after_t,
                                   const PartitionEvaluation& pa, const PartitionEvaluation& pb,
                                   const Dyadic& threshold);

bool is_nphi_sequence(const std::vector<Restriction>& elements, const PartitionEvaluation& pa,
                      const PartitionEvaluation& pb, const GoodnessParams& params);

struct GreedySequence {
  std::vector<Restriction> elements;
  std::vector<int> stale_times;  // aligned with elements; missing last entry = fresh end
  bool ended_fresh = false;
};

// Maximal sequence choosing the value-lex least good element each round.
GreedySequence build_greedy_sequence(const PartitionEvaluation& pa, const PartitionEvaluation& pb,
                                     const GoodnessParams& params);

// Length cap for the sequences: strict "<" against the returned value in the
// general case (ceiling of 2*(2^ell/phi)*(N+1)), "<=" in the half-splitting
// case (floor of 6*2^ell/phi).
BigInt length_bound(int ell, const GoodnessParams& params, bool half_splitting);

// The same bounds as an exact fraction numerator/denominator, for measure
// comparisons that must not round.
struct QBound {
  BigInt num;
  BigInt den;
};
QBound length_bound_fraction(int ell, const GoodnessParams& params, bool half_splitting);

// Elements bad for the pair at t while both containing terminal parts still
// have evaluation below the threshold and fewer than N splits, with
// N = ell - log2(phi) - h (phi must be a power of two).
long long small_unsplit_bad_count(const PartitionEvaluation& pa, const PartitionEvaluation& pb,
                                  int t, int ell, long long phi, long long h,
                                  const Dyadic& threshold = Dyadic(2));

}  // namespace klgame
