#include "klgame/finite_game.hpp"

#include <algorithm>

namespace klgame {

namespace {

bool part_good(const PartitionEvaluation& p, const Coordinate& x, int t,
               const GoodnessParams& params) {
  if (static_cast<long long>(x.size()) >= params.N) return false;
  if (p.part_count(x) <= static_cast<std::uint64_t>(params.phi)) return false;
  return p.eval(t, x).compare(params.threshold) < 0;
}

}  // namespace

bool is_good(const Restriction& element, int t, const PartitionEvaluation& p,
             const GoodnessParams& params) {
  return part_good(p, p.terminal_of_element(element, t), t, params);
}

bool is_good_pair(const Restriction& element, int t, const PartitionEvaluation& pa,
                  const PartitionEvaluation& pb, const GoodnessParams& params) {
  return is_good(element, t, pa, params) && is_good(element, t, pb, params);
}

std::optional<int> stale_time(const Restriction& element, int after_t,
                              const PartitionEvaluation& p, const Dyadic& threshold) {
  Coordinate x = p.terminal_of_element(element, after_t);
  const auto& n = p.node(x);
  std::optional<int> best;
  // First time the evaluation exceeds the threshold; only a transition after
  // after_t counts.
  for (const auto& [tc, v] : n.eval) {
    if (v.compare(threshold) > 0) {
      if (tc > after_t) best = tc;
      break;
    }
  }
  if (auto ts = p.split_time(x)) {
    if (*ts > after_t && (!best || *ts < *best)) best = *ts;
  }
  return best;
}

std::optional<int> stale_time_pair(const Restriction& element, int after_t,
                                   const PartitionEvaluation& pa, const PartitionEvaluation& pb,
                                   const Dyadic& threshold) {
  auto ta = stale_time(element, after_t, pa, threshold);
  auto tb = stale_time(element, after_t, pb, threshold);
  if (!ta) return tb;
  if (!tb) return ta;
  return std::min(*ta, *tb);
}

bool is_nphi_sequence(const std::vector<Restriction>& elements, const PartitionEvaluation& pa,
                      const PartitionEvaluation& pb, const GoodnessParams& params) {
  int t = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!is_good_pair(elements[i], t, pa, pb, params)) return false;
    if (i + 1 == elements.size()) break;
    auto next = stale_time_pair(elements[i], t, pa, pb, params.threshold);
    if (!next) return false;  // forever-fresh element must be the last
    t = *next;
  }
  return true;
}

GreedySequence build_greedy_sequence(const PartitionEvaluation& pa, const PartitionEvaluation& pb,
                                     const GoodnessParams& params) {
  GreedySequence out;
  int t = 0;
  while (true) {
    // Value-lex least element good for both projections at t.
    std::optional<Restriction> best;
    for (const auto& xa : pa.terminal_coords_at(t)) {
      if (!part_good(pa, xa, t, params)) continue;
      for (const auto& xb : pb.terminal_coords_at(t)) {
        if (!part_good(pb, xb, t, params)) continue;
        CylinderSet common = pa.node(xa).heads.intersect(pb.node(xb).heads);
        if (common.empty()) continue;
        Restriction cand = common.lex_least_element();
        if (!best || value_lex_less(cand, *best)) best = cand;
      }
    }
    if (!best) break;
    out.elements.push_back(*best);
    auto next = stale_time_pair(*best, t, pa, pb, params.threshold);
    if (!next) {
      out.ended_fresh = true;
      break;
    }
    out.stale_times.push_back(*next);
    t = *next;
  }
  return out;
}

BigInt length_bound(int ell, const GoodnessParams& params, bool half_splitting) {
  BigInt phi = params.phi;
  if (half_splitting) return (BigInt(6) * pow2i(ell)) / phi;
  return ceil_div(BigInt(2) * pow2i(ell) * BigInt(params.N + 1), phi);
}

QBound length_bound_fraction(int ell, const GoodnessParams& params, bool half_splitting) {
  if (half_splitting) return {BigInt(6) * pow2i(ell), BigInt(params.phi)};
  return {BigInt(2) * pow2i(ell) * BigInt(params.N + 1), BigInt(params.phi)};
}

long long small_unsplit_bad_count(const PartitionEvaluation& pa, const PartitionEvaluation& pb,
                                  int t, int ell, long long phi, long long h,
                                  const Dyadic& threshold) {
  if (phi < 1 || (phi & (phi - 1)) != 0)
    fail(Errc::param_violation, "phi must be a power of two here");
  long long log_phi = 0;
  while ((1ll << log_phi) < phi) ++log_phi;
  long long n_cap = ell - log_phi - h;
  if (n_cap < 0) fail(Errc::param_violation, "ell - log2(phi) - h must be non-negative");
  GoodnessParams params(n_cap, phi, threshold);

  long long count = 0;
  for (const auto& xa : pa.terminal_coords_at(t)) {
    if (static_cast<long long>(xa.size()) >= n_cap) continue;
    if (pa.eval(t, xa).compare(threshold) >= 0) continue;
    bool good_a = part_good(pa, xa, t, params);
    for (const auto& xb : pb.terminal_coords_at(t)) {
      if (static_cast<long long>(xb.size()) >= n_cap) continue;
      if (pb.eval(t, xb).compare(threshold) >= 0) continue;
      bool good_b = part_good(pb, xb, t, params);
      if (good_a && good_b) continue;
      count += static_cast<long long>(pa.node(xa).heads.intersect(pb.node(xb).heads).count());
    }
  }
  return count;
}

}  // namespace klgame
