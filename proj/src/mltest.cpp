#include "klgame/mltest.hpp"

#include <sstream>

namespace klgame {

std::vector<Zone> build_zones(const std::vector<int>& pi, const std::vector<long long>& gap_table,
                              int count, ZoneFlavor flavor) {
  positions_mask(pi);  // validates distinctness
  if (gap_table.size() < pi.size())
    fail(Errc::gap_function_invalid, "gap table shorter than the position sequence");
  for (std::size_t i = 1; i < gap_table.size(); ++i)
    if (gap_table[i] < gap_table[i - 1])
      fail(Errc::gap_function_invalid, "gap table must be non-decreasing");

  const long long base = flavor == ZoneFlavor::general ? 2 : 4;
  std::vector<Zone> zones;
  std::size_t used = 0;
  for (int k = 1; k <= count; ++k) {
    long long prev = static_cast<long long>(used);
    std::size_t size = 0;
    bool found = false;
    while (used + size < pi.size()) {
      ++size;
      long long total = prev + static_cast<long long>(size);
      if (gap_table[total - 1] >= 2 * k + base + prev) {
        found = true;
        break;
      }
    }
    if (!found)
      fail(Errc::universe_too_small,
           "position sequence exhausted before zone " + std::to_string(k));
    Zone z;
    z.index = k;
    z.interval.assign(pi.begin() + prev, pi.begin() + prev + static_cast<long>(size));
    long long len = static_cast<long long>(size);
    if (flavor == ZoneFlavor::general) {
      z.phi = (1ll << (k + 2)) * len;
      z.N = len - floor_log2(BigInt(z.phi)) - k;
    } else {
      z.phi = 6ll * (1ll << (k + 1));
      z.N = len - 2 * k - 4;
    }
    if (z.N < 0)
      fail(Errc::universe_too_small, "zone " + std::to_string(k) + " yields a negative split bound (interval length " +
                                         std::to_string(len) + " too small)");
    zones.push_back(std::move(z));
    used += size;
  }
  return zones;
}

std::vector<ZoneCheck> verify_zone_conditions(const std::vector<Zone>& zones, ZoneFlavor flavor) {
  std::vector<ZoneCheck> out;
  for (const auto& z : zones) {
    ZoneCheck c;
    c.index = z.index;
    int ell = static_cast<int>(z.interval.size());
    QBound q = length_bound_fraction(ell, z.params(), flavor == ZoneFlavor::half_splitting);
    // Q_k <= 2^{|I_k|-k-1}  <=>  q.num <= 2^{|I_k|-k-1} * q.den
    c.q_bound = ell - z.index - 1 >= 0 && q.num <= pow2i(ell - z.index - 1) * q.den;
    c.n_bound_floor = z.N + z.index + floor_log2(BigInt(z.phi)) <= ell;
    c.n_bound_exact = BigInt(z.phi) * pow2i(z.N + z.index) <= pow2i(ell);
    out.push_back(c);
  }
  return out;
}

Dyadic violation_measure(const BettingStrategy& a, const BettingStrategy& b, const Zone& zone,
                         int t) {
  std::uint64_t space = a.universe().mask();
  CylinderSet viol = CylinderSet::of(space, violation_pieces(a, zone.mask(), zone.N, t))
                         .unite(CylinderSet::of(space, violation_pieces(b, zone.mask(), zone.N, t)));
  return viol.measure();
}

TestLevels run_levels(const BettingStrategy& a, const BettingStrategy& b,
                      const std::vector<Zone>& zones, int n_levels, int horizon) {
  TestLevels out;
  std::vector<LevelEntry> parents = {{Restriction{}, 0, -1}};
  for (int n = 1; n <= n_levels; ++n) {
    std::vector<LevelEntry> level;
    Dyadic measure;
    for (std::size_t pi = 0; pi < parents.size(); ++pi) {
      const Restriction& z = parents[pi].r;
      for (const auto& zone : zones) {
        if (z.dom & zone.mask()) continue;  // zone undefined for this parent
        GameTrace trace = run_basic_game(a, b, zone.mask(), z, zone.params(), horizon);
        for (const auto& [idx, rec] : trace.records) {
          LevelEntry e;
          e.r = rec.head.concat(rec.tail);
          e.zone_index = zone.index;
          e.parent = static_cast<int>(pi);
          measure += Dyadic::pow2(-e.r.arity());
          level.push_back(std::move(e));
        }
      }
    }
    out.levels.push_back(level);
    out.level_measures.push_back(measure);
    parents = std::move(level);
  }
  return out;
}

std::optional<Restriction> witness_low_capital(const TestLevels& levels, const BettingStrategy& a,
                                               const BettingStrategy& b, const Dyadic& threshold,
                                               int horizon) {
  std::uint64_t space = a.universe().mask();
  CylinderSet low = CylinderSet::of(space, low_capital_pieces(a, threshold, horizon))
                        .intersect(CylinderSet::of(space, low_capital_pieces(b, threshold, horizon)));
  // With no levels built the chain is just the empty restriction.
  std::vector<Restriction> leaves;
  if (levels.levels.empty())
    leaves.push_back(Restriction{});
  else
    for (const auto& e : levels.levels.back()) leaves.push_back(e.r);
  for (const auto& leaf : leaves) {
    CylinderSet cand = low.intersect_cylinder(leaf);
    if (cand.empty()) continue;
    Restriction sigma = cand.lex_least_element();
    if (a.achieved_capital_ratio(sigma, horizon).compare(threshold) <= 0 &&
        b.achieved_capital_ratio(sigma, horizon).compare(threshold) <= 0)
      return sigma;
  }
  return std::nullopt;
}

std::string export_levels(const TestLevels& levels) {
  std::ostringstream out;
  out << "levels 1\n";
  for (std::size_t n = 0; n < levels.levels.size(); ++n) {
    out << "level " << (n + 1) << " measure " << levels.level_measures[n].str() << "\n";
    for (const auto& e : levels.levels[n])
      out << "chosen " << (n + 1) << " zone " << e.zone_index << " parent " << e.parent << " r "
          << e.r.str() << " lambda " << Dyadic::pow2(-e.r.arity()).str() << "\n";
  }
  return out.str();
}

}  // namespace klgame
