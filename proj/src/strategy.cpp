#include "klgame/strategy.hpp"

#include <algorithm>
#include <bit>

namespace klgame {

BettingStrategy::BettingStrategy(Universe u, Dyadic root_mass) : universe_(u) {
  if (root_mass.sign() <= 0) fail(Errc::mass_mismatch, "root mass must be positive");
  PartNode root;
  root.coord = "";
  root.set = CylinderSet::full(u.mask());
  root.birth = 0;
  root.mass = root_mass;
  root.max_cap = Ratio(root_mass, Dyadic(1));
  nodes_[""] = std::move(root);
}

const PartNode& BettingStrategy::node(const Coordinate& x) const {
  auto it = nodes_.find(x);
  if (it == nodes_.end()) fail(Errc::unknown_coordinate, "no part at coordinate '" + x + "'");
  return it->second;
}

void BettingStrategy::split_part(const Coordinate& x, CylinderSet set0, CylinderSet set1,
                                 const Dyadic& mass0, const Dyadic& mass1, int t) {
  auto it = nodes_.find(x);
  if (it == nodes_.end() || nodes_.count(x + "0"))
    fail(Errc::not_terminal, "coordinate '" + x + "' is not terminal");
  if (t <= last_event_time() || t <= it->second.birth)
    fail(Errc::time_not_monotone, "split time " + std::to_string(t) + " not past " +
                                      std::to_string(last_event_time()));
  if (set0.empty() || set1.empty()) fail(Errc::empty_child, "child part is empty");
  if (!set0.intersect(set1).empty() || set0.unite(set1) != it->second.set)
    fail(Errc::not_a_partition, "children do not partition the part at '" + x + "'");
  if (mass0.sign() < 0 || mass1.sign() < 0 || mass0 + mass1 != it->second.mass)
    fail(Errc::mass_mismatch, "child masses do not sum to the parent mass");

  for (const auto* s : {&set0, &set1})
    if (s->cylinders().size() != 1) kl_parts_ = false;

  auto add = [&](const Coordinate& coord, CylinderSet set, const Dyadic& mass) {
    PartNode n;
    n.coord = coord;
    n.birth = t;
    n.mass = mass;
    n.max_cap = Ratio::max(it->second.max_cap, Ratio(mass, set.measure()));
    n.set = std::move(set);
    nodes_[coord] = std::move(n);
  };
  add(x + "0", std::move(set0), mass0);
  add(x + "1", std::move(set1), mass1);
  events_.push_back({t, x});
}

bool BettingStrategy::is_terminal_at(const Coordinate& x, int t) const {
  auto it = nodes_.find(x);
  if (it == nodes_.end() || it->second.birth > t) return false;
  auto child = nodes_.find(x + "0");
  return child == nodes_.end() || child->second.birth > t;
}

std::vector<Coordinate> BettingStrategy::terminal_coords_at(int t) const {
  std::vector<Coordinate> out;
  for (const auto& [coord, n] : nodes_) {
    if (n.birth > t) continue;
    auto child = nodes_.find(coord + "0");
    if (child == nodes_.end() || child->second.birth > t) out.push_back(coord);
  }
  return out;
}

Coordinate BettingStrategy::terminal_of_assignment(const Restriction& sigma, int t) const {
  if (sigma.dom != universe_.mask()) fail(Errc::param_violation, "sigma must be a full assignment");
  Coordinate x;
  while (!is_terminal_at(x, t)) {
    if (node(x + "0").set.intersects(sigma))
      x += '0';
    else
      x += '1';
  }
  return x;
}

Coordinate BettingStrategy::deepest_containing(const Restriction& r, int t) const {
  Restriction rr = r.restrict_to(universe_.mask());
  // [r] lies inside a child iff the consistent count matches |[r]|.
  std::uint64_t size_r = 1ull << (universe_.length - rr.arity());
  Coordinate x;
  while (!is_terminal_at(x, t)) {
    if (node(x + "0").set.count_consistent(rr) == size_r) {
      x += '0';
      continue;
    }
    if (node(x + "1").set.count_consistent(rr) == size_r) {
      x += '1';
      continue;
    }
    break;
  }
  return x;
}

Ratio BettingStrategy::capital_ratio(const Coordinate& x) const {
  const auto& n = node(x);
  return Ratio(n.mass, n.set.measure());
}

Ratio BettingStrategy::achieved_capital_ratio(const Restriction& sigma, int t) const {
  return node(terminal_of_assignment(sigma, t)).max_cap;
}

Dyadic BettingStrategy::achieved_capital(const Restriction& sigma, int t) const {
  return achieved_capital_ratio(sigma, t).value();
}

void BettingStrategy::set_savings_state(const Coordinate& x, Dyadic saved, Dyadic active) {
  auto it = nodes_.find(x);
  if (it == nodes_.end()) fail(Errc::unknown_coordinate, "no part at coordinate '" + x + "'");
  it->second.savings = std::make_pair(std::move(saved), std::move(active));
}

std::vector<std::string> BettingStrategy::conservation_violations() const {
  std::vector<std::string> out;
  for (const auto& [coord, n] : nodes_) {
    auto c0 = nodes_.find(coord + "0");
    if (c0 == nodes_.end()) continue;
    const auto& n0 = c0->second;
    const auto& n1 = nodes_.at(coord + "1");
    if (n0.mass + n1.mass != n.mass)
      out.push_back("mass not conserved at '" + coord + "'");
    // lambda(v0)c(x0) + lambda(v1)c(x1) = lambda(v)c(x), cross-multiplied.
    Dyadic l = n.set.measure(), l0 = n0.set.measure(), l1 = n1.set.measure();
    Ratio c = Ratio(n.mass, l), cc0 = Ratio(n0.mass, l0), cc1 = Ratio(n1.mass, l1);
    Dyadic lhs = l0 * cc0.num * cc1.den * c.den + l1 * cc1.num * cc0.den * c.den;
    Dyadic rhs = l * c.num * cc0.den * cc1.den;
    if (lhs != rhs) out.push_back("capital identity broken at '" + coord + "'");
    if (l0 + l1 != l) out.push_back("part sizes not additive at '" + coord + "'");
  }
  return out;
}

namespace {

// Count of heads s with [s^tail] inside v, assuming tail covers every
// position of v's support outside I (then meeting implies containment and no
// cylinder is counted twice).
std::uint64_t head_count(const CylinderSet& v, const Restriction& tail, std::uint64_t I_mask) {
  std::uint64_t n = 0;
  int bits = std::popcount(I_mask);
  for (const auto& c : v.cylinders())
    if (c.consistent(tail)) n += 1ull << (bits - std::popcount(c.dom & I_mask));
  return n;
}

}  // namespace

long long split_count(const Restriction& sigma, std::uint64_t I_mask, const BettingStrategy& s,
                      int t) {
  if (sigma.dom != s.universe().mask()) fail(Errc::param_violation, "sigma must be a full assignment");
  Restriction rho = sigma.restrict_to(~I_mask & s.universe().mask());
  long long count = 0;
  Coordinate x;
  while (!s.is_terminal_at(x, t)) {
    const auto& c0 = s.part(x + "0");
    const auto& c1 = s.part(x + "1");
    if (c0.intersects(rho) && c1.intersects(rho)) ++count;
    x += c0.intersects(sigma) ? '0' : '1';
  }
  return count;
}

bool is_half_splitting(const BettingStrategy& s, std::uint64_t I_mask, int t) {
  std::uint64_t tail_mask = ~I_mask & s.universe().mask();
  for (const auto& ev : s.events()) {
    if (ev.time > t) break;
    const auto& c0 = s.part(ev.coord + "0");
    const auto& c1 = s.part(ev.coord + "1");
    std::uint64_t d_mask = (c0.essential_support() | c1.essential_support()) & tail_mask;
    for (const auto& d : all_assignments(d_mask)) {
      bool m0 = c0.intersects(d), m1 = c1.intersects(d);
      if (!m0 || !m1) continue;  // not split on these tails
      if (head_count(c0, d, I_mask) != head_count(c1, d, I_mask)) return false;
    }
  }
  return true;
}

Dyadic split_profile_measure(const BettingStrategy& s, const std::vector<int>& pi, int ell,
                             int t, long long f_value, ProfileMode mode) {
  if (ell < 0 || ell > static_cast<int>(pi.size()))
    fail(Errc::param_violation, "profile length out of range");
  std::uint64_t I_mask = positions_mask(std::vector<int>(pi.begin(), pi.begin() + ell));
  std::uint64_t tail_mask = ~I_mask & s.universe().mask();
  Dyadic total;
  auto satisfied = [&](long long n) {
    return mode == ProfileMode::at_most ? n <= f_value : n >= f_value;
  };
  for (const auto& coord : s.terminal_coords_at(t)) {
    const auto& part = s.part(coord);
    if (s.kl_parts()) {
      // A cylinder part splits on exactly the tails of its in-I bets.
      long long n = std::popcount(part.cylinders()[0].dom & I_mask);
      if (satisfied(n)) total += part.measure();
      continue;
    }
    std::uint64_t d_mask = 0;
    for (std::size_t i = 0; i < coord.size(); ++i) {
      Coordinate y = coord.substr(0, i);
      d_mask |= (s.part(y + "0").essential_support() | s.part(y + "1").essential_support());
    }
    d_mask &= tail_mask;
    for (const auto& d : all_assignments(d_mask)) {
      long long n = 0;
      for (std::size_t i = 0; i < coord.size(); ++i) {
        Coordinate y = coord.substr(0, i);
        if (s.part(y + "0").intersects(d) && s.part(y + "1").intersects(d)) ++n;
      }
      if (satisfied(n)) total += part.intersect_cylinder(d).measure();
    }
  }
  return total;
}

std::vector<Restriction> violation_pieces(const BettingStrategy& s, std::uint64_t I_mask,
                                          long long max_splits, int t) {
  std::uint64_t tail_mask = ~I_mask & s.universe().mask();
  std::vector<Restriction> pieces;
  for (const auto& coord : s.terminal_coords_at(t)) {
    const auto& part = s.part(coord);
    if (s.kl_parts()) {
      long long n = std::popcount(part.cylinders()[0].dom & I_mask);
      if (n > max_splits) pieces.push_back(part.cylinders()[0]);
      continue;
    }
    std::uint64_t d_mask = 0;
    for (std::size_t i = 0; i < coord.size(); ++i) {
      Coordinate y = coord.substr(0, i);
      d_mask |= (s.part(y + "0").essential_support() | s.part(y + "1").essential_support());
    }
    d_mask &= tail_mask;
    for (const auto& d : all_assignments(d_mask)) {
      long long n = 0;
      for (std::size_t i = 0; i < coord.size(); ++i) {
        Coordinate y = coord.substr(0, i);
        if (s.part(y + "0").intersects(d) && s.part(y + "1").intersects(d)) ++n;
      }
      if (n > max_splits) {
        CylinderSet piece = part.intersect_cylinder(d);
        for (const auto& c : piece.cylinders()) pieces.push_back(c);
      }
    }
  }
  return pieces;
}

std::vector<Restriction> low_capital_pieces(const BettingStrategy& s, const Dyadic& threshold,
                                            int t) {
  std::vector<Restriction> pieces;
  for (const auto& coord : s.terminal_coords_at(t)) {
    if (s.max_capital_ratio(coord).compare(threshold) <= 0)
      for (const auto& c : s.part(coord).cylinders()) pieces.push_back(c);
  }
  return pieces;
}

}  // namespace klgame
