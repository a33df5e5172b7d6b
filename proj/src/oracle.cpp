#include "klgame/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace klgame {

namespace {

bool member(const CylinderSet& set, std::uint64_t sigma_bits, std::uint64_t space) {
  Restriction sigma(space, sigma_bits);
  for (const auto& c : set.cylinders())
    if (sigma.extends(c)) return true;
  return false;
}

std::vector<std::uint64_t> elements_of(const CylinderSet& set, std::uint64_t space) {
  std::vector<std::uint64_t> out;
  // Iterate the subsets of the space mask (assignments packed into the mask).
  std::uint64_t code = 0;
  while (true) {
    if (member(set, code, space)) out.push_back(code);
    if (code == space) break;
    code = (code - space) & space;  // next subset of space
  }
  return out;
}

}  // namespace

OracleReport oracle_check_set(const CylinderSet& set, Universe u) {
  OracleReport rep;
  auto elems = elements_of(set, u.mask());
  ++rep.checks;
  if (set.measure() != Dyadic::scaled(BigInt(static_cast<long long>(elems.size())), -u.length))
    rep.mismatches.push_back("measure disagrees with element count");
  ++rep.checks;
  if (set.count() != elems.size()) rep.mismatches.push_back("count disagrees with enumeration");
  // Rebuilding from the enumerated elements must reproduce the canonical form.
  std::vector<Restriction> singletons;
  for (auto e : elems) singletons.emplace_back(u.mask(), e);
  ++rep.checks;
  if (CylinderSet::of(u.mask(), singletons) != set)
    rep.mismatches.push_back("canonical form not reproduced from elements");
  return rep;
}

OracleReport oracle_check_strategy(const BettingStrategy& s, int t) {
  OracleReport rep;
  Universe u = s.universe();
  if (u.length > 12) fail(Errc::resource_limit, "oracle needs universe length <= 12");
  std::vector<Coordinate> stack = {""};
  while (!stack.empty()) {
    Coordinate x = stack.back();
    stack.pop_back();
    if (!s.has_node(x) || s.node(x).birth > t) continue;
    rep.merge(oracle_check_set(s.part(x), u));
    if (s.is_terminal_at(x, t)) continue;
    auto e0 = elements_of(s.part(x + "0"), u.mask());
    auto e1 = elements_of(s.part(x + "1"), u.mask());
    auto ep = elements_of(s.part(x), u.mask());
    std::vector<std::uint64_t> both = e0;
    both.insert(both.end(), e1.begin(), e1.end());
    std::sort(both.begin(), both.end());
    ++rep.checks;
    if (both != ep || std::adjacent_find(both.begin(), both.end()) != both.end())
      rep.mismatches.push_back("children do not partition the part at '" + x + "'");
    stack.push_back(x + "0");
    stack.push_back(x + "1");
  }
  // count_consistent against enumeration for every single-position tail.
  for (const auto& coordinate : s.terminal_coords_at(t)) {
    const auto& set = s.part(coordinate);
    for (int p = 0; p < u.length; ++p) {
      for (int bit = 0; bit <= 1; ++bit) {
        Restriction r = Restriction::single(p, bit == 1);
        std::uint64_t n = 0;
        for (auto e : elements_of(set, u.mask()))
          if (Restriction(u.mask(), e).extends(r)) ++n;
        ++rep.checks;
        if (n != set.count_consistent(r))
          rep.mismatches.push_back("count_consistent disagrees at '" + coordinate + "'");
      }
    }
  }
  return rep;
}

OracleReport oracle_check_projection(const BettingStrategy& s, std::uint64_t I_mask,
                                     const Restriction& rho, int t_max,
                                     const PartitionEvaluation& pe, const GoodnessParams& params) {
  OracleReport rep;
  Universe u = s.universe();
  if (u.length > 12) fail(Errc::resource_limit, "oracle needs universe length <= 12");
  if ((rho.dom | I_mask) != u.mask() || (rho.dom & I_mask) != 0)
    fail(Errc::param_violation, "oracle projection needs a full tail");

  // Element-wise replay of the projection definition.
  struct ONode {
    std::set<std::uint64_t> heads;  // head codes within I_mask
    int birth;
    Coordinate src;
    Ratio eval;
    std::vector<std::pair<int, Ratio>> eval_steps;
  };
  auto sigma_of = [&](std::uint64_t head_code) { return Restriction(u.mask(), head_code | rho.val); };
  auto chat = [&](const Coordinate& x) {
    Ratio best(s.mass(""), Dyadic(1));
    for (std::size_t i = 1; i <= x.size(); ++i) {
      Coordinate y = x.substr(0, i);
      auto elems = elements_of(s.part(y), u.mask());
      Ratio c(s.mass(y), Dyadic::scaled(BigInt(static_cast<long long>(elems.size())), -u.length));
      best = Ratio::max(best, c);
    }
    return best;
  };

  std::map<Coordinate, ONode> nodes;
  std::set<std::uint64_t> all_heads;
  {
    std::uint64_t code = 0;
    while (true) {
      all_heads.insert(code);
      if (code == I_mask) break;
      code = (code - I_mask) & I_mask;
    }
  }
  ONode root{all_heads, 0, "", chat(""), {}};
  root.eval_steps = {{0, root.eval}};
  nodes[""] = root;
  std::map<Coordinate, Coordinate> live = {{"", ""}};

  for (const auto& ev : s.events()) {
    if (ev.time > t_max) break;
    auto it = live.find(ev.coord);
    if (it == live.end()) continue;
    Coordinate ux = it->second;
    ONode& un = nodes[ux];
    std::set<std::uint64_t> h0, h1;
    for (auto h : un.heads) {
      Restriction sigma = sigma_of(h);
      if (member(s.part(ev.coord + "0"), sigma.val, u.mask()))
        h0.insert(h);
      else
        h1.insert(h);
    }
    live.erase(it);
    if (!h0.empty() && !h1.empty()) {
      for (int bit = 0; bit <= 1; ++bit) {
        ONode child;
        child.heads = bit ? h1 : h0;
        child.birth = ev.time;
        child.src = ev.coord + (bit ? "1" : "0");
        child.eval = chat(child.src);
        child.eval_steps = {{ev.time, child.eval}};
        nodes[ux + (bit ? "1" : "0")] = child;
        live[child.src] = ux + (bit ? "1" : "0");
      }
    } else {
      Coordinate side = ev.coord + (h1.empty() ? "0" : "1");
      un.src = side;
      Ratio v = chat(side);
      if (v.compare(un.eval) > 0) {
        un.eval = v;
        un.eval_steps.emplace_back(ev.time, v);
      }
      live[side] = ux;
    }
  }

  // Structure must match exactly.
  for (const auto& [x, on] : nodes) {
    ++rep.checks;
    if (!pe.has_node(x)) {
      rep.mismatches.push_back("missing projected part '" + x + "'");
      continue;
    }
    const auto& n = pe.node(x);
    if (n.birth != on.birth) rep.mismatches.push_back("birth differs at '" + x + "'");
    std::set<std::uint64_t> got;
    for (auto h : all_heads)
      if (member(n.heads, h, I_mask)) got.insert(h);
    if (got != on.heads) rep.mismatches.push_back("head set differs at '" + x + "'");
    for (const auto& [tc, v] : on.eval_steps) {
      ++rep.checks;
      if (pe.eval(tc, x).compare(v) != 0)
        rep.mismatches.push_back("evaluation differs at '" + x + "' t=" + std::to_string(tc));
    }
  }
  // No extra splits beyond the oracle's.
  for (const auto& [x, on] : nodes) {
    if (nodes.count(x + "0")) continue;
    ++rep.checks;
    if (pe.has_node(x + "0") && pe.node(x + "0").birth <= t_max)
      rep.mismatches.push_back("unexpected projected split below '" + x + "'");
  }

  // Goodness classification per element at the event times.
  std::vector<int> sample_times = {0, t_max};
  for (const auto& ev : s.events())
    if (ev.time <= t_max) sample_times.push_back(ev.time);
  for (int tc : sample_times) {
    for (auto h : all_heads) {
      // Locate the oracle terminal at tc containing the head.
      Coordinate where;
      bool located = false;
      for (const auto& [x, on] : nodes) {
        if (on.birth > tc || !on.heads.count(h)) continue;
        auto c0 = nodes.find(x + "0");
        bool terminal = c0 == nodes.end() || c0->second.birth > tc;
        if (terminal && (!located || x.size() >= where.size())) {
          where = x;
          located = true;
        }
      }
      const ONode& on = nodes[where];
      Ratio ev_val = on.eval_steps.front().second;
      for (const auto& [et, v] : on.eval_steps) {
        if (et > tc) break;
        ev_val = v;
      }
      bool good = static_cast<long long>(where.size()) < params.N &&
                  static_cast<long long>(on.heads.size()) > params.phi &&
                  ev_val.compare(params.threshold) < 0;
      ++rep.checks;
      if (good != is_good(Restriction(I_mask, h), tc, pe, params))
        rep.mismatches.push_back("goodness differs for a head at t=" + std::to_string(tc));
    }
  }
  return rep;
}

}  // namespace klgame
