#include "klgame/projection.hpp"

#include <algorithm>

namespace klgame {

PartitionEvaluation PartitionEvaluation::scripted(std::uint64_t I_mask, Ratio root_eval) {
  PartitionEvaluation pe;
  pe.I_mask_ = I_mask;
  Node root;
  root.coord = "";
  root.heads = CylinderSet::full(I_mask);
  root.birth = 0;
  root.correspondence = {{0, ""}};
  root.eval = {{0, std::move(root_eval)}};
  pe.nodes_[""] = std::move(root);
  return pe;
}

const PartitionEvaluation::Node& PartitionEvaluation::node(const Coordinate& x) const {
  auto it = nodes_.find(x);
  if (it == nodes_.end()) fail(Errc::unknown_coordinate, "no projected part at '" + x + "'");
  return it->second;
}

std::vector<Coordinate> PartitionEvaluation::terminal_coords_at(int t) const {
  std::vector<Coordinate> out;
  for (const auto& [coord, n] : nodes_) {
    if (n.birth > t) continue;
    auto child = nodes_.find(coord + "0");
    if (child == nodes_.end() || child->second.birth > t) out.push_back(coord);
  }
  return out;
}

bool PartitionEvaluation::is_terminal_at(const Coordinate& x, int t) const {
  auto it = nodes_.find(x);
  if (it == nodes_.end() || it->second.birth > t) return false;
  auto child = nodes_.find(x + "0");
  return child == nodes_.end() || child->second.birth > t;
}

Coordinate PartitionEvaluation::terminal_of_element(const Restriction& element, int t) const {
  if ((element.dom & I_mask_) != I_mask_)
    fail(Errc::param_violation, "element must assign every position of I");
  Coordinate x;
  while (!is_terminal_at(x, t)) {
    x += node(x + "0").heads.intersects(element) ? '0' : '1';
  }
  return x;
}

std::optional<int> PartitionEvaluation::split_time(const Coordinate& x) const {
  auto child = nodes_.find(x + "0");
  if (child == nodes_.end()) return std::nullopt;
  return child->second.birth;
}

Ratio PartitionEvaluation::eval(int t, const Coordinate& x) const {
  const Node& n = node(x);
  if (t < n.birth) fail(Errc::unknown_coordinate, "part not yet defined at t");
  Ratio out = n.eval.front().second;
  for (const auto& [tc, v] : n.eval) {
    if (tc > t) break;
    out = v;
  }
  return out;
}

void PartitionEvaluation::apply_split(int t, const Coordinate& x, const CylinderSet& heads0,
                                      const CylinderSet& heads1) {
  split_from_source(t, x, heads0, heads1, "", "", eval(t, x), eval(t, x));
}

void PartitionEvaluation::raise_eval(int t, const Coordinate& x, Ratio value) {
  auto it = nodes_.find(x);
  if (it == nodes_.end()) fail(Errc::unknown_coordinate, "no projected part at '" + x + "'");
  if (nodes_.count(x + "0")) fail(Errc::not_terminal, "evaluation raised on a split part");
  auto& steps = it->second.eval;
  if (!steps.empty() && (t < steps.back().first || value.compare(steps.back().second) < 0))
    fail(Errc::param_violation, "evaluation must be non-decreasing");
  steps.emplace_back(t, std::move(value));
  horizon_ = std::max(horizon_, t);
}

void PartitionEvaluation::advance(int t, const Coordinate& x, const Coordinate& src, Ratio value) {
  auto& n = nodes_.at(x);
  n.correspondence.emplace_back(t, src);
  if (value.compare(n.eval.back().second) > 0) n.eval.emplace_back(t, std::move(value));
}

void PartitionEvaluation::split_from_source(int t, const Coordinate& x, CylinderSet heads0,
                                            CylinderSet heads1, const Coordinate& src0,
                                            const Coordinate& src1, Ratio v0, Ratio v1) {
  auto it = nodes_.find(x);
  if (it == nodes_.end()) fail(Errc::unknown_coordinate, "no projected part at '" + x + "'");
  if (nodes_.count(x + "0")) fail(Errc::not_terminal, "part already split");
  if (heads0.empty() || heads1.empty()) fail(Errc::empty_child, "empty projected child");
  if (!heads0.intersect(heads1).empty() || heads0.unite(heads1) != it->second.heads)
    fail(Errc::not_a_partition, "children do not partition the projected part");
  if (!events_.empty() && t <= events_.back().time)
    fail(Errc::time_not_monotone, "projected split times must increase");
  auto add = [&](const Coordinate& c, CylinderSet heads, const Coordinate& src, Ratio v) {
    Node n;
    n.coord = c;
    n.heads = std::move(heads);
    n.birth = t;
    n.correspondence = {{t, src}};
    n.eval = {{t, std::move(v)}};
    nodes_[c] = std::move(n);
  };
  add(x + "0", std::move(heads0), src0, std::move(v0));
  add(x + "1", std::move(heads1), src1, std::move(v1));
  events_.push_back({t, x});
  horizon_ = std::max(horizon_, t);
}

bool is_elementary(const Restriction& r, const BettingStrategy& s, int t) {
  Coordinate x = s.deepest_containing(r, t);
  return s.is_terminal_at(x, t);
}

std::uint64_t inspected_positions(const BettingStrategy& s, int t) {
  std::uint64_t k = 0;
  for (const auto& coord : s.terminal_coords_at(t)) k |= s.part(coord).essential_support();
  return k;
}

std::uint64_t inspected_positions(const BettingStrategy& a, const BettingStrategy& b, int t) {
  return inspected_positions(a, t) | inspected_positions(b, t);
}

bool is_granular(const Restriction& r, std::uint64_t I_mask, const BettingStrategy& s, int t) {
  if (r.dom & I_mask) fail(Errc::domains_overlap, "tail restricts positions of I");
  for (const auto& head : all_assignments(I_mask))
    if (!is_elementary(head.concat(r), s, t)) return false;
  return true;
}

std::vector<Restriction> common_granular(const BettingStrategy& a, const BettingStrategy& b,
                                         std::uint64_t I_mask, int t) {
  std::uint64_t k = inspected_positions(a, b, t);
  return all_assignments(k & ~I_mask);
}

CylinderSet heads_inside(const CylinderSet& v, const Restriction& tail, std::uint64_t I_mask) {
  // s qualifies iff no point of the complement of v is consistent with s^tail.
  return v.complement().exists_proj(I_mask, tail).complement();
}

PartitionEvaluation project(const BettingStrategy& s, std::uint64_t I_mask, const Restriction& rho,
                            int t_max) {
  if (rho.dom & I_mask) fail(Errc::domains_overlap, "tail restricts positions of I");
  PartitionEvaluation pe = PartitionEvaluation::scripted(I_mask, s.max_capital_ratio(""));
  // Live correspondence: source terminal coordinate -> projected terminal.
  std::map<Coordinate, Coordinate> live = {{"", ""}};
  for (const auto& ev : s.events()) {
    if (ev.time > t_max) break;
    auto it = live.find(ev.coord);
    if (it == live.end()) continue;  // source part does not meet [rho]
    Coordinate u = it->second;
    const CylinderSet& v0 = s.part(ev.coord + "0");
    const CylinderSet& v1 = s.part(ev.coord + "1");
    const CylinderSet& heads = pe.node(u).heads;
    CylinderSet h0 = heads.intersect(heads_inside(v0, rho, I_mask));
    CylinderSet h1 = heads.intersect(heads_inside(v1, rho, I_mask));
    if (h0.unite(h1) != heads)
      fail(Errc::not_granular, "a head cylinder straddles the split at t=" + std::to_string(ev.time),
           ev.time);
    live.erase(it);
    if (!h0.empty() && !h1.empty()) {
      pe.split_from_source(ev.time, u, h0, h1, ev.coord + "0", ev.coord + "1",
                           s.max_capital_ratio(ev.coord + "0"), s.max_capital_ratio(ev.coord + "1"));
      live[ev.coord + "0"] = u + "0";
      live[ev.coord + "1"] = u + "1";
    } else {
      const Coordinate side = h1.empty() ? ev.coord + "0" : ev.coord + "1";
      pe.advance(ev.time, u, side, s.max_capital_ratio(side));
      live[side] = u;
    }
  }
  pe.set_horizon(std::max(pe.horizon(), t_max));
  return pe;
}

}  // namespace klgame
