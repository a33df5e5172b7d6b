#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "klgame/strategy.hpp"

namespace klgame {

// Partition refinement of the heads {0,1}^I with a non-decreasing evaluation,
// either projected from a betting strategy or scripted directly.
class PartitionEvaluation {
 public:
  struct Node {
    Coordinate coord;
    CylinderSet heads;  // lives in the I space
    int birth;
    // Source-strategy coordinate the part corresponds to, as it advances.
    std::vector<std::pair<int, Coordinate>> correspondence;
    // Evaluation as a step function of time; frozen once the part splits.
    std::vector<std::pair<int, Ratio>> eval;
  };

  static PartitionEvaluation scripted(std::uint64_t I_mask, Ratio root_eval);

  std::uint64_t I_mask() const { return I_mask_; }
  int head_bits() const { return std::popcount(I_mask_); }
  int horizon() const { return horizon_; }
  void set_horizon(int t) { horizon_ = t; }

  bool has_node(const Coordinate& x) const { return nodes_.count(x) != 0; }
  const Node& node(const Coordinate& x) const;
  const std::vector<SplitEvent>& events() const { return events_; }
  std::vector<Coordinate> terminal_coords_at(int t) const;
  bool is_terminal_at(const Coordinate& x, int t) const;
  Coordinate terminal_of_element(const Restriction& element, int t) const;
  // Children's birth time if the part ever splits.
  std::optional<int> split_time(const Coordinate& x) const;
  // Evaluation at (t, x); the value when the coordinate was last terminal.
  Ratio eval(int t, const Coordinate& x) const;
  std::uint64_t part_count(const Coordinate& x) const { return node(x).heads.count(); }

  // Scripted construction.
  void apply_split(int t, const Coordinate& x, const CylinderSet& heads0, const CylinderSet& heads1);
  void raise_eval(int t, const Coordinate& x, Ratio value);

  // Projection construction (used by project()).
  void advance(int t, const Coordinate& x, const Coordinate& src, Ratio value);
  void split_from_source(int t, const Coordinate& x, CylinderSet heads0, CylinderSet heads1,
                         const Coordinate& src0, const Coordinate& src1, Ratio v0, Ratio v1);

 private:
  std::uint64_t I_mask_ = 0;
  int horizon_ = 0;
  std::map<Coordinate, Node> nodes_;
  std::vector<SplitEvent> events_;
};

// True when some part terminal at t contains the cylinder of r.
bool is_elementary(const Restriction& r, const BettingStrategy& s, int t);

// Minimal position set K with every restriction over K elementary at t.
std::uint64_t inspected_positions(const BettingStrategy& s, int t);
std::uint64_t inspected_positions(const BettingStrategy& a, const BettingStrategy& b, int t);

bool is_granular(const Restriction& r, std::uint64_t I_mask, const BettingStrategy& s, int t);

// The common set of I-granular restrictions at t: {0,1}^{K \ I}.
std::vector<Restriction> common_granular(const BettingStrategy& a, const BettingStrategy& b,
                                         std::uint64_t I_mask, int t);

// Replays the event log of s against the tail rho (granularity is verified at
// each event; Errc::not_granular carries the first offending time).
PartitionEvaluation project(const BettingStrategy& s, std::uint64_t I_mask, const Restriction& rho,
                            int t_max);

// {head s : [s^tail] lies inside v}, as a set in the I space. Exact for any
// clopen v; tail positions outside the tail's domain count as free.
CylinderSet heads_inside(const CylinderSet& v, const Restriction& tail, std::uint64_t I_mask);

}  // namespace klgame
