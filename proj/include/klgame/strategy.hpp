#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "klgame/cylinder.hpp"
#include "klgame/dyadic.hpp"
#include "klgame/restriction.hpp"

namespace klgame {

// Coordinates are binary strings; the root is "".
using Coordinate = std::string;

struct SplitEvent {
  int time;
  Coordinate coord;
};

struct PartNode {
  Coordinate coord;
  CylinderSet set;
  int birth;
  Dyadic mass;
  Ratio max_cap;  // prefix maximum of mass/size along the coordinate path
  // Account split maintained by the savings wrapper (empty otherwise).
  std::optional<std::pair<Dyadic, Dyadic>> savings;  // (saved, active)
};

// A timed partition refinement of the universe with a mass function. Built by
// splitting terminal parts, one split per time step; immutable once built.
class BettingStrategy {
 public:
  BettingStrategy(Universe u, Dyadic root_mass);

  const Universe& universe() const { return universe_; }
  bool has_node(const Coordinate& x) const { return nodes_.count(x) != 0; }
  const PartNode& node(const Coordinate& x) const;
  const CylinderSet& part(const Coordinate& x) const { return node(x).set; }
  const Dyadic& mass(const Coordinate& x) const { return node(x).mass; }
  const std::vector<SplitEvent>& events() const { return events_; }
  int last_event_time() const { return events_.empty() ? 0 : events_.back().time; }

  void split_part(const Coordinate& x, CylinderSet set0, CylinderSet set1,
                  const Dyadic& mass0, const Dyadic& mass1, int t);

  bool is_terminal_at(const Coordinate& x, int t) const;
  std::vector<Coordinate> terminal_coords_at(int t) const;
  // Terminal coordinate at t whose part contains the full assignment sigma.
  Coordinate terminal_of_assignment(const Restriction& sigma, int t) const;
  // Descends while a child part contains [r]; the returned terminal part is
  // the only one that can contain [r] (it does iff r is elementary at t).
  Coordinate deepest_containing(const Restriction& r, int t) const;

  Ratio capital_ratio(const Coordinate& x) const;
  Dyadic capital(const Coordinate& x) const { return capital_ratio(x).value(); }
  Ratio max_capital_ratio(const Coordinate& x) const { return node(x).max_cap; }
  Dyadic max_capital(const Coordinate& x) const { return node(x).max_cap.value(); }
  Ratio achieved_capital_ratio(const Restriction& sigma, int t) const;
  Dyadic achieved_capital(const Restriction& sigma, int t) const;

  // True when every part is a single cylinder (KL form).
  bool kl_parts() const { return kl_parts_; }

  void set_savings_state(const Coordinate& x, Dyadic saved, Dyadic active);

  // Mass conservation and the capital form of it, exact; returns violation
  // descriptions (empty when clean).
  std::vector<std::string> conservation_violations() const;

 private:
  Universe universe_;
  std::map<Coordinate, PartNode> nodes_;
  std::vector<SplitEvent> events_;
  bool kl_parts_ = true;
};

// Number of coordinates x' < x (proper prefixes) whose part was split on the
// tail of sigma outside I, counted at time t.
long long split_count(const Restriction& sigma, std::uint64_t I_mask,
                      const BettingStrategy& s, int t);

// True when every split up to t divides each tail class it separates into
// equal halves.
bool is_half_splitting(const BettingStrategy& s, std::uint64_t I_mask, int t);

enum class ProfileMode { at_most, at_least };

// Measure of full assignments whose {pi_1..pi_ell}-split count satisfies the
// mode against f_value, at time t.
Dyadic split_profile_measure(const BettingStrategy& s, const std::vector<int>& pi,
                             int ell, int t, long long f_value, ProfileMode mode);

// Disjoint cylinders covering the assignments that are I-split on more than
// max_splits times by t.
std::vector<Restriction> violation_pieces(const BettingStrategy& s, std::uint64_t I_mask,
                                          long long max_splits, int t);

// Disjoint cylinders covering the terminal parts at t whose achieved capital
// is at most the threshold.
std::vector<Restriction> low_capital_pieces(const BettingStrategy& s, const Dyadic& threshold,
                                            int t);

}  // namespace klgame
