#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "klgame/errors.hpp"

namespace klgame {

// Finite binary universe: positions 0..length-1.
struct Universe {
  int length;

  explicit Universe(int len) : length(len) {
    if (len < 1 || len > 62) fail(Errc::param_violation, "universe length must be in [1,62]");
  }
  std::uint64_t mask() const { return (length == 62) ? ((1ull << 62) - 1) : ((1ull << length) - 1); }
  bool operator==(const Universe& o) const { return length == o.length; }
};

// Partial map position -> bit, stored as (domain mask, value mask).
struct Restriction {
  std::uint64_t dom = 0;
  std::uint64_t val = 0;  // val subset of dom

  Restriction() = default;
  Restriction(std::uint64_t d, std::uint64_t v) : dom(d), val(v & d) {}

  static Restriction empty() { return {}; }
  static Restriction single(int p, bool b) {
    return Restriction(1ull << p, b ? (1ull << p) : 0);
  }
  static Restriction of(const std::vector<std::pair<int, bool>>& assignments);

  bool restricts(int p) const { return (dom >> p) & 1; }
  bool bit(int p) const { return (val >> p) & 1; }
  int arity() const { return std::popcount(dom); }
  bool is_empty() const { return dom == 0; }

  bool consistent(const Restriction& o) const { return ((val ^ o.val) & dom & o.dom) == 0; }
  // True when this extends base: dom(base) subset of dom(this), values agree.
  bool extends(const Restriction& base) const {
    return (base.dom & ~dom) == 0 && ((val ^ base.val) & base.dom) == 0;
  }

  Restriction concat(const Restriction& o) const {
    if (dom & o.dom) fail(Errc::overlapping_domains, "concat domains intersect");
    return Restriction(dom | o.dom, val | o.val);
  }
  // Merge of two consistent restrictions (domains may overlap).
  Restriction merge(const Restriction& o) const { return Restriction(dom | o.dom, val | o.val); }

  Restriction restrict_to(std::uint64_t mask) const { return Restriction(dom & mask, val & mask); }
  Restriction drop(std::uint64_t mask) const { return restrict_to(~mask); }

  bool operator==(const Restriction& o) const { return dom == o.dom && val == o.val; }
  bool operator!=(const Restriction& o) const { return !(*this == o); }

  // "@" for the empty restriction, else "p=b,p=b" with ascending positions.
  std::string str() const;
  static Restriction parse(const std::string& text);
};

// Canonical order: sorted domain lists compared lexicographically (a proper
// prefix sorts first), ties broken by the value vector in position order.
bool canonical_less(const Restriction& a, const Restriction& b);

// Order on restrictions with equal domains, by value bits at ascending
// positions (0 before 1). This is the head order used for "lexicographically
// least" choices.
bool value_lex_less(const Restriction& a, const Restriction& b);

// All 2^k assignments of the positions in mask, in value-lex order.
std::vector<Restriction> all_assignments(std::uint64_t mask);

// Positions of mask in ascending order.
std::vector<int> mask_positions(std::uint64_t mask);
std::uint64_t positions_mask(const std::vector<int>& positions);

}  // namespace klgame
