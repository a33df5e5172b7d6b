#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "klgame/dyadic.hpp"
#include "klgame/restriction.hpp"

namespace klgame {

// Clopen subset of the assignments of a position set ("space"), held as a
// canonical list of mutually inconsistent cylinders. Canonicalization is the
// Shannon expansion over ascending positions with equal cofactors merged, so
// two representations of the same set compare equal and only essential
// positions appear in cylinder domains.
class CylinderSet {
 public:
  CylinderSet() : space_(0) {}
  explicit CylinderSet(std::uint64_t space) : space_(space) {}

  static CylinderSet empty_set(std::uint64_t space) { return CylinderSet(space); }
  static CylinderSet full(std::uint64_t space);
  // Union of the given cylinders (may overlap); canonicalized.
  static CylinderSet of(std::uint64_t space, std::vector<Restriction> cylinders);
  static CylinderSet of_cylinder(std::uint64_t space, const Restriction& r) {
    return of(space, {r});
  }

  std::uint64_t space() const { return space_; }
  int space_size() const { return std::popcount(space_); }
  const std::vector<Restriction>& cylinders() const { return cyls_; }
  bool empty() const { return cyls_.empty(); }
  bool is_full() const { return cyls_.size() == 1 && cyls_[0].dom == 0; }

  // Uniform measure relative to the space: sum of 2^-|dom|.
  Dyadic measure() const;
  // Number of space-assignments in the set (= measure * 2^|space|).
  std::uint64_t count() const;
  // Number of space-assignments extending rho (positions of rho outside the
  // space are ignored) that lie in the set.
  std::uint64_t count_consistent(const Restriction& rho) const;

  // Essential positions (union of canonical cylinder domains).
  std::uint64_t essential_support() const;

  bool intersects(const Restriction& r) const;
  // True when every space-assignment extending r (restricted to the space)
  // lies in the set.
  bool contains_cylinder(const Restriction& r) const;
  bool contains(const CylinderSet& other) const;

  CylinderSet intersect(const CylinderSet& o) const;
  CylinderSet unite(const CylinderSet& o) const;
  CylinderSet subtract(const CylinderSet& o) const;
  CylinderSet complement() const;
  CylinderSet intersect_cylinder(const Restriction& r) const;

  // {assignment of keep_mask : set has an element consistent with it and with
  // r}; result lives in the keep_mask space.
  CylinderSet exists_proj(std::uint64_t keep_mask, const Restriction& r = {}) const;
  // Members of {0,1}^mask whose cylinders lie inside the set. Requires every
  // cylinder domain to be a subset of mask. Value-lex order.
  std::vector<Restriction> enumerate_over(std::uint64_t mask) const;
  // Value-lex least full assignment of the space in the set; set must be
  // nonempty.
  Restriction lex_least_element() const;

  bool operator==(const CylinderSet& o) const { return space_ == o.space_ && cyls_ == o.cyls_; }
  bool operator!=(const CylinderSet& o) const { return !(*this == o); }

  std::string str() const;

 private:
  std::uint64_t space_;
  std::vector<Restriction> cyls_;
};

// Measure of a union of pairwise-disjoint cylinders without canonicalizing.
Dyadic measure_of_disjoint(const std::vector<Restriction>& cylinders);

}  // namespace klgame
