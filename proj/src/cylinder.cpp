#include "klgame/cylinder.hpp"

#include <algorithm>
#include <bit>

namespace klgame {

namespace {

// Shannon-expansion canonical form over ascending positions. Equal cofactors
// merge, so the position drops out and only essential positions remain.
std::vector<Restriction> canon(std::vector<Restriction> in) {
  if (in.empty()) return {};
  std::uint64_t doms = 0;
  for (const auto& c : in) {
    if (c.dom == 0) return {Restriction{}};
    doms |= c.dom;
  }
  int p = std::countr_zero(doms);
  std::uint64_t pbit = 1ull << p;
  std::vector<Restriction> c0, c1;
  c0.reserve(in.size());
  c1.reserve(in.size());
  for (const auto& c : in) {
    if (c.dom & pbit) {
      Restriction d(c.dom & ~pbit, c.val & ~pbit);
      ((c.val & pbit) ? c1 : c0).push_back(d);
    } else {
      c0.push_back(c);
      c1.push_back(c);
    }
  }
  auto l0 = canon(std::move(c0));
  auto l1 = canon(std::move(c1));
  if (l0 == l1) return l0;
  std::vector<Restriction> out;
  out.reserve(l0.size() + l1.size());
  for (auto c : l0) {
    c.dom |= pbit;
    out.push_back(c);
  }
  for (auto c : l1) {
    c.dom |= pbit;
    c.val |= pbit;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

}  // namespace

CylinderSet CylinderSet::full(std::uint64_t space) {
  CylinderSet s(space);
  s.cyls_ = {Restriction{}};
  return s;
}

CylinderSet CylinderSet::of(std::uint64_t space, std::vector<Restriction> cylinders) {
  CylinderSet s(space);
  for (auto& c : cylinders)
    if (c.dom & ~space) fail(Errc::universe_mismatch, "cylinder restricts positions outside the space");
  s.cyls_ = canon(std::move(cylinders));
  return s;
}

Dyadic CylinderSet::measure() const {
  Dyadic m;
  for (const auto& c : cyls_) m += Dyadic::pow2(-c.arity());
  return m;
}

std::uint64_t CylinderSet::count() const {
  std::uint64_t n = 0;
  int sp = space_size();
  for (const auto& c : cyls_) n += 1ull << (sp - c.arity());
  return n;
}

std::uint64_t CylinderSet::count_consistent(const Restriction& rho) const {
  Restriction r = rho.restrict_to(space_);
  std::uint64_t n = 0;
  int sp = space_size();
  for (const auto& c : cyls_)
    if (c.consistent(r)) n += 1ull << (sp - std::popcount(c.dom | r.dom));
  return n;
}

std::uint64_t CylinderSet::essential_support() const {
  std::uint64_t s = 0;
  for (const auto& c : cyls_) s |= c.dom;
  return s;
}

bool CylinderSet::intersects(const Restriction& r) const {
  Restriction rr = r.restrict_to(space_);
  for (const auto& c : cyls_)
    if (c.consistent(rr)) return true;
  return false;
}

bool CylinderSet::contains_cylinder(const Restriction& r) const {
  return !complement().intersects(r);
}

bool CylinderSet::contains(const CylinderSet& other) const {
  return other.subtract(*this).empty();
}

CylinderSet CylinderSet::intersect(const CylinderSet& o) const {
  if (space_ != o.space_) fail(Errc::universe_mismatch, "set spaces differ");
  std::vector<Restriction> out;
  for (const auto& a : cyls_)
    for (const auto& b : o.cyls_)
      if (a.consistent(b)) out.push_back(a.merge(b));
  return of(space_, std::move(out));
}

CylinderSet CylinderSet::unite(const CylinderSet& o) const {
  if (space_ != o.space_) fail(Errc::universe_mismatch, "set spaces differ");
  std::vector<Restriction> out = cyls_;
  out.insert(out.end(), o.cyls_.begin(), o.cyls_.end());
  return of(space_, std::move(out));
}

CylinderSet CylinderSet::subtract(const CylinderSet& o) const {
  return intersect(o.complement());
}

CylinderSet CylinderSet::complement() const {
  CylinderSet acc = full(space_);
  for (const auto& c : cyls_) {
    // Complement of one cylinder: flip each domain position in turn, keeping
    // the values before it. The pieces are pairwise disjoint.
    std::vector<Restriction> pieces;
    std::uint64_t seen = 0;
    std::uint64_t d = c.dom;
    while (d) {
      int p = std::countr_zero(d);
      d &= d - 1;
      std::uint64_t pb = 1ull << p;
      Restriction piece((c.dom & seen) | pb, (c.val & seen) | (~c.val & pb));
      pieces.push_back(piece);
      seen |= pb;
    }
    acc = acc.intersect(of(space_, std::move(pieces)));
    if (acc.empty()) break;
  }
  return acc;
}

CylinderSet CylinderSet::intersect_cylinder(const Restriction& r) const {
  Restriction rr = r.restrict_to(space_);
  std::vector<Restriction> out;
  for (const auto& c : cyls_)
    if (c.consistent(rr)) out.push_back(c.merge(rr));
  return of(space_, std::move(out));
}

CylinderSet CylinderSet::exists_proj(std::uint64_t keep_mask, const Restriction& r) const {
  std::vector<Restriction> out;
  for (const auto& c : cyls_)
    if (c.consistent(r)) out.push_back(c.restrict_to(keep_mask));
  return of(keep_mask, std::move(out));
}

std::vector<Restriction> CylinderSet::enumerate_over(std::uint64_t mask) const {
  std::vector<Restriction> out;
  for (const auto& c : cyls_) {
    if (c.dom & ~mask)
      fail(Errc::param_violation, "cylinder domain not contained in enumeration mask");
    std::uint64_t free = mask & ~c.dom;
    if (std::popcount(free) > 24) fail(Errc::resource_limit, "enumeration too large");
    for (const auto& f : all_assignments(free)) out.push_back(c.concat(f));
  }
  std::sort(out.begin(), out.end(), value_lex_less);
  return out;
}

Restriction CylinderSet::lex_least_element() const {
  if (cyls_.empty()) fail(Errc::param_violation, "lex_least_element of empty set");
  bool first = true;
  Restriction best;
  for (const auto& c : cyls_) {
    // Zero-filling the free positions gives the least element of a cylinder.
    Restriction cand(space_, c.val);
    if (first || value_lex_less(cand, best)) {
      best = cand;
      first = false;
    }
  }
  return best;
}

std::string CylinderSet::str() const {
  if (cyls_.empty()) return "<empty>";
  std::string out;
  for (const auto& c : cyls_) {
    if (!out.empty()) out += '|';
    out += c.str();
  }
  return out;
}

Dyadic measure_of_disjoint(const std::vector<Restriction>& cylinders) {
  Dyadic m;
  for (const auto& c : cylinders) m += Dyadic::pow2(-c.arity());
  return m;
}

}  // namespace klgame
