#include "klgame/restriction.hpp"

#include <algorithm>

namespace klgame {

Restriction Restriction::of(const std::vector<std::pair<int, bool>>& assignments) {
  Restriction r;
  for (auto [p, b] : assignments) {
    if (r.restricts(p)) fail(Errc::overlapping_domains, "position listed twice: " + std::to_string(p));
    r.dom |= 1ull << p;
    if (b) r.val |= 1ull << p;
  }
  return r;
}

std::string Restriction::str() const {
  if (dom == 0) return "@";
  std::string out;
  std::uint64_t d = dom;
  while (d) {
    int p = std::countr_zero(d);
    d &= d - 1;
    if (!out.empty()) out += ',';
    out += std::to_string(p);
    out += '=';
    out += bit(p) ? '1' : '0';
  }
  return out;
}

Restriction Restriction::parse(const std::string& text) {
  if (text == "@") return {};
  Restriction r;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t eq = text.find('=', i);
    if (eq == std::string::npos) fail(Errc::config_error, "bad restriction literal: " + text);
    int p;
    try {
      p = std::stoi(text.substr(i, eq - i));
    } catch (const std::exception&) {
      fail(Errc::config_error, "bad restriction literal: " + text);
    }
    if (p < 0 || p > 61 || eq + 1 >= text.size()) fail(Errc::config_error, "bad restriction literal: " + text);
    char b = text[eq + 1];
    if (b != '0' && b != '1') fail(Errc::config_error, "bad restriction literal: " + text);
    if (r.restricts(p)) fail(Errc::config_error, "position listed twice: " + text);
    r.dom |= 1ull << p;
    if (b == '1') r.val |= 1ull << p;
    i = eq + 2;
    if (i < text.size()) {
      if (text[i] != ',') fail(Errc::config_error, "bad restriction literal: " + text);
      ++i;
    }
  }
  return r;
}

bool canonical_less(const Restriction& a, const Restriction& b) {
  std::uint64_t da = a.dom, db = b.dom;
  while (da || db) {
    if (da == 0) return true;   // a's domain is a proper prefix
    if (db == 0) return false;
    int pa = std::countr_zero(da), pb = std::countr_zero(db);
    if (pa != pb) return pa < pb;
    da &= da - 1;
    db &= db - 1;
  }
  // Equal domains: value vector in position order.
  std::uint64_t d = a.dom;
  while (d) {
    int p = std::countr_zero(d);
    d &= d - 1;
    if (a.bit(p) != b.bit(p)) return !a.bit(p);
  }
  return false;
}

bool value_lex_less(const Restriction& a, const Restriction& b) {
  std::uint64_t d = a.dom & b.dom;
  while (d) {
    int p = std::countr_zero(d);
    d &= d - 1;
    if (a.bit(p) != b.bit(p)) return !a.bit(p);
  }
  return false;
}

std::vector<Restriction> all_assignments(std::uint64_t mask) {
  auto pos = mask_positions(mask);
  if (pos.size() > 24) fail(Errc::resource_limit, "assignment enumeration too large");
  std::vector<Restriction> out;
  out.reserve(1ull << pos.size());
  for (std::uint64_t code = 0; code < (1ull << pos.size()); ++code) {
    Restriction r;
    r.dom = mask;
    for (std::size_t i = 0; i < pos.size(); ++i)
      if ((code >> i) & 1) r.val |= 1ull << pos[i];
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), value_lex_less);
  return out;
}

std::vector<int> mask_positions(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

std::uint64_t positions_mask(const std::vector<int>& positions) {
  std::uint64_t m = 0;
  for (int p : positions) {
    if (p < 0 || p > 61) fail(Errc::param_violation, "position out of range: " + std::to_string(p));
    std::uint64_t b = 1ull << p;
    if (m & b) fail(Errc::param_violation, "duplicate position: " + std::to_string(p));
    m |= b;
  }
  return m;
}

}  // namespace klgame
