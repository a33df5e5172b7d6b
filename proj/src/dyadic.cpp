#include "klgame/dyadic.hpp"

#include <algorithm>

namespace klgame {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::overlapping_domains: return "OverlappingDomains";
    case Errc::universe_mismatch: return "UniverseMismatch";
    case Errc::not_terminal: return "NotTerminal";
    case Errc::not_a_partition: return "NotAPartition";
    case Errc::empty_child: return "EmptyChild";
    case Errc::mass_mismatch: return "MassMismatch";
    case Errc::time_not_monotone: return "TimeNotMonotone";
    case Errc::wager_exceeds_capital: return "WagerExceedsCapital";
    case Errc::size_mismatch: return "SizeMismatch";
    case Errc::unknown_coordinate: return "UnknownCoordinate";
    case Errc::invalid_program: return "InvalidProgram";
    case Errc::inexact_division: return "InexactDivision";
    case Errc::domains_overlap: return "DomainsOverlap";
    case Errc::not_granular: return "NotGranular";
    case Errc::param_violation: return "ParamViolation";
    case Errc::zone_overlaps_z: return "ZoneOverlapsZ";
    case Errc::universe_too_small: return "UniverseTooSmall";
    case Errc::gap_function_invalid: return "GapFunctionInvalid";
    case Errc::split_density_too_low: return "SplitDensityTooLow";
    case Errc::normalization_error: return "NormalizationError";
    case Errc::config_error: return "ConfigError";
    case Errc::resource_limit: return "ResourceLimit";
  }
  return "UnknownError";
}

void Dyadic::normalize() {
  if (mant_ == 0) {
    exp_ = 0;
    return;
  }
  while ((mant_ & 1) == 0) {
    mant_ >>= 1;
    ++exp_;
  }
}

Dyadic Dyadic::scaled(BigInt mantissa, long exponent) {
  Dyadic d;
  d.mant_ = std::move(mantissa);
  d.exp_ = exponent;
  d.normalize();
  return d;
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  if (mant_ == 0) return o;
  if (o.mant_ == 0) return *this;
  long e = std::min(exp_, o.exp_);
  BigInt a = mant_ << static_cast<unsigned>(exp_ - e);
  BigInt b = o.mant_ << static_cast<unsigned>(o.exp_ - e);
  return scaled(a + b, e);
}

int Dyadic::compare(const Dyadic& o) const {
  int sa = sign(), sb = o.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  long e = std::min(exp_, o.exp_);
  BigInt a = mant_ << static_cast<unsigned>(exp_ - e);
  BigInt b = o.mant_ << static_cast<unsigned>(o.exp_ - e);
  if (a == b) return 0;
  return a < b ? -1 : 1;
}

std::optional<Dyadic> Dyadic::exact_div(const Dyadic& num, const Dyadic& den) {
  if (den.is_zero()) return std::nullopt;
  if (num.is_zero()) return Dyadic();
  BigInt d = den.mant_ < 0 ? BigInt(-den.mant_) : den.mant_;
  BigInt n = num.mant_;
  if (n % d != 0) return std::nullopt;
  BigInt q = n / d;
  if (den.mant_ < 0) q = -q;
  return scaled(q, num.exp_ - den.exp_);
}

Dyadic Dyadic::div_exact(const Dyadic& den) const {
  auto q = exact_div(*this, den);
  if (!q) fail(Errc::inexact_division, str() + " / " + den.str());
  return *q;
}

std::string Dyadic::str() const {
  return mant_.str() + "*2^" + std::to_string(exp_);
}

Dyadic Dyadic::parse(const std::string& text) {
  auto star = text.find("*2^");
  if (star == std::string::npos)
    fail(Errc::config_error, "bad dyadic literal: " + text);
  try {
    BigInt m(text.substr(0, star));
    long e = std::stol(text.substr(star + 3));
    return scaled(std::move(m), e);
  } catch (const std::exception&) {
    fail(Errc::config_error, "bad dyadic literal: " + text);
  }
}

BigInt pow2i(long k) {
  BigInt one = 1;
  return one << static_cast<unsigned>(k);
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  return (a + b - 1) / b;
}

long floor_log2(const BigInt& v) {
  long bits = static_cast<long>(boost::multiprecision::msb(v));
  return bits;
}

}  // namespace klgame
