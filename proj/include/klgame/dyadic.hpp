#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>

#include "klgame/errors.hpp"

namespace klgame {

using BigInt = boost::multiprecision::cpp_int;

// Exact dyadic rational: mantissa * 2^exponent, mantissa odd or zero.
// Closed under +, -, *, comparison; division only by powers of two and
// by exact divisors.
class Dyadic {
 public:
  Dyadic() : mant_(0), exp_(0) {}
  Dyadic(long long v) : mant_(v), exp_(0) { normalize(); }

  static Dyadic scaled(BigInt mantissa, long exponent);
  static Dyadic pow2(long exponent) { return scaled(1, exponent); }
  static Dyadic zero() { return Dyadic(); }
  static Dyadic one() { return Dyadic(1); }

  const BigInt& mantissa() const { return mant_; }
  long exponent() const { return exp_; }
  bool is_zero() const { return mant_ == 0; }
  int sign() const { return mant_ == 0 ? 0 : (mant_ < 0 ? -1 : 1); }
  bool is_integer() const { return exp_ >= 0; }

  Dyadic operator-() const { return scaled(-mant_, exp_); }
  Dyadic operator+(const Dyadic& o) const;
  Dyadic operator-(const Dyadic& o) const { return *this + (-o); }
  Dyadic operator*(const Dyadic& o) const { return scaled(mant_ * o.mant_, exp_ + o.exp_); }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  Dyadic mul_pow2(long k) const { return scaled(mant_, exp_ + k); }

  // Exact division; nullopt when the quotient is not dyadic.
  static std::optional<Dyadic> exact_div(const Dyadic& num, const Dyadic& den);
  // Throwing form (Errc::inexact_division).
  Dyadic div_exact(const Dyadic& den) const;

  int compare(const Dyadic& o) const;
  bool operator==(const Dyadic& o) const { return mant_ == o.mant_ && exp_ == o.exp_; }
  bool operator!=(const Dyadic& o) const { return !(*this == o); }
  bool operator<(const Dyadic& o) const { return compare(o) < 0; }
  bool operator<=(const Dyadic& o) const { return compare(o) <= 0; }
  bool operator>(const Dyadic& o) const { return compare(o) > 0; }
  bool operator>=(const Dyadic& o) const { return compare(o) >= 0; }

  // Serialized as "mantissa*2^exponent", e.g. "3*2^-2".
  std::string str() const;
  static Dyadic parse(const std::string& text);

 private:
  void normalize();

  BigInt mant_;
  long exp_;
};

// Exact quotient of two dyadics kept in unreduced form; comparisons are
// cross-multiplied so they never divide. Used for capitals mass/size where
// the quotient need not be dyadic.
struct Ratio {
  Dyadic num;  // mass
  Dyadic den;  // size, > 0

  Ratio() : num(0), den(1) {}
  Ratio(Dyadic n, Dyadic d) : num(std::move(n)), den(std::move(d)) {}

  int compare(const Ratio& o) const { return (num * o.den).compare(o.num * den); }
  int compare(const Dyadic& v) const { return num.compare(v * den); }
  bool operator==(const Ratio& o) const { return compare(o) == 0; }
  bool operator<(const Ratio& o) const { return compare(o) < 0; }
  bool operator<=(const Ratio& o) const { return compare(o) <= 0; }

  static Ratio max(const Ratio& a, const Ratio& b) { return a.compare(b) >= 0 ? a : b; }

  // Exact dyadic value; throws when not dyadic.
  Dyadic value() const { return num.div_exact(den); }
  std::string str() const { return num.str() + "/" + den.str(); }
};

// Integer helpers for the counting bounds (exact, no floating point).
BigInt pow2i(long k);                       // k >= 0
BigInt ceil_div(const BigInt& a, const BigInt& b);
long floor_log2(const BigInt& v);           // v >= 1

}  // namespace klgame
