#pragma once

#include <cstdint>
#include <random>

#include "piseries/bigreal.hpp"
#include "piseries/rational.hpp"

namespace piseries::testing {

/// Small random rationals p/r with |p| <= span, 1 <= r <= den_max.
inline Rational small_rational(std::mt19937_64& g, long span = 9, long den_max = 9) {
  const long p = static_cast<long>(g() % static_cast<std::uint64_t>(2 * span + 1)) - span;
  const long r = 1 + static_cast<long>(g() % static_cast<std::uint64_t>(den_max));
  return Rational(p, r);
}

/// A random q in (0,1) with denominator up to den_max.
inline Rational unit_rational(std::mt19937_64& g, long den_max = 9) {
  const long r = 2 + static_cast<long>(g() % static_cast<std::uint64_t>(den_max - 1));
  const long p = 1 + static_cast<long>(g() % static_cast<std::uint64_t>(r - 1));
  return Rational(p, r);
}

inline BigReal rel_error(const BigReal& x, const BigReal& ref) {
  if (is_zero(ref)) return abs(x);
  return abs(x - ref) / abs(ref);
}

inline BigReal big(const char* s, long prec = kDefaultPrecisionBits) { return BigReal::parse(s, prec); }

}  // namespace piseries::testing
