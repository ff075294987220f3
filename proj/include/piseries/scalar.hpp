#pragma once

#include <concepts>
#include <ostream>

#include "piseries/bigreal.hpp"
#include "piseries/jet.hpp"
#include "piseries/rational.hpp"

namespace piseries {

/// The arithmetic every identity evaluator is written against: BigReal,
/// Rational, and Jet2 over either.
template <typename T>
concept Field = std::copy_constructible<T> && requires(const T a, const T b, long n) {
  { T(n) };
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { a / b } -> std::convertible_to<T>;
  { -a } -> std::convertible_to<T>;
  { is_zero(a) } -> std::convertible_to<bool>;
};

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<BigReal> {
  static BigReal from_rational(const Rational& r) { return BigReal(r); }
  static BigReal magnitude(const BigReal& x) { return abs(x); }
  static bool in_open_unit(const BigReal& x) { return sign(x) > 0 && x < BigReal(1L); }
  static constexpr bool exact = false;
};

template <>
struct ScalarTraits<Rational> {
  static Rational from_rational(const Rational& r) { return r; }
  static BigReal magnitude(const Rational& x) { return BigReal(abs(x)); }
  static bool in_open_unit(const Rational& x) { return sign(x) > 0 && x < Rational(1L); }
  static constexpr bool exact = true;
};

template <typename T>
struct ScalarTraits<Jet2<T>> {
  static Jet2<T> from_rational(const Rational& r) { return Jet2<T>(ScalarTraits<T>::from_rational(r)); }
  static BigReal magnitude(const Jet2<T>& x) { return ScalarTraits<T>::magnitude(x.v); }
  static bool in_open_unit(const Jet2<T>& x) { return ScalarTraits<T>::in_open_unit(x.v); }
  static constexpr bool exact = ScalarTraits<T>::exact;
};

template <Field T>
T from_rational(const Rational& r) {
  return ScalarTraits<T>::from_rational(r);
}

template <Field T>
T ratio(long num, long den) {
  return T(num) / T(den);
}

/// |x| as a BigReal (value part for jets).
template <Field T>
BigReal magnitude(const T& x) {
  return ScalarTraits<T>::magnitude(x);
}

/// x^n by binary powering; negative n divides.
template <Field T>
T ipow(const T& x, long n) {
  if (n < 0) return T(1L) / ipow(x, -n);
  T result(1L);
  T base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

inline std::ostream& operator<<(std::ostream& os, const BigReal& x) { return os << x.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.to_string(); }

}  // namespace piseries
