#pragma once

#include <ostream>

#include "piseries/errors.hpp"

namespace piseries {

/// Second-order truncated Taylor value (f, f', f'') with respect to a single
/// active parameter. Arithmetic propagates derivatives by the Leibniz and
/// quotient rules, so evaluating a rational expression with the parameter
/// lifted to `variable(b0)` yields its first two derivatives at b0 exactly
/// (up to the rounding of the underlying scalar).
template <typename T>
struct Jet2 {
  T v{};
  T d1{};
  T d2{};

  Jet2() : v(0L), d1(0L), d2(0L) {}
  Jet2(long c) : v(c), d1(0L), d2(0L) {}  // NOLINT(google-explicit-constructor)
  Jet2(int c) : Jet2(static_cast<long>(c)) {}  // NOLINT(google-explicit-constructor)
  Jet2(const T& c) : v(c), d1(0L), d2(0L) {}  // NOLINT(google-explicit-constructor)
  Jet2(T value, T first, T second) : v(std::move(value)), d1(std::move(first)), d2(std::move(second)) {}

  static Jet2 constant(const T& c) { return Jet2(c); }
  static Jet2 variable(const T& b0) { return Jet2(b0, T(1L), T(0L)); }

  Jet2& operator+=(const Jet2& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    v -= o.v;
    d1 -= o.d1;
    d2 -= o.d2;
    return *this;
  }
  Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
  Jet2& operator/=(const Jet2& o) { return *this = *this / o; }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator-(const Jet2& a) { return Jet2(-a.v, -a.d1, -a.d2); }

  friend Jet2 operator*(const Jet2& x, const Jet2& y) {
    return Jet2(x.v * y.v, x.v * y.d1 + x.d1 * y.v, x.v * y.d2 + T(2L) * x.d1 * y.d1 + x.d2 * y.v);
  }

  friend Jet2 operator/(const Jet2& x, const Jet2& y) {
    if (is_zero(y.v)) throw DivisionByZero("jet division by a value-zero jet");
    const T q = x.v / y.v;
    const T q1 = (x.d1 - q * y.d1) / y.v;
    const T q2 = (x.d2 - T(2L) * q1 * y.d1 - q * y.d2) / y.v;
    return Jet2(q, q1, q2);
  }

  friend bool operator==(const Jet2& a, const Jet2& b) { return a.v == b.v && a.d1 == b.d1 && a.d2 == b.d2; }

  friend std::ostream& operator<<(std::ostream& os, const Jet2& j) {
    return os << "(" << j.v << ", " << j.d1 << ", " << j.d2 << ")";
  }
};

template <typename T>
Jet2<T> jet_mul(const Jet2<T>& x, const Jet2<T>& y) {
  return x * y;
}

template <typename T>
Jet2<T> jet_div(const Jet2<T>& x, const Jet2<T>& y) {
  return x / y;
}

/// A jet is a pole exactly when its value part is.
template <typename T>
bool is_zero(const Jet2<T>& x) {
  return is_zero(x.v);
}

}  // namespace piseries
