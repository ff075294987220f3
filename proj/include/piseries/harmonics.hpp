#pragma once

#include <optional>
#include <string>
#include <vector>

#include "piseries/errors.hpp"
#include "piseries/qkernel.hpp"
#include "piseries/scalar.hpp"

namespace piseries {

/// H_k^(m)(x) = sum_{i=1}^{k} 1/(x+i)^m. Every x + i is checked for a pole
/// before anything is summed.
template <Field T>
T harmonic_m(long k, long m, const T& x) {
  if (k < 0) throw PreconditionError("harmonic: negative length");
  if (m < 1) throw PreconditionError("harmonic: order must be positive");
  std::vector<T> bases;
  bases.reserve(static_cast<size_t>(k));
  for (long i = 1; i <= k; ++i) {
    bases.push_back(x + T(i));
    if (is_zero(bases.back())) throw PoleError("harmonic: x + " + std::to_string(i) + " = 0");
  }
  T sum(0L);
  for (const T& base : bases) sum = sum + T(1L) / ipow(base, m);
  return sum;
}

template <Field T>
T harmonic(long k, const T& x) {
  return harmonic_m(k, 1, x);
}

/// Which derivative family the A/B/C/D sums come from: the classical 7F6
/// summation, the quadratic q-summation (mixed bases q, q^2), or the
/// well-poised 8phi7 specialization (base q only).
enum class Flavor { classical, q_quadratic, q_linear };

std::string to_string(Flavor f);
Flavor parse_flavor(const std::string& s);

/// Parameters for the coefficient sums. A and C need a, b and the length k;
/// B and D additionally need c and use the same length slot as n.
template <Field T>
struct ABCDArgs {
  Flavor flavor;
  T a;
  T b;
  std::optional<T> c;
  long length;
  std::optional<QParams<T>> q;

  ABCDArgs(Flavor flavor, T a, T b, std::optional<T> c, long length, std::optional<QParams<T>> q = std::nullopt)
      : flavor(flavor), a(std::move(a)), b(std::move(b)), c(std::move(c)), length(length), q(std::move(q)) {
    if (length < 0) throw PreconditionError("coefficient sum: negative length");
    if (flavor == Flavor::classical && this->q) throw PreconditionError("classical coefficients take no q");
    if (flavor != Flavor::classical && !this->q) throw PreconditionError("q-flavored coefficients need q");
  }

  const T& require_c() const {
    if (!c) throw PreconditionError("coefficient B/D needs the parameter c");
    return *c;
  }
};

namespace detail {

// Collects num/den pieces, checks every denominator, then sums. Keeps the
// "no pole anywhere in the sum" check ahead of the arithmetic.
template <Field T>
class FractionSum {
 public:
  explicit FractionSum(const char* what) : what_(what) {}

  void add(T num, T den, long index, const char* piece) {
    if (is_zero(den)) {
      throw PoleError(std::string(what_) + ": pole in " + piece + " at i = " + std::to_string(index));
    }
    parts_.push_back({std::move(num), std::move(den)});
  }

  T total() const {
    T sum(0L);
    for (const auto& [num, den] : parts_) sum = sum + num / den;
    return sum;
  }

 private:
  struct Part {
    T num;
    T den;
  };
  const char* what_;
  std::vector<Part> parts_;
};

// Second derivative of log(1 - u/b) in b, written the way the identities
// print it: (u/b^3)(u/b - 2)/(1 - u/b)^2 for u independent of b.
template <Field T>
void add_inverse_b_second(FractionSum<T>& s, const T& u, const T& b, long i, const char* piece, bool negate) {
  const T ub = u / b;
  T num = u / (b * b * b) * (ub - T(2L));
  if (negate) num = -num;
  s.add(std::move(num), (T(1L) - ub) * (T(1L) - ub), i, piece);
}

}  // namespace detail

template <Field T>
T coeff_A(const ABCDArgs<T>& args) {
  const T& a = args.a;
  const T& b = args.b;
  const long k = args.length;
  if (args.flavor == Flavor::classical) {
    const T half = ratio<T>(1, 2);
    return harmonic(k, b - T(1L)) - harmonic(k, -b) + half * harmonic(k, (a - b) * half) -
           half * harmonic(k, (a + b - T(1L)) * half);
  }
  const T& q = args.q->q();
  detail::FractionSum<T> s("coeff_A");
  T qi = q;           // q^i
  T qim1(1L);         // q^(i-1)
  T q2i = q * q;      // q^(2i)
  T q2im1 = q;        // q^(2i-1)
  for (long i = 1; i <= k; ++i) {
    s.add(-qim1, T(1L) - b * qim1, i, "(b;q)");
    s.add(qi / (b * b), T(1L) - qi / b, i, "(q/b;q)");
    if (args.flavor == Flavor::q_quadratic) {
      s.add(-(a * q2i / (b * b)), T(1L) - a * q2i / b, i, "(aq^2/b;q^2)");
      s.add(a * q2im1, T(1L) - a * b * q2im1, i, "(abq;q^2)");
    } else {
      s.add(-(a * qi / (b * b)), T(1L) - a * qi / b, i, "(aq/b;q)");
      s.add(a * qim1, T(1L) - a * b * qim1, i, "(ab;q)");
    }
    qim1 = qi;
    qi = qi * q;
    q2im1 = q2i * q;
    q2i = q2i * q * q;
  }
  return s.total();
}

template <Field T>
T coeff_B(const ABCDArgs<T>& args) {
  const T& a = args.a;
  const T& b = args.b;
  const T& c = args.require_c();
  const long n = args.length;
  if (args.flavor == Flavor::classical) {
    const T half = ratio<T>(1, 2);
    const T u = (a + b - T(1L)) * half;
    const T w = (a - b) * half;
    return half * harmonic(n, u - c) - half * harmonic(n, w - c) - half * harmonic(n, u) + half * harmonic(n, w);
  }
  const T& q = args.q->q();
  detail::FractionSum<T> s("coeff_B");
  T qi = q;
  T qim1(1L);
  T q2i = q * q;
  T q2im1 = q;
  if (args.flavor == Flavor::q_quadratic) {
    const T c2 = c * c;
    for (long i = 1; i <= n; ++i) {
      s.add(a * q2i / (b * b * c2), T(1L) - a * q2i / (b * c2), i, "(aq^2/bc^2;q^2)");
      s.add(-(a * q2im1 / c2), T(1L) - a * b * q2im1 / c2, i, "(abq/c^2;q^2)");
      s.add(-(a * q2i / (b * b)), T(1L) - a * q2i / b, i, "(aq^2/b;q^2)");
      s.add(a * q2im1, T(1L) - a * b * q2im1, i, "(abq;q^2)");
      q2im1 = q2i * q;
      q2i = q2i * q * q;
    }
  } else {
    for (long i = 1; i <= n; ++i) {
      s.add(a * qi / (b * b * c), T(1L) - a * qi / (b * c), i, "(aq/bc;q)");
      s.add(-(a * qim1 / c), T(1L) - a * b * qim1 / c, i, "(ab/c;q)");
      s.add(-(a * qi / (b * b)), T(1L) - a * qi / b, i, "(aq/b;q)");
      s.add(a * qim1, T(1L) - a * b * qim1, i, "(ab;q)");
      qim1 = qi;
      qi = qi * q;
    }
  }
  return s.total();
}

template <Field T>
T coeff_C(const ABCDArgs<T>& args) {
  const T& a = args.a;
  const T& b = args.b;
  const long k = args.length;
  if (args.flavor == Flavor::classical) {
    const T half = ratio<T>(1, 2);
    const T quarter = ratio<T>(1, 4);
    return -harmonic_m(k, 2, b - T(1L)) - harmonic_m(k, 2, -b) + quarter * harmonic_m(k, 2, (a - b) * half) +
           quarter * harmonic_m(k, 2, (a + b - T(1L)) * half);
  }
  const T& q = args.q->q();
  detail::FractionSum<T> s("coeff_C");
  T qi = q;
  T qim1(1L);
  T q2i = q * q;
  T q2im1 = q;
  for (long i = 1; i <= k; ++i) {
    const T d0 = T(1L) - b * qim1;
    s.add(-(qim1 * qim1), d0 * d0, i, "(b;q)");
    detail::add_inverse_b_second(s, qi, b, i, "(q/b;q)", false);
    if (args.flavor == Flavor::q_quadratic) {
      detail::add_inverse_b_second(s, a * q2i, b, i, "(aq^2/b;q^2)", true);
      const T d3 = T(1L) - a * b * q2im1;
      s.add(a * a * q2im1 * q2im1, d3 * d3, i, "(abq;q^2)");
    } else {
      detail::add_inverse_b_second(s, a * qi, b, i, "(aq/b;q)", true);
      const T d3 = T(1L) - a * b * qim1;
      s.add(a * a * qim1 * qim1, d3 * d3, i, "(ab;q)");
    }
    qim1 = qi;
    qi = qi * q;
    q2im1 = q2i * q;
    q2i = q2i * q * q;
  }
  return s.total();
}

template <Field T>
T coeff_D(const ABCDArgs<T>& args) {
  const T& a = args.a;
  const T& b = args.b;
  const T& c = args.require_c();
  const long n = args.length;
  if (args.flavor == Flavor::classical) {
    const T half = ratio<T>(1, 2);
    const T quarter = ratio<T>(1, 4);
    const T u = (a + b - T(1L)) * half;
    const T w = (a - b) * half;
    return -quarter * harmonic_m(n, 2, u - c) - quarter * harmonic_m(n, 2, w - c) + quarter * harmonic_m(n, 2, u) +
           quarter * harmonic_m(n, 2, w);
  }
  const T& q = args.q->q();
  detail::FractionSum<T> s("coeff_D");
  T qi = q;
  T qim1(1L);
  T q2i = q * q;
  T q2im1 = q;
  if (args.flavor == Flavor::q_quadratic) {
    const T c2 = c * c;
    for (long i = 1; i <= n; ++i) {
      detail::add_inverse_b_second(s, a * q2i / c2, b, i, "(aq^2/bc^2;q^2)", false);
      const T d1 = T(1L) - a * b * q2im1 / c2;
      s.add(-(a * a * q2im1 * q2im1 / (c2 * c2)), d1 * d1, i, "(abq/c^2;q^2)");
      detail::add_inverse_b_second(s, a * q2i, b, i, "(aq^2/b;q^2)", true);
      const T d3 = T(1L) - a * b * q2im1;
      s.add(a * a * q2im1 * q2im1, d3 * d3, i, "(abq;q^2)");
      q2im1 = q2i * q;
      q2i = q2i * q * q;
    }
  } else {
    for (long i = 1; i <= n; ++i) {
      detail::add_inverse_b_second(s, a * qi / c, b, i, "(aq/bc;q)", false);
      // (ab/c;q)_n contributes -a^2 q^(2i-2)/c^2 over the squared factor.
      const T d1 = T(1L) - a * b * qim1 / c;
      s.add(-(a * a * qim1 * qim1 / (c * c)), d1 * d1, i, "(ab/c;q)");
      detail::add_inverse_b_second(s, a * qi, b, i, "(aq/b;q)", true);
      const T d3 = T(1L) - a * b * qim1;
      s.add(a * a * qim1 * qim1, d3 * d3, i, "(ab;q)");
      qim1 = qi;
      qi = qi * q;
    }
  }
  return s.total();
}

}  // namespace piseries
