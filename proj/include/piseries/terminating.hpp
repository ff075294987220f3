#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "piseries/errors.hpp"
#include "piseries/harmonics.hpp"
#include "piseries/qkernel.hpp"
#include "piseries/scalar.hpp"

// Terminating summation formulas and their first/second b-derivative forms.
// Every evaluator is generic over the scalar so the same code runs in exact
// rational mode, in BigReal, and with b lifted to a Jet2 variable.

namespace piseries {

template <Field T>
struct Sides {
  T lhs;
  T rhs;
  /// sum of |summand| on the left; the scale of its rounding error
  BigReal lhs_abs_sum = BigReal(0L);
};

template <Field T>
struct Named {
  T value;
  const char* name;
};

namespace detail {

template <Field T>
T pochhammer_ratio(std::initializer_list<Named<T>> upper, std::initializer_list<Named<T>> lower, long k) {
  T den(1L);
  for (const auto& p : lower) {
    const T f = pochhammer(p.value, k);
    if (is_zero(f)) throw PoleError(std::string("denominator (") + p.name + ")_" + std::to_string(k) + " vanishes");
    den = den * f;
  }
  T num(1L);
  for (const auto& p : upper) num = num * pochhammer(p.value, k);
  return num / den;
}

template <Field T>
T q_pochhammer_ratio(std::initializer_list<Named<T>> upper, std::initializer_list<Named<T>> lower,
                     const QParams<T>& q, long k) {
  T den(1L);
  for (const auto& p : lower) {
    const T f = q_pochhammer(p.value, q, k);
    if (is_zero(f)) {
      throw PoleError(std::string("denominator (") + p.name + ";q)_" + std::to_string(k) + " vanishes");
    }
    den = den * f;
  }
  T num(1L);
  for (const auto& p : upper) num = num * q_pochhammer(p.value, q, k);
  return num / den;
}

template <Field T>
void require_nonzero(const T& x, const char* what) {
  if (is_zero(x)) throw PoleError(std::string(what) + " vanishes");
}

inline void require_length(long n) {
  if (n < 0) throw PreconditionError("terminating sum needs n >= 0");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Classical 7F6 with parameters (a, 1+a/3, b, 1-b, c, 1/2+a-c+n, -n)
// ---------------------------------------------------------------------------

template <Field T>
T term_7F6(const T& a, const T& b, const T& c, long n, long k) {
  const T one(1L);
  const T two(2L);
  const T nn(n);
  return detail::pochhammer_ratio<T>(
      {{a, "a"}, {one + a / T(3L), "1+a/3"}, {b, "b"}, {one - b, "1-b"}, {c, "c"},
       {ratio<T>(1, 2) + a - c + nn, "1/2+a-c+n"}, {-nn, "-n"}},
      {{one, "1"}, {a / T(3L), "a/3"}, {(two + a - b) / two, "(2+a-b)/2"}, {(one + a + b) / two, "(1+a+b)/2"},
       {one + a + two * nn, "1+a+2n"}, {one + a - two * c, "1+a-2c"}, {two * c - a - two * nn, "2c-a-2n"}},
      k);
}

template <Field T>
T eval_7F6_lhs(const T& a, const T& b, const T& c, long n) {
  detail::require_length(n);
  T sum(0L);
  for (long k = 0; k <= n; ++k) sum = sum + term_7F6(a, b, c, n, k);
  return sum;
}

template <Field T>
T eval_7F6_rhs(const T& a, const T& b, const T& c, long n) {
  detail::require_length(n);
  const T one(1L);
  const T two(2L);
  return detail::pochhammer_ratio<T>(
      {{(one + a) / two, "(1+a)/2"}, {one + a / two, "1+a/2"}, {(one + a + b) / two - c, "(1+a+b)/2-c"},
       {one + (a - b) / two - c, "1+(a-b)/2-c"}},
      {{(one + a + b) / two, "(1+a+b)/2"}, {one + (a - b) / two, "1+(a-b)/2"}, {(one + a) / two - c, "(1+a)/2-c"},
       {one + a / two - c, "1+a/2-c"}},
      n);
}

template <Field T>
Sides<T> eval_7F6(const T& a, const T& b, const T& c, long n) {
  detail::require_length(n);
  T lhs(0L);
  BigReal abs_sum(0L);
  for (long k = 0; k <= n; ++k) {
    const T t = term_7F6(a, b, c, n, k);
    lhs = lhs + t;
    abs_sum += magnitude(t);
  }
  return {lhs, eval_7F6_rhs(a, b, c, n), abs_sum};
}

/// First b-derivative of the 7F6 summation: weights A_k on the left, B_n on
/// the right.
template <Field T>
Sides<T> eval_eq32(const T& a, const T& b, const T& c, long n) {
  detail::require_length(n);
  T lhs(0L);
  BigReal abs_sum(0L);
  for (long k = 1; k <= n; ++k) {
    const T t = term_7F6(a, b, c, n, k) * coeff_A(ABCDArgs<T>(Flavor::classical, a, b, std::nullopt, k));
    lhs = lhs + t;
    abs_sum += magnitude(t);
  }
  const T rhs = eval_7F6_rhs(a, b, c, n) * coeff_B(ABCDArgs<T>(Flavor::classical, a, b, c, n));
  return {lhs, rhs, abs_sum};
}

/// Second b-derivative: weights A_k^2 + C_k and B_n^2 + D_n.
template <Field T>
Sides<T> eval_eq33(const T& a, const T& b, const T& c, long n) {
  detail::require_length(n);
  T lhs(0L);
  BigReal abs_sum(0L);
  for (long k = 1; k <= n; ++k) {
    const ABCDArgs<T> args(Flavor::classical, a, b, std::nullopt, k);
    const T A = coeff_A(args);
    const T t = term_7F6(a, b, c, n, k) * (A * A + coeff_C(args));
    lhs = lhs + t;
    abs_sum += magnitude(t);
  }
  const ABCDArgs<T> args(Flavor::classical, a, b, c, n);
  const T B = coeff_B(args);
  const T rhs = eval_7F6_rhs(a, b, c, n) * (B * B + coeff_D(args));
  return {lhs, rhs, abs_sum};
}

// ---------------------------------------------------------------------------
// Quadratic q-summation, terminated by d = q^(-2n), f = c^2
// ---------------------------------------------------------------------------

template <Field T>
T term_quadratic(const T& a, const T& b, const T& c, long n, const QParams<T>& q, long k) {
  const T& x = q.q();
  const QParams<T> q2 = q.derived(2);
  const T one(1L);
  const T c2 = c * c;
  detail::require_nonzero(one - a, "1-a");
  const T well_poised = (one - a * q.power(3 * k)) / (one - a);
  const T base_q = detail::q_pochhammer_ratio<T>({{a, "a"}, {b, "b"}, {x / b, "q/b"}},
                                                 {{a * q.power(2 * n + 1), "aq^(2n+1)"},
                                                  {a * x / c2, "aq/c^2"},
                                                  {c2 * q.power(-2 * n) / a, "c^2q^(-2n)/a"}},
                                                 q, k);
  const T base_q2 = detail::q_pochhammer_ratio<T>(
      {{q.power(-2 * n), "q^(-2n)"}, {c2, "c^2"}, {a * a * q.power(2 * n + 1) / c2, "a^2q^(2n+1)/c^2"}},
      {{q.power(2), "q^2"}, {a * q.power(2) / b, "aq^2/b"}, {a * b * x, "abq"}}, q2, k);
  return well_poised * base_q * base_q2 * q.power(k);
}

template <Field T>
T quadratic_rhs(const T& a, const T& b, const T& c, long n, const QParams<T>& q) {
  const QParams<T> q2 = q.derived(2);
  const T c2 = c * c;
  const T aq = a * q.q();
  const T aq2 = a * q.power(2);
  return detail::q_pochhammer_ratio<T>(
      {{aq, "aq"}, {aq2, "aq^2"}, {aq2 / (b * c2), "aq^2/bc^2"}, {aq * b / c2, "abq/c^2"}},
      {{aq / c2, "aq/c^2"}, {aq2 / c2, "aq^2/c^2"}, {aq2 / b, "aq^2/b"}, {aq * b, "abq"}}, q2, n);
}

template <Field T>
Sides<T> eval_quadratic_truncated(const T& a, const T& b, const T& c, long n, const QParams<T>& q) {
  detail::require_length(n);
  T lhs(0L);
  BigReal abs_sum(0L);
  for (long k = 0; k <= n; ++k) {
    const T t = term_quadratic(a, b, c, n, q, k);
    lhs = lhs + t;
    abs_sum += magnitude(t);
  }
  return {lhs, quadratic_rhs(a, b, c, n, q), abs_sum};
}

template <Field T>
Sides<T> eval_eq42(const T& a, const T& b, const T& c, long n, const QParams<T>& q) {
  detail::require_length(n);
  T lhs(0L);
  BigReal abs_sum(0L);
  for (long k = 1; k <= n; ++k) {
    const ABCDArgs<T> args(Flavor::q_quadratic, a, b, std::nullopt, k, q);
    const T A = coeff_A(args);
    const T t = term_quadratic(a, b, c, n, q, k) * (A * A + coeff_C(args));
    lhs = lhs + t;
    abs_sum += magnitude(t);
  }
  const ABCDArgs<T> args(Flavor::q_quadratic, a, b, c, n, q);
  const T B = coeff_B(args);
  return {lhs, quadratic_rhs(a, b, c, n, q) * (B * B + coeff_D(args)), abs_sum};
}

// ---------------------------------------------------------------------------
// Jackson's terminating well-poised 8phi7, balanced by q^(n+1) a^2 = bcde
// ---------------------------------------------------------------------------

/// True when x and y agree exactly (exact scalars) or to within a few ulps of
/// the working precision.
template <Field T>
bool nearly_equal(const T& x, const T& y) {
  if constexpr (ScalarTraits<T>::exact) {
    return is_zero(x - y);
  } else {
    const BigReal diff = magnitude(x - y);
    const BigReal scale = max(magnitude(x), magnitude(y));
    return diff <= scale * pow2(10 - diff.precision_bits(), diff.precision_bits());
  }
}

template <Field T>
T jackson_solve_e(const T& a, const T& b, const T& c, const T& d, long n, const QParams<T>& q) {
  const T bcd = b * c * d;
  detail::require_nonzero(bcd, "bcd");
  return q.power(n + 1) * a * a / bcd;
}

template <Field T>
T term_jackson(const T& a, const T& b, const T& c, const T& d, const T& e, long n, const QParams<T>& q, long k) {
  const T& x = q.q();
  const T aq = a * x;
  // (q a^(1/2), -q a^(1/2); q)_k / (a^(1/2), -a^(1/2); q)_k = (aq^2; q^2)_k / (a; q^2)_k
  const QParams<T> q2 = q.derived(2);
  const T root_pair =
      detail::q_pochhammer_ratio<T>({{a * q.power(2), "aq^2 (base q^2)"}}, {{a, "a (base q^2)"}}, q2, k);
  const T rest = detail::q_pochhammer_ratio<T>(
      {{a, "a"}, {b, "b"}, {c, "c"}, {d, "d"}, {e, "e"}, {q.power(-n), "q^-n"}},
      {{x, "q"}, {aq / b, "aq/b"}, {aq / c, "aq/c"}, {aq / d, "aq/d"}, {aq / e, "aq/e"},
       {a * q.power(n + 1), "aq^(n+1)"}},
      q, k);
  return root_pair * rest * q.power(k);
}

template <Field T>
Sides<T> eval_jackson(const T& a, const T& b, const T& c, const T& d, const T& e, long n, const QParams<T>& q) {
  detail::require_length(n);
  if (!nearly_equal(q.power(n + 1) * a * a, b * c * d * e)) {
    throw PreconditionError("Jackson balance q^(n+1) a^2 = bcde violated");
  }
  T lhs(0L);
  BigReal abs_sum(0L);
  for (long k = 0; k <= n; ++k) {
    const T t = term_jackson(a, b, c, d, e, n, q, k);
    lhs = lhs + t;
    abs_sum += magnitude(t);
  }
  const T aq = a * q.q();
  const T rhs = detail::q_pochhammer_ratio<T>(
      {{aq, "aq"}, {aq / (b * c), "aq/bc"}, {aq / (b * d), "aq/bd"}, {aq / (c * d), "aq/cd"}},
      {{aq / b, "aq/b"}, {aq / c, "aq/c"}, {aq / d, "aq/d"}, {aq / (b * c * d), "aq/bcd"}}, q, n);
  return {lhs, rhs, abs_sum};
}

// ---------------------------------------------------------------------------
// Jackson with d = q/b, e = a^2 q^n / c, and its second b-derivative
// ---------------------------------------------------------------------------

template <Field T>
T term_lemma51(const T& a, const T& b, const T& c, long n, const QParams<T>& q, long k) {
  const T& x = q.q();
  const T one(1L);
  detail::require_nonzero(one - a, "1-a");
  const T well_poised = (one - a * q.power(2 * k)) / (one - a);
  const T body = detail::q_pochhammer_ratio<T>(
      {{a, "a"}, {b, "b"}, {c, "c"}, {x / b, "q/b"}, {a * a * q.power(n) / c, "a^2q^n/c"}, {q.power(-n), "q^-n"}},
      {{x, "q"}, {a * x / b, "aq/b"}, {a * x / c, "aq/c"}, {a * b, "ab"}, {c * q.power(1 - n) / a, "cq^(1-n)/a"},
       {a * q.power(n + 1), "aq^(n+1)"}},
      q, k);
  return well_poised * body * q.power(k);
}

template <Field T>
T lemma51_rhs(const T& a, const T& b, const T& c, long n, const QParams<T>& q) {
  const T aq = a * q.q();
  return detail::q_pochhammer_ratio<T>({{aq, "aq"}, {aq / (b * c), "aq/bc"}, {a, "a"}, {a * b / c, "ab/c"}},
                                       {{aq / b, "aq/b"}, {aq / c, "aq/c"}, {a * b, "ab"}, {a / c, "a/c"}}, q, n);
}

/// The specialised Jackson sum before differentiation.
template <Field T>
Sides<T> eval_lemma51_base(const T& a, const T& b, const T& c, long n, const QParams<T>& q) {
  detail::require_length(n);
  T lhs(0L);
  BigReal abs_sum(0L);
  for (long k = 0; k <= n; ++k) {
    const T t = term_lemma51(a, b, c, n, q, k);
    lhs = lhs + t;
    abs_sum += magnitude(t);
  }
  return {lhs, lemma51_rhs(a, b, c, n, q), abs_sum};
}

template <Field T>
Sides<T> eval_lemma51(const T& a, const T& b, const T& c, long n, const QParams<T>& q) {
  detail::require_length(n);
  T lhs(0L);
  BigReal abs_sum(0L);
  for (long k = 1; k <= n; ++k) {
    const ABCDArgs<T> args(Flavor::q_linear, a, b, std::nullopt, k, q);
    const T A = coeff_A(args);
    const T t = term_lemma51(a, b, c, n, q, k) * (A * A + coeff_C(args));
    lhs = lhs + t;
    abs_sum += magnitude(t);
  }
  const ABCDArgs<T> args(Flavor::q_linear, a, b, c, n, q);
  const T B = coeff_B(args);
  return {lhs, lemma51_rhs(a, b, c, n, q) * (B * B + coeff_D(args)), abs_sum};
}

// ---------------------------------------------------------------------------
// Dougall's terminating well-poised 7F6, balanced by 1 + 2a = b + c + d + e - n
// ---------------------------------------------------------------------------

template <Field T>
T dougall_solve_e(const T& a, const T& b, const T& c, const T& d, long n) {
  return T(1L) + T(2L) * a - b - c - d + T(n);
}

template <Field T>
T term_dougall(const T& a, const T& b, const T& c, const T& d, const T& e, long n, long k) {
  const T one(1L);
  const T nn(n);
  return detail::pochhammer_ratio<T>(
      {{a, "a"}, {one + a / T(2L), "1+a/2"}, {b, "b"}, {c, "c"}, {d, "d"}, {e, "e"}, {-nn, "-n"}},
      {{one, "1"}, {a / T(2L), "a/2"}, {one + a - b, "1+a-b"}, {one + a - c, "1+a-c"}, {one + a - d, "1+a-d"},
       {one + a - e, "1+a-e"}, {one + a + nn, "1+a+n"}},
      k);
}

template <Field T>
Sides<T> eval_dougall(const T& a, const T& b, const T& c, const T& d, const T& e, long n) {
  detail::require_length(n);
  if (!nearly_equal(T(1L) + T(2L) * a, b + c + d + e - T(n))) {
    throw PreconditionError("Dougall balance 1 + 2a = b + c + d + e - n violated");
  }
  T lhs(0L);
  BigReal abs_sum(0L);
  for (long k = 0; k <= n; ++k) {
    const T t = term_dougall(a, b, c, d, e, n, k);
    lhs = lhs + t;
    abs_sum += magnitude(t);
  }
  const T one(1L);
  const T rhs = detail::pochhammer_ratio<T>(
      {{one + a, "1+a"}, {one + a - b - c, "1+a-b-c"}, {one + a - b - d, "1+a-b-d"}, {one + a - c - d, "1+a-c-d"}},
      {{one + a - b, "1+a-b"}, {one + a - c, "1+a-c"}, {one + a - d, "1+a-d"}, {one + a - b - c - d, "1+a-b-c-d"}},
      n);
  return {lhs, rhs, abs_sum};
}

}  // namespace piseries
