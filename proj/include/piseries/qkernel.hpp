#pragma once

#include <span>
#include <string>
#include <vector>

#include "piseries/errors.hpp"
#include "piseries/scalar.hpp"

namespace piseries {

/// Rising factorial x(x+1)...(x+n-1); 1 when n = 0. Zero factors are
/// legitimate values, e.g. (-n)_k vanishes for k > n.
template <Field T>
T pochhammer(const T& x, long n) {
  if (n < 0) throw PreconditionError("pochhammer: negative length");
  T result(1L);
  for (long i = 0; i < n; ++i) result = result * (x + T(i));
  return result;
}

/// The base q of a basic hypergeometric evaluation, restricted to the real
/// interval 0 < q < 1.
template <Field T>
class QParams {
 public:
  explicit QParams(T q) : q_(std::move(q)) {
    if (!ScalarTraits<T>::in_open_unit(q_)) throw PreconditionError("q must lie strictly between 0 and 1");
  }

  const T& q() const { return q_; }
  /// q^e, recomputed from q itself for every call.
  T power(long e) const { return ipow(q_, e); }
  /// Base q^m (m >= 1), derived from the original q rather than from an
  /// already-rounded power.
  QParams derived(long m) const {
    if (m < 1) throw PreconditionError("derived base needs a positive exponent");
    return QParams(ipow(q_, m));
  }

 private:
  T q_;
};

/// The q-integer [n] = (1 - q^n)/(1 - q) = 1 + q + ... + q^(n-1).
template <Field T>
T q_integer(long n, const QParams<T>& q) {
  if (n < 1) throw PreconditionError("q_integer: n must be at least 1");
  return (T(1L) - q.power(n)) / (T(1L) - q.q());
}

/// (x; q)_n = prod_{i<n} (1 - x q^i); 1 when n = 0. Factors may vanish.
template <Field T>
T q_pochhammer(const T& x, const QParams<T>& q, long n) {
  if (n < 0) throw PreconditionError("q_pochhammer: negative length");
  T result(1L);
  T xq = x;
  for (long i = 0; i < n; ++i) {
    result = result * (T(1L) - xq);
    xq = xq * q.q();
  }
  return result;
}

/// A truncated infinite product P_m together with a bound on |P_inf/P_m - 1|.
template <Field T>
struct InfiniteProduct {
  T value;
  BigReal rel_bound;
  long factors = 0;
};

/// (x; q)_inf truncated at the first m with |x| q^m / (1 - q) < eps/2.
/// The omitted factors change the product by a relative amount of at most
/// exp(|x| q^m / (1 - q)) - 1, which is reported as the bound.
template <Field T>
InfiniteProduct<T> q_pochhammer_inf(const T& x, const QParams<T>& q, const BigReal& eps) {
  if (sign(eps) <= 0) throw PreconditionError("q_pochhammer_inf: eps must be positive");
  const long prec = std::max(eps.precision_bits(), magnitude(q.q()).precision_bits());
  const BigReal abs_q = magnitude(q.q()).with_precision(prec);
  const BigReal one_minus_q = BigReal(1L, prec) - abs_q;
  const BigReal half_eps = eps / BigReal(2L, prec);

  InfiniteProduct<T> out{T(1L), BigReal(0L, prec), 0};
  if (is_zero(x)) return out;

  BigReal tail = magnitude(x).with_precision(prec) / one_minus_q;  // |x| q^m / (1-q)
  T xq = x;
  while (!(tail < half_eps)) {
    const T factor = T(1L) - xq;
    if (is_zero(factor)) {
      throw NonConvergence("q_pochhammer_inf: factor " + std::to_string(out.factors) + " vanishes");
    }
    out.value = out.value * factor;
    xq = xq * q.q();
    tail *= abs_q;
    ++out.factors;
  }
  out.rel_bound = exp(tail) - BigReal(1L, prec);
  return out;
}

/// (x_1, ..., x_r; q)_n.
template <Field T>
T multi_q_pochhammer(std::span<const T> xs, const QParams<T>& q, long n) {
  T result(1L);
  for (const T& x : xs) result = result * q_pochhammer(x, q, n);
  return result;
}

/// (x_1, ..., x_r; q)_inf with the relative bounds combined multiplicatively.
template <Field T>
InfiniteProduct<T> multi_q_pochhammer_inf(std::span<const T> xs, const QParams<T>& q, const BigReal& eps) {
  InfiniteProduct<T> out{T(1L), BigReal(0L, eps.precision_bits()), 0};
  BigReal growth(1L, eps.precision_bits());
  for (const T& x : xs) {
    auto p = q_pochhammer_inf(x, q, eps);
    out.value = out.value * p.value;
    growth *= BigReal(1L) + p.rel_bound;
    out.factors += p.factors;
  }
  out.rel_bound = growth - BigReal(1L);
  return out;
}

}  // namespace piseries
