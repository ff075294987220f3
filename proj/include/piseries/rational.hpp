#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace piseries {

/// Exact rational number. Thin value wrapper over GMP's mpq_class that keeps
/// the arithmetic surface identical to BigReal so identity evaluators can be
/// instantiated in exact mode.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : q_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Parses "p", "p/r", or a decimal literal such as "-0.125" or "3e-2".
  /// Decimals are converted exactly (0.3 becomes 3/10).
  static Rational parse(std::string_view text);

  const mpq_class& get() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  /// "p/r" (or "p" when the denominator is 1).
  std::string to_string() const;
  double to_double() const { return q_.get_d(); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

inline bool is_zero(const Rational& x) { return sgn(x.get()) == 0; }
inline int sign(const Rational& x) { return sgn(x.get()); }
inline Rational abs(const Rational& x) { return Rational(mpq_class(::abs(x.get()))); }

/// Exact square root of a rational perfect square; throws PreconditionError
/// otherwise.
Rational exact_sqrt(const Rational& x);

}  // namespace piseries
