#pragma once

#include <mpfr.h>

#include <compare>
#include <string>
#include <string_view>

#include "piseries/rational.hpp"

namespace piseries {

inline constexpr long kDefaultPrecisionBits = 192;
inline constexpr long kMinPrecisionBits = 16;

/// Precision used when a BigReal is created from an integer or rational
/// without an explicit precision. Thread-local; see PrecisionScope.
long default_precision();

/// Sets the thread's default precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(long bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_;
};

/// Arbitrary-precision binary floating-point real (MPFR, round-to-nearest).
///
/// Every operation rounds once, so the relative error per operation is at most
/// 2^(1-p) at precision p. A binary operation returns a value whose precision
/// is the larger of its operands' precisions.
class BigReal {
 public:
  BigReal();
  BigReal(long v);  // NOLINT(google-explicit-constructor)
  BigReal(int v) : BigReal(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  BigReal(long v, long precision_bits);
  BigReal(const Rational& r, long precision_bits);
  explicit BigReal(const Rational& r) : BigReal(r, default_precision()) {}
  /// Parses a decimal literal exactly, then rounds once to the precision.
  static BigReal parse(std::string_view text, long precision_bits);
  static BigReal from_double(double v, long precision_bits);

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  long precision_bits() const { return static_cast<long>(mpfr_get_prec(x_)); }
  /// Rounds (or widens) to a new precision.
  BigReal with_precision(long bits) const;

  mpfr_srcptr get() const { return x_; }
  mpfr_ptr raw() { return x_; }

  double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
  bool is_finite() const { return mpfr_number_p(x_) != 0; }
  /// Scientific notation with the given number of significant digits
  /// (0 picks enough digits to round-trip the value).
  std::string to_string(int digits = 0) const;

  BigReal& operator+=(const BigReal& o);
  BigReal& operator-=(const BigReal& o);
  BigReal& operator*=(const BigReal& o);
  BigReal& operator/=(const BigReal& o);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a);

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.x_, b.x_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);

 private:
  mpfr_t x_;
};

bool is_zero(const BigReal& x);
int sign(const BigReal& x);
BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal log(const BigReal& x);
BigReal max(const BigReal& a, const BigReal& b);
/// 2^e at the given precision (exact).
BigReal pow2(long e, long precision_bits);

/// pi correct to the requested precision. Rejects precision below 16 bits.
BigReal pi(long precision_bits);

}  // namespace piseries
