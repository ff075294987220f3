#include "piseries/bigreal.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include "piseries/errors.hpp"

namespace piseries {

namespace {

thread_local long tls_precision = kDefaultPrecisionBits;

// Widest exponent range MPFR allows. The range is per thread in a TLS build
// of MPFR, so every constructor makes sure the current thread has it.
void ensure_exponent_range() {
  thread_local const bool done = [] {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
    return true;
  }();
  (void)done;
}

mpfr_prec_t checked(long bits) {
  ensure_exponent_range();
  if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) {
    throw PreconditionError("precision out of range: " + std::to_string(bits));
  }
  return static_cast<mpfr_prec_t>(bits);
}

mpfr_prec_t joint(const BigReal& a, const BigReal& b) {
  return std::max(mpfr_get_prec(a.get()), mpfr_get_prec(b.get()));
}

}  // namespace

long default_precision() { return tls_precision; }

PrecisionScope::PrecisionScope(long bits) : saved_(tls_precision) {
  checked(bits);
  tls_precision = bits;
}

PrecisionScope::~PrecisionScope() { tls_precision = saved_; }

BigReal::BigReal() {
  mpfr_init2(x_, checked(tls_precision));
  mpfr_set_zero(x_, 1);
}

BigReal::BigReal(long v) : BigReal(v, tls_precision) {}

BigReal::BigReal(long v, long precision_bits) {
  mpfr_init2(x_, checked(precision_bits));
  mpfr_set_si(x_, v, MPFR_RNDN);
}

BigReal::BigReal(const Rational& r, long precision_bits) {
  mpfr_init2(x_, checked(precision_bits));
  mpfr_set_q(x_, r.get().get_mpq_t(), MPFR_RNDN);
}

BigReal BigReal::parse(std::string_view text, long precision_bits) {
  return BigReal(Rational::parse(text), precision_bits);
}

BigReal BigReal::from_double(double v, long precision_bits) {
  BigReal r(0L, precision_bits);
  mpfr_set_d(r.x_, v, MPFR_RNDN);
  return r;
}

BigReal::BigReal(const BigReal& other) {
  ensure_exponent_range();
  mpfr_init2(x_, mpfr_get_prec(other.x_));
  mpfr_set(x_, other.x_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  // Steal the limbs; `other` keeps a valid minimal-precision NaN.
  mpfr_init2(x_, MPFR_PREC_MIN);
  mpfr_swap(x_, other.x_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(x_, mpfr_get_prec(other.x_));
    mpfr_set(x_, other.x_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(x_, other.x_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(x_); }

BigReal BigReal::with_precision(long bits) const {
  BigReal r(0L, bits);
  mpfr_set(r.x_, x_, MPFR_RNDN);
  return r;
}

std::string BigReal::to_string(int digits) const {
  if (mpfr_nan_p(x_)) return "nan";
  if (mpfr_inf_p(x_)) return mpfr_sgn(x_) > 0 ? "inf" : "-inf";
  const size_t n = digits > 0 ? static_cast<size_t>(digits) : mpfr_get_str_ndigits(10, mpfr_get_prec(x_));
  mpfr_exp_t exponent = 0;
  std::unique_ptr<char, void (*)(char*)> s(mpfr_get_str(nullptr, &exponent, 10, n, x_, MPFR_RNDN),
                                           mpfr_free_str);
  std::string mant(s.get());
  std::string sign_str;
  if (!mant.empty() && mant.front() == '-') {
    sign_str = "-";
    mant.erase(0, 1);
  }
  if (mpfr_zero_p(x_)) return sign_str + "0";
  std::string out = sign_str + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  out += "e" + std::to_string(static_cast<long>(exponent) - 1);
  return out;
}

BigReal& BigReal::operator+=(const BigReal& o) { return *this = *this + o; }
BigReal& BigReal::operator-=(const BigReal& o) { return *this = *this - o; }
BigReal& BigReal::operator*=(const BigReal& o) { return *this = *this * o; }
BigReal& BigReal::operator/=(const BigReal& o) { return *this = *this / o; }

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(0L, joint(a, b));
  mpfr_add(r.x_, a.x_, b.x_, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(0L, joint(a, b));
  mpfr_sub(r.x_, a.x_, b.x_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(0L, joint(a, b));
  mpfr_mul(r.x_, a.x_, b.x_, MPFR_RNDN);
  return r;
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  if (mpfr_zero_p(b.x_)) throw DivisionByZero("BigReal division by zero");
  BigReal r(0L, joint(a, b));
  mpfr_div(r.x_, a.x_, b.x_, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a) {
  BigReal r(a);
  mpfr_neg(r.x_, r.x_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.x_, b.x_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.x_, b.x_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

bool is_zero(const BigReal& x) { return mpfr_zero_p(x.get()) != 0; }
int sign(const BigReal& x) { return mpfr_sgn(x.get()); }

BigReal abs(const BigReal& x) {
  BigReal r(x);
  mpfr_abs(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}

BigReal sqrt(const BigReal& x) {
  if (sign(x) < 0) throw PreconditionError("sqrt of a negative BigReal");
  BigReal r(0L, x.precision_bits());
  mpfr_sqrt(r.raw(), x.get(), MPFR_RNDN);
  return r;
}

BigReal exp(const BigReal& x) {
  BigReal r(0L, x.precision_bits());
  mpfr_exp(r.raw(), x.get(), MPFR_RNDN);
  return r;
}

BigReal log(const BigReal& x) {
  if (sign(x) <= 0) throw PreconditionError("log of a non-positive BigReal");
  BigReal r(0L, x.precision_bits());
  mpfr_log(r.raw(), x.get(), MPFR_RNDN);
  return r;
}

BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

BigReal pow2(long e, long precision_bits) {
  BigReal r(1L, precision_bits);
  mpfr_mul_2si(r.raw(), r.get(), e, MPFR_RNDN);
  return r;
}

BigReal pi(long precision_bits) {
  if (precision_bits < kMinPrecisionBits) {
    throw PreconditionError("pi: precision must be at least 16 bits, got " + std::to_string(precision_bits));
  }
  BigReal r(0L, precision_bits);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

}  // namespace piseries
