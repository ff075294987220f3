#include "piseries/rational.hpp"

#include <cctype>

#include "piseries/errors.hpp"

namespace piseries {

Rational::Rational(long num, long den) {
  if (den == 0) throw DivisionByZero("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (is_zero(o)) throw DivisionByZero("rational division by zero");
  q_ /= o.q_;
  return *this;
}

namespace {

mpz_class parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw PreconditionError("malformed number: '" + std::string(whole) + "'");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw PreconditionError("malformed number: '" + std::string(whole) + "'");
    }
  }
  return mpz_class(std::string(digits), 10);
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw PreconditionError("empty number");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse(text.substr(0, slash));
    const Rational den = parse(text.substr(slash + 1));
    if (is_zero(den)) throw PreconditionError("zero denominator in '" + std::string(whole) + "'");
    return num / den;
  }

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    const mpz_class ev = parse_integer(exp_text, whole);
    if (!ev.fits_slong_p() || abs(ev) > 100000) throw PreconditionError("exponent out of range");
    exponent = exp_negative ? -ev.get_si() : ev.get_si();
    text = text.substr(0, e);
  }

  std::string digits;
  long fraction_digits = 0;
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = text.substr(0, dot);
    const std::string_view frac_part = text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw PreconditionError("malformed number");
    digits = std::string(int_part) + std::string(frac_part);
    fraction_digits = static_cast<long>(frac_part.size());
  } else {
    digits = std::string(text);
  }
  mpz_class mantissa = parse_integer(digits, whole);
  if (negative) mantissa = -mantissa;

  const long scale = exponent - fraction_digits;
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  mpq_class value = scale < 0 ? mpq_class(mantissa, power) : mpq_class(mantissa * power);
  value.canonicalize();
  return Rational(value);
}

std::string Rational::to_string() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational exact_sqrt(const Rational& x) {
  if (sign(x) < 0) throw PreconditionError("square root of a negative rational");
  const mpz_class n = x.numerator();
  const mpz_class d = x.denominator();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) {
    throw PreconditionError(x.to_string() + " is not the square of a rational");
  }
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return Rational(mpq_class(rn, rd));
}

}  // namespace piseries
