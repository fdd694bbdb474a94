#include "sievebands/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace sievebands {

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0) throw std::invalid_argument("Rational: zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("Rational: non-finite double");
  return Rational(mpq_class(value));
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    t = b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw std::invalid_argument("Rational: empty literal");

  const auto dot = s.find('.');
  const auto exp = s.find_first_of("eE");
  if (dot != std::string::npos || exp != std::string::npos) {
    // Decimal literal: interpret the digits exactly, not through a double.
    std::string mantissa = exp == std::string::npos ? s : s.substr(0, exp);
    long exponent = 0;
    if (exp != std::string::npos) exponent = std::stol(s.substr(exp + 1));
    bool negative = false;
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
      negative = mantissa[0] == '-';
      mantissa.erase(0, 1);
    }
    const auto d = mantissa.find('.');
    std::string digits = mantissa;
    if (d != std::string::npos) {
      exponent -= static_cast<long>(mantissa.size() - d - 1);
      digits.erase(d, 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("Rational: malformed literal '" + s + "'");
    mpq_class q{mpz_class(digits, 10)};
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    if (exponent >= 0) q *= scale; else q /= scale;
    if (negative) q = -q;
    return Rational(q);
  }

  mpq_class q;
  if (s[0] == '+') s.erase(0, 1);
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rational: malformed literal '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("Rational: zero denominator");
  return Rational(q);
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.value_ == 0) throw std::domain_error("Rational: division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational abs(const Rational& value) { return value.sign() < 0 ? -value : value; }

}  // namespace sievebands
