#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>

#include "sievebands/rational.hpp"

namespace sievebands {

using ComplexValue = std::complex<double>;

enum class Backend { exact, real };

std::string_view to_string(Backend backend);
Backend parse_backend(std::string_view text);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr Backend backend = Backend::real;
  static double from_int(std::int64_t v) { return static_cast<double>(v); }
  static double from_double(double v) { return v; }
  static double ratio(std::int64_t num, std::int64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double to_double(double v) { return v; }
  static double magnitude(double v) { return std::fabs(v); }
  static int sign(double v) { return (v > 0.0) - (v < 0.0); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr Backend backend = Backend::exact;
  static Rational from_int(std::int64_t v) { return Rational(static_cast<long>(v)); }
  static Rational from_double(double v) { return Rational::from_double(v); }
  static Rational ratio(std::int64_t num, std::int64_t den) {
    return Rational(static_cast<long>(num), static_cast<long>(den));
  }
  static double to_double(const Rational& v) { return v.to_double(); }
  static Rational magnitude(const Rational& v) { return abs(v); }
  static int sign(const Rational& v) { return v.sign(); }
};

/// Running sum. The double specialization is Neumaier-compensated; the exact
/// one is a plain rational sum.
template <class T>
class Accumulator {
 public:
  void add(const T& v) { sum_ += v; }
  T value() const { return sum_; }

 private:
  T sum_{};
};

template <>
class Accumulator<double> {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Compensated complex sum.
class ComplexAccumulator {
 public:
  void add(ComplexValue v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  ComplexValue value() const { return {re_.value(), im_.value()}; }

 private:
  Accumulator<double> re_;
  Accumulator<double> im_;
};

/// e(r/q) = exp(2 pi i r/q), with r reduced mod q before the angle is formed.
ComplexValue unit_root(std::int64_t r, std::int64_t q);

}  // namespace sievebands
