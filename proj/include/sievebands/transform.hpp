#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sievebands/numeric.hpp"
#include "sievebands/random.hpp"

namespace sievebands {

/// Eratosthenes transform g supported on [1, Q]; defines the sieve function
/// f(n) = sum over d | n, d <= Q of g(d).
template <class T>
class EratosthenesTransform {
 public:
  using value_type = T;

  /// coeffs[d - 1] = g(d). Requires at least one coefficient.
  EratosthenesTransform(std::vector<T> coeffs, std::string label);

  std::int64_t range() const { return static_cast<std::int64_t>(coeffs_.size()); }
  /// g(d); zero outside [1, Q].
  T operator()(std::int64_t d) const {
    return (d >= 1 && d <= range()) ? coeffs_[static_cast<std::size_t>(d - 1)] : T{};
  }
  std::span<const T> coefficients() const { return coeffs_; }
  const std::string& label() const { return label_; }
  static constexpr Backend backend() { return ScalarTraits<T>::backend; }

  /// max |g(d)|, recorded in place of the (uncheckable) essential-boundedness hypothesis.
  double max_abs() const;

  EratosthenesTransform<double> to_real() const;

 private:
  std::vector<T> coeffs_;
  std::string label_;
};

using ExactTransform = EratosthenesTransform<Rational>;
using RealTransform = EratosthenesTransform<double>;
using AnyTransform = std::variant<ExactTransform, RealTransform>;

// Builders.

/// g = delta_1, so f == 1.
template <class T>
EratosthenesTransform<T> transform_unit();

/// Restricted Moebius function mu * 1_[1,Q].
template <class T>
EratosthenesTransform<T> transform_moebius(std::int64_t range);

/// g(d) = mu(d) ln d on [1, Q].
RealTransform transform_moebius_log(std::int64_t range);

/// Truncated divisor sum: g(d) = mu(d) ln(R/d) on [1, R].
RealTransform transform_lambda_r(std::int64_t r);

template <class T>
EratosthenesTransform<T> transform_custom(std::vector<T> coeffs, std::string label = "custom");

/// Integer coefficients uniform in [-3, 3], drawn in order g(1), ..., g(Q).
template <class T>
EratosthenesTransform<T> transform_random(std::int64_t range, SplitMix64& rng);

/// Real coefficients uniform in [-1, 1).
RealTransform transform_random_real(std::int64_t range, SplitMix64& rng);

/// {"Q": int, "coeffs": [...], "backend": "exact"|"float", "label": string}.
/// Coefficients are "p/q" strings or JSON numbers; numbers enter the exact
/// backend at their binary double value.
AnyTransform transform_from_json(const nlohmann::json& doc);
AnyTransform load_transform(const std::filesystem::path& path);
nlohmann::json transform_to_json(const AnyTransform& t);

template <class T>
AnyTransform to_any(const EratosthenesTransform<T>& t) {
  return AnyTransform(t);
}

RealTransform to_real(const AnyTransform& t);
Backend backend_of(const AnyTransform& t);

}  // namespace sievebands
