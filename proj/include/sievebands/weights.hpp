#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sievebands/numeric.hpp"

namespace sievebands {

/// Real values v(a) tabulated on the integer offsets [first, first + size),
/// zero elsewhere. Shared representation for weights, their correlations and
/// the plain band indicator.
class OffsetSeries {
 public:
  OffsetSeries() = default;
  OffsetSeries(std::int64_t first, std::vector<double> values);

  std::int64_t first() const { return first_; }
  std::int64_t last() const { return first_ + static_cast<std::int64_t>(values_.size()) - 1; }
  std::span<const double> values() const { return values_; }
  double operator()(std::int64_t a) const;

  /// sum_a v(a) e(a beta).
  ComplexValue fourier(double beta) const;
  /// sum_a v(a) e(a j / l), with a j reduced mod l before forming the angle.
  ComplexValue fourier(std::int64_t j, std::int64_t l) const;
  /// sum_a v(a), compensated.
  double mass() const;

 private:
  std::int64_t first_ = 0;
  std::vector<double> values_;
};

enum class WeightKind { unit_step, sign, cesaro, custom };

std::string_view to_string(WeightKind kind);
WeightKind parse_weight_kind(std::string_view text);

/// A weight w_H tabulated on [-H, H].
class Weight {
 public:
  /// Built-in kinds: unit_step u(h) = [h >= 1], sign, Cesaro 1 - |h|/H.
  static Weight make(WeightKind kind, std::int64_t h);
  /// table[i] = w(i - H); the table must have odd length 2H + 1 with H >= 1.
  static Weight custom(std::vector<double> table);
  /// {"H": int, "table": [2H + 1 floats]}, index 0 <-> h = -H.
  static Weight from_json(const nlohmann::json& doc);
  static Weight load(const std::filesystem::path& path);

  WeightKind kind() const { return kind_; }
  std::int64_t half_width() const { return half_width_; }
  double operator()(std::int64_t h) const { return series_(h); }
  std::span<const double> table() const { return series_.values(); }
  const OffsetSeries& series() const { return series_; }

 private:
  Weight(WeightKind kind, std::int64_t h, std::vector<double> table);
  WeightKind kind_;
  std::int64_t half_width_;
  OffsetSeries series_;
};

/// W_H(a) = sum_h w(h) w(h - a) on [-2H, 2H], with the cached totals
/// w^_H(0) and W^_H(0).
class CorrelationWeight {
 public:
  CorrelationWeight(std::int64_t h, OffsetSeries series, double w_hat_0, double big_w_hat_0)
      : half_width_(h), series_(std::move(series)), w_hat_0_(w_hat_0), big_w_hat_0_(big_w_hat_0) {}

  std::int64_t half_width() const { return half_width_; }
  double operator()(std::int64_t a) const { return series_(a); }
  std::span<const double> table() const { return series_.values(); }
  const OffsetSeries& series() const { return series_; }
  double w_hat_0() const { return w_hat_0_; }
  double big_w_hat_0() const { return big_w_hat_0_; }

 private:
  std::int64_t half_width_;
  OffsetSeries series_;
  double w_hat_0_;
  double big_w_hat_0_;
};

/// w^_H(beta) = sum_{|h| <= H} w(h) e(h beta).
ComplexValue weight_fourier(const Weight& w, double beta);
ComplexValue weight_fourier(const Weight& w, std::int64_t j, std::int64_t l);

/// Direct O(H^2) shift sum.
CorrelationWeight weight_correlation(const Weight& w);

/// (1/l) sum over 1 <= j < l, gcd(j, l) = 1 of |v^(j/l)|. Zero for l = 1.
double l1_stat(const OffsetSeries& series, std::int64_t l);
inline double l1_stat(const Weight& w, std::int64_t l) { return l1_stat(w.series(), l); }

/// (1/l^2) sum over 1 <= j < l of |w^(j/l)|^2. Zero for l = 1.
double l2_stat(const OffsetSeries& series, std::int64_t l);
inline double l2_stat(const Weight& w, std::int64_t l) { return l2_stat(w.series(), l); }

struct GoodWeightReport {
  double sup = 0.0;  ///< max of l L2_l / H
  std::int64_t argmax_h = 0;
  std::int64_t argmax_l = 0;
};

/// max over l <= l_max and the given weights of l * L2_l(w^_H) / H.
GoodWeightReport good_weight_report(std::span<const Weight> weights, std::int64_t l_max,
                                    unsigned threads = 1);
GoodWeightReport good_weight_report(WeightKind kind, std::span<const std::int64_t> h_list,
                                    std::int64_t l_max, unsigned threads = 1);

}  // namespace sievebands
