#include "sievebands/weights.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "sievebands/arith.hpp"
#include "sievebands/parallel.hpp"
#include "sievebands/simd/kernels.hpp"

namespace sievebands {

namespace {

std::vector<ComplexValue> root_table(std::int64_t l) {
  std::vector<ComplexValue> roots(static_cast<std::size_t>(l));
  for (std::int64_t r = 0; r < l; ++r) roots[static_cast<std::size_t>(r)] = unit_root(r, l);
  return roots;
}

ComplexValue fourier_with_roots(const OffsetSeries& s, std::span<const ComplexValue> roots,
                                std::int64_t j, std::int64_t l) {
  const std::int64_t step = arith::mod_floor(j, l);
  std::int64_t k = (arith::mod_floor(s.first(), l) * step) % l;
  ComplexAccumulator acc;
  for (const double v : s.values()) {
    if (v != 0.0) acc.add(v * roots[static_cast<std::size_t>(k)]);
    k += step;
    if (k >= l) k -= l;
  }
  return acc.value();
}

}  // namespace

OffsetSeries::OffsetSeries(std::int64_t first, std::vector<double> values)
    : first_(first), values_(std::move(values)) {
  for (const double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("OffsetSeries: non-finite value");
}

double OffsetSeries::operator()(std::int64_t a) const {
  if (a < first_ || a > last()) return 0.0;
  return values_[static_cast<std::size_t>(a - first_)];
}

ComplexValue OffsetSeries::fourier(double beta) const {
  ComplexAccumulator acc;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(first_ + static_cast<std::int64_t>(i)) * beta;
    acc.add(values_[i] * ComplexValue(std::cos(angle), std::sin(angle)));
  }
  return acc.value();
}

ComplexValue OffsetSeries::fourier(std::int64_t j, std::int64_t l) const {
  if (l < 1) throw std::invalid_argument("fourier: l must be >= 1");
  const auto roots = root_table(l);
  return fourier_with_roots(*this, roots, j, l);
}

double OffsetSeries::mass() const { return simd::sum(values_); }

std::string_view to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::unit_step: return "unit_step";
    case WeightKind::sign: return "sign";
    case WeightKind::cesaro: return "cesaro";
    case WeightKind::custom: return "custom";
  }
  return "custom";
}

WeightKind parse_weight_kind(std::string_view text) {
  if (text == "unit_step" || text == "unit") return WeightKind::unit_step;
  if (text == "sign") return WeightKind::sign;
  if (text == "cesaro") return WeightKind::cesaro;
  if (text == "custom") return WeightKind::custom;
  throw std::invalid_argument("unknown weight kind '" + std::string(text) + "'");
}

Weight::Weight(WeightKind kind, std::int64_t h, std::vector<double> table)
    : kind_(kind), half_width_(h), series_(-h, std::move(table)) {}

Weight Weight::make(WeightKind kind, std::int64_t h) {
  if (h < 1) throw std::invalid_argument("Weight: H must be >= 1");
  if (kind == WeightKind::custom) throw std::invalid_argument("Weight::make: use Weight::custom for tables");
  std::vector<double> table(static_cast<std::size_t>(2 * h + 1));
  for (std::int64_t x = -h; x <= h; ++x) {
    double v = 0.0;
    switch (kind) {
      case WeightKind::unit_step: v = x >= 1 ? 1.0 : 0.0; break;
      case WeightKind::sign: v = static_cast<double>((x > 0) - (x < 0)); break;
      case WeightKind::cesaro: v = 1.0 - static_cast<double>(std::llabs(x)) / static_cast<double>(h); break;
      case WeightKind::custom: break;
    }
    table[static_cast<std::size_t>(x + h)] = v;
  }
  return Weight(kind, h, std::move(table));
}

Weight Weight::custom(std::vector<double> table) {
  if (table.size() < 3 || table.size() % 2 == 0)
    throw std::invalid_argument("Weight::custom: table length must be 2H + 1 with H >= 1");
  const auto h = static_cast<std::int64_t>(table.size() / 2);
  return Weight(WeightKind::custom, h, std::move(table));
}

Weight Weight::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("H") || !doc.contains("table"))
    throw std::invalid_argument("weight JSON: expected {\"H\": int, \"table\": [...]}");
  const auto h = doc["H"].get<std::int64_t>();
  auto table = doc["table"].get<std::vector<double>>();
  if (h < 1 || table.size() != static_cast<std::size_t>(2 * h + 1))
    throw std::invalid_argument("weight JSON: table must hold 2H + 1 values");
  return custom(std::move(table));
}

Weight Weight::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open weight file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed weight JSON in " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

ComplexValue weight_fourier(const Weight& w, double beta) { return w.series().fourier(beta); }

ComplexValue weight_fourier(const Weight& w, std::int64_t j, std::int64_t l) {
  return w.series().fourier(j, l);
}

CorrelationWeight weight_correlation(const Weight& w) {
  const std::int64_t h = w.half_width();
  std::vector<double> table(static_cast<std::size_t>(4 * h + 1), 0.0);
  for (std::int64_t a = -2 * h; a <= 2 * h; ++a) {
    Accumulator<double> acc;
    // W(a) = sum over h2 - h1 = a of w(h1) w(h2)
    for (std::int64_t h2 = std::max(-h, a - h); h2 <= std::min(h, a + h); ++h2) acc.add(w(h2 - a) * w(h2));
    table[static_cast<std::size_t>(a + 2 * h)] = acc.value();
  }
  OffsetSeries series(-2 * h, std::move(table));
  const double w0 = w.series().mass();
  const double big_w0 = series.mass();
  return CorrelationWeight(h, std::move(series), w0, big_w0);
}

double l1_stat(const OffsetSeries& series, std::int64_t l) {
  if (l < 1) throw std::invalid_argument("l1_stat: l must be >= 1");
  const auto roots = root_table(l);
  Accumulator<double> acc;
  for (std::int64_t j = 1; j < l; ++j)
    if (std::gcd(j, l) == 1) acc.add(std::abs(fourier_with_roots(series, roots, j, l)));
  return acc.value() / static_cast<double>(l);
}

double l2_stat(const OffsetSeries& series, std::int64_t l) {
  if (l < 1) throw std::invalid_argument("l2_stat: l must be >= 1");
  const auto roots = root_table(l);
  Accumulator<double> acc;
  for (std::int64_t j = 1; j < l; ++j) acc.add(std::norm(fourier_with_roots(series, roots, j, l)));
  return acc.value() / (static_cast<double>(l) * static_cast<double>(l));
}

GoodWeightReport good_weight_report(std::span<const Weight> weights, std::int64_t l_max, unsigned threads) {
  if (weights.empty()) throw std::invalid_argument("good_weight_report: empty weight list");
  if (l_max < 1) throw std::invalid_argument("good_weight_report: l_max must be >= 1");
  const auto per_l = static_cast<std::size_t>(l_max);
  std::vector<double> values(weights.size() * per_l, 0.0);
  parallel_for(values.size(), threads, [&](std::size_t i) {
    const Weight& w = weights[i / per_l];
    const auto l = static_cast<std::int64_t>(i % per_l) + 1;
    values[i] = static_cast<double>(l) * l2_stat(w, l) / static_cast<double>(w.half_width());
  });
  GoodWeightReport report;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > report.sup || report.argmax_l == 0) {
      report.sup = values[i];
      report.argmax_h = weights[i / per_l].half_width();
      report.argmax_l = static_cast<std::int64_t>(i % per_l) + 1;
    }
  }
  return report;
}

GoodWeightReport good_weight_report(WeightKind kind, std::span<const std::int64_t> h_list,
                                    std::int64_t l_max, unsigned threads) {
  if (h_list.empty()) throw std::invalid_argument("good_weight_report: empty H list");
  std::vector<Weight> weights;
  for (const auto h : h_list) weights.push_back(Weight::make(kind, h));
  return good_weight_report(weights, l_max, threads);
}

}  // namespace sievebands
