#include "sievebands/bands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sievebands/arith.hpp"
#include "sievebands/parallel.hpp"
#include "sievebands/simd/kernels.hpp"

namespace sievebands {

BandMode::BandMode(Kind kind, std::optional<Weight> w) : kind_(kind), weight_(std::move(w)) {
  if (kind_ == Kind::weighted) weighted_offsets_ = weight_->series();
  if (kind_ == Kind::correlation) weighted_offsets_ = weight_correlation(*weight_).series();
}

std::string BandMode::name() const {
  switch (kind_) {
    case Kind::plain: return "plain";
    case Kind::weighted: return "weighted:" + std::string(to_string(weight_->kind()));
    case Kind::correlation: return "correlation:" + std::string(to_string(weight_->kind()));
  }
  return "plain";
}

OffsetSeries BandMode::offsets(std::int64_t h) const {
  if (h < 1) throw std::invalid_argument("band mode: H must be >= 1");
  if (kind_ == Kind::plain) return OffsetSeries(1, std::vector<double>(static_cast<std::size_t>(h), 1.0));
  if (weight_->half_width() != h)
    throw std::invalid_argument("band mode: H does not match the weight's half-width");
  return weighted_offsets_;
}

template <class T>
std::vector<T> residue_class_sums(const SieveTable<T>& table, std::int64_t q) {
  if (q < 1) throw std::invalid_argument("residue_class_sums: q must be >= 1");
  std::vector<T> sums(static_cast<std::size_t>(q));
  const std::int64_t offset = arith::mod_floor(table.lo + 1, q);  // residue of the first entry
  if constexpr (std::is_same_v<T, double>) {
    std::vector<double> columns(static_cast<std::size_t>(q));
    simd::column_sums(table.values, static_cast<std::size_t>(q), columns);
    for (std::int64_t c = 0; c < q; ++c)
      sums[static_cast<std::size_t>((offset + c) % q)] = columns[static_cast<std::size_t>(c)];
  } else {
    std::int64_t r = offset;
    for (const auto& v : table.values) {
      sums[static_cast<std::size_t>(r)] += v;
      if (++r == q) r = 0;
    }
  }
  return sums;
}

template <class T>
T band_total(const SieveTable<T>& table, const BandMode& mode, std::int64_t q, std::int64_t h) {
  if (q < 1) throw std::invalid_argument("band_total: q must be >= 1");
  const OffsetSeries offsets = mode.offsets(h);
  const auto sums = residue_class_sums(table, q);

  Accumulator<T> total_acc;
  for (const auto& s : sums) total_acc.add(s);
  const T total = total_acc.value();

  Accumulator<T> banded;
  Accumulator<T> mass_acc;
  const auto values = offsets.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0.0) continue;
    const T v = ScalarTraits<T>::from_double(values[i]);
    const std::int64_t a = offsets.first() + static_cast<std::int64_t>(i);
    banded.add(v * sums[static_cast<std::size_t>(arith::mod_floor(a, q))]);
    mass_acc.add(v);
  }
  return banded.value() - mass_acc.value() * total / ScalarTraits<T>::from_int(q);
}

std::vector<std::int64_t> spectral_moduli(std::span<const std::int64_t> q_list) {
  std::vector<std::int64_t> out;
  for (const auto q : q_list)
    for (const auto l : arith::divisors(q))
      if (l > 1) out.push_back(l);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SpectralBandTotal band_total_spectral(const ExponentialSumCache& cache, const BandMode& mode,
                                      std::int64_t q, std::int64_t h) {
  if (q < 1) throw std::invalid_argument("band_total_spectral: q must be >= 1");
  const OffsetSeries offsets = mode.offsets(h);
  ComplexAccumulator acc;
  for (const auto l : arith::divisors(q)) {
    if (l == 1) continue;
    for (std::int64_t j = 1; j < l; ++j) {
      if (std::gcd(j, l) != 1) continue;
      acc.add(cache.at(-j, l) * offsets.fourier(j, l));
    }
  }
  const ComplexValue total = acc.value() / static_cast<double>(q);
  return {total.real(), total.imag()};
}

template <class T>
SpectralBandTotal band_total_spectral(const EratosthenesTransform<T>& t, const BandMode& mode,
                                      std::int64_t big_n, std::int64_t q, std::int64_t h) {
  if (q < 1) throw std::invalid_argument("band_total_spectral: q must be >= 1");
  ExponentialSumCache cache(to_real(dyadic_table(t, big_n)));
  const std::int64_t qs[] = {q};
  cache.prepare(spectral_moduli(qs));
  return band_total_spectral(cache, mode, q, h);
}

template <class T>
ApSumReport<T> ap_sum_with_main_term(const EratosthenesTransform<T>& t, std::int64_t big_n,
                                     std::int64_t q, std::int64_t a) {
  if (q < 1) throw std::invalid_argument("ap_sum_with_main_term: q must be >= 1");
  if (big_n < 1) throw std::invalid_argument("ap_sum_with_main_term: N must be >= 1");
  const auto table = dyadic_table(t, big_n);
  const std::int64_t residue = arith::mod_floor(a, q);
  Accumulator<T> sum;
  // first n > N with n = a (mod q)
  for (std::int64_t n = big_n + 1 + arith::mod_floor(residue - (big_n + 1), q); n <= 2 * big_n; n += q)
    sum.add(table.at(n));

  Accumulator<T> main;
  for (std::int64_t d = 1; d <= t.range(); ++d) {
    const std::int64_t g = std::gcd(d, q);
    if (residue % g != 0) continue;
    main.add(t(d) * ScalarTraits<T>::ratio(g, d));
  }
  ApSumReport<T> out{sum.value(), main.value() * ScalarTraits<T>::ratio(big_n, q), T{}};
  out.deviation = out.sum - out.main_term;
  return out;
}

template <class T>
BandAggregate<T> aggregate_band_totals(const EratosthenesTransform<T>& t, const BandMode& mode,
                                       std::int64_t big_n, std::int64_t q_max, std::int64_t h,
                                       unsigned threads) {
  if (q_max < 1) throw std::invalid_argument("aggregate_band_totals: Q_max must be >= 1");
  const auto table = dyadic_table(t, big_n, threads);
  BandAggregate<T> out{std::vector<T>(static_cast<std::size_t>(q_max)), T{}};
  parallel_for(out.per_q.size(), threads, [&](std::size_t i) {
    out.per_q[i] = band_total(table, mode, static_cast<std::int64_t>(i) + 1, h);
  });
  Accumulator<T> acc;
  for (const auto& v : out.per_q) acc.add(ScalarTraits<T>::magnitude(v));
  out.sum_abs = acc.value();
  return out;
}

double envelope_factor(const BandMode& mode, std::int64_t q, std::int64_t h) {
  if (mode.kind() == BandMode::Kind::plain) return 1.0 + std::log(static_cast<double>(q));
  if (q == 1) return 1.0;
  const OffsetSeries offsets = mode.offsets(h);
  double best = 0.0;
  for (const auto l : arith::divisors(q))
    if (l > 1) best = std::max(best, l1_stat(offsets, l));
  return best;
}

template <class T>
std::vector<BandTotalReport> theorem1_report(const EratosthenesTransform<T>& t, const BandMode& mode,
                                             std::int64_t big_n, std::int64_t h,
                                             std::span<const std::int64_t> q_list, unsigned threads) {
  if (q_list.empty()) throw std::invalid_argument("theorem1_report: empty q list");
  const auto table = dyadic_table(t, big_n, threads);
  std::vector<BandTotalReport> rows(q_list.size());
  const double log_n = 1.0 + std::log(static_cast<double>(big_n));
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const std::int64_t q = q_list[i];
    BandTotalReport row{mode.name(), big_n, t.range(), h, q, 0.0, 0.0, 0.0};
    row.value = std::fabs(ScalarTraits<T>::to_double(band_total(table, mode, q, h)));
    const double base = static_cast<double>(big_n) / static_cast<double>(q) + static_cast<double>(q) +
                        static_cast<double>(t.range());
    row.envelope = base * envelope_factor(mode, q, h) * log_n;
    row.ratio = row.envelope > 0.0 ? row.value / row.envelope : 0.0;
    rows[i] = std::move(row);
  });
  return rows;
}

#define SIEVEBANDS_INSTANTIATE(T)                                                                   \
  template std::vector<T> residue_class_sums<T>(const SieveTable<T>&, std::int64_t);                \
  template T band_total<T>(const SieveTable<T>&, const BandMode&, std::int64_t, std::int64_t);      \
  template SpectralBandTotal band_total_spectral<T>(const EratosthenesTransform<T>&, const BandMode&, \
                                                    std::int64_t, std::int64_t, std::int64_t);      \
  template ApSumReport<T> ap_sum_with_main_term<T>(const EratosthenesTransform<T>&, std::int64_t,   \
                                                   std::int64_t, std::int64_t);                     \
  template BandAggregate<T> aggregate_band_totals<T>(const EratosthenesTransform<T>&, const BandMode&, \
                                                     std::int64_t, std::int64_t, std::int64_t, unsigned); \
  template std::vector<BandTotalReport> theorem1_report<T>(const EratosthenesTransform<T>&,         \
                                                           const BandMode&, std::int64_t, std::int64_t, \
                                                           std::span<const std::int64_t>, unsigned);

SIEVEBANDS_INSTANTIATE(Rational)
SIEVEBANDS_INSTANTIATE(double)
#undef SIEVEBANDS_INSTANTIATE

}  // namespace sievebands
