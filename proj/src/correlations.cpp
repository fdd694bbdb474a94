#include "sievebands/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sievebands/arith.hpp"
#include "sievebands/parallel.hpp"
#include "sievebands/simd/kernels.hpp"

namespace sievebands {

namespace {

template <class T>
T dot_product(std::span<const T> a, std::span<const T> b) {
  if constexpr (std::is_same_v<T, double>) {
    return simd::dot(a, b);
  } else {
    T total{};
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != T{} && b[i] != T{}) total += a[i] * b[i];
    return total;
  }
}

template <class T>
std::vector<T> convert(std::span<const double> values) {
  std::vector<T> out;
  out.reserve(values.size());
  for (const double v : values) out.push_back(ScalarTraits<T>::from_double(v));
  return out;
}

template <class T>
T sum_of(std::span<const T> values) {
  Accumulator<T> acc;
  for (const auto& v : values) acc.add(v);
  return acc.value();
}

// Weight data on the backend's scalar type. W is recomputed from the converted
// w so that the exact backend sees the exact correlation table.
template <class T>
struct WeightData {
  std::int64_t h;
  std::vector<T> w;        // index h + H
  std::vector<T> big_w;    // index a + 2H
  T w_hat_0;
  T big_w_hat_0;

  explicit WeightData(const Weight& weight) : h(weight.half_width()), w(convert<T>(weight.table())) {
    if constexpr (std::is_same_v<T, double>) {
      const auto corr = weight_correlation(weight);
      big_w.assign(corr.table().begin(), corr.table().end());
    } else {
      big_w.assign(static_cast<std::size_t>(4 * h + 1), T{});
      for (std::int64_t a = -2 * h; a <= 2 * h; ++a) {
        T acc{};
        for (std::int64_t h2 = std::max(-h, a - h); h2 <= std::min(h, a + h); ++h2)
          acc += w[static_cast<std::size_t>(h2 - a + h)] * w[static_cast<std::size_t>(h2 + h)];
        big_w[static_cast<std::size_t>(a + 2 * h)] = acc;
      }
    }
    w_hat_0 = sum_of<T>(w);
    big_w_hat_0 = sum_of<T>(big_w);
  }
};

void check_shift(std::int64_t big_n, std::int64_t a) {
  if (big_n < 1) throw std::invalid_argument("correlation: N must be >= 1");
  if (a <= -big_n || a >= big_n) throw std::invalid_argument("correlation: need |a| < N");
}

void check_window(const Weight& w, std::int64_t big_n, std::int64_t h) {
  if (h < 1) throw std::invalid_argument("Selberg: H must be >= 1");
  if (h >= big_n) throw std::invalid_argument("Selberg: need H < N");
  if (w.half_width() != h) throw std::invalid_argument("Selberg: H does not match the weight's half-width");
}

// S(x) = sum_h w(h) f(x + h) for x = N+1 .. 2N, from a table covering (N-H-1, 2N+H].
template <class T>
std::vector<T> window_sums(const SieveTable<T>& wide, std::span<const T> w, std::int64_t big_n, std::int64_t h,
                           unsigned threads) {
  std::vector<T> out(static_cast<std::size_t>(big_n));
  constexpr std::int64_t chunk = 1024;
  const auto chunks = static_cast<std::size_t>((big_n + chunk - 1) / chunk);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::int64_t begin = static_cast<std::int64_t>(c) * chunk;
    const std::int64_t end = std::min(big_n, begin + chunk);
    for (std::int64_t i = begin; i < end; ++i) {
      const std::int64_t x = big_n + 1 + i;
      out[static_cast<std::size_t>(i)] = dot_product<T>(w, wide.window(x - h - 1, x + h));
    }
  });
  return out;
}

template <class T>
SieveTable<T> widened_table(const EratosthenesTransform<T>& f, std::int64_t big_n, std::int64_t reach,
                            unsigned threads) {
  return eval_range_sieved(f, big_n - reach - 1, 2 * big_n + reach, threads);
}

}  // namespace

template <class T>
const T& CorrelationSeries<T>::at(std::int64_t a) const {
  if (a < first_shift || a > last_shift()) throw std::out_of_range("CorrelationSeries: shift out of range");
  return values[static_cast<std::size_t>(a - first_shift)];
}

template <class T>
CorrelationSeries<T> correlation_series(const EratosthenesTransform<T>& f1, const EratosthenesTransform<T>& f2,
                                        std::int64_t big_n, std::int64_t first, std::int64_t last,
                                        unsigned threads) {
  if (first > last) throw std::invalid_argument("correlation_series: empty shift range");
  check_shift(big_n, first);
  check_shift(big_n, last);
  const auto t1 = dyadic_table(f1, big_n, threads);
  const auto t2 = eval_range_sieved(f2, big_n - last, 2 * big_n - first, threads);
  CorrelationSeries<T> out{big_n, first, std::vector<T>(static_cast<std::size_t>(last - first + 1))};
  parallel_for(out.values.size(), threads, [&](std::size_t i) {
    const std::int64_t a = first + static_cast<std::int64_t>(i);
    out.values[i] = dot_product<T>(t1.values, t2.window(big_n - a, 2 * big_n - a));
  });
  return out;
}

template <class T>
T correlation(const EratosthenesTransform<T>& f1, const EratosthenesTransform<T>& f2, std::int64_t big_n,
              std::int64_t a) {
  return correlation_series(f1, f2, big_n, a, a).values.front();
}

template <class T>
T correlation_via_bands(const EratosthenesTransform<T>& f1, const EratosthenesTransform<T>& f2,
                        std::int64_t big_n, std::int64_t a) {
  check_shift(big_n, a);
  if (a < 1) throw std::invalid_argument("correlation_via_bands: need 1 <= a < N");
  const auto t1 = dyadic_table(f1, big_n);
  Accumulator<T> total;
  for (std::int64_t q = 1; q <= f2.range(); ++q) {
    const T g = f2(q);
    if (g == T{}) continue;
    Accumulator<T> cls;
    for (std::int64_t n = big_n + 1 + arith::mod_floor(a - (big_n + 1), q); n <= 2 * big_n; n += q)
      cls.add(t1.at(n));
    total.add(g * cls.value());
  }
  return total.value();
}

template <class T>
CorrelationSumReport<T> correlation_sum(const EratosthenesTransform<T>& f1, const EratosthenesTransform<T>& f2,
                                        std::int64_t big_n, std::int64_t h) {
  if (h < 1 || h >= big_n) throw std::invalid_argument("correlation_sum: need 1 <= H < N");
  const auto series = correlation_series(f1, f2, big_n, 1, h);
  const T sum = sum_of<T>(series.values);

  const auto t1 = dyadic_table(f1, big_n);
  const T f1_hat_0 = table_sum<T>(t1.values);
  const auto plain = BandMode::plain();
  Accumulator<T> band;
  for (std::int64_t q = 1; q <= f2.range(); ++q) {
    const T g = f2(q);
    if (g == T{}) continue;
    band.add(g * (ScalarTraits<T>::ratio(h, q) * f1_hat_0 + band_total(t1, plain, q, h)));
  }
  const T main = ramanujan_coefficient(f1, 1) * ramanujan_coefficient(f2, 1) *
                 ScalarTraits<T>::from_int(big_n) * ScalarTraits<T>::from_int(h);
  return {sum, band.value(), main, sum - main};
}

template <class T>
T delta_short_sum(const EratosthenesTransform<T>& f, const Weight& w, std::int64_t big_n, std::int64_t h,
                  std::int64_t x) {
  check_window(w, big_n, h);
  if (x <= big_n || x > 2 * big_n) throw std::invalid_argument("delta_short_sum: need N < x <= 2N");
  const auto table = eval_range_sieved(f, x - h - 1, x + h);
  const WeightData<T> wd(w);
  return dot_product<T>(wd.w, table.values) - wd.w_hat_0 * ramanujan_coefficient(f, 1);
}

std::string_view to_string(SelbergRoute route) {
  switch (route) {
    case SelbergRoute::direct: return "direct";
    case SelbergRoute::via_correlations: return "via_correlations";
    case SelbergRoute::via_bands: return "via_bands";
  }
  return "direct";
}

template <class T>
T selberg_value(const EratosthenesTransform<T>& f1, const EratosthenesTransform<T>& f2, const Weight& w,
                std::int64_t big_n, std::int64_t h, SelbergRoute route, unsigned threads) {
  check_window(w, big_n, h);
  const WeightData<T> wd(w);
  const T r1 = ramanujan_coefficient(f1, 1);
  const T r2 = ramanujan_coefficient(f2, 1);
  const T n_t = ScalarTraits<T>::from_int(big_n);

  switch (route) {
    case SelbergRoute::direct: {
      const auto wide1 = widened_table(f1, big_n, h, threads);
      const auto s1 = window_sums<T>(wide1, wd.w, big_n, h, threads);
      const auto s2 = (&f1 == &f2) ? s1 : window_sums<T>(widened_table(f2, big_n, h, threads), wd.w, big_n, h, threads);
      const T m1 = wd.w_hat_0 * r1;
      const T m2 = wd.w_hat_0 * r2;
      Accumulator<T> acc;
      for (std::size_t i = 0; i < s1.size(); ++i) acc.add((s1[i] - m1) * (s2[i] - m2));
      return acc.value();
    }
    case SelbergRoute::via_correlations: {
      if (2 * h >= big_n) throw std::invalid_argument("Selberg via_correlations: need 2H < N");
      const auto series = correlation_series(f1, f2, big_n, -2 * h, 2 * h, threads);
      const T correlated = dot_product<T>(wd.big_w, series.values);

      // K(n) = sum over x ~ N of w(n - x), for N - H < n <= 2N + H, by prefix sums of w.
      std::vector<T> prefix(wd.w.size() + 1);
      for (std::size_t i = 0; i < wd.w.size(); ++i) prefix[i + 1] = prefix[i] + wd.w[i];
      auto kernel = [&](std::int64_t n) {
        const std::int64_t lo = std::max(-h, n - 2 * big_n);
        const std::int64_t hi = std::min(h, n - big_n - 1);
        if (lo > hi) return T{};
        return prefix[static_cast<std::size_t>(hi + h + 1)] - prefix[static_cast<std::size_t>(lo + h)];
      };
      auto delta_total = [&](const EratosthenesTransform<T>& f, const T& r) {
        const auto wide = widened_table(f, big_n, h, threads);
        Accumulator<T> acc;
        for (std::int64_t n = wide.lo + 1; n <= wide.hi; ++n) {
          const T k = kernel(n);
          if (k != T{}) acc.add(wide.at(n) * k);
        }
        return acc.value() - n_t * wd.w_hat_0 * r;
      };
      const T delta1 = delta_total(f1, r1);
      const T delta2 = (&f1 == &f2) ? delta1 : delta_total(f2, r2);
      return correlated - wd.big_w_hat_0 * r1 * r2 * n_t - wd.w_hat_0 * (r1 * delta2 + r2 * delta1);
    }
    case SelbergRoute::via_bands: {
      const auto t1 = dyadic_table(f1, big_n, threads);
      const auto mode = BandMode::correlation(w);
      std::vector<T> terms(static_cast<std::size_t>(f2.range()));
      parallel_for(terms.size(), threads, [&](std::size_t i) {
        const auto q = static_cast<std::int64_t>(i) + 1;
        const T g = f2(q);
        if (g != T{}) terms[i] = g * band_total(t1, mode, q, h);
      });
      return sum_of<T>(terms);
    }
  }
  throw std::logic_error("selberg_value: unknown route");
}

template <class T>
SelbergResult<T> selberg_integral(const EratosthenesTransform<T>& f1, const EratosthenesTransform<T>& f2,
                                  const Weight& w, std::int64_t big_n, std::int64_t h, SelbergRoute route,
                                  unsigned threads) {
  const T value = selberg_value(f1, f2, w, big_n, h, route, threads);
  if (route == SelbergRoute::direct) return {value, route, T{}};
  const T direct = selberg_value(f1, f2, w, big_n, h, SelbergRoute::direct, threads);
  return {value, route, value - direct};
}

template <class T>
ExtremalTransform<T> extremal_transform(const EratosthenesTransform<T>& f, std::int64_t big_n,
                                        std::int64_t h, std::int64_t range, const BandMode& flavor,
                                        unsigned threads) {
  if (range < 1) throw std::invalid_argument("extremal_transform: Q must be >= 1");
  const auto aggregate = aggregate_band_totals(f, flavor, big_n, range, h, threads);
  std::vector<T> signs;
  signs.reserve(aggregate.per_q.size());
  Accumulator<T> signed_sum;
  for (const auto& total : aggregate.per_q) {
    signs.push_back(ScalarTraits<T>::from_int(ScalarTraits<T>::sign(total)));
    signed_sum.add(signs.back() * total);
  }
  return {EratosthenesTransform<T>(std::move(signs), "extremal_" + flavor.name()), aggregate.per_q,
          signed_sum.value(), aggregate.sum_abs};
}

template <class T>
Theorem2Report theorem2_report(const EratosthenesTransform<T>& f, const Weight& w, std::int64_t big_n,
                               std::int64_t h, std::int64_t range, unsigned threads) {
  check_window(w, big_n, h);
  Theorem2Report report{big_n, range, h, {}, 0.0, false, {}};
  const double cap = std::pow(static_cast<double>(big_n), 0.9);
  if (static_cast<double>(range) > cap || static_cast<double>(h) > cap)
    report.window_warning = "Q or H exceeds N^0.9";

  const auto to_d = [](const T& v) { return ScalarTraits<T>::to_double(v); };
  const double nd = static_cast<double>(big_n);
  const double hd = static_cast<double>(h);
  const double bound_i = nd * hd * hd;
  auto push = [&](std::string name, double value, double bound) {
    report.quantities.push_back({std::move(name), value, bound, bound > 0.0 ? value / bound : 0.0});
  };

  const auto ext_w = extremal_transform(f, big_n, h, range, BandMode::correlation(w), threads);
  const T j_w = selberg_value(f, f, w, big_n, h, SelbergRoute::direct, threads);
  const T j_mixed = selberg_value(f, ext_w.transform, w, big_n, h, SelbergRoute::direct, threads);
  push("sum_abs_T_W", to_d(ext_w.abs_sum), bound_i);
  push("J_w", to_d(j_w), bound_i);
  push("J_w_mixed_extremal", to_d(j_mixed), bound_i);
  report.link_residual = std::fabs(to_d(j_mixed) - to_d(ext_w.abs_sum));

  const auto ext_plain = extremal_transform(f, big_n, h, range, BandMode::plain(), threads);
  const auto unit = Weight::make(WeightKind::unit_step, h);
  const T j_f = selberg_value(f, f, unit, big_n, h, SelbergRoute::direct, threads);
  push("sum_abs_T", to_d(ext_plain.abs_sum), nd * hd);
  push("J_f", to_d(j_f), bound_i);

  report.extremal_identity_holds =
      ext_w.signed_sum == ext_w.abs_sum && ext_plain.signed_sum == ext_plain.abs_sum;
  return report;
}

#define SIEVEBANDS_INSTANTIATE(T)                                                                          \
  template struct CorrelationSeries<T>;                                                                    \
  template CorrelationSeries<T> correlation_series<T>(const EratosthenesTransform<T>&,                     \
                                                      const EratosthenesTransform<T>&, std::int64_t,       \
                                                      std::int64_t, std::int64_t, unsigned);               \
  template T correlation<T>(const EratosthenesTransform<T>&, const EratosthenesTransform<T>&, std::int64_t, \
                            std::int64_t);                                                                 \
  template T correlation_via_bands<T>(const EratosthenesTransform<T>&, const EratosthenesTransform<T>&,    \
                                      std::int64_t, std::int64_t);                                         \
  template CorrelationSumReport<T> correlation_sum<T>(const EratosthenesTransform<T>&,                     \
                                                      const EratosthenesTransform<T>&, std::int64_t,       \
                                                      std::int64_t);                                       \
  template T delta_short_sum<T>(const EratosthenesTransform<T>&, const Weight&, std::int64_t, std::int64_t, \
                                std::int64_t);                                                             \
  template T selberg_value<T>(const EratosthenesTransform<T>&, const EratosthenesTransform<T>&,            \
                              const Weight&, std::int64_t, std::int64_t, SelbergRoute, unsigned);          \
  template SelbergResult<T> selberg_integral<T>(const EratosthenesTransform<T>&,                           \
                                                const EratosthenesTransform<T>&, const Weight&,            \
                                                std::int64_t, std::int64_t, SelbergRoute, unsigned);       \
  template ExtremalTransform<T> extremal_transform<T>(const EratosthenesTransform<T>&, std::int64_t,        \
                                                      std::int64_t, std::int64_t, const BandMode&,         \
                                                      unsigned);                                           \
  template Theorem2Report theorem2_report<T>(const EratosthenesTransform<T>&, const Weight&, std::int64_t, \
                                             std::int64_t, std::int64_t, unsigned);

SIEVEBANDS_INSTANTIATE(Rational)
SIEVEBANDS_INSTANTIATE(double)
#undef SIEVEBANDS_INSTANTIATE

}  // namespace sievebands
