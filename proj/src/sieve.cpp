#include "sievebands/sieve.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "sievebands/arith.hpp"
#include "sievebands/parallel.hpp"
#include "sievebands/simd/kernels.hpp"

namespace sievebands {

template <class T>
const T& SieveTable<T>::at(std::int64_t n) const {
  if (!contains(n)) throw std::out_of_range("SieveTable: n outside (lo, hi]");
  return values[static_cast<std::size_t>(n - lo - 1)];
}

template <class T>
std::span<const T> SieveTable<T>::window(std::int64_t from, std::int64_t to) const {
  if (from < lo || to > hi || from > to) throw std::out_of_range("SieveTable: window outside table");
  return std::span<const T>(values).subspan(static_cast<std::size_t>(from - lo),
                                            static_cast<std::size_t>(to - from));
}

template struct SieveTable<Rational>;
template struct SieveTable<double>;

SieveTable<double> to_real(const SieveTable<Rational>& table) {
  SieveTable<double> out{table.lo, table.hi, {}};
  out.values.reserve(table.values.size());
  for (const auto& v : table.values) out.values.push_back(v.to_double());
  return out;
}

template <class T>
T table_sum(std::span<const T> values) {
  if constexpr (std::is_same_v<T, double>) {
    return simd::sum(values);
  } else {
    T total{};
    for (const auto& v : values) total += v;
    return total;
  }
}

template double table_sum<double>(std::span<const double>);
template Rational table_sum<Rational>(std::span<const Rational>);

template <class T>
T eval_direct(const EratosthenesTransform<T>& t, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("eval_direct: n must be >= 1");
  T total{};
  for (const auto d : arith::divisors(n)) {
    if (d > t.range()) break;
    total += t(d);
  }
  return total;
}

template <class T>
SieveTable<T> eval_range_sieved(const EratosthenesTransform<T>& t, std::int64_t lo, std::int64_t hi,
                                unsigned threads) {
  if (lo < 0 || lo >= hi) throw std::invalid_argument("eval_range_sieved: need 0 <= lo < hi");
  SieveTable<T> table{lo, hi, std::vector<T>(static_cast<std::size_t>(hi - lo))};
  const std::int64_t length = hi - lo;
  const std::int64_t chunk = std::max<std::int64_t>(4096, (length + threads - 1) / std::max(1u, threads));
  const auto chunks = static_cast<std::size_t>((length + chunk - 1) / chunk);
  const auto coeffs = t.coefficients();
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::int64_t from = lo + static_cast<std::int64_t>(c) * chunk;  // exclusive
    const std::int64_t to = std::min(hi, from + chunk);                     // inclusive
    for (std::int64_t d = 1; d <= t.range(); ++d) {
      const T& g = coeffs[static_cast<std::size_t>(d - 1)];
      if (g == T{}) continue;
      for (std::int64_t m = (from / d + 1) * d; m <= to; m += d)
        table.values[static_cast<std::size_t>(m - lo - 1)] += g;
    }
  });
  return table;
}

template <class T>
T ramanujan_coefficient(const EratosthenesTransform<T>& t, std::int64_t l) {
  if (l < 1) throw std::invalid_argument("ramanujan_coefficient: l must be >= 1");
  Accumulator<T> acc;
  for (std::int64_t d = l; d <= t.range(); d += l) acc.add(t(d) / ScalarTraits<T>::from_int(d));
  return acc.value();
}

template <class T>
RamanujanExpansion<T>::RamanujanExpansion(const EratosthenesTransform<T>& t) {
  coeffs_.reserve(static_cast<std::size_t>(t.range()));
  for (std::int64_t l = 1; l <= t.range(); ++l) coeffs_.push_back(ramanujan_coefficient(t, l));
}

template <class T>
T RamanujanExpansion<T>::operator()(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("eval_via_ramanujan: n must be >= 1");
  Accumulator<T> acc;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const auto l = static_cast<std::int64_t>(i + 1);
    const std::int64_t c = arith::ramanujan_sum(l, n);
    if (c != 0 && coeffs_[i] != T{}) acc.add(coeffs_[i] * ScalarTraits<T>::from_int(c));
  }
  return acc.value();
}

template class RamanujanExpansion<Rational>;
template class RamanujanExpansion<double>;

namespace {

// e(n j / l) for lo < n <= hi, split into real and imaginary arrays.
void fill_twiddles(std::int64_t lo, std::int64_t hi, std::int64_t j, std::int64_t l,
                   std::vector<double>& re, std::vector<double>& im) {
  std::vector<ComplexValue> roots(static_cast<std::size_t>(l));
  for (std::int64_t r = 0; r < l; ++r) roots[static_cast<std::size_t>(r)] = unit_root(r, l);
  const std::int64_t step = arith::mod_floor(j, l);
  std::int64_t k = (arith::mod_floor(lo + 1, l) * step) % l;
  const auto len = static_cast<std::size_t>(hi - lo);
  re.resize(len);
  im.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    re[i] = roots[static_cast<std::size_t>(k)].real();
    im[i] = roots[static_cast<std::size_t>(k)].imag();
    k += step;
    if (k >= l) k -= l;
  }
}

}  // namespace

ComplexValue exponential_sum(const SieveTable<double>& table, std::int64_t j, std::int64_t l) {
  if (l < 1) throw std::invalid_argument("exponential_sum: l must be >= 1");
  std::vector<double> re, im;
  fill_twiddles(table.lo, table.hi, j, l, re, im);
  return simd::complex_dot(table.values, re, im);
}

template <class T>
ComplexValue exponential_sum(const EratosthenesTransform<T>& t, std::int64_t big_n, std::int64_t j,
                             std::int64_t l) {
  if (big_n < 1) throw std::invalid_argument("exponential_sum: N must be >= 1");
  return exponential_sum(to_real(dyadic_table(t, big_n)), j, l);
}

void ExponentialSumCache::prepare(std::span<const std::int64_t> moduli, unsigned threads) {
  std::vector<std::int64_t> todo;
  for (const auto l : moduli) {
    if (l < 1) throw std::invalid_argument("ExponentialSumCache: modulus must be >= 1");
    if (static_cast<std::size_t>(l) < by_modulus_.size() && !by_modulus_[static_cast<std::size_t>(l)].empty())
      continue;
    todo.push_back(l);
  }
  std::sort(todo.begin(), todo.end());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
  if (todo.empty()) return;
  if (by_modulus_.size() <= static_cast<std::size_t>(todo.back()))
    by_modulus_.resize(static_cast<std::size_t>(todo.back()) + 1);

  // Flatten (l, j) pairs so the work spreads evenly over threads.
  std::vector<std::pair<std::int64_t, std::int64_t>> jobs;
  for (const auto l : todo) {
    by_modulus_[static_cast<std::size_t>(l)].assign(static_cast<std::size_t>(l), ComplexValue{});
    for (std::int64_t j = 0; j < l; ++j)
      if (std::gcd(j, l) == 1) jobs.emplace_back(l, j);
  }
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const auto [l, j] = jobs[i];
    by_modulus_[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] = exponential_sum(table_, j, l);
  });
}

ComplexValue ExponentialSumCache::at(std::int64_t j, std::int64_t l) const {
  if (l < 1 || static_cast<std::size_t>(l) >= by_modulus_.size() || by_modulus_[static_cast<std::size_t>(l)].empty())
    throw std::logic_error("ExponentialSumCache: modulus not prepared");
  const std::int64_t r = arith::mod_floor(j, l);
  if (std::gcd(r, l) != 1) throw std::logic_error("ExponentialSumCache: j not a reduced residue");
  return by_modulus_[static_cast<std::size_t>(l)][static_cast<std::size_t>(r)];
}

template <class T>
Lemma1Deviation lemma1_deviation(const EratosthenesTransform<T>& t, std::int64_t big_n, std::int64_t l) {
  if (l < 2) throw std::invalid_argument("lemma1_deviation: l must be > 1 (use mean_value_report for l = 1)");
  if (big_n < 1) throw std::invalid_argument("lemma1_deviation: N must be >= 1");
  const auto table = to_real(dyadic_table(t, big_n));
  const double main = ScalarTraits<T>::to_double(ramanujan_coefficient(t, l)) * static_cast<double>(big_n);
  Lemma1Deviation out;
  for (std::int64_t j = 1; j < l; ++j) {
    if (std::gcd(j, l) != 1) continue;
    const double dev = std::abs(exponential_sum(table, j, l) - ComplexValue(main, 0.0));
    if (dev > out.deviation || out.argmax_j == 0) {
      out.deviation = dev;
      out.argmax_j = j;
    }
  }
  out.envelope = static_cast<double>(t.range() + l);
  out.ratio = out.deviation / out.envelope;
  return out;
}

template <class T>
MeanValueReport<T> mean_value_report(const EratosthenesTransform<T>& t, std::int64_t big_n) {
  if (big_n < 1) throw std::invalid_argument("mean_value_report: N must be >= 1");
  const auto table = dyadic_table(t, big_n);
  MeanValueReport<T> out{table_sum<T>(table.values),
                         ramanujan_coefficient(t, 1) * ScalarTraits<T>::from_int(big_n), T{}};
  out.deviation = out.f_hat_0 - out.main_term;
  return out;
}

#define SIEVEBANDS_INSTANTIATE(T)                                                                  \
  template T eval_direct<T>(const EratosthenesTransform<T>&, std::int64_t);                        \
  template SieveTable<T> eval_range_sieved<T>(const EratosthenesTransform<T>&, std::int64_t,       \
                                              std::int64_t, unsigned);                             \
  template T ramanujan_coefficient<T>(const EratosthenesTransform<T>&, std::int64_t);              \
  template ComplexValue exponential_sum<T>(const EratosthenesTransform<T>&, std::int64_t,          \
                                           std::int64_t, std::int64_t);                            \
  template Lemma1Deviation lemma1_deviation<T>(const EratosthenesTransform<T>&, std::int64_t,      \
                                               std::int64_t);                                      \
  template MeanValueReport<T> mean_value_report<T>(const EratosthenesTransform<T>&, std::int64_t);

SIEVEBANDS_INSTANTIATE(Rational)
SIEVEBANDS_INSTANTIATE(double)
#undef SIEVEBANDS_INSTANTIATE

}  // namespace sievebands
