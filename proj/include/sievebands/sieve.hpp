#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sievebands/numeric.hpp"
#include "sievebands/transform.hpp"

namespace sievebands {

/// Values f(n) for lo < n <= hi.
template <class T>
struct SieveTable {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::vector<T> values;

  std::int64_t size() const { return hi - lo; }
  bool contains(std::int64_t n) const { return n > lo && n <= hi; }
  const T& at(std::int64_t n) const;
  /// Sub-range (from, to] as a span; must lie inside the table.
  std::span<const T> window(std::int64_t from, std::int64_t to) const;
};

SieveTable<double> to_real(const SieveTable<Rational>& table);
inline const SieveTable<double>& to_real(const SieveTable<double>& table) { return table; }

/// f(n) as the divisor sum over d | n, d <= Q.
template <class T>
T eval_direct(const EratosthenesTransform<T>& t, std::int64_t n);

/// f on (lo, hi] by adding g(d) along the multiples of each d <= Q. With more
/// than one thread the interval is cut into chunks; each point still receives
/// its terms in the order d = 1, 2, ..., so the table is thread-count independent.
template <class T>
SieveTable<T> eval_range_sieved(const EratosthenesTransform<T>& t, std::int64_t lo, std::int64_t hi,
                                unsigned threads = 1);

/// f on the dyadic interval (N, 2N].
template <class T>
SieveTable<T> dyadic_table(const EratosthenesTransform<T>& t, std::int64_t big_n, unsigned threads = 1) {
  return eval_range_sieved(t, big_n, 2 * big_n, threads);
}

/// R_l(f) = sum over multiples d of l with d <= Q of g(d)/d; zero for l > Q.
template <class T>
T ramanujan_coefficient(const EratosthenesTransform<T>& t, std::int64_t l);

/// Finite Ramanujan expansion f(n) = sum_{l <= Q} R_l(f) c_l(n), with the
/// coefficients computed once.
template <class T>
class RamanujanExpansion {
 public:
  explicit RamanujanExpansion(const EratosthenesTransform<T>& t);

  T operator()(std::int64_t n) const;
  /// R_1 .. R_Q.
  std::span<const T> coefficients() const { return coeffs_; }

 private:
  std::vector<T> coeffs_;
};

template <class T>
T eval_via_ramanujan(const EratosthenesTransform<T>& t, std::int64_t n) {
  return RamanujanExpansion<T>(t)(n);
}

/// Sum of f(n) e(n j / l) over the table.
ComplexValue exponential_sum(const SieveTable<double>& table, std::int64_t j, std::int64_t l);

/// f^(j/l) over (N, 2N].
template <class T>
ComplexValue exponential_sum(const EratosthenesTransform<T>& t, std::int64_t big_n, std::int64_t j,
                             std::int64_t l);

/// f^(j/l) for every j in [0, l), evaluated by the direct exponential sum.
/// Caches one l at a time; used by the spectral band total.
class ExponentialSumCache {
 public:
  explicit ExponentialSumCache(SieveTable<double> table) : table_(std::move(table)) {}

  /// Evaluates f^(j/l) for all j in [0, l) with gcd(j, l) = 1, l in `moduli`.
  void prepare(std::span<const std::int64_t> moduli, unsigned threads = 1);
  /// f^(j/l); j is reduced mod l. The modulus must have been prepared.
  ComplexValue at(std::int64_t j, std::int64_t l) const;
  const SieveTable<double>& table() const { return table_; }

 private:
  SieveTable<double> table_;
  std::vector<std::vector<ComplexValue>> by_modulus_;  // index l, entry j
};

struct Lemma1Deviation {
  double deviation = 0.0;  ///< max over reduced j of |f^(j/l) - R_l N|
  double envelope = 0.0;   ///< Q + l
  double ratio = 0.0;
  std::int64_t argmax_j = 0;
};

/// Requires l >= 2.
template <class T>
Lemma1Deviation lemma1_deviation(const EratosthenesTransform<T>& t, std::int64_t big_n, std::int64_t l);

template <class T>
struct MeanValueReport {
  T f_hat_0;    ///< sum of f over (N, 2N]
  T main_term;  ///< R_1(f) N
  T deviation;  ///< f_hat_0 - main_term
};

template <class T>
MeanValueReport<T> mean_value_report(const EratosthenesTransform<T>& t, std::int64_t big_n);

/// Sum of the table values (compensated for doubles).
template <class T>
T table_sum(std::span<const T> values);

}  // namespace sievebands
