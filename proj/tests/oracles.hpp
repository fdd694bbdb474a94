#pragma once

// Brute-force reference implementations for tests. Deliberately naive and
// written independently of the library algorithms.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "sievebands/rational.hpp"

namespace oracle {

using sievebands::Rational;

/// mu by Moebius inversion: sum over d | n of mu(d) = [n = 1].
inline int moebius(std::int64_t n) {
  static std::map<std::int64_t, int> memo;
  if (n == 1) return 1;
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  int s = 0;
  for (std::int64_t d = 1; d < n; ++d)
    if (n % d == 0) s += moebius(d);
  memo[n] = -s;
  return -s;
}

inline std::int64_t phi(std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) ++c;
  return c;
}

/// Kluyver: c_q(n) = sum over d | gcd(q, n) of d mu(q/d).
inline std::int64_t ramanujan_sum(std::int64_t q, std::int64_t n) {
  const std::int64_t g = std::gcd(q, n < 0 ? -n : n);
  std::int64_t s = 0;
  for (std::int64_t d = 1; d <= g; ++d)
    if (g % d == 0) s += d * moebius(q / d);
  return s;
}

/// Sum of cos(2 pi j n / q) over reduced j, in long double.
inline long double ramanujan_sum_cos(std::int64_t q, std::int64_t n) {
  const long double pi = 3.141592653589793238462643383279502884L;
  long double s = 0;
  for (std::int64_t j = 1; j <= q; ++j)
    if (std::gcd(j, q) == 1) s += std::cos(2 * pi * static_cast<long double>((j * n) % q) / q);
  return s;
}

/// f(n) = sum over d <= Q with d | n of g(d); g[d - 1] = g(d).
template <class T>
T sieve_value(const std::vector<T>& g, std::int64_t n) {
  T s{};
  for (std::size_t d = 1; d <= g.size(); ++d)
    if (n % static_cast<std::int64_t>(d) == 0) s += g[d - 1];
  return s;
}

/// Balanced band total straight from the definition: loop over n and a.
/// v[i] is the coefficient of offset first + i.
template <class T>
T band_total(const std::vector<T>& g, std::int64_t big_n, std::int64_t q, std::int64_t first,
             const std::vector<T>& v) {
  T banded{}, total{}, mass{};
  for (const auto& c : v) mass += c;
  for (std::int64_t n = big_n + 1; n <= 2 * big_n; ++n) {
    const T f = sieve_value(g, n);
    total += f;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::int64_t a = first + static_cast<std::int64_t>(i);
      if (((n - a) % q + q) % q == 0) banded += v[i] * f;
    }
  }
  return banded - mass * total / T(static_cast<long>(q));
}

template <class T>
T correlation(const std::vector<T>& g1, const std::vector<T>& g2, std::int64_t big_n, std::int64_t a) {
  T s{};
  for (std::int64_t n = big_n + 1; n <= 2 * big_n; ++n) s += sieve_value(g1, n) * sieve_value(g2, n - a);
  return s;
}

template <class T>
T mean_coefficient(const std::vector<T>& g) {
  T s{};
  for (std::size_t d = 1; d <= g.size(); ++d) s += g[d - 1] / T(static_cast<long>(d));
  return s;
}

/// Sum over x ~ N of Delta_1(x) Delta_2(x); w[h + H] = w(h).
template <class T>
T selberg(const std::vector<T>& g1, const std::vector<T>& g2, const std::vector<T>& w, std::int64_t big_n) {
  const std::int64_t h = (static_cast<std::int64_t>(w.size()) - 1) / 2;
  T w0{};
  for (const auto& c : w) w0 += c;
  const T m1 = w0 * mean_coefficient(g1);
  const T m2 = w0 * mean_coefficient(g2);
  T s{};
  for (std::int64_t x = big_n + 1; x <= 2 * big_n; ++x) {
    T d1{}, d2{};
    for (std::int64_t k = -h; k <= h; ++k) {
      d1 += w[static_cast<std::size_t>(k + h)] * sieve_value(g1, x + k);
      d2 += w[static_cast<std::size_t>(k + h)] * sieve_value(g2, x + k);
    }
    s += (d1 - m1) * (d2 - m2);
  }
  return s;
}

}  // namespace oracle
