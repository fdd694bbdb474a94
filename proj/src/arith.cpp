#include "sievebands/arith.hpp"

#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sievebands {

std::string_view to_string(Backend backend) {
  return backend == Backend::exact ? "exact" : "float";
}

Backend parse_backend(std::string_view text) {
  if (text == "exact") return Backend::exact;
  if (text == "float") return Backend::real;
  throw std::invalid_argument("unknown backend '" + std::string(text) + "'");
}

ComplexValue unit_root(std::int64_t r, std::int64_t q) {
  const std::int64_t k = arith::mod_floor(r, q);
  if (k == 0) return {1.0, 0.0};
  if (2 * k == q) return {-1.0, 0.0};
  if (4 * k == q) return {0.0, 1.0};
  if (4 * k == 3 * q) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(q);
  return {std::cos(angle), std::sin(angle)};
}

namespace arith {

MoebiusTable::MoebiusTable(std::int64_t limit) : limit_(limit) {
  if (limit < 1) throw std::invalid_argument("moebius_table: limit must be >= 1");
  const auto n = static_cast<std::size_t>(limit);
  values_.assign(n + 1, 0);
  // Linear sieve.
  std::vector<std::int64_t> primes;
  std::vector<bool> composite(n + 1, false);
  values_[1] = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::int64_t>(i));
      values_[i] = -1;
    }
    for (const auto p64 : primes) {
      const auto p = static_cast<std::size_t>(p64);
      if (i * p > n) break;
      composite[i * p] = true;
      if (i % p == 0) {
        values_[i * p] = 0;
        break;
      }
      values_[i * p] = static_cast<std::int8_t>(-values_[i]);
    }
  }
}

MoebiusTable moebius_table(std::int64_t limit) { return MoebiusTable(limit); }

int moebius(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("moebius: n must be >= 1");
  int result = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

std::int64_t euler_phi(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("euler_phi: n must be >= 1");
  std::int64_t result = n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("divisors: n must be >= 1");
  std::vector<std::int64_t> small, large;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d * d != n) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::int64_t mod_floor(std::int64_t n, std::int64_t q) {
  const std::int64_t r = n % q;
  return r < 0 ? r + q : r;
}

std::int64_t ramanujan_sum(std::int64_t q, std::int64_t n) {
  if (q < 1) throw std::invalid_argument("ramanujan_sum: q must be >= 1");
  const std::int64_t g = std::gcd(q, mod_floor(n, q));  // gcd(q, 0) = q
  const std::int64_t m = q / g;
  const int mu = moebius(m);
  if (mu == 0) return 0;
  return mu * (euler_phi(q) / euler_phi(m));
}

ComplexValue ramanujan_sum_direct(std::int64_t q, std::int64_t n) {
  if (q < 1) throw std::invalid_argument("ramanujan_sum_direct: q must be >= 1");
  ComplexAccumulator acc;
  const std::int64_t r = mod_floor(n, q);
  for (std::int64_t j = 1; j <= q; ++j) {
    if (std::gcd(j, q) != 1) continue;
    acc.add(unit_root((j * r) % q, q));
  }
  return acc.value();
}

Rational indicator_divisor_expansion(std::int64_t d, std::int64_t n) {
  if (d < 1 || n < 1) throw std::invalid_argument("indicator_divisor_expansion: d, n must be >= 1");
  std::int64_t total = 0;
  for (const auto l : divisors(d)) total += ramanujan_sum(l, n);
  return Rational(static_cast<long>(total), static_cast<long>(d));
}

bool indicator_divisor_expansion_check(std::int64_t d, std::int64_t n) {
  const Rational expected(n % d == 0 ? 1 : 0);
  return indicator_divisor_expansion(d, n) == expected;
}

}  // namespace arith
}  // namespace sievebands
