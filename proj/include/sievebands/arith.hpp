#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sievebands/numeric.hpp"
#include "sievebands/rational.hpp"

/// Exact number-theoretic primitives.
namespace sievebands::arith {

/// mu(1..limit). values()[n] is mu(n); index 0 is unused and holds 0.
class MoebiusTable {
 public:
  explicit MoebiusTable(std::int64_t limit);

  std::int64_t limit() const { return limit_; }
  int operator()(std::int64_t n) const { return values_.at(static_cast<std::size_t>(n)); }
  std::span<const std::int8_t> values() const { return values_; }

 private:
  std::int64_t limit_;
  std::vector<std::int8_t> values_;
};

MoebiusTable moebius_table(std::int64_t limit);

/// mu(n) by trial division.
int moebius(std::int64_t n);

std::int64_t euler_phi(std::int64_t n);

/// Positive divisors of n in ascending order.
std::vector<std::int64_t> divisors(std::int64_t n);

/// Least non-negative residue of n mod q (q >= 1).
std::int64_t mod_floor(std::int64_t n, std::int64_t q);

/// c_q(n) by the von Sterneck closed form mu(q/g) phi(q)/phi(q/g), g = gcd(q, n mod q).
std::int64_t ramanujan_sum(std::int64_t q, std::int64_t n);

/// c_q(n) as the literal sum of e_q(jn) over reduced residues j. Test oracle only.
ComplexValue ramanujan_sum_direct(std::int64_t q, std::int64_t n);

/// (1/d) sum_{l | d} c_l(n) in exact arithmetic.
Rational indicator_divisor_expansion(std::int64_t d, std::int64_t n);

/// True iff the expansion above equals [d | n].
bool indicator_divisor_expansion_check(std::int64_t d, std::int64_t n);

}  // namespace sievebands::arith
