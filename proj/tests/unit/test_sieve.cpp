#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "sievebands/arith.hpp"
#include "sievebands/sieve.hpp"
#include "sievebands/transform.hpp"

using namespace sievebands;

namespace {

ExactTransform mu2() { return transform_moebius<Rational>(2); }

std::vector<Rational> coeffs_of(const ExactTransform& t) { return {t.coefficients().begin(), t.coefficients().end()}; }

}  // namespace

TEST_CASE("builders") {
  const auto unit = transform_unit<Rational>();
  CHECK(unit.range() == 1);
  CHECK(unit(1) == Rational(1));
  CHECK(unit(0) == Rational(0));
  CHECK(unit(2) == Rational(0));

  const auto mu = transform_moebius<double>(30);
  for (std::int64_t d = 1; d <= 30; ++d) CHECK(mu(d) == static_cast<double>(oracle::moebius(d)));

  CHECK(transform_lambda_r(1)(1) == 0.0);
  const auto l2 = transform_lambda_r(2);
  CHECK(l2(1) == doctest::Approx(std::log(2.0)));
  CHECK(l2(2) == 0.0);

  CHECK_THROWS_AS(transform_moebius<Rational>(0), std::invalid_argument);
  CHECK_THROWS_AS(transform_lambda_r(0), std::invalid_argument);
  CHECK_THROWS_AS(RealTransform({}, "empty"), std::invalid_argument);
  CHECK_THROWS_AS(RealTransform({1.0, NAN}, "nan"), std::invalid_argument);
}

TEST_CASE("lambda_R is a linear combination of two sieve transforms") {
  for (std::int64_t r : {1, 2, 10, 97, 1000}) {
    const auto lam = transform_lambda_r(r);
    const auto mu = transform_moebius<double>(r);
    const auto mu_log = transform_moebius_log(r);
    const double log_r = std::log(static_cast<double>(r));
    for (std::int64_t d = 1; d <= r; ++d) REQUIRE(std::fabs(lam(d) - (log_r * mu(d) - mu_log(d))) <= 1e-12);
  }
}

TEST_CASE("random transforms are reproducible") {
  SplitMix64 a(1), b(1);
  const auto t1 = transform_random<Rational>(25, a);
  const auto t2 = transform_random<Rational>(25, b);
  CHECK(coeffs_of(t1) == coeffs_of(t2));
  for (const auto& c : t1.coefficients()) {
    CHECK(c.is_integer());
    CHECK(c >= Rational(-3));
    CHECK(c <= Rational(3));
  }
  // First draws for seed 1, frozen.
  SplitMix64 rng(1);
  CHECK(rng.next() == 0x910A2DEC89025CC1ULL);
  CHECK(rng.next() == 0xBEEB8DA1658EEC67ULL);

  SplitMix64 c(5);
  const auto r = transform_random_real(100, c);
  for (const auto v : r.coefficients()) {
    CHECK(v >= -1.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("direct evaluation") {
  const auto unit = transform_unit<Rational>();
  for (std::int64_t n = 1; n <= 50; ++n) CHECK(eval_direct(unit, n) == Rational(1));
  const auto t = mu2();
  CHECK(eval_direct(t, 5) == Rational(1));
  CHECK(eval_direct(t, 6) == Rational(0));
  CHECK(eval_direct(t, 8) == Rational(0));
  const auto l2 = transform_lambda_r(2);
  for (std::int64_t n = 1; n <= 20; ++n) CHECK(eval_direct(l2, n) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(eval_direct(t, 0), std::invalid_argument);
}

TEST_CASE("interval sieve") {
  const auto ones = dyadic_table(transform_unit<Rational>(), 4);
  CHECK(ones.lo == 4);
  CHECK(ones.hi == 8);
  CHECK(ones.values == std::vector<Rational>(4, Rational(1)));

  const auto t = dyadic_table(mu2(), 4);
  CHECK(t.values == std::vector<Rational>{1, 0, 1, 0});
  CHECK(t.at(7) == Rational(1));
  CHECK_THROWS_AS(t.at(4), std::out_of_range);
  CHECK(t.window(5, 7).size() == 2);
  CHECK_THROWS_AS(t.window(3, 7), std::out_of_range);
  CHECK_THROWS_AS(eval_range_sieved(mu2(), 5, 5), std::invalid_argument);
}

TEST_CASE("interval sieve matches the divisor-sum oracle") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 6; ++trial) {
    const auto t = transform_random<Rational>(1 + trial * 5, rng);
    const auto g = coeffs_of(t);
    for (unsigned threads : {1u, 3u}) {
      const auto table = eval_range_sieved(t, 10000, 12000, threads);
      for (std::int64_t n = 10001; n <= 12000; ++n) REQUIRE(table.at(n) == oracle::sieve_value(g, n));
    }
  }
}

TEST_CASE("sieve table does not depend on the thread count") {
  SplitMix64 rng(3);
  const auto t = transform_random_real(40, rng);
  const auto one = eval_range_sieved(t, 50000, 100000, 1);
  const auto many = eval_range_sieved(t, 50000, 100000, 7);
  CHECK(one.values == many.values);
}

TEST_CASE("ramanujan coefficients") {
  const auto t = mu2();
  CHECK(ramanujan_coefficient(t, 1) == Rational(1, 2));
  CHECK(ramanujan_coefficient(t, 2) == Rational(-1, 2));
  CHECK(ramanujan_coefficient(t, 3) == Rational(0));
  CHECK(ramanujan_coefficient(transform_unit<Rational>(), 1) == Rational(1));
  CHECK_THROWS_AS(ramanujan_coefficient(t, 0), std::invalid_argument);

  // mu_10, frozen from an independent fraction computation.
  const auto m10 = transform_moebius<Rational>(10);
  const Rational expected[] = {{19, 210}, {-7, 30}, {-1, 6}, 0, {-1, 10}, {1, 6}, {-1, 7}, 0, 0, {1, 10}};
  for (std::int64_t l = 1; l <= 10; ++l) CHECK(ramanujan_coefficient(m10, l) == expected[l - 1]);
}

TEST_CASE("coefficient bound surrogate") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = transform_random<Rational>(1 + rng.uniform_int(0, 40), rng);
    const RamanujanExpansion<Rational> e(t);
    for (std::int64_t l = 1; l <= t.range(); ++l) {
      const double r = abs(e.coefficients()[static_cast<std::size_t>(l - 1)]).to_double();
      const double bound = t.max_abs() * (1.0 + std::log(static_cast<double>(t.range()) / static_cast<double>(l))) /
                           static_cast<double>(l);
      REQUIRE(r <= bound * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("finite ramanujan expansion is exact") {
  CHECK(eval_via_ramanujan(transform_unit<Rational>(), 17) == Rational(1));
  for (std::int64_t n = 1; n <= 40; ++n)
    CHECK(eval_via_ramanujan(mu2(), n) == Rational(n % 2 == 1 ? 1 : 0));

  SplitMix64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const auto t = transform_random<Rational>(25, rng);
    const RamanujanExpansion<Rational> e(t);
    for (std::int64_t n = 1; n <= 2000; ++n) REQUIRE(e(n) == eval_direct(t, n));
  }
}

TEST_CASE("exponential sums") {
  CHECK(exponential_sum(transform_unit<Rational>(), 100, 0, 1) == ComplexValue(100.0, 0.0));
  CHECK(exponential_sum(mu2(), 4, 0, 1) == ComplexValue(2.0, 0.0));
  const auto half = exponential_sum(mu2(), 4, 1, 2);
  CHECK(half.real() == -2.0);
  CHECK(std::fabs(half.imag()) < 1e-12);

  SplitMix64 rng(8);
  const auto t = transform_random_real(30, rng);
  const auto table = dyadic_table(t, 3000);
  for (std::int64_t l = 1; l <= 24; ++l)
    for (std::int64_t j = 0; j < l; ++j) {
      const auto plus = exponential_sum(table, j, l);
      const auto minus = exponential_sum(table, -j, l);
      REQUIRE(std::abs(plus - std::conj(minus)) <= 1e-9 * (1.0 + 3000.0 * 30.0));
      // Direct long-double oracle.
      long double re = 0, im = 0;
      const long double pi = 3.141592653589793238462643383279502884L;
      for (std::int64_t n = 3001; n <= 6000; ++n) {
        const long double ang = 2 * pi * static_cast<long double>((n * j) % l) / l;
        re += table.at(n) * std::cos(ang);
        im += table.at(n) * std::sin(ang);
      }
      REQUIRE(std::fabs(plus.real() - static_cast<double>(re)) <= 1e-9 * 3000.0);
      REQUIRE(std::fabs(plus.imag() - static_cast<double>(im)) <= 1e-9 * 3000.0);
    }
  const auto zero = exponential_sum(table, 5, 5);
  CHECK(zero.real() == doctest::Approx(table_sum<double>(table.values)).epsilon(1e-12));
}

TEST_CASE("exponential sum cache") {
  ExponentialSumCache cache(to_real(dyadic_table(mu2(), 4)));
  const std::int64_t moduli[] = {2, 3};
  cache.prepare(moduli);
  CHECK(cache.at(1, 2).real() == -2.0);
  CHECK(cache.at(-1, 2).real() == -2.0);
  CHECK_THROWS_AS(cache.at(1, 5), std::logic_error);
  CHECK_THROWS_AS(cache.at(0, 2), std::logic_error);
}

TEST_CASE("exponential sum deviation from R_l N") {
  const auto d = lemma1_deviation(transform_unit<Rational>(), 1000, 2);
  CHECK(d.deviation == 0.0);
  CHECK(d.envelope == 3.0);
  const auto m = lemma1_deviation(mu2(), 4, 2);
  CHECK(m.deviation == 0.0);
  CHECK_THROWS_AS(lemma1_deviation(mu2(), 4, 1), std::invalid_argument);

  // Deviation stays within a small multiple of Q + l along a ladder.
  for (std::int64_t big_n : {1024, 8192, 65536}) {
    const auto range = static_cast<std::int64_t>(std::round(std::cbrt(static_cast<double>(big_n))));
    const auto t = transform_moebius<double>(range);
    for (std::int64_t l : {2, 3, 5, 12}) CHECK(lemma1_deviation(t, big_n, l).ratio <= 0.25);
  }
}

TEST_CASE("mean value report") {
  for (std::int64_t big_n : {4, 100, 1001}) {
    const auto r = mean_value_report(transform_unit<Rational>(), big_n);
    CHECK(r.deviation == Rational(0));
  }
  const auto r = mean_value_report(mu2(), 4);
  CHECK(r.f_hat_0 == Rational(2));
  CHECK(r.main_term == Rational(2));
  CHECK(r.deviation == Rational(0));

  // mu_50 at N = 10^5: f^(0) = -2051 (frozen from an independent sieve).
  const auto m = mean_value_report(transform_moebius<Rational>(50), 100000);
  CHECK(m.f_hat_0 == Rational(-2051));
  CHECK(abs(m.deviation).to_double() <= 2.0 * 50);
}

TEST_CASE("transform JSON round trip") {
  const auto doc = nlohmann::json::parse(R"({"Q": 3, "coeffs": ["1/2", -1, "0.25"], "backend": "exact", "label": "x"})");
  const auto any = transform_from_json(doc);
  REQUIRE(backend_of(any) == Backend::exact);
  const auto& t = std::get<ExactTransform>(any);
  CHECK(t(1) == Rational(1, 2));
  CHECK(t(2) == Rational(-1));
  CHECK(t(3) == Rational(1, 4));
  CHECK(t.label() == "x");
  const auto again = transform_from_json(transform_to_json(any));
  CHECK(coeffs_of(std::get<ExactTransform>(again)) == coeffs_of(t));

  const auto real = transform_from_json(nlohmann::json::parse(R"({"Q": 2, "coeffs": [0.5, 1.5], "backend": "float"})"));
  CHECK(backend_of(real) == Backend::real);
  CHECK(to_real(real)(2) == 1.5);

  CHECK_THROWS(transform_from_json(nlohmann::json::parse(R"({"Q": 3, "coeffs": [1]})")));
  CHECK_THROWS(transform_from_json(nlohmann::json::parse(R"({"coeffs": [true]})")));
  CHECK_THROWS(transform_from_json(nlohmann::json::parse(R"([1, 2])")));
}
