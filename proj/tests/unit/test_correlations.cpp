#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "sievebands/correlations.hpp"

using namespace sievebands;

namespace {

template <class T>
std::vector<T> coeffs(const EratosthenesTransform<T>& t) {
  return {t.coefficients().begin(), t.coefficients().end()};
}

std::vector<Rational> exact_table(const Weight& w) {
  std::vector<Rational> out;
  for (const auto v : w.table()) out.push_back(Rational::from_double(v));
  return out;
}

}  // namespace

TEST_CASE("frozen correlation") {
  // mu_30 against itself, N = 1000, a = 6: 23 (independent fraction computation).
  const auto mu = transform_moebius<Rational>(30);
  CHECK(correlation(mu, mu, 1000, 6) == Rational(23));
}

TEST_CASE("correlation of f == 1 counts the interval") {
  const auto one = transform_unit<Rational>();
  for (const std::int64_t a : {-5, 0, 3, 99}) CHECK(correlation(one, one, 100, a) == Rational(100));
  CHECK_THROWS_AS(correlation(one, one, 100, 100), std::invalid_argument);
}

TEST_CASE("correlation against the oracle and the band route") {
  SplitMix64 rng(40);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f1 = transform_random<Rational>(6 + 4 * trial, rng);
    const auto f2 = transform_random<Rational>(9 + 2 * trial, rng);
    const auto series = correlation_series(f1, f2, 200, -10, 30, 2);
    CHECK(series.first_shift == -10);
    CHECK(series.last_shift() == 30);
    for (std::int64_t a = -10; a <= 30; ++a) {
      const auto ref = oracle::correlation(coeffs(f1), coeffs(f2), 200, a);
      REQUIRE(series.at(a) == ref);
      REQUIRE(correlation(f1, f2, 200, a) == ref);
      if (a >= 1) REQUIRE(correlation_via_bands(f1, f2, 200, a) == ref);
    }
  }
}

TEST_CASE("correlation series is thread-count independent") {
  SplitMix64 rng(41);
  const auto f1 = transform_random_real(40, rng);
  const auto f2 = transform_random_real(25, rng);
  const auto one = correlation_series(f1, f2, 5000, -64, 64, 1);
  const auto many = correlation_series(f1, f2, 5000, -64, 64, 7);
  CHECK(one.values == many.values);
}

TEST_CASE("correlation sum routes agree exactly") {
  SplitMix64 rng(7);
  for (const std::int64_t h : {1, 10, 50}) {
    const auto f1 = transform_random<Rational>(30, rng);
    const auto f2 = transform_random<Rational>(30, rng);
    const auto r = correlation_sum(f1, f2, 500, h);
    CHECK(r.sum == r.band_route);
    CHECK(r.deviation == r.sum - r.main_term);
    const auto m = ramanujan_coefficient(f1, 1) * ramanujan_coefficient(f2, 1) * Rational(500 * h);
    CHECK(r.main_term == m);
  }
  const auto one = transform_unit<Rational>();
  const auto r = correlation_sum(one, one, 100, 7);
  CHECK(r.sum == Rational(700));
  CHECK(r.deviation == Rational(0));
}

TEST_CASE("delta short sum") {
  const auto one = transform_unit<Rational>();
  for (const auto kind : {WeightKind::unit_step, WeightKind::sign, WeightKind::cesaro}) {
    const auto w = Weight::make(kind, 5);
    for (std::int64_t x = 101; x <= 200; x += 17) CHECK(delta_short_sum(one, w, 100, 5, x) == Rational(0));
  }
  const auto w = Weight::make(WeightKind::unit_step, 3);
  CHECK_THROWS_AS(delta_short_sum(one, w, 100, 3, 100), std::invalid_argument);
  CHECK_THROWS_AS(delta_short_sum(one, w, 100, 4, 150), std::invalid_argument);
}

TEST_CASE("selberg routes against their formulas") {
  // H = 4 keeps every built-in weight dyadic, so W_H is exact in binary.
  const std::int64_t h = 4, big_n = 60;
  SplitMix64 rng(50);
  for (const auto kind : {WeightKind::unit_step, WeightKind::sign, WeightKind::cesaro}) {
    CAPTURE(to_string(kind));
    const auto w = Weight::make(kind, h);
    const auto wt = exact_table(w);
    const auto f1 = transform_random<Rational>(12, rng);
    const auto f2 = transform_random<Rational>(8, rng);
    const auto g1 = coeffs(f1);
    const auto g2 = coeffs(f2);

    const auto direct = selberg_integral(f1, f2, w, big_n, h, SelbergRoute::direct);
    CHECK(direct.value == oracle::selberg(g1, g2, wt, big_n));
    CHECK(direct.discrepancy_vs_direct == Rational(0));

    std::vector<Rational> big_w;
    Rational w0, big_w0;
    for (const auto& c : wt) w0 += c;
    for (std::int64_t a = -2 * h; a <= 2 * h; ++a) {
      Rational s;
      for (std::int64_t k = -h; k <= h; ++k)
        if (k - a >= -h && k - a <= h) s += wt[static_cast<std::size_t>(k + h)] * wt[static_cast<std::size_t>(k - a + h)];
      big_w.push_back(s);
      big_w0 += s;
    }
    const auto r1 = oracle::mean_coefficient(g1);
    const auto r2 = oracle::mean_coefficient(g2);
    auto delta_sum = [&](const std::vector<Rational>& g, const Rational& r) {
      Rational s;
      for (std::int64_t x = big_n + 1; x <= 2 * big_n; ++x) {
        for (std::int64_t k = -h; k <= h; ++k) s += wt[static_cast<std::size_t>(k + h)] * oracle::sieve_value(g, x + k);
        s -= w0 * r;
      }
      return s;
    };
    Rational corr_route;
    for (std::int64_t a = -2 * h; a <= 2 * h; ++a)
      corr_route += big_w[static_cast<std::size_t>(a + 2 * h)] * oracle::correlation(g1, g2, big_n, a);
    corr_route -= big_w0 * r1 * r2 * Rational(big_n) + w0 * (r1 * delta_sum(g2, r2) + r2 * delta_sum(g1, r1));
    Rational band_route;
    for (std::int64_t q = 1; q <= f2.range(); ++q)
      band_route += g2[static_cast<std::size_t>(q - 1)] * oracle::band_total(g1, big_n, q, -2 * h, big_w);

    const auto via_corr = selberg_integral(f1, f2, w, big_n, h, SelbergRoute::via_correlations);
    const auto via_bands = selberg_integral(f1, f2, w, big_n, h, SelbergRoute::via_bands);
    CHECK(via_corr.value == corr_route);
    CHECK(via_bands.value == band_route);
    CHECK(via_corr.discrepancy_vs_direct == corr_route - direct.value);
    CHECK(via_bands.discrepancy_vs_direct == band_route - direct.value);
    CHECK(selberg_value(f1, f1, w, big_n, h, SelbergRoute::direct) >= Rational(0));
  }
}

TEST_CASE("selberg route discrepancies stay inside their envelopes") {
  SplitMix64 rng(52);
  const double log_sq = std::pow(1.0 + std::log(4096.0), 2);
  for (const auto kind : {WeightKind::unit_step, WeightKind::sign, WeightKind::cesaro}) {
    for (const std::int64_t h : {8, 32}) {
      const auto f = transform_random<Rational>(16, rng);
      const auto w = Weight::make(kind, h);
      const auto corr = selberg_integral(f, f, w, 4096, h, SelbergRoute::via_correlations);
      const auto bands = selberg_integral(f, f, w, 4096, h, SelbergRoute::via_bands);
      const double hh = static_cast<double>(h);
      CHECK(std::fabs(corr.discrepancy_vs_direct.to_double()) <= 10.0 * hh * hh * hh * log_sq);
      CHECK(std::fabs(bands.discrepancy_vs_direct.to_double()) <= 10.0 * hh * hh * (16 + hh) * log_sq);
    }
  }
}

TEST_CASE("selberg in floating point") {
  SplitMix64 rng(51);
  const auto f = transform_random_real(20, rng);
  const auto w = Weight::make(WeightKind::cesaro, 16);
  const double direct = selberg_value(f, f, w, 2000, 16, SelbergRoute::direct);
  const double bands = selberg_value(f, f, w, 2000, 16, SelbergRoute::via_bands);
  const double corr = selberg_value(f, f, w, 2000, 16, SelbergRoute::via_correlations, 3);
  CHECK(direct >= 0.0);
  const double log_sq = std::pow(1.0 + std::log(2000.0), 2);
  CHECK(std::fabs(bands - direct) <= 16.0 * 16.0 * (20 + 16) * log_sq);
  CHECK(std::fabs(corr - direct) <= 16.0 * 16.0 * 16.0 * log_sq);
  const auto exact = transform_moebius<Rational>(20);
  const auto wd = Weight::make(WeightKind::sign, 16);
  CHECK(std::fabs(selberg_value(exact, exact, wd, 2000, 16, SelbergRoute::via_bands).to_double() -
                  selberg_value(exact.to_real(), exact.to_real(), wd, 2000, 16, SelbergRoute::via_bands)) <= 1e-6);
  CHECK_THROWS_AS(selberg_value(f, f, w, 30, 16, SelbergRoute::via_correlations), std::invalid_argument);
  CHECK_THROWS_AS(selberg_value(f, f, w, 2000, 15, SelbergRoute::direct), std::invalid_argument);
}

TEST_CASE("route names") {
  CHECK(to_string(SelbergRoute::direct) == "direct");
  CHECK(to_string(SelbergRoute::via_correlations) == "via_correlations");
  CHECK(to_string(SelbergRoute::via_bands) == "via_bands");
}

TEST_CASE("extremal transforms") {
  const auto mu = transform_moebius<Rational>(8);
  const auto w = Weight::make(WeightKind::sign, 4);
  for (const auto& flavor : {BandMode::plain(), BandMode::correlation(w)}) {
    const auto ex = extremal_transform(mu, 300, 4, 12, flavor);
    REQUIRE(ex.band_totals.size() == 12);
    CHECK(ex.signed_sum == ex.abs_sum);
    Rational s;
    for (std::int64_t q = 1; q <= 12; ++q) {
      const auto& tq = ex.band_totals[static_cast<std::size_t>(q - 1)];
      CHECK(tq == band_total(mu, flavor, 300, q, 4));
      s += abs(tq);
      const auto c = ex.transform(q);
      CHECK(c == Rational(tq.sign()));
    }
    CHECK(s == ex.abs_sum);
  }
}

TEST_CASE("linking identity for the extremal transform") {
  // J_{w,(f, f1)} with f1 the correlation extremal equals sum |T_W|.
  const auto mu = transform_moebius<Rational>(10);
  const auto w = Weight::make(WeightKind::sign, 5);
  const auto ex = extremal_transform(mu, 400, 5, 10, BandMode::correlation(w));
  const auto j = selberg_value(mu, ex.transform, w, 400, 5, SelbergRoute::via_bands);
  CHECK(j == ex.abs_sum);
}

TEST_CASE("gain report") {
  const auto mu = transform_moebius<double>(8);
  const auto w = Weight::make(WeightKind::cesaro, 16);
  const auto rep = theorem2_report(mu, w, 1024, 16, 8, 2);
  CHECK(rep.extremal_identity_holds);
  CHECK(rep.window_warning.empty());
  CHECK(rep.quantities.size() == 5);
  for (const auto& q : rep.quantities) {
    CHECK(q.value >= -1e-9 * q.trivial_bound);
    CHECK(q.trivial_bound > 0.0);
    CHECK(q.normalized == doctest::Approx(q.value / q.trivial_bound));
  }
  const double env = 16.0 * 16.0 * (8 + 16) * std::pow(1.0 + std::log(1024.0), 2);
  CHECK(rep.link_residual <= 10.0 * env);
  const auto wide = theorem2_report(mu, Weight::make(WeightKind::cesaro, 8), 100, 8, 90);
  CHECK_FALSE(wide.window_warning.empty());
}
