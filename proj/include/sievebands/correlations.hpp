#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sievebands/bands.hpp"
#include "sievebands/sieve.hpp"
#include "sievebands/transform.hpp"
#include "sievebands/weights.hpp"

namespace sievebands {

/// C_{f1,f2}(a) = sum over n ~ N of f1(n) f2(n - a). Requires |a| < N.
template <class T>
T correlation(const EratosthenesTransform<T>& f1, const EratosthenesTransform<T>& f2, std::int64_t big_n,
              std::int64_t a);

template <class T>
struct CorrelationSeries {
  std::int64_t big_n = 0;
  std::int64_t first_shift = 0;
  std::vector<T> values;  ///< values[i] = C(first_shift + i)

  std::int64_t last_shift() const { return first_shift + static_cast<std::int64_t>(values.size()) - 1; }
  const T& at(std::int64_t a) const;
};

/// C_{f1,f2}(a) for first <= a <= last, from one pair of sieve tables.
template <class T>
CorrelationSeries<T> correlation_series(const EratosthenesTransform<T>& f1, const EratosthenesTransform<T>& f2,
                                        std::int64_t big_n, std::int64_t first, std::int64_t last,
                                        unsigned threads = 1);

/// sum over q <= Q2 of g2(q) times the class sum of f1 over n ~ N, n = a (mod q).
/// Requires 1 <= a < N. Exactly C_{f1,f2}(a).
template <class T>
T correlation_via_bands(const EratosthenesTransform<T>& f1, const EratosthenesTransform<T>& f2,
                        std::int64_t big_n, std::int64_t a);

template <class T>
struct CorrelationSumReport {
  T sum;         ///< sum over 1 <= a <= H of C_{f1,f2}(a), from the definition
  T band_route;  ///< sum over q <= Q2 of g2(q) ((H/q) f1^(0) + T_{f1}(q, N, H))
  T main_term;   ///< R_1(f1) R_1(f2) N H
  T deviation;   ///< sum - main_term
};

/// Requires H < N.
template <class T>
CorrelationSumReport<T> correlation_sum(const EratosthenesTransform<T>& f1, const EratosthenesTransform<T>& f2,
                                        std::int64_t big_n, std::int64_t h);

/// Delta(x) = sum_n w_H(n - x) f(n) - w^_H(0) R_1(f). Requires N < x <= 2N,
/// H < N and H equal to the weight's half-width.
template <class T>
T delta_short_sum(const EratosthenesTransform<T>& f, const Weight& w, std::int64_t big_n, std::int64_t h,
                  std::int64_t x);

enum class SelbergRoute { direct, via_correlations, via_bands };

std::string_view to_string(SelbergRoute route);

template <class T>
struct SelbergResult {
  T value;
  SelbergRoute route = SelbergRoute::direct;
  T discrepancy_vs_direct;  ///< value - direct value (zero for the direct route)
};

/// Mixed weighted Selberg integral J_{w,(f1,f2)}(N, H); J_{w,f} when f1 = f2.
/// The plain J_f is the unit-step case, since the window x < n <= x + H is
/// exactly u_H(n - x).
///
///   direct            sum over x ~ N of Delta_1(x) Delta_2(x)
///   via_correlations  sum_a W_H(a) C(a) - W^(0) R_1 R_1 N
///                     - w^(0) (R_1(f1) sum Delta_2 + R_1(f2) sum Delta_1); needs 2H < N
///   via_bands         sum over q <= Q2 of g2(q) T_{W,f1}(q, N, H)
///
/// Requires H < N and H equal to the weight's half-width.
template <class T>
T selberg_value(const EratosthenesTransform<T>& f1, const EratosthenesTransform<T>& f2, const Weight& w,
                std::int64_t big_n, std::int64_t h, SelbergRoute route, unsigned threads = 1);

template <class T>
SelbergResult<T> selberg_integral(const EratosthenesTransform<T>& f1, const EratosthenesTransform<T>& f2,
                                  const Weight& w, std::int64_t big_n, std::int64_t h, SelbergRoute route,
                                  unsigned threads = 1);

/// Transform with coefficient sgn(T(q)) at each q <= Q, where T is the plain
/// or correlation band total of f.
template <class T>
struct ExtremalTransform {
  EratosthenesTransform<T> transform;
  std::vector<T> band_totals;  ///< index q - 1
  T signed_sum;                ///< sum of s(q) T(q)
  T abs_sum;                   ///< sum of |T(q)|
};

template <class T>
ExtremalTransform<T> extremal_transform(const EratosthenesTransform<T>& f, std::int64_t big_n,
                                        std::int64_t h, std::int64_t range, const BandMode& flavor,
                                        unsigned threads = 1);

struct Theorem2Quantity {
  std::string name;
  double value = 0.0;
  double trivial_bound = 0.0;
  double normalized = 0.0;  ///< value / trivial_bound
};

struct Theorem2Report {
  std::int64_t big_n = 0;
  std::int64_t range = 0;
  std::int64_t h = 0;
  /// Part I: sum|T_W|, J_{w,f}, J_{w,(f,f1)} with f1 the correlation-extremal
  /// transform; part II: sum|T_f|, J_f.
  std::vector<Theorem2Quantity> quantities;
  /// |J_{w,(f,f1)} - sum|T_W||, the linking residual for the extremal f1.
  double link_residual = 0.0;
  bool extremal_identity_holds = false;
  std::string window_warning;  ///< set when Q or H exceed N^0.9
};

template <class T>
Theorem2Report theorem2_report(const EratosthenesTransform<T>& f, const Weight& w, std::int64_t big_n,
                               std::int64_t h, std::int64_t range, unsigned threads = 1);

}  // namespace sievebands
