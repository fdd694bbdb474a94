#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sievebands/sieve.hpp"
#include "sievebands/transform.hpp"
#include "sievebands/weights.hpp"

namespace sievebands {

/// Which balanced band total is meant:
///   plain        T_f      a = 1..H with unit coefficients
///   weighted     T_{w,f}  a = -H..H with w_H(a)
///   correlation  T_{W,f}  a = -2H..2H with W_H(a)
class BandMode {
 public:
  enum class Kind { plain, weighted, correlation };

  static BandMode plain() { return BandMode(Kind::plain, std::nullopt); }
  static BandMode weighted(const Weight& w) { return BandMode(Kind::weighted, w); }
  static BandMode correlation(const Weight& w) { return BandMode(Kind::correlation, w); }

  Kind kind() const { return kind_; }
  /// "plain", "weighted:<kind>" or "correlation:<kind>".
  std::string name() const;
  const std::optional<Weight>& weight() const { return weight_; }

  /// Band coefficients for half-width H. Weighted modes require H to match
  /// the weight's H.
  OffsetSeries offsets(std::int64_t h) const;

 private:
  BandMode(Kind kind, std::optional<Weight> w);
  Kind kind_;
  std::optional<Weight> weight_;
  OffsetSeries weighted_offsets_;
};

/// S[r] = sum of f(n) over the table with n = r (mod q), 0 <= r < q.
template <class T>
std::vector<T> residue_class_sums(const SieveTable<T>& table, std::int64_t q);

/// Balanced band total from the definition: sum_a v(a) S[a mod q] - (v^(0)/q) sum f.
/// Exact on the exact backend (weights enter at their exact binary value).
template <class T>
T band_total(const SieveTable<T>& table, const BandMode& mode, std::int64_t q, std::int64_t h);

template <class T>
T band_total(const EratosthenesTransform<T>& t, const BandMode& mode, std::int64_t big_n, std::int64_t q,
             std::int64_t h) {
  return band_total(dyadic_table(t, big_n), mode, q, h);
}

struct SpectralBandTotal {
  double value = 0.0;           ///< real part
  double imag_residual = 0.0;   ///< imaginary part left over (should vanish)
};

/// The same total via additive characters:
/// (1/q) sum over l | q, l > 1, of sum over reduced j (mod l) of f^(-j/l) v^(j/l).
/// The cache must already hold every divisor l > 1 of q.
SpectralBandTotal band_total_spectral(const ExponentialSumCache& cache, const BandMode& mode,
                                      std::int64_t q, std::int64_t h);

template <class T>
SpectralBandTotal band_total_spectral(const EratosthenesTransform<T>& t, const BandMode& mode,
                                      std::int64_t big_n, std::int64_t q, std::int64_t h);

/// Divisors l > 1 of every q in the list, deduplicated.
std::vector<std::int64_t> spectral_moduli(std::span<const std::int64_t> q_list);

template <class T>
struct ApSumReport {
  T sum;        ///< sum of f(n) over n ~ N, n = a (mod q)
  T main_term;  ///< (N/q) sum over d <= Q with (d,q) | a of g(d) (d,q) / d
  T deviation;  ///< sum - main_term
};

template <class T>
ApSumReport<T> ap_sum_with_main_term(const EratosthenesTransform<T>& t, std::int64_t big_n,
                                     std::int64_t q, std::int64_t a);

template <class T>
struct BandAggregate {
  std::vector<T> per_q;  ///< index q - 1
  T sum_abs;
};

template <class T>
BandAggregate<T> aggregate_band_totals(const EratosthenesTransform<T>& t, const BandMode& mode,
                                       std::int64_t big_n, std::int64_t q_max, std::int64_t h,
                                       unsigned threads = 1);

struct BandTotalReport {
  std::string mode;
  std::int64_t big_n = 0;
  std::int64_t range = 0;
  std::int64_t h = 0;
  std::int64_t q = 0;
  double value = 0.0;     ///< |T(q)|
  double envelope = 0.0;  ///< (N/q + q + Q) * spectral factor * (1 + log N)
  double ratio = 0.0;
};

/// Spectral factor of the envelope: 1 + log q in plain mode, otherwise the max
/// over l | q, l > 1 of L1_l of the mode's coefficients (1 when q = 1).
double envelope_factor(const BandMode& mode, std::int64_t q, std::int64_t h);

template <class T>
std::vector<BandTotalReport> theorem1_report(const EratosthenesTransform<T>& t, const BandMode& mode,
                                             std::int64_t big_n, std::int64_t h,
                                             std::span<const std::int64_t> q_list, unsigned threads = 1);

}  // namespace sievebands
