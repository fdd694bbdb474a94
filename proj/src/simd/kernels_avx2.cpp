// AVX2 kernels: four-lane Kahan accumulators, folded at the end.
// Built with -mavx2; only reached after a cpuid check.

#include <immintrin.h>

#include "sievebands/simd/kernels.hpp"

namespace sievebands::simd {
namespace {

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum - comp; }
};

inline void kahan_step(__m256d& sum, __m256d& comp, __m256d v) {
  const __m256d y = _mm256_sub_pd(v, comp);
  const __m256d t = _mm256_add_pd(sum, y);
  comp = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
  sum = t;
}

inline Kahan fold(__m256d sum, __m256d comp) {
  alignas(32) double s[4], c[4];
  _mm256_store_pd(s, sum);
  _mm256_store_pd(c, comp);
  Kahan acc;
  for (int k = 0; k < 4; ++k) acc.add(s[k]);
  for (int k = 0; k < 4; ++k) acc.add(-c[k]);
  return acc;
}

double sum_avx2(const double* values, std::size_t n) {
  __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) kahan_step(s, c, _mm256_loadu_pd(values + i));
  Kahan acc = fold(s, c);
  for (; i < n; ++i) acc.add(values[i]);
  return acc.value();
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    kahan_step(s, c, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  Kahan acc = fold(s, c);
  for (; i < n; ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

void complex_dot_avx2(const double* values, const double* re, const double* im, std::size_t n,
                      double* out_re, double* out_im) {
  __m256d sr = _mm256_setzero_pd(), cr = _mm256_setzero_pd();
  __m256d si = _mm256_setzero_pd(), ci = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(values + i);
    kahan_step(sr, cr, _mm256_mul_pd(v, _mm256_loadu_pd(re + i)));
    kahan_step(si, ci, _mm256_mul_pd(v, _mm256_loadu_pd(im + i)));
  }
  Kahan acc_re = fold(sr, cr), acc_im = fold(si, ci);
  for (; i < n; ++i) {
    acc_re.add(values[i] * re[i]);
    acc_im.add(values[i] * im[i]);
  }
  *out_re = acc_re.value();
  *out_im = acc_im.value();
}

void accumulate_rows_avx2(const double* values, std::size_t n, std::size_t width, double* sums,
                          double* comp) {
  for (std::size_t base = 0; base < n; base += width) {
    const std::size_t len = n - base < width ? n - base : width;
    const double* row = values + base;
    std::size_t r = 0;
    for (; r + 4 <= len; r += 4) {
      __m256d s = _mm256_loadu_pd(sums + r);
      __m256d c = _mm256_loadu_pd(comp + r);
      kahan_step(s, c, _mm256_loadu_pd(row + r));
      _mm256_storeu_pd(sums + r, s);
      _mm256_storeu_pd(comp + r, c);
    }
    for (; r < len; ++r) {
      const double y = row[r] - comp[r];
      const double t = sums[r] + y;
      comp[r] = (t - sums[r]) - y;
      sums[r] = t;
    }
  }
}

}  // namespace

namespace detail {
const KernelTable avx2_table{Isa::avx2, sum_avx2, dot_avx2, complex_dot_avx2,
                             accumulate_rows_avx2};
}  // namespace detail

}  // namespace sievebands::simd
