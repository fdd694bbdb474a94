// Reference kernels in plain C++.

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

// Four interleaved lanes folded the same way as the vector kernels, so every
// ISA produces the same bits.
struct Lanes {
  Kahan lane[4];
  void add(std::size_t i, double v) { lane[i & 3].add(v); }
  Kahan fold() const {
    Kahan acc;
    for (const auto& l : lane) acc.add(l.sum);
    for (const auto& l : lane) acc.add(-l.comp);
    return acc;
  }
};

double sum_scalar(const double* values, std::size_t n) {
  const std::size_t body = n & ~std::size_t{3};
  Lanes lanes;
  for (std::size_t i = 0; i < body; ++i) lanes.add(i, values[i]);
  Kahan acc = lanes.fold();
  for (std::size_t i = body; i < n; ++i) acc.add(values[i]);
  return acc.value();
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  const std::size_t body = n & ~std::size_t{3};
  Lanes lanes;
  for (std::size_t i = 0; i < body; ++i) lanes.add(i, a[i] * b[i]);
  Kahan acc = lanes.fold();
  for (std::size_t i = body; i < n; ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

void complex_dot_scalar(const double* values, const double* re, const double* im, std::size_t n,
                        double* out_re, double* out_im) {
  const std::size_t body = n & ~std::size_t{3};
  Lanes lanes_re, lanes_im;
  for (std::size_t i = 0; i < body; ++i) {
    lanes_re.add(i, values[i] * re[i]);
    lanes_im.add(i, values[i] * im[i]);
  }
  Kahan acc_re = lanes_re.fold(), acc_im = lanes_im.fold();
  for (std::size_t i = body; i < n; ++i) {
    acc_re.add(values[i] * re[i]);
    acc_im.add(values[i] * im[i]);
  }
  *out_re = acc_re.value();
  *out_im = acc_im.value();
}

void accumulate_rows_scalar(const double* values, std::size_t n, std::size_t width, double* sums,
                            double* comp) {
  for (std::size_t base = 0; base < n; base += width) {
    const std::size_t len = n - base < width ? n - base : width;
    const double* row = values + base;
    for (std::size_t r = 0; r < len; ++r) {
      const double y = row[r] - comp[r];
      const double t = sums[r] + y;
      comp[r] = (t - sums[r]) - y;
      sums[r] = t;
    }
  }
}

}  // namespace

namespace detail {
const KernelTable scalar_table{Isa::scalar, sum_scalar, dot_scalar, complex_dot_scalar,
                               accumulate_rows_scalar};
}  // namespace detail

}  // namespace sievebands::simd
