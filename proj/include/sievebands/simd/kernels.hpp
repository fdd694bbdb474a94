#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "sievebands/numeric.hpp"

/// Data-parallel inner loops. Each kernel has a scalar reference version and,
/// where the CPU allows, a vectorized one; the active set is picked once at
/// first use. All accumulations are Kahan-compensated.
namespace sievebands::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  /// Compensated sum of values[0..n).
  double (*sum)(const double* values, std::size_t n);
  /// Compensated sum of a[i] * b[i].
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// Compensated sum of values[i] * (re[i] + i im[i]).
  void (*complex_dot)(const double* values, const double* re, const double* im, std::size_t n,
                      double* out_re, double* out_im);
  /// sums[r] (+ comp[r]) accumulates values[k * width + r] for every k; a trailing
  /// partial row is accumulated into the leading columns. Column-wise Kahan, so
  /// every implementation performs the same per-column operation sequence.
  void (*accumulate_rows)(const double* values, std::size_t n, std::size_t width, double* sums,
                          double* comp);
};

bool isa_available(Isa isa);

/// Kernel table for a specific ISA; throws if the ISA is unavailable.
const KernelTable& kernels_for(Isa isa);

/// The runtime-selected table: the widest available ISA unless the
/// SIEVEBANDS_SIMD environment variable is set to "scalar".
const KernelTable& active_kernels();

// span front ends over the active table

double sum(std::span<const double> values);
double dot(std::span<const double> a, std::span<const double> b);
ComplexValue complex_dot(std::span<const double> values, std::span<const double> re,
                         std::span<const double> im);
/// Residue-class style column sums: out[r] = sum_k values[k * width + r].
void column_sums(std::span<const double> values, std::size_t width, std::span<double> out);

namespace detail {
extern const KernelTable scalar_table;
#if defined(SIEVEBANDS_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace sievebands::simd
