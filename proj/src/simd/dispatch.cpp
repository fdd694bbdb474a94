#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sievebands/simd/kernels.hpp"

namespace sievebands::simd {

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(SIEVEBANDS_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa))
    throw std::runtime_error("SIMD kernels '" + std::string(to_string(isa)) + "' unavailable");
#if defined(SIEVEBANDS_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::avx2_table;
#endif
  return detail::scalar_table;
}

const KernelTable& active_kernels() {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* forced = std::getenv("SIEVEBANDS_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return detail::scalar_table;
    if (isa_available(Isa::avx2)) return kernels_for(Isa::avx2);
    return detail::scalar_table;
  }();
  return table;
}

double sum(std::span<const double> values) {
  return active_kernels().sum(values.data(), values.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  return active_kernels().dot(a.data(), b.data(), a.size());
}

ComplexValue complex_dot(std::span<const double> values, std::span<const double> re,
                         std::span<const double> im) {
  if (values.size() != re.size() || values.size() != im.size())
    throw std::invalid_argument("complex_dot: length mismatch");
  double out_re = 0.0, out_im = 0.0;
  active_kernels().complex_dot(values.data(), re.data(), im.data(), values.size(), &out_re, &out_im);
  return {out_re, out_im};
}

void column_sums(std::span<const double> values, std::size_t width, std::span<double> out) {
  if (width == 0 || out.size() != width) throw std::invalid_argument("column_sums: bad width");
  std::vector<double> comp(width, 0.0);
  std::fill(out.begin(), out.end(), 0.0);
  active_kernels().accumulate_rows(values.data(), values.size(), width, out.data(), comp.data());
  for (std::size_t r = 0; r < width; ++r) out[r] -= comp[r];
}

}  // namespace sievebands::simd
