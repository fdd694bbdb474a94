#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sievebands {

/// Least-squares line through (log size, log error).
struct ScalingReport {
  std::vector<std::pair<double, double>> points;  ///< (log size, log error), fitted points only
  std::size_t excluded = 0;                       ///< points with a zero or negative coordinate
  bool degenerate = true;                         ///< fewer than two distinct abscissae
  double fitted_exponent = 0.0;                   ///< slope; NaN when degenerate
  double fitted_constant = 0.0;                   ///< exp(intercept); NaN when degenerate
  double residual = 0.0;                          ///< RMS of the log residuals
};

/// Fits error ~ C size^k. Non-positive points are recorded in `excluded` and
/// left out of the fit.
ScalingReport fit_power_law(std::span<const std::pair<double, double>> points);

/// "NA" for NaN, otherwise the 17-significant-digit form.
std::string format_exponent(double value);

}  // namespace sievebands
