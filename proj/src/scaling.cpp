#include "sievebands/scaling.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "sievebands/csv.hpp"

namespace sievebands {

ScalingReport fit_power_law(std::span<const std::pair<double, double>> points) {
  ScalingReport report;
  std::set<double> abscissae;
  for (const auto& [size, error] : points) {
    if (!(size > 0.0) || !(error > 0.0)) {
      ++report.excluded;
      continue;
    }
    report.points.emplace_back(std::log(size), std::log(error));
    abscissae.insert(report.points.back().first);
  }
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (abscissae.size() < 2) {
    report.fitted_exponent = nan;
    report.fitted_constant = nan;
    report.residual = nan;
    return report;
  }
  const double n = static_cast<double>(report.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : report.points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : report.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  report.degenerate = false;
  report.fitted_exponent = sxy / sxx;
  const double intercept = my - report.fitted_exponent * mx;
  report.fitted_constant = std::exp(intercept);
  double ss = 0.0;
  for (const auto& [x, y] : report.points) {
    const double r = y - (intercept + report.fitted_exponent * x);
    ss += r * r;
  }
  report.residual = std::sqrt(ss / n);
  return report;
}

std::string format_exponent(double value) { return std::isnan(value) ? "NA" : format_double(value); }

}  // namespace sievebands
