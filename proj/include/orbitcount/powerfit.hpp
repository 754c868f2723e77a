#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "orbitcount/descartes.hpp"  // CountSeries

namespace orbitcount {

struct FitReport {
  double alpha = 0.0;  // fitted exponent (slope)
  double c = 0.0;      // fitted front constant
  double alpha_stderr = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  int n_points = 0;
  double r_squared = 0.0;
};

// Ordinary least squares of log N against log T over the window.  The
// default window drops the first decade of T, where the additive offset
// of the count and small-T irregularity dominate.  Needs at least four
// points with N > 0 inside the window.
FitReport fit_power_law(
    const CountSeries& series,
    std::optional<std::pair<double, double>> window = std::nullopt);

// Compensated ratios (T, N(T) / T^alpha).
std::vector<std::pair<double, double>> ratio_diagnostic(
    const CountSeries& series, double alpha);

// max/min - 1 of the compensated ratio over the last decade of T.
double ratio_spread_last_decade(const CountSeries& series, double alpha);

// OLS of log(count) against R for exponential growth count ~ c e^{delta R}.
// Reported in the same structure with alpha := delta.
FitReport fit_exponential_growth(const std::vector<double>& R,
                                 const std::vector<std::uint64_t>& counts);

}  // namespace orbitcount
