#include "orbitcount/powerfit.hpp"

#include <cmath>
#include <stdexcept>

namespace orbitcount {

namespace {

struct OlsResult {
  double slope, intercept, slope_stderr, r_squared;
  int n;
};

OlsResult ols(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 4) throw std::invalid_argument("fit needs at least 4 points");
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("zero variance in abscissa");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss_res += r * r;
  }
  const double stderr_slope =
      n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {slope, intercept, stderr_slope, std::min(std::max(r2, 0.0), 1.0), n};
}

}  // namespace

FitReport fit_power_law(const CountSeries& series,
                        std::optional<std::pair<double, double>> window) {
  if (series.T.size() != series.N.size())
    throw std::invalid_argument("ragged count series");
  if (series.T.empty()) throw std::invalid_argument("empty count series");
  std::pair<double, double> win =
      window.value_or(std::pair<double, double>{series.T.front() * 10.0,
                                                series.T.back()});
  std::vector<double> lt, ln;
  for (std::size_t i = 0; i < series.T.size(); ++i) {
    const double t = series.T[i];
    if (t < win.first || t > win.second || series.N[i] == 0) continue;
    lt.push_back(std::log(t));
    ln.push_back(std::log(static_cast<double>(series.N[i])));
  }
  const OlsResult r = ols(lt, ln);
  FitReport report;
  report.alpha = r.slope;
  report.c = std::exp(r.intercept);
  report.alpha_stderr = r.slope_stderr;
  report.window = win;
  report.n_points = r.n;
  report.r_squared = r.r_squared;
  return report;
}

std::vector<std::pair<double, double>> ratio_diagnostic(
    const CountSeries& series, double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("non-finite alpha");
  std::vector<std::pair<double, double>> out;
  out.reserve(series.T.size());
  for (std::size_t i = 0; i < series.T.size(); ++i)
    out.emplace_back(series.T[i], static_cast<double>(series.N[i]) /
                                      std::pow(series.T[i], alpha));
  return out;
}

double ratio_spread_last_decade(const CountSeries& series, double alpha) {
  if (series.T.empty()) throw std::invalid_argument("empty count series");
  const double lo = series.T.back() / 10.0;
  double rmin = 0.0, rmax = 0.0;
  bool any = false;
  for (auto [t, ratio] : ratio_diagnostic(series, alpha)) {
    if (t < lo || ratio <= 0.0) continue;
    if (!any) {
      rmin = rmax = ratio;
      any = true;
    } else {
      rmin = std::min(rmin, ratio);
      rmax = std::max(rmax, ratio);
    }
  }
  if (!any) throw std::invalid_argument("no positive counts in last decade");
  return rmax / rmin - 1.0;
}

FitReport fit_exponential_growth(const std::vector<double>& R,
                                 const std::vector<std::uint64_t>& counts) {
  if (R.size() != counts.size())
    throw std::invalid_argument("ragged growth sample");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < R.size(); ++i) {
    if (counts[i] == 0) continue;
    x.push_back(R[i]);
    y.push_back(std::log(static_cast<double>(counts[i])));
  }
  const OlsResult r = ols(x, y);
  FitReport report;
  report.alpha = r.slope;
  report.c = std::exp(r.intercept);
  report.alpha_stderr = r.slope_stderr;
  report.window = {x.empty() ? 0.0 : x.front(), x.empty() ? 0.0 : x.back()};
  report.n_points = r.n;
  report.r_squared = r.r_squared;
  return report;
}

}  // namespace orbitcount
