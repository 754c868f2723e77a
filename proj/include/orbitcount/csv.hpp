#pragma once

#include <iosfwd>
#include <string>

#include "orbitcount/descartes.hpp"  // CountSeries

namespace orbitcount {

// CSV schema for count series: header `T,N`, T printed with 6 significant
// digits in plain decimal, integer N, LF line endings, no trailing
// whitespace.
void write_count_series_csv(std::ostream& out, const CountSeries& series);
void write_count_series_csv(const std::string& path,
                            const CountSeries& series);

CountSeries read_count_series_csv(std::istream& in);
CountSeries read_count_series_csv(const std::string& path);

// 6-significant-digit plain decimal rendering (no exponent).
std::string format_grid_value(double t);

}  // namespace orbitcount
