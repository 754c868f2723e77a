#include "orbitcount/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace orbitcount {

std::string format_grid_value(double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("grid values must be positive finite");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  std::string s(buf);
  const auto epos = s.find_first_of("eE");
  if (epos == std::string::npos) return s;
  // Expand scientific notation to plain decimal.
  const int exp10 = std::stoi(s.substr(epos + 1));
  std::string mant = s.substr(0, epos);
  bool neg = false;
  if (!mant.empty() && mant[0] == '-') {
    neg = true;
    mant.erase(0, 1);
  }
  auto dot = mant.find('.');
  std::string digits =
      dot == std::string::npos ? mant : mant.substr(0, dot) + mant.substr(dot + 1);
  int point = dot == std::string::npos ? static_cast<int>(mant.size())
                                       : static_cast<int>(dot);
  point += exp10;
  std::string out;
  if (point <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-point), '0') + digits;
  } else if (point >= static_cast<int>(digits.size())) {
    out = digits +
          std::string(static_cast<std::size_t>(point) - digits.size(), '0');
  } else {
    out = digits.substr(0, static_cast<std::size_t>(point)) + "." +
          digits.substr(static_cast<std::size_t>(point));
  }
  // Strip a trailing dot or redundant zeros after the decimal point.
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return neg ? "-" + out : out;
}

void write_count_series_csv(std::ostream& out, const CountSeries& series) {
  out << "T,N\n";
  for (std::size_t i = 0; i < series.T.size(); ++i)
    out << format_grid_value(series.T[i]) << "," << series.N[i] << "\n";
}

void write_count_series_csv(const std::string& path,
                            const CountSeries& series) {
  std::ofstream out(path, std::ios::binary);  // binary: keep LF endings
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_count_series_csv(out, series);
}

CountSeries read_count_series_csv(std::istream& in) {
  CountSeries series;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "T,N") throw std::invalid_argument("expected header 'T,N'");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("missing comma on line " +
                                  std::to_string(lineno));
    try {
      series.T.push_back(std::stod(line.substr(0, comma)));
      series.N.push_back(std::stoull(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad CSV row on line " +
                                  std::to_string(lineno));
    }
  }
  if (series.T.empty()) throw std::invalid_argument("CSV has no data rows");
  return series;
}

CountSeries read_count_series_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_count_series_csv(in);
}

}  // namespace orbitcount
