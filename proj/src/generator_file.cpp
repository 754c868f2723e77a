#include "orbitcount/generator_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace orbitcount {

Rational parse_rational(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  const auto last = text.find_last_not_of(" \t");
  if (first == std::string::npos)
    throw std::invalid_argument("empty number field");
  const std::string body = text.substr(first, last - first + 1);
  try {
    const auto slash = body.find('/');
    if (slash == std::string::npos) return Rational(BigInt(body));
    const BigInt num(body.substr(0, slash));
    const BigInt den(body.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number '" + body + "'");
  }
}

GeneratorFile parse_generator_file(std::istream& in) {
  GeneratorFile out;
  std::string line;
  std::vector<std::vector<Rational>> block;
  bool header_seen = false;

  auto flush_block = [&] {
    if (block.empty()) return;
    if (block.size() != block.front().size())
      throw std::invalid_argument("generator matrix is not square");
    out.matrices.push_back(RationalMatrix::from_rows(block));
    block.clear();
  };

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) {
      flush_block();
      continue;
    }
    if (line[first] == '#') continue;
    if (!header_seen) {
      if (line.compare(first, 5, "form:") != 0)
        throw std::invalid_argument(
            "generator file must start with a 'form:' header");
      std::string value = line.substr(first + 5);
      const auto v0 = value.find_first_not_of(" \t");
      value = v0 == std::string::npos ? "" : value.substr(v0);
      while (!value.empty() && (value.back() == ' ' || value.back() == '\t'))
        value.pop_back();
      if (value == "descartes") {
        out.form = QuadraticForm::descartes();
        out.form_name = value;
      } else if (value.rfind("lorentz:", 0) == 0) {
        const int n = std::stoi(value.substr(8));
        out.form = QuadraticForm::lorentz(n);
        out.form_name = value;
      } else {
        throw std::invalid_argument("unknown form '" + value + "'");
      }
      header_seen = true;
      continue;
    }
    std::vector<Rational> row;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) row.push_back(parse_rational(item));
    if (!block.empty() && row.size() != block.front().size())
      throw std::invalid_argument("ragged generator matrix row");
    block.push_back(std::move(row));
  }
  flush_block();
  if (!header_seen) throw std::invalid_argument("missing 'form:' header");
  if (out.matrices.empty())
    throw std::invalid_argument("generator file has no matrices");
  for (const auto& m : out.matrices)
    if (m.rows() != static_cast<std::size_t>(out.form->dim()))
      throw std::invalid_argument("generator size does not match the form");
  return out;
}

GeneratorFile load_generator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open generator file " + path);
  return parse_generator_file(in);
}

}  // namespace orbitcount
