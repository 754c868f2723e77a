#pragma once

#include <iosfwd>
#include <string>

#include "orbitcount/orbit.hpp"

namespace orbitcount {

// Plain-text generator files: a header line `form: descartes` or
// `form: lorentz:<n>`, then one matrix per block, rows as comma-separated
// integers or rationals (`5/3`), blocks separated by blank lines.  Lines
// starting with '#' are comments.
struct GeneratorFile {
  FormPtr form;
  std::string form_name;  // "descartes" or "lorentz:<n>"
  std::vector<RationalMatrix> matrices;
};

GeneratorFile parse_generator_file(std::istream& in);
GeneratorFile load_generator_file(const std::string& path);

Rational parse_rational(const std::string& text);

}  // namespace orbitcount
