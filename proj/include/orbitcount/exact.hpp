#pragma once

// Exact arithmetic used throughout: arbitrary-precision integers for
// curvatures and orbit vectors, rationals for Gram matrices and group
// generators.  Small hand-rolled matrix/vector helpers on top; heavy
// float linear algebra lives in Eigen.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace orbitcount {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using RationalVector = std::vector<Rational>;
using BigIntVector = std::vector<BigInt>;

// Dense row-major exact-rational matrix. Sized at construction.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_rows(
      const std::vector<std::vector<Rational>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  RationalMatrix transposed() const;
  RationalMatrix operator*(const RationalMatrix& rhs) const;
  bool operator==(const RationalMatrix& rhs) const;
  bool operator!=(const RationalMatrix& rhs) const { return !(*this == rhs); }

  // Gauss-Jordan; empty optional when singular.
  std::optional<RationalMatrix> inverse() const;

  bool is_symmetric() const;
  bool is_identity() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

RationalVector row_times_matrix(const RationalVector& v,
                                const RationalMatrix& m);
BigIntVector row_times_matrix(const BigIntVector& v, const RationalMatrix& m);

// Integer square root of a perfect square; empty otherwise. n >= 0.
std::optional<BigInt> perfect_sqrt(const BigInt& n);

std::string to_string(const Rational& r);

}  // namespace orbitcount
