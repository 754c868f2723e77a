#include "orbitcount/exact.hpp"

#include <sstream>
#include <stdexcept>

namespace orbitcount {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_rows(
    const std::vector<std::vector<Rational>>& rows) {
  if (rows.empty()) throw std::invalid_argument("empty matrix");
  RationalMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols())
      throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RationalMatrix RationalMatrix::transposed() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix shape mismatch");
  RationalMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j)
        out(i, j) += a * rhs(k, j);
    }
  return out;
}

bool RationalMatrix::operator==(const RationalMatrix& rhs) const {
  return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
}

std::optional<RationalMatrix> RationalMatrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  const std::size_t n = rows_;
  RationalMatrix a(*this);
  RationalMatrix inv = identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Rational p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      const Rational f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

bool RationalMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

bool RationalMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != Rational(i == j ? 1 : 0)) return false;
  return true;
}

RationalVector row_times_matrix(const RationalVector& v,
                                const RationalMatrix& m) {
  if (v.size() != m.rows()) throw std::invalid_argument("shape mismatch");
  RationalVector out(m.cols());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

BigIntVector row_times_matrix(const BigIntVector& v, const RationalMatrix& m) {
  RationalVector rv(v.begin(), v.end());
  RationalVector out = row_times_matrix(rv, m);
  BigIntVector res(out.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (denominator(out[j]) != 1)
      throw std::domain_error("integer row times matrix is not integral");
    res[j] = numerator(out[j]);
  }
  return res;
}

std::optional<BigInt> perfect_sqrt(const BigInt& n) {
  if (n < 0) return std::nullopt;
  BigInt r = boost::multiprecision::sqrt(n);
  if (r * r == n) return r;
  return std::nullopt;
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace orbitcount
