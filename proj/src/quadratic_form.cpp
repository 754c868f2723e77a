#include "orbitcount/quadratic_form.hpp"

#include <cmath>
#include <stdexcept>

namespace orbitcount {

namespace {

constexpr double kBaseTol = 1e-9;

template <typename Scalar>
Scalar bilinear_exact(const RationalMatrix& gram, const std::vector<Scalar>& x,
                      const std::vector<Scalar>& y) {
  if (x.size() != gram.rows() || y.size() != gram.rows())
    throw std::invalid_argument("vector dimension does not match the form");
  Scalar acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] == 0) continue;
      const Rational& g = gram(i, j);
      if (g == 0) continue;
      if (denominator(g) == 1) {
        acc += x[i] * Scalar(numerator(g)) * y[j];
      } else if constexpr (std::is_same_v<Scalar, Rational>) {
        acc += x[i] * g * y[j];
      } else {
        throw std::domain_error(
            "integer evaluation against a non-integer Gram matrix");
      }
    }
  }
  return acc;
}

}  // namespace

std::pair<int, int> exact_signature(const RationalMatrix& gram) {
  if (!gram.is_symmetric())
    throw std::invalid_argument("Gram matrix must be symmetric");
  // Lagrange congruence reduction: diagonalize A -> D by simultaneous
  // row/column operations; inertia is read off the diagonal of D.
  RationalMatrix a(gram);
  const std::size_t n = a.rows();
  int pos = 0, neg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      // Find a usable pivot: bring a nonzero diagonal down, or split a
      // hyperbolic pair a(k,j) != 0 via the substitution row_k += row_j.
      std::size_t j = k + 1;
      while (j < n && a(j, j) == 0) ++j;
      if (j < n) {
        for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(j, c));
        for (std::size_t r = 0; r < n; ++r) std::swap(a(r, k), a(r, j));
      } else {
        j = k + 1;
        while (j < n && a(k, j) == 0) ++j;
        if (j == n) continue;  // zero row: degenerate direction
        for (std::size_t c = 0; c < n; ++c) a(k, c) += a(j, c);
        for (std::size_t r = 0; r < n; ++r) a(r, k) += a(r, j);
      }
    }
    const Rational pivot = a(k, k);
    if (pivot > 0)
      ++pos;
    else
      ++neg;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      const Rational f = a(i, k) / pivot;
      for (std::size_t c = 0; c < n; ++c) a(i, c) -= f * a(k, c);
      for (std::size_t r = 0; r < n; ++r) a(r, i) -= f * a(r, k);
    }
  }
  return {pos, neg};
}

QuadraticForm::QuadraticForm(RationalMatrix gram, Eigen::VectorXd base_point)
    : gram_(std::move(gram)), base_point_(std::move(base_point)) {
  if (!gram_.is_symmetric())
    throw std::invalid_argument("Gram matrix must be symmetric");
  signature_ = exact_signature(gram_);
  gram_d_.resize(static_cast<long>(gram_.rows()), static_cast<long>(gram_.cols()));
  for (std::size_t i = 0; i < gram_.rows(); ++i)
    for (std::size_t j = 0; j < gram_.cols(); ++j)
      gram_d_(static_cast<long>(i), static_cast<long>(j)) =
          static_cast<double>(gram_(i, j));
  if (base_point_.size() != gram_d_.rows())
    throw std::invalid_argument("base point dimension mismatch");
  if (std::abs(eval(base_point_) + 1.0) > kBaseTol)
    throw std::invalid_argument("base point must satisfy Q(b) = -1");
}

std::shared_ptr<const QuadraticForm> QuadraticForm::lorentz(int n) {
  if (n < 1) throw std::invalid_argument("lorentz form needs n >= 1");
  RationalMatrix g(n + 1, n + 1);
  for (int i = 0; i < n; ++i) g(i, i) = 1;
  g(n, n) = -1;
  Eigen::VectorXd base = Eigen::VectorXd::Zero(n + 1);
  base(n) = 1.0;
  return std::make_shared<const QuadraticForm>(std::move(g), std::move(base));
}

std::shared_ptr<const QuadraticForm> QuadraticForm::descartes() {
  RationalMatrix g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = (i == j) ? 1 : -1;
  Eigen::VectorXd base = Eigen::VectorXd::Constant(4, 1.0 / std::sqrt(8.0));
  return std::make_shared<const QuadraticForm>(std::move(g), std::move(base));
}

bool QuadraticForm::is_lorentzian() const {
  return signature_.first == dim() - 1 && signature_.second == 1;
}

Rational QuadraticForm::eval(const RationalVector& x) const {
  return bilinear_exact<Rational>(gram_, x, x);
}

BigInt QuadraticForm::eval(const BigIntVector& x) const {
  return bilinear_exact<BigInt>(gram_, x, x);
}

Rational QuadraticForm::bilinear(const RationalVector& x,
                                 const RationalVector& y) const {
  return bilinear_exact<Rational>(gram_, x, y);
}

BigInt QuadraticForm::bilinear(const BigIntVector& x,
                               const BigIntVector& y) const {
  return bilinear_exact<BigInt>(gram_, x, y);
}

double QuadraticForm::eval(const Eigen::VectorXd& x) const {
  if (x.size() != gram_d_.rows())
    throw std::invalid_argument("vector dimension does not match the form");
  return x.dot(gram_d_ * x);
}

double QuadraticForm::bilinear(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y) const {
  if (x.size() != gram_d_.rows() || y.size() != gram_d_.rows())
    throw std::invalid_argument("vector dimension does not match the form");
  return x.dot(gram_d_ * y);
}

}  // namespace orbitcount
