#pragma once

#include <Eigen/Dense>

#include <memory>
#include <utility>

#include "orbitcount/exact.hpp"

namespace orbitcount {

// A quadratic form with an exact rational Gram matrix, cached as doubles
// for the float paths.  Forms of signature (n,1) carry a distinguished
// base point on the chosen sheet of {Q = -1}; that point fixes the sheet
// for every geometric predicate downstream.
class QuadraticForm {
 public:
  // gram must be symmetric.  base_point picks the sheet ({Q = -1}); it is
  // required for the hyperbolic operations and must satisfy Q(b) = -1.
  QuadraticForm(RationalMatrix gram, Eigen::VectorXd base_point);

  // x_1^2 + ... + x_n^2 - x_{n+1}^2, base point e_{n+1}.
  static std::shared_ptr<const QuadraticForm> lorentz(int n);
  // 2*sum(x_i^2) - (sum x_i)^2 on R^4: Gram has 1 on the diagonal and -1
  // off it.  Base point (1,1,1,1)/sqrt(8).
  static std::shared_ptr<const QuadraticForm> descartes();

  int dim() const { return static_cast<int>(gram_.rows()); }
  const RationalMatrix& gram() const { return gram_; }
  const Eigen::MatrixXd& gram_d() const { return gram_d_; }
  // Inertia (#positive, #negative eigenvalues), computed exactly by
  // congruence diagonalization of the rational Gram matrix.
  std::pair<int, int> signature() const { return signature_; }
  bool is_lorentzian() const;

  const Eigen::VectorXd& base_point() const { return base_point_; }

  // Exact evaluation.
  Rational eval(const RationalVector& x) const;
  BigInt eval(const BigIntVector& x) const;
  Rational bilinear(const RationalVector& x, const RationalVector& y) const;
  BigInt bilinear(const BigIntVector& x, const BigIntVector& y) const;

  // Float evaluation.
  double eval(const Eigen::VectorXd& x) const;
  double bilinear(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

 private:
  RationalMatrix gram_;
  Eigen::MatrixXd gram_d_;
  std::pair<int, int> signature_;
  Eigen::VectorXd base_point_;
};

// Exact inertia of a symmetric rational matrix (positives, negatives).
std::pair<int, int> exact_signature(const RationalMatrix& gram);

}  // namespace orbitcount
