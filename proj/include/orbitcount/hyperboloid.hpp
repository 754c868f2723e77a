#pragma once

#include <Eigen/Dense>

#include <memory>

#include "orbitcount/quadratic_form.hpp"

namespace orbitcount {

using FormPtr = std::shared_ptr<const QuadraticForm>;

inline constexpr double kGeomTol = 1e-9;

// Point on the base-point sheet of {Q = -1}.
class HyperboloidPoint {
 public:
  HyperboloidPoint(FormPtr form, Eigen::VectorXd coords);

  // Rescales coords onto {Q = -1}; throws if Q(coords) >= 0 or the wrong
  // sheet.  Used after group actions and flows to stop drift.
  static HyperboloidPoint project(FormPtr form, const Eigen::VectorXd& coords);

  const Eigen::VectorXd& coords() const { return coords_; }
  const FormPtr& form() const { return form_; }

 private:
  FormPtr form_;
  Eigen::VectorXd coords_;
};

// Point of the ideal boundary: a null direction up to positive scaling.
// Stored with Euclidean norm 1, direction preserved.  canonical_line()
// additionally fixes the sign (first nonzero coordinate positive), which
// identifies the two antipodal rays of one projective line.
class BoundaryRay {
 public:
  BoundaryRay(FormPtr form, const Eigen::VectorXd& direction);

  const Eigen::VectorXd& coords() const { return coords_; }
  const FormPtr& form() const { return form_; }
  Eigen::VectorXd canonical_line() const;

 private:
  FormPtr form_;
  Eigen::VectorXd coords_;
};

// Unit tangent vector: Q(dir) = 1, Q(base, dir) = 0.
class UnitTangent {
 public:
  UnitTangent(HyperboloidPoint base, Eigen::VectorXd dir);

  // Q-orthogonalizes dir against base and renormalizes both.
  static UnitTangent project(FormPtr form, const Eigen::VectorXd& base,
                             const Eigen::VectorXd& dir);

  const HyperboloidPoint& base() const { return base_; }
  const Eigen::VectorXd& dir() const { return dir_; }
  const FormPtr& form() const { return base_.form(); }

  // Endpoints of the geodesic cosh(s) base + sinh(s) dir as s -> +/-inf.
  BoundaryRay forward_ray() const;
  BoundaryRay backward_ray() const;

 private:
  HyperboloidPoint base_;
  Eigen::VectorXd dir_;
};

// arccosh(-Q(x, y)).  Throws when -Q(x,y) < 1 beyond tolerance.
double distance(const HyperboloidPoint& x, const HyperboloidPoint& y);

// log(-Q(x, xi) / -Q(y, xi)); independent of the ray representative.
// Throws when the ray is not forward-null for the sheet (Q(x, xi) >= 0).
double busemann(const BoundaryRay& xi, const HyperboloidPoint& x,
                const HyperboloidPoint& y);

// Signed offset of x from the horosphere through ref based at xi:
// busemann(xi, ref, x).  Zero iff x lies on that horosphere.
double horosphere_defect(const BoundaryRay& xi, const HyperboloidPoint& x,
                         const HyperboloidPoint& ref);

// Unit-speed geodesic through the two boundary points: base(s) tends to
// forward as s -> +inf and to backward as s -> -inf.
UnitTangent geodesic_between(const BoundaryRay& backward,
                             const BoundaryRay& forward, double s);

}  // namespace orbitcount
