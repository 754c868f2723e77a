#include "orbitcount/hyperboloid.hpp"

#include <cmath>
#include <stdexcept>

namespace orbitcount {

namespace {

void check_form(const FormPtr& form) {
  if (!form) throw std::invalid_argument("null form");
  if (!form->is_lorentzian())
    throw std::invalid_argument("hyperboloid operations need signature (n,1)");
}

}  // namespace

HyperboloidPoint::HyperboloidPoint(FormPtr form, Eigen::VectorXd coords)
    : form_(std::move(form)), coords_(std::move(coords)) {
  check_form(form_);
  const double q = form_->eval(coords_);
  if (std::abs(q + 1.0) > kGeomTol)
    throw std::invalid_argument("point is not on {Q = -1}");
  if (form_->bilinear(coords_, form_->base_point()) >= 0.0)
    throw std::invalid_argument("point is on the wrong sheet");
}

HyperboloidPoint HyperboloidPoint::project(FormPtr form,
                                           const Eigen::VectorXd& coords) {
  check_form(form);
  const double q = form->eval(coords);
  if (q >= 0.0)
    throw std::invalid_argument("cannot project a non-timelike vector");
  return HyperboloidPoint(form, coords / std::sqrt(-q));
}

BoundaryRay::BoundaryRay(FormPtr form, const Eigen::VectorXd& direction)
    : form_(std::move(form)) {
  check_form(form_);
  const double norm = direction.norm();
  if (norm == 0.0) throw std::invalid_argument("zero boundary direction");
  coords_ = direction / norm;
  if (std::abs(form_->eval(coords_)) > kGeomTol)
    throw std::invalid_argument("boundary direction is not null");
}

Eigen::VectorXd BoundaryRay::canonical_line() const {
  for (long i = 0; i < coords_.size(); ++i) {
    if (coords_(i) > 0) return coords_;
    if (coords_(i) < 0) return -coords_;
  }
  return coords_;
}

UnitTangent::UnitTangent(HyperboloidPoint base, Eigen::VectorXd dir)
    : base_(std::move(base)), dir_(std::move(dir)) {
  const auto& f = *base_.form();
  if (std::abs(f.eval(dir_) - 1.0) > kGeomTol)
    throw std::invalid_argument("tangent direction is not unit");
  if (std::abs(f.bilinear(base_.coords(), dir_)) > kGeomTol)
    throw std::invalid_argument("direction is not tangent to the hyperboloid");
}

UnitTangent UnitTangent::project(FormPtr form, const Eigen::VectorXd& base,
                                 const Eigen::VectorXd& dir) {
  HyperboloidPoint p = HyperboloidPoint::project(form, base);
  // Q(b, d + Q(b,d) b) = Q(b,d) + Q(b,d) Q(b,b) = 0 since Q(b,b) = -1.
  Eigen::VectorXd d = dir + form->bilinear(p.coords(), dir) * p.coords();
  const double q = form->eval(d);
  if (q <= 0.0)
    throw std::invalid_argument("cannot project a non-spacelike direction");
  return UnitTangent(std::move(p), d / std::sqrt(q));
}

BoundaryRay UnitTangent::forward_ray() const {
  return BoundaryRay(form(), base_.coords() + dir_);
}

BoundaryRay UnitTangent::backward_ray() const {
  return BoundaryRay(form(), base_.coords() - dir_);
}

double distance(const HyperboloidPoint& x, const HyperboloidPoint& y) {
  if (x.form() != y.form())
    throw std::invalid_argument("points live on different forms");
  double c = -x.form()->bilinear(x.coords(), y.coords());
  if (c < 1.0 - kGeomTol)
    throw std::domain_error("cosh d < 1: invalid point pair");
  if (c < 1.0) c = 1.0;
  return std::acosh(c);
}

double busemann(const BoundaryRay& xi, const HyperboloidPoint& x,
                const HyperboloidPoint& y) {
  if (xi.form() != x.form() || xi.form() != y.form())
    throw std::invalid_argument("mixed forms in busemann");
  const auto& f = *xi.form();
  const double qx = f.bilinear(x.coords(), xi.coords());
  const double qy = f.bilinear(y.coords(), xi.coords());
  if (qx >= 0.0 || qy >= 0.0)
    throw std::domain_error("ray is not forward-null for this sheet");
  return std::log(qx / qy);  // log(-Q(x,xi)) - log(-Q(y,xi))
}

double horosphere_defect(const BoundaryRay& xi, const HyperboloidPoint& x,
                         const HyperboloidPoint& ref) {
  return busemann(xi, ref, x);
}

UnitTangent geodesic_between(const BoundaryRay& backward,
                             const BoundaryRay& forward, double s) {
  if (backward.form() != forward.form())
    throw std::invalid_argument("mixed forms in geodesic_between");
  const FormPtr& form = forward.form();
  const double q = form->bilinear(forward.coords(), backward.coords());
  if (q >= -kGeomTol)
    throw std::domain_error("boundary points do not span a geodesic");
  const double scale = std::sqrt(-2.0 * q);
  const Eigen::VectorXd base =
      (std::exp(s) * forward.coords() + std::exp(-s) * backward.coords()) /
      scale;
  const Eigen::VectorXd dir =
      (std::exp(s) * forward.coords() - std::exp(-s) * backward.coords()) /
      scale;
  return UnitTangent::project(form, base, dir);
}

}  // namespace orbitcount
