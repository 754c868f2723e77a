#include "orbitcount/lorentz_group.hpp"

#include <cmath>
#include <stdexcept>

namespace orbitcount {

namespace {

constexpr double kGroupTol = 1e-8;

void require_lorentz_base(const FormPtr& form) {
  if (!form || !form->is_lorentzian())
    throw std::invalid_argument("expected a signature-(n,1) form");
}

int space_dim(const FormPtr& form) { return form->dim() - 1; }

// Deterministic completion of a unit vector to an SO(n) matrix with the
// given first column.
Eigen::MatrixXd complete_rotation(const Eigen::VectorXd& first) {
  const long n = first.size();
  Eigen::MatrixXd q(n, n);
  q.col(0) = first;
  long filled = 1;
  for (long j = 0; j < n && filled < n; ++j) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, j);
    for (long k = 0; k < filled; ++k) v -= v.dot(q.col(k)) * q.col(k);
    const double norm = v.norm();
    if (norm > 1e-6) q.col(filled++) = v / norm;
  }
  if (filled < n) throw std::runtime_error("basis completion failed");
  if (q.determinant() < 0) q.col(n - 1) *= -1.0;
  return q;
}

}  // namespace

GroupElement::GroupElement(FormPtr form, Eigen::MatrixXd mat)
    : form_(std::move(form)), mat_(std::move(mat)) {
  if (!form_) throw std::invalid_argument("null form");
  if (mat_.rows() != form_->dim() || mat_.cols() != form_->dim())
    throw std::invalid_argument("matrix dimension mismatch");
  if (form_drift() > kGroupTol)
    throw std::invalid_argument("matrix does not preserve the form");
  if (std::abs(mat_.determinant() - 1.0) > kGroupTol)
    throw std::invalid_argument("matrix is not in the special orthogonal group");
  // Sheet preservation: g b stays on the base-point sheet.
  const Eigen::VectorXd gb = mat_ * form_->base_point();
  if (form_->bilinear(gb, form_->base_point()) >= 0.0)
    throw std::invalid_argument("matrix swaps the two sheets");
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
  if (form_ != rhs.form_)
    throw std::invalid_argument("mixed forms in group multiplication");
  return GroupElement(form_, mat_ * rhs.mat_);
}

GroupElement GroupElement::inverse() const {
  // g^{-1} = G^{-1} g^T G; cheaper and more stable than an LU solve here.
  const Eigen::MatrixXd& g = form_->gram_d();
  Eigen::MatrixXd gram_inv = g.inverse();
  return GroupElement(form_, gram_inv * mat_.transpose() * g);
}

HyperboloidPoint GroupElement::apply(const HyperboloidPoint& p) const {
  return HyperboloidPoint::project(form_, mat_ * p.coords());
}

UnitTangent GroupElement::apply(const UnitTangent& u) const {
  return UnitTangent::project(form_, mat_ * u.base().coords(),
                              mat_ * u.dir());
}

double GroupElement::form_drift() const {
  const Eigen::MatrixXd& g = form_->gram_d();
  return (mat_.transpose() * g * mat_ - g).cwiseAbs().maxCoeff();
}

GroupElement a_flow(const FormPtr& form, double r) {
  require_lorentz_base(form);
  if (!std::isfinite(r)) throw std::invalid_argument("non-finite flow time");
  const int d = form->dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
  m(0, 0) = std::cosh(r);
  m(d - 1, d - 1) = std::cosh(r);
  m(0, d - 1) = std::sinh(r);
  m(d - 1, 0) = std::sinh(r);
  return GroupElement(form, std::move(m));
}

GroupElement flip_omega(const FormPtr& form) {
  require_lorentz_base(form);
  const int d = form->dim();
  if (d < 3) throw std::invalid_argument("flip element needs n >= 2");
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(d);
  diag(0) = -1.0;
  diag(1) = -1.0;
  return GroupElement(form, diag.asDiagonal());
}

GroupElement unipotent(const FormPtr& form, const Eigen::VectorXd& x) {
  require_lorentz_base(form);
  const int n = space_dim(form);
  if (x.size() != n - 1)
    throw std::invalid_argument("unipotent parameter has wrong dimension");
  const double half_sq = 0.5 * x.squaredNorm();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n + 1, n + 1);
  m(0, 0) = 1.0 - half_sq;
  m(0, n) = -half_sq;
  m(n, 0) = half_sq;
  m(n, n) = 1.0 + half_sq;
  for (int j = 0; j < n - 1; ++j) {
    m(0, 1 + j) = -x(j);
    m(n, 1 + j) = x(j);
    m(1 + j, 0) = x(j);
    m(1 + j, n) = x(j);
  }
  return GroupElement(form, std::move(m));
}

GroupElement k_element(const FormPtr& form, const Eigen::MatrixXd& so_n) {
  require_lorentz_base(form);
  const int n = space_dim(form);
  if (so_n.rows() != n || so_n.cols() != n)
    throw std::invalid_argument("rotation block has wrong dimension");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n + 1, n + 1);
  m.topLeftCorner(n, n) = so_n;
  return GroupElement(form, std::move(m));
}

GroupElement m_element(const FormPtr& form, const Eigen::MatrixXd& block) {
  require_lorentz_base(form);
  const int n = space_dim(form);
  if (block.rows() != n - 1 || block.cols() != n - 1)
    throw std::invalid_argument("centralizer block has wrong dimension");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n + 1, n + 1);
  m.block(1, 1, n - 1, n - 1) = block;
  return GroupElement(form, std::move(m));
}

bool in_k(const GroupElement& g, double tol) {
  const int d = g.form()->dim();
  const Eigen::MatrixXd& m = g.mat();
  for (int i = 0; i < d; ++i) {
    if (std::abs(m(d - 1, i) - (i == d - 1 ? 1.0 : 0.0)) > tol) return false;
    if (std::abs(m(i, d - 1) - (i == d - 1 ? 1.0 : 0.0)) > tol) return false;
  }
  Eigen::MatrixXd block = m.topLeftCorner(d - 1, d - 1);
  return (block.transpose() * block - Eigen::MatrixXd::Identity(d - 1, d - 1))
             .cwiseAbs()
             .maxCoeff() < tol;
}

bool in_m(const GroupElement& g, double tol) {
  if (!in_k(g, tol)) return false;
  const int d = g.form()->dim();
  const Eigen::MatrixXd& m = g.mat();
  for (int i = 0; i < d; ++i) {
    if (std::abs(m(0, i) - (i == 0 ? 1.0 : 0.0)) > tol) return false;
    if (std::abs(m(i, 0) - (i == 0 ? 1.0 : 0.0)) > tol) return false;
  }
  return true;
}

UnitTangent tangent_of(const GroupElement& g) {
  const FormPtr& form = g.form();
  Eigen::VectorXd dir0 = Eigen::VectorXd::Unit(form->dim(), 0);
  return UnitTangent::project(form, g.mat() * form->base_point(),
                              g.mat() * dir0);
}

CartanTriple cartan_decompose(const GroupElement& g) {
  const FormPtr& form = g.form();
  const int d = form->dim();
  const Eigen::VectorXd o = form->base_point();
  const Eigen::VectorXd go = g.mat() * o;
  double coshr = -form->bilinear(go, o);
  if (coshr < 1.0) coshr = 1.0;
  const double r = std::acosh(coshr);

  GroupElement k1(form, Eigen::MatrixXd::Identity(d, d));
  if (r > 1e-12) {
    // Spatial part of g o has length sinh r; its direction is the first
    // column of the K-block of k1.
    const Eigen::VectorXd spatial = go.head(d - 1);
    k1 = k_element(form, complete_rotation(spatial / spatial.norm()));
  } else {
    // g is already in K.
    return CartanTriple{g, 0.0, GroupElement(form, Eigen::MatrixXd::Identity(d, d))};
  }
  GroupElement k2(form,
                  reorthogonalize(form, (a_flow(form, -r) * k1.inverse() * g).mat()));
  if (!in_k(k2))
    throw std::domain_error("cartan decomposition failed: residual not in K");
  return CartanTriple{k1, r, k2};
}

IwasawaTriple iwasawa_decompose(const GroupElement& g) {
  const FormPtr& form = g.form();
  const int d = form->dim();
  const Eigen::VectorXd go = g.mat() * form->base_point();
  // Null-frame coordinates of g o: alpha (e_1 + e_d)/1 + y + beta (-e_1 + e_d),
  // with alpha = e^r / 2 and y = e^r x.
  const double alpha = 0.5 * (go(0) + go(d - 1));
  if (alpha <= 0.0)
    throw std::domain_error("orbit point escaped the null frame");
  const double r = std::log(2.0 * alpha);
  const Eigen::VectorXd x = go.segment(1, d - 2) / (2.0 * alpha);
  GroupElement nu = unipotent(form, x);
  GroupElement k(form, reorthogonalize(form, (a_flow(form, -r) *
                                              nu.inverse() * g).mat()));
  if (!in_k(k))
    throw std::domain_error("iwasawa decomposition failed: residual not in K");
  return IwasawaTriple{nu, r, k};
}

UnitTangent geodesic_flow(const UnitTangent& u, double r) {
  const Eigen::VectorXd base =
      std::cosh(r) * u.base().coords() + std::sinh(r) * u.dir();
  const Eigen::VectorXd dir =
      std::sinh(r) * u.base().coords() + std::cosh(r) * u.dir();
  return UnitTangent::project(u.form(), base, dir);
}

Eigen::MatrixXd reorthogonalize(const FormPtr& form, Eigen::MatrixXd mat) {
  const Eigen::MatrixXd& g = form->gram_d();
  const Eigen::MatrixXd gram_inv = g.inverse();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(g.rows(), g.cols());
  for (int it = 0; it < 12; ++it) {
    const Eigen::MatrixXd e = gram_inv * mat.transpose() * g * mat;
    const double drift = (e - id).cwiseAbs().maxCoeff();
    if (drift < 1e-15) break;
    if (drift > 0.5)
      throw std::domain_error("matrix too far from the group to correct");
    mat = 0.5 * mat * (3.0 * id - e);
  }
  return mat;
}

std::pair<double, double> chart_defect(double t) {
  if (!(std::abs(t) < M_PI / 2))
    throw std::domain_error("sphere chart needs |t| < pi/2");
  const FormPtr form = QuadraticForm::lorentz(2);
  const Eigen::Vector3d o(0.0, 0.0, 1.0);
  const UnitTangent v(HyperboloidPoint(form, o), Eigen::Vector3d(1.0, 0.0, 0.0));

  // The two families, written directly in the 3d model.  Right translation
  // by the 2d one-parameter subgroups doubles the parameter here.
  const double c2 = std::cosh(2.0 * t), s2 = std::sinh(2.0 * t);
  const UnitTangent w_geo = UnitTangent::project(
      form, Eigen::Vector3d(0.0, -s2, c2), Eigen::Vector3d(1.0, 0.0, 0.0));
  const UnitTangent w_sph = UnitTangent::project(
      form, o, Eigen::Vector3d(std::cos(2.0 * t), std::sin(2.0 * t), 0.0));

  auto defect = [&](const UnitTangent& w) {
    const BoundaryRay wplus = w.forward_ray();
    const BoundaryRay vminus = v.backward_ray();
    // q = Viz^{-1}(w^+) on the unstable horosphere of v: solve the
    // horosphere equation along the geodesic from v^- to w^+.
    auto offset = [&](double s) {
      return busemann(vminus, v.base(),
                      geodesic_between(vminus, wplus, s).base());
    };
    // The offset is strictly monotone in s; bracket both ways, bisect.
    double lo = -1.0, hi = 1.0;
    double flo = offset(lo), fhi = offset(hi);
    int guard = 0;
    while (flo * fhi > 0.0) {
      lo *= 2.0;
      hi *= 2.0;
      flo = offset(lo);
      fhi = offset(hi);
      if (++guard > 60) throw std::domain_error("horosphere solve diverged");
    }
    if (flo > fhi) {
      std::swap(lo, hi);
      std::swap(flo, fhi);
    }
    for (int it = 0; it < 200 && hi != lo; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (offset(mid) <= 0.0)
        lo = mid;
      else
        hi = mid;
    }
    const UnitTangent q = geodesic_between(vminus, wplus, 0.5 * (lo + hi));
    return busemann(wplus, q.base(), w.base());
  };

  return {defect(w_geo), defect(w_sph)};
}

}  // namespace orbitcount
