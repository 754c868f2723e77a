#pragma once

#include <Eigen/Dense>

#include <utility>

#include "orbitcount/hyperboloid.hpp"

namespace orbitcount {

// Structure theory of the identity component of SO(n,1) acting on the
// standard form x_1^2 + ... + x_n^2 - x_{n+1}^2, plus the chart-defect
// computation in the two-dimensional model.  Matrices act on column
// vectors from the left.

class GroupElement {
 public:
  GroupElement(FormPtr form, Eigen::MatrixXd mat);

  const Eigen::MatrixXd& mat() const { return mat_; }
  const FormPtr& form() const { return form_; }

  GroupElement operator*(const GroupElement& rhs) const;
  GroupElement inverse() const;

  HyperboloidPoint apply(const HyperboloidPoint& p) const;
  UnitTangent apply(const UnitTangent& u) const;

  // Max-norm of mat^T G mat - G.
  double form_drift() const;

 private:
  FormPtr form_;
  Eigen::MatrixXd mat_;
};

// Translation along the first-axis geodesic: cosh r / sinh r in the
// (1, n+1) block, identity in between.  a_flow(r) a_flow(s) = a_flow(r+s).
GroupElement a_flow(const FormPtr& lorentz_form, double r);

// diag(-1, -1, 1, ..., 1): the K-element conjugating a_r to a_{-r}.
GroupElement flip_omega(const FormPtr& lorentz_form);

// Horospherical translation fixing the backward endpoint of the a-axis;
// x has n-1 entries.  unipotent(x) unipotent(y) = unipotent(x + y).
GroupElement unipotent(const FormPtr& lorentz_form, const Eigen::VectorXd& x);

// Embeds an SO(n) (resp. SO(n-1)) block: stabilizer of the base point,
// and its subgroup fixing the first axis.
GroupElement k_element(const FormPtr& lorentz_form, const Eigen::MatrixXd& so_n);
GroupElement m_element(const FormPtr& lorentz_form,
                       const Eigen::MatrixXd& so_n_minus_1);

bool in_k(const GroupElement& g, double tol = 1e-8);
bool in_m(const GroupElement& g, double tol = 1e-8);

// Unit tangent at the base point pointing along the a-axis, pushed by g.
UnitTangent tangent_of(const GroupElement& g);

struct CartanTriple {
  GroupElement k1;
  double r;  // >= 0, unique
  GroupElement k2;
};

struct IwasawaTriple {
  GroupElement nu;  // horospherical part
  double r;
  GroupElement k;
};

// g = k1 a_r k2 with r = d(o, g o) >= 0.  The residual block-rotation
// freedom is pinned by completing the polar direction of g o to a
// rotation with a fixed deterministic basis completion.
CartanTriple cartan_decompose(const GroupElement& g);

// g = nu a_r k with nu horospherical; closed-form from the null-frame
// coordinates of g o.
IwasawaTriple iwasawa_decompose(const GroupElement& g);

// Unit-speed geodesic flow: moves the base distance |r| along the
// geodesic of u, keeping the forward endpoint.
UnitTangent geodesic_flow(const UnitTangent& u, double r);

// Newton iteration pulling a slightly drifted matrix back onto the group.
Eigen::MatrixXd reorthogonalize(const FormPtr& form, Eigen::MatrixXd mat);

// Horospherical defect of the normal-bundle charts in the 2d model.
//
// For the two one-parameter families w = v h(t) (normal bundle of a
// geodesic) and w = v k(t) (normal bundle of a point sphere), locates the
// unique unit tangent q sharing its forward endpoint with w on the
// unstable horosphere of v, by solving the horosphere equation along the
// connecting geodesic, and returns the signed horospherical displacement
// from q to w.  First component: geodesic family (equals 2 log cosh t);
// second: sphere family (equals 2 log cos t).  Requires |t| < pi/2.
std::pair<double, double> chart_defect(double t);

}  // namespace orbitcount
