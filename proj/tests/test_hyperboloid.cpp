#include <doctest.h>

#include "oracles.hpp"
#include "orbitcount/hyperboloid.hpp"

using namespace orbitcount;

namespace {
const FormPtr q0 = QuadraticForm::lorentz(2);

HyperboloidPoint axis_point(double r) {
  return HyperboloidPoint(q0, Eigen::Vector3d(std::sinh(r), 0.0, std::cosh(r)));
}
}  // namespace

TEST_CASE("distance basics") {
  const HyperboloidPoint o(q0, q0->base_point());
  CHECK(distance(o, o) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(distance(o, axis_point(1.5)) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(distance(axis_point(1.5), o) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("triangle inequality and symmetry on random triples") {
  oracles::Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto a = oracles::random_point(rng, q0, 3.0);
    const auto b = oracles::random_point(rng, q0, 3.0);
    const auto c = oracles::random_point(rng, q0, 3.0);
    CHECK(distance(a, b) == distance(b, a));
    CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
  }
}

TEST_CASE("busemann closed form against the defining limit") {
  oracles::Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto x = oracles::random_point(rng, q0, 2.0);
    const auto y = oracles::random_point(rng, q0, 2.0);
    const auto xi = oracles::random_forward_ray(rng, q0);
    const double closed = busemann(xi, x, y);
    const double limit = oracles::busemann_limit_oracle(xi, x, y, 22.0);
    CHECK(closed == doctest::Approx(limit).epsilon(1e-8));
  }
}

TEST_CASE("horospherical coordinates value") {
  // The backward endpoint of the axis sees the time-r axis point at
  // height -r.
  const HyperboloidPoint o(q0, q0->base_point());
  const BoundaryRay back(q0, Eigen::Vector3d(-1.0, 0.0, 1.0));
  const double r = 0.7;
  CHECK(busemann(back, o, axis_point(r)) ==
        doctest::Approx(-r).epsilon(1e-12));
  CHECK(busemann(back, o, o) == 0.0);
}

TEST_CASE("busemann cocycle, scaling invariance, lipschitz bound") {
  oracles::Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const auto x = oracles::random_point(rng, q0, 2.5);
    const auto y = oracles::random_point(rng, q0, 2.5);
    const auto z = oracles::random_point(rng, q0, 2.5);
    const auto xi = oracles::random_forward_ray(rng, q0);
    const double bxy = busemann(xi, x, y);
    CHECK(std::abs(busemann(xi, x, z) - bxy - busemann(xi, y, z)) < 1e-9);
    CHECK(std::abs(bxy) <= distance(x, y) + 1e-9);
    for (double s : {1e-6, 1.0, 1e6}) {
      const BoundaryRay xs(q0, s * xi.coords());
      CHECK(std::abs(busemann(xs, x, y) - bxy) < 1e-12);
    }
  }
}

TEST_CASE("horosphere defect") {
  const HyperboloidPoint o(q0, q0->base_point());
  const BoundaryRay fwd(q0, Eigen::Vector3d(1.0, 0.0, 1.0));
  CHECK(horosphere_defect(fwd, o, o) == 0.0);

  // Horospherical translations fixing the backward endpoint sweep the
  // horosphere through the base point.
  const BoundaryRay back(q0, Eigen::Vector3d(-1.0, 0.0, 1.0));
  oracles::Rng rng(19);
  std::uniform_real_distribution<double> ur(-2.0, 2.0);
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXd x(1);
    x << ur(rng);
    const GroupElement n = unipotent(q0, x);
    CHECK(std::abs(horosphere_defect(back, n.apply(o), o)) < 1e-12);
  }

  // Flow along the axis crosses its own horospheres at unit rate.
  const double r = 1.1;
  CHECK(horosphere_defect(fwd, axis_point(r), o) ==
        doctest::Approx(-r).epsilon(1e-12));
}

TEST_CASE("boundary ray normalization") {
  const BoundaryRay xi(q0, Eigen::Vector3d(-3.0, 0.0, 3.0));
  CHECK(xi.coords().norm() == doctest::Approx(1.0));
  // direction preserved, not sign-flipped
  CHECK(xi.coords()(0) < 0.0);
  // canonical line representative flips to first-nonzero-positive
  CHECK(xi.canonical_line()(0) > 0.0);
  CHECK_THROWS_AS(BoundaryRay(q0, Eigen::Vector3d(1.0, 0.0, 2.0)),
                  std::invalid_argument);  // not null
}

TEST_CASE("invalid busemann inputs are rejected") {
  const HyperboloidPoint o(q0, q0->base_point());
  const BoundaryRay backward_of_sheet(q0, Eigen::Vector3d(1.0, 0.0, -1.0));
  CHECK_THROWS_AS((void)busemann(backward_of_sheet, o, o), std::domain_error);
}

TEST_CASE("projection repairs drift") {
  Eigen::Vector3d drifted = q0->base_point();
  drifted *= 1.0 + 1e-5;
  const HyperboloidPoint p = HyperboloidPoint::project(q0, drifted);
  CHECK(q0->eval(p.coords()) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK_THROWS_AS(HyperboloidPoint(q0, drifted), std::invalid_argument);
  CHECK_THROWS_AS(
      HyperboloidPoint::project(q0, Eigen::Vector3d(1.0, 0.0, 0.0)),
      std::invalid_argument);
}

TEST_CASE("unit tangent rays and the connecting geodesic") {
  const HyperboloidPoint o(q0, q0->base_point());
  const UnitTangent u(o, Eigen::Vector3d(1.0, 0.0, 0.0));
  CHECK(u.forward_ray().coords()(0) > 0.0);
  CHECK(u.backward_ray().coords()(0) < 0.0);
  const UnitTangent mid = geodesic_between(u.backward_ray(), u.forward_ray(), 0.0);
  CHECK((mid.base().coords() - o.coords()).norm() < 1e-12);
  CHECK((mid.dir() - u.dir()).norm() < 1e-12);
}
