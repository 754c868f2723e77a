#include <doctest.h>

#include "oracles.hpp"
#include "orbitcount/lorentz_group.hpp"

using namespace orbitcount;

namespace {
const FormPtr q0 = QuadraticForm::lorentz(3);
}

TEST_CASE("translation flow is a one-parameter group") {
  const GroupElement a0 = a_flow(q0, 0.0);
  CHECK((a0.mat() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() ==
        0.0);
  const Eigen::MatrixXd lhs = (a_flow(q0, 1.0) * a_flow(q0, 2.0)).mat();
  CHECK((lhs - a_flow(q0, 3.0).mat()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("flip conjugates the flow to its inverse") {
  const GroupElement w = flip_omega(q0);
  const double r = 0.9;
  const Eigen::MatrixXd conj = (w * a_flow(q0, r) * w.inverse()).mat();
  CHECK((conj - a_flow(q0, -r).mat()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cartan decomposition") {
  const HyperboloidPoint o(q0, q0->base_point());

  SUBCASE("identity") {
    const CartanTriple t = cartan_decompose(
        GroupElement(q0, Eigen::MatrixXd::Identity(4, 4)));
    CHECK(t.r == 0.0);
    CHECK(((t.k1 * t.k2).mat() - Eigen::MatrixXd::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }

  SUBCASE("pure translation") {
    const CartanTriple t = cartan_decompose(a_flow(q0, 2.0));
    CHECK(t.r == doctest::Approx(2.0).epsilon(1e-12));
    // k1 k2 lies in the centralizer coset of the identity.
    CHECK(in_m(t.k1 * t.k2, 1e-9));
  }

  SUBCASE("random round trips") {
    oracles::Rng rng(23);
    for (int i = 0; i < 100; ++i) {
      const GroupElement g = oracles::random_group_element(rng, q0, 4.0);
      const CartanTriple t = cartan_decompose(g);
      CHECK(t.r >= 0.0);
      CHECK(std::abs(t.r - distance(o, g.apply(o))) < 1e-9);
      const Eigen::MatrixXd recon = (t.k1 * a_flow(q0, t.r) * t.k2).mat();
      CHECK((recon - g.mat()).cwiseAbs().maxCoeff() < 1e-8);
      CHECK(in_k(t.k1));
      CHECK(in_k(t.k2));
    }
  }
}

TEST_CASE("iwasawa decomposition") {
  SUBCASE("identity and pure flow") {
    const IwasawaTriple t =
        iwasawa_decompose(GroupElement(q0, Eigen::MatrixXd::Identity(4, 4)));
    CHECK(std::abs(t.r) < 1e-12);
    const IwasawaTriple t2 = iwasawa_decompose(a_flow(q0, 1.3));
    CHECK(t2.r == doctest::Approx(1.3).epsilon(1e-12));
    CHECK((t2.nu.mat() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <
          1e-10);
  }

  SUBCASE("round trips from explicit n a k products") {
    oracles::Rng rng(29);
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
      Eigen::VectorXd x(2);
      x << ur(rng), ur(rng);
      const GroupElement built = unipotent(q0, x) * a_flow(q0, ur(rng)) *
                                 k_element(q0, oracles::random_rotation(rng, 3));
      const IwasawaTriple t = iwasawa_decompose(built);
      const Eigen::MatrixXd recon = (t.nu * a_flow(q0, t.r) * t.k).mat();
      CHECK((recon - built.mat()).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("unipotent subgroup") {
  Eigen::VectorXd x(2), y(2);
  x << 0.4, -1.1;
  y << 0.7, 0.2;
  const Eigen::MatrixXd sum = (unipotent(q0, x) * unipotent(q0, y)).mat();
  CHECK((sum - unipotent(q0, x + y).mat()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(unipotent(q0, x).form_drift() < 1e-12);
}

TEST_CASE("geodesic flow") {
  oracles::Rng rng(31);
  const auto base = oracles::random_point(rng, q0, 1.0);
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(4);
  dir(1) = 1.0;
  const UnitTangent u = UnitTangent::project(q0, base.coords(), dir);

  const UnitTangent same = geodesic_flow(u, 0.0);
  CHECK((same.base().coords() - u.base().coords()).norm() < 1e-12);

  const UnitTangent moved = geodesic_flow(u, 2.2);
  CHECK(distance(u.base(), moved.base()) == doctest::Approx(2.2).epsilon(1e-9));

  // Forward endpoint is flow-invariant.
  const UnitTangent far = geodesic_flow(u, 5.0);
  CHECK((far.forward_ray().canonical_line() -
         u.forward_ray().canonical_line())
            .norm() < 1e-9);

  // Flow property.
  const UnitTangent ab = geodesic_flow(geodesic_flow(u, 0.8), 1.4);
  const UnitTangent once = geodesic_flow(u, 2.2);
  CHECK((ab.base().coords() - once.base().coords()).norm() < 1e-9);
}

TEST_CASE("form preservation along long composition chains") {
  oracles::Rng rng(37);
  GroupElement g(q0, Eigen::MatrixXd::Identity(4, 4));
  Eigen::MatrixXd m = g.mat();
  int steps = 0;
  for (int k = 0; k < 10000; ++k) {
    m = m * oracles::random_group_element(rng, q0, 0.5).mat();
    if (++steps % 100 == 0) m = reorthogonalize(q0, m);
    if (k % 1000 == 999) {
      const double drift =
          (m.transpose() * q0->gram_d() * m - q0->gram_d()).cwiseAbs().maxCoeff();
      CHECK(drift < (k + 1) * 1e-10);
    }
  }
}

TEST_CASE("flip normalizes the centralizer") {
  oracles::Rng rng(41);
  const GroupElement w = flip_omega(q0);
  for (int i = 0; i < 20; ++i) {
    const GroupElement m = m_element(q0, oracles::random_rotation(rng, 2));
    CHECK(in_m(w * m * w.inverse(), 1e-10));
  }
}

TEST_CASE("chart defect") {
  SUBCASE("zero at zero") {
    const auto [geo, sph] = chart_defect(0.0);
    CHECK(std::abs(geo) < 1e-12);
    CHECK(std::abs(sph) < 1e-12);
  }

  SUBCASE("matches the closed forms") {
    for (double t : {0.1, -0.1, 0.05, 0.2, 0.37}) {
      const auto [geo, sph] = chart_defect(t);
      CHECK(geo == doctest::Approx(2.0 * std::log(std::cosh(t))).epsilon(1e-9));
      CHECK(sph == doctest::Approx(2.0 * std::log(std::cos(t))).epsilon(1e-9));
    }
    // Frozen values at t = 0.1 from the closed forms.
    const auto [geo, sph] = chart_defect(0.1);
    CHECK(geo == doctest::Approx(0.00998337764329306).epsilon(1e-9));
    CHECK(sph == doctest::Approx(-0.01001671124647062).epsilon(1e-9));
  }

  SUBCASE("small-t ratio windows") {
    const double t = 0.05;
    const auto [geo, sph] = chart_defect(t);
    CHECK(geo / (t * t) >= 0.99);
    CHECK(geo / (t * t) <= 1.0);
    CHECK(-sph / (t * t) >= 1.0);
    CHECK(-sph / (t * t) <= 1.01);
  }

  SUBCASE("quadratic defect bound") {
    for (double t = -0.25; t <= 0.2501; t += 0.0125) {
      const auto [geo, sph] = chart_defect(t);
      CHECK(std::abs(geo) <= 2.0 * t * t + 1e-12);
      CHECK(std::abs(sph) <= 2.0 * t * t + 1e-12);
    }
  }

  SUBCASE("sphere chart domain") {
    CHECK_THROWS_AS(chart_defect(M_PI / 2), std::domain_error);
    CHECK_THROWS_AS(chart_defect(-2.0), std::domain_error);
  }
}

TEST_CASE("group element validation") {
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(4, 4);
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(GroupElement(q0, bad), std::invalid_argument);
  // Sheet-swapping isometry: -I preserves the form but not the sheet.
  CHECK_THROWS_AS(GroupElement(q0, -Eigen::MatrixXd::Identity(4, 4)),
                  std::invalid_argument);
}
