#pragma once

// Independent oracles and samplers for the test suites.  These stay off
// the code paths they check: the limit oracle evaluates the defining
// limit with the distance function only, and the word-ball oracle does a
// plain depth-capped breadth-first search with no pruning.

#include <deque>
#include <random>
#include <set>
#include <unordered_set>
#include <vector>

#include "orbitcount/hyperboloid.hpp"
#include "orbitcount/lorentz_group.hpp"
#include "orbitcount/orbit.hpp"

namespace oracles {

using namespace orbitcount;
using Rng = std::mt19937_64;

inline Eigen::MatrixXd random_rotation(Rng& rng, int n) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0) q.col(n - 1) *= -1.0;
  return q;
}

inline HyperboloidPoint random_point(Rng& rng, const FormPtr& form,
                                     double rmax) {
  std::uniform_real_distribution<double> ur(0.0, rmax);
  const GroupElement k = k_element(form, random_rotation(rng, form->dim() - 1));
  const GroupElement a = a_flow(form, ur(rng));
  return (k * a).apply(HyperboloidPoint(form, form->base_point()));
}

inline GroupElement random_group_element(Rng& rng, const FormPtr& form,
                                         double rmax) {
  std::uniform_real_distribution<double> ur(-rmax, rmax);
  const int n = form->dim() - 1;
  return k_element(form, random_rotation(rng, n)) * a_flow(form, ur(rng)) *
         k_element(form, random_rotation(rng, n));
}

inline BoundaryRay random_forward_ray(Rng& rng, const FormPtr& form) {
  std::normal_distribution<double> gauss;
  const int n = form->dim() - 1;
  Eigen::VectorXd v(n + 1);
  for (int i = 0; i < n; ++i) v(i) = gauss(rng);
  v.head(n).normalize();
  v(n) = 1.0;
  return BoundaryRay(form, v);
}

// Busemann function evaluated from its defining limit, with xi_r walking
// out along the geodesic from the base point toward the ray.
inline double busemann_limit_oracle(const BoundaryRay& xi,
                                    const HyperboloidPoint& x,
                                    const HyperboloidPoint& y, double r) {
  const FormPtr& form = xi.form();
  const Eigen::VectorXd o = form->base_point();
  // Unit tangent at o pointing at xi: dir = xi/(-Q(o,xi)) - o is null
  // shifted; orthogonalize and normalize instead.
  Eigen::VectorXd dir = xi.coords() + form->bilinear(o, xi.coords()) * o;
  dir /= std::sqrt(form->eval(dir));
  const Eigen::VectorXd xi_r = std::cosh(r) * o + std::sinh(r) * dir;
  const HyperboloidPoint far(form, xi_r);
  return distance(x, far) - distance(y, far);
}

// Plain word BFS: all reduced words up to the depth, orbit points
// deduplicated, no distance pruning at all.
inline std::vector<std::pair<RationalVector, double>> word_ball_oracle(
    const GeneratorSet& gens, const RationalVector& seed, int max_depth) {
  const auto& form = *gens.form();
  const double lambda2 = -static_cast<double>(form.eval(seed));
  auto dist = [&](const RationalVector& p) {
    double c = -static_cast<double>(form.bilinear(p, seed)) / lambda2;
    return std::acosh(c < 1.0 ? 1.0 : c);
  };
  auto key = [](const RationalVector& v) {
    std::string s;
    for (const auto& x : v) s += orbitcount::to_string(x) + ";";
    return s;
  };
  std::vector<std::pair<RationalVector, double>> out;
  std::unordered_set<std::string> seen;
  struct Node {
    RationalVector v;
    int last, depth;
  };
  std::deque<Node> queue;
  queue.push_back({seed, -1, 0});
  seen.insert(key(seed));
  out.emplace_back(seed, 0.0);
  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    if (node.depth == max_depth) continue;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (node.last >= 0 &&
          static_cast<int>(g) ==
              gens[static_cast<std::size_t>(node.last)].inverse_index)
        continue;
      RationalVector child = row_times_matrix(node.v, gens[g].mat);
      if (!seen.insert(key(child)).second) continue;
      out.emplace_back(child, dist(child));
      queue.push_back({std::move(child), static_cast<int>(g), node.depth + 1});
    }
  }
  return out;
}

inline std::vector<RationalMatrix> apollonian_row_generators() {
  std::vector<RationalMatrix> gens;
  for (int i = 0; i < 4; ++i) gens.push_back(swap_generator(i).transposed());
  return gens;
}

// cosh r = 5/3, sinh r = 4/3: displacement exactly log 3.
inline RationalMatrix rational_boost_53() {
  RationalMatrix m = RationalMatrix::identity(3);
  m(0, 0) = Rational(5, 3);
  m(2, 2) = Rational(5, 3);
  m(0, 2) = Rational(4, 3);
  m(2, 0) = Rational(4, 3);
  return m;
}

}  // namespace oracles
