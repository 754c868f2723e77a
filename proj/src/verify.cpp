#include "orbitcount/verify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>
#include <unordered_set>

#include "orbitcount/lorentz_group.hpp"
#include "orbitcount/orbit.hpp"

namespace orbitcount {

namespace {

using Rng = std::mt19937_64;

Eigen::VectorXd random_direction(Rng& rng, int n) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = gauss(rng);
  return v / v.norm();
}

Eigen::MatrixXd random_rotation(Rng& rng, int n) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd diag = qr.matrixQR().diagonal();
  for (int i = 0; i < n; ++i)
    if (diag(i) < 0) q.col(i) *= -1.0;
  if (q.determinant() < 0) q.col(n - 1) *= -1.0;
  return q;
}

HyperboloidPoint random_point(Rng& rng, const FormPtr& form, double rmax) {
  std::uniform_real_distribution<double> ur(0.0, rmax);
  const int n = form->dim() - 1;
  const GroupElement k = k_element(form, random_rotation(rng, n));
  const GroupElement a = a_flow(form, ur(rng));
  return (k * a).apply(HyperboloidPoint(form, form->base_point()));
}

GroupElement random_group_element(Rng& rng, const FormPtr& form, double rmax) {
  std::uniform_real_distribution<double> ur(-rmax, rmax);
  const int n = form->dim() - 1;
  const GroupElement k1 = k_element(form, random_rotation(rng, n));
  const GroupElement k2 = k_element(form, random_rotation(rng, n));
  return k1 * a_flow(form, ur(rng)) * k2;
}

struct Failure {
  std::string detail;
};

#define VCHECK(cond, msg)                                   \
  do {                                                      \
    if (!(cond)) {                                          \
      std::ostringstream os_;                               \
      os_ << msg;                                           \
      throw Failure{os_.str()};                             \
    }                                                       \
  } while (0)

SuiteResult suite_forms(std::uint64_t seed) {
  Rng rng(seed ^ 0x464f524d53ULL);
  const FormPtr q0 = QuadraticForm::lorentz(3);
  const FormPtr qd = QuadraticForm::descartes();

  // Exactness on huge integers.
  BigIntVector big(4);
  BigInt base = BigInt("100000000000000000000000000000000000000000000000000");
  big = {base + 1, base + 2, -base, base / 3};
  const BigInt direct = 2 * (big[0] * big[0] + big[1] * big[1] +
                             big[2] * big[2] + big[3] * big[3]) -
                        (big[0] + big[1] + big[2] + big[3]) *
                            (big[0] + big[1] + big[2] + big[3]);
  VCHECK(qd->eval(big) == direct, "exact evaluation mismatch on 10^50 input");

  // Metric axioms on random triples.
  for (int i = 0; i < 1000; ++i) {
    const HyperboloidPoint a = random_point(rng, q0, 3.0);
    const HyperboloidPoint b = random_point(rng, q0, 3.0);
    const HyperboloidPoint c = random_point(rng, q0, 3.0);
    const double ab = distance(a, b), ba = distance(b, a);
    VCHECK(ab == ba, "distance asymmetric");
    VCHECK(distance(a, c) <= ab + distance(b, c) + 1e-9,
           "triangle inequality violated");
  }

  // Busemann: scaling invariance, Lipschitz bound, cocycle.
  for (int i = 0; i < 1000; ++i) {
    const HyperboloidPoint x = random_point(rng, q0, 2.5);
    const HyperboloidPoint y = random_point(rng, q0, 2.5);
    const HyperboloidPoint z = random_point(rng, q0, 2.5);
    Eigen::VectorXd dir = random_direction(rng, 3);
    Eigen::VectorXd xi_vec(4);
    xi_vec << dir(0), dir(1), dir(2), 1.0;
    const BoundaryRay xi(q0, xi_vec);
    const double bxy = busemann(xi, x, y);
    VCHECK(std::abs(bxy) <= distance(x, y) + 1e-9,
           "busemann exceeds distance");
    const double coc =
        busemann(xi, x, z) - bxy - busemann(xi, y, z);
    VCHECK(std::abs(coc) < 1e-9, "busemann cocycle violated: " << coc);
    for (double scale : {1e-6, 1.0, 1e6}) {
      const BoundaryRay xi2(q0, scale * xi_vec);
      VCHECK(std::abs(busemann(xi2, x, y) - bxy) < 1e-12,
             "busemann depends on the ray representative");
    }
  }
  return {"forms", true, "exact evaluation, metric axioms, busemann laws"};
}

SuiteResult suite_generators(std::uint64_t seed) {
  Rng rng(seed ^ 0x47454e53ULL);
  const RationalMatrix& gram = descartes_gram();
  for (int i = 0; i < 4; ++i) {
    const RationalMatrix& s = swap_generator(i);
    VCHECK((s * s).is_identity(), "generator " << i << " is not involutive");
    VCHECK(s.transposed() * gram * s == gram,
           "generator " << i << " does not preserve the Gram matrix");
  }
  // Swap-pair law: the completion roots on three coordinates are the
  // fourth coordinate and its swap.
  std::uniform_int_distribution<int> small(-8, 8);
  int tested = 0;
  for (int tries = 0; tested < 50 && tries < 100000; ++tries) {
    const BigInt a = small(rng), b = small(rng), c = small(rng);
    for (PackingKind kind : {PackingKind::Euclidean, PackingKind::Hyperbolic,
                             PackingKind::Spherical}) {
      const DescartesCompletion comp = descartes_complete(a, b, c, kind);
      if (!comp.x1) continue;
      const DescartesQuadruple q({a, b, c, *comp.x1}, kind);
      const DescartesQuadruple swapped = swap_coordinate(q, 3);
      VCHECK(swapped.c[3] == *comp.x2,
             "swap-pair law failed at " << q.str());
      ++tested;
    }
  }
  VCHECK(tested >= 50, "not enough integral completions sampled");
  return {"generators", true, "involutions, Gram preservation, swap pairs"};
}

SuiteResult suite_decompositions(std::uint64_t seed) {
  Rng rng(seed ^ 0x4445434f4dULL);
  const FormPtr q0 = QuadraticForm::lorentz(3);
  const HyperboloidPoint o(q0, q0->base_point());
  for (int i = 0; i < 100; ++i) {
    const GroupElement g = random_group_element(rng, q0, 4.0);
    const CartanTriple kak = cartan_decompose(g);
    VCHECK(std::abs(kak.r - distance(o, g.apply(o))) < 1e-9,
           "cartan radial part differs from the displacement");
    const Eigen::MatrixXd recon =
        (kak.k1 * a_flow(q0, kak.r) * kak.k2).mat();
    VCHECK((recon - g.mat()).cwiseAbs().maxCoeff() < 1e-8,
           "cartan reconstruction error");
    const IwasawaTriple nak = iwasawa_decompose(g);
    const Eigen::MatrixXd recon2 =
        (nak.nu * a_flow(q0, nak.r) * nak.k).mat();
    VCHECK((recon2 - g.mat()).cwiseAbs().maxCoeff() < 1e-8,
           "iwasawa reconstruction error");
  }
  // Conjugation by the flip normalizes the centralizer block.
  const GroupElement w = flip_omega(q0);
  for (int i = 0; i < 20; ++i) {
    const GroupElement m = m_element(q0, random_rotation(rng, 2));
    const GroupElement conj = w * m * w.inverse();
    VCHECK(in_m(conj, 1e-10), "flip conjugation left the centralizer");
  }
  return {"decompositions", true, "KA+K and NAK round-trips"};
}

SuiteResult suite_chart_defect(std::uint64_t) {
  for (double t = -0.25; t <= 0.2501; t += 0.025) {
    const auto [geo, sph] = chart_defect(t);
    VCHECK(std::abs(geo) <= 2.0 * t * t + 1e-12,
           "geodesic defect bound violated at t=" << t);
    VCHECK(std::abs(sph) <= 2.0 * t * t + 1e-12,
           "sphere defect bound violated at t=" << t);
    VCHECK(std::abs(geo - 2.0 * std::log(std::cosh(t))) < 1e-10,
           "geodesic defect differs from the closed form at t=" << t);
    VCHECK(std::abs(sph - 2.0 * std::log(std::cos(t))) < 1e-10,
           "sphere defect differs from the closed form at t=" << t);
  }
  const auto [geo, sph] = chart_defect(0.05);
  const double t2 = 0.05 * 0.05;
  VCHECK(geo / t2 >= 0.99 && geo / t2 <= 1.0, "geodesic defect ratio window");
  VCHECK(-sph / t2 >= 1.0 && -sph / t2 <= 1.01, "sphere defect ratio window");
  return {"chart-defect", true, "defect bounds and small-t ratios"};
}

SuiteResult suite_enumeration(std::uint64_t) {
  for (const char* root_text : {"-1,2,2,3", "0,0,0,2"}) {
    const PackingKind kind = std::string(root_text) == "-1,2,2,3"
                                 ? PackingKind::Euclidean
                                 : PackingKind::Hyperbolic;
    const DescartesQuadruple root(parse_quadruple(root_text), kind);
    for (long bound : {50L, 200L, 1000L}) {
      std::string detail;
      VCHECK(packing_enumeration_matches_reference(root, BigInt(bound),
                                                   &detail),
             "enumeration mismatch for root " << root_text << " T=" << bound
                                              << ": " << detail);
    }
  }
  return {"enumeration", true, "pruned walk equals reference BFS"};
}

#undef VCHECK

}  // namespace

std::vector<std::string> verify_suite_names() {
  return {"forms", "generators", "decompositions", "chart-defect",
          "enumeration"};
}

SuiteResult run_verify_suite(const std::string& name, std::uint64_t seed) {
  try {
    if (name == "forms") return suite_forms(seed);
    if (name == "generators") return suite_generators(seed);
    if (name == "decompositions") return suite_decompositions(seed);
    if (name == "chart-defect") return suite_chart_defect(seed);
    if (name == "enumeration") return suite_enumeration(seed);
  } catch (const Failure& f) {
    return {name, false, f.detail};
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
  return {name, false, "unknown suite"};
}

std::vector<SuiteResult> run_all_verify_suites(std::uint64_t seed) {
  std::vector<SuiteResult> out;
  for (const auto& name : verify_suite_names())
    out.push_back(run_verify_suite(name, seed));
  return out;
}

namespace {

struct ArrayKey {
  std::array<std::int64_t, 4> v;
  bool operator==(const ArrayKey&) const = default;
};
struct ArrayKeyHash {
  std::size_t operator()(const ArrayKey& k) const {
    std::size_t h = 14695981039346656037ULL;
    for (auto x : k.v)
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    return h;
  }
};

ArrayKey key_of(const std::array<BigInt, 4>& c) {
  ArrayKey k{};
  for (int i = 0; i < 4; ++i) k.v[i] = static_cast<std::int64_t>(c[i]);
  return k;
}

}  // namespace

std::vector<std::array<BigInt, 4>> reference_packing_ball(
    const DescartesQuadruple& root, const BigInt& T) {
  std::vector<std::array<BigInt, 4>> out;
  if (root.max_abs() >= T) return out;
  std::unordered_set<ArrayKey, ArrayKeyHash> seen;
  std::deque<std::pair<std::array<BigInt, 4>, int>> queue;
  queue.emplace_back(root.c, -1);
  seen.insert(key_of(root.c));
  while (!queue.empty()) {
    auto [c, last] = std::move(queue.front());
    queue.pop_front();
    out.push_back(c);
    for (int i = 0; i < 4; ++i) {
      if (i == last) continue;  // reduced words only
      std::array<BigInt, 4> child = c;
      BigInt others = -c[i];
      for (const auto& x : c) others += x;
      child[i] = 2 * others - c[i];
      bool in_bound = true;
      for (const auto& x : child)
        if (abs(x) >= T) in_bound = false;
      if (!in_bound) continue;
      if (!seen.insert(key_of(child)).second) continue;
      queue.emplace_back(std::move(child), i);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool packing_enumeration_matches_reference(const DescartesQuadruple& root,
                                           const BigInt& T,
                                           std::string* detail) {
  std::vector<std::array<BigInt, 4>> pruned;
  if (root.max_abs() < T) pruned.push_back(root.c);
  enumerate_packing(root, T,
                    [&](const std::array<BigInt, 4>& c, const BigInt&) {
                      pruned.push_back(c);
                    });
  std::sort(pruned.begin(), pruned.end());
  const auto dup = std::adjacent_find(pruned.begin(), pruned.end());
  if (dup != pruned.end()) {
    if (detail) *detail = "pruned walk emitted a quadruple twice";
    return false;
  }
  const auto reference = reference_packing_ball(root, T);
  if (pruned == reference) {
    if (detail) {
      std::ostringstream os;
      os << pruned.size() << " quadruples";
      *detail = os.str();
    }
    return true;
  }
  if (detail) {
    std::ostringstream os;
    os << "pruned " << pruned.size() << " vs reference " << reference.size()
       << " quadruples";
    *detail = os.str();
  }
  return false;
}

}  // namespace orbitcount
