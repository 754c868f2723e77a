#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitcount/descartes.hpp"  // CountSeries, PartialResultError
#include "orbitcount/hyperboloid.hpp"
#include "orbitcount/powerfit.hpp"

namespace orbitcount {

// Word-BFS machinery for discrete matrix groups acting on row vectors
// from the right.  Generators are exact rational matrices preserving the
// form's Gram matrix exactly; inverses are added automatically so the
// walk covers the group, and involutions are detected to keep words
// reduced.  Integer generator sets run on a native int64 engine with
// exact dedup keys; anything that leaves the fast range falls back to
// arbitrary-precision arithmetic transparently.

struct Generator {
  RationalMatrix mat;
  Eigen::MatrixXd mat_d;
  bool involutive = false;
  int inverse_index = -1;  // index whose matrix is this one's inverse
};

class GeneratorSet {
 public:
  GeneratorSet(FormPtr form, std::vector<RationalMatrix> generators);

  std::size_t size() const { return gens_.size(); }
  const Generator& operator[](std::size_t i) const { return gens_[i]; }
  const FormPtr& form() const { return form_; }
  // True when every matrix entry is an integer.
  bool integral() const { return integral_; }

 private:
  FormPtr form_;
  std::vector<Generator> gens_;
  bool integral_ = true;
};

// Orbit points (seed * gamma) / sqrt(-Q(seed)) with their distances to
// the seed point, identity first.  Vectors are stored exactly.
class BallEnumeration {
 public:
  std::size_t size() const { return dists_.size(); }
  double dist(std::size_t i) const { return dists_[i]; }
  RationalVector vector(std::size_t i) const;
  Eigen::VectorXd vector_d(std::size_t i) const;
  std::vector<int> word(std::size_t i) const;
  std::uint64_t count_within(double R) const;
  bool complete() const { return complete_; }

 private:
  friend class BallBuilder;
  int dim_ = 0;
  bool complete_ = true;
  std::vector<double> dists_;
  std::vector<std::int64_t> parents_;
  std::vector<std::int16_t> last_gens_;
  std::vector<std::int64_t> flat_ints_;   // used by the integer engine
  std::vector<Rational> flat_rationals_;  // used otherwise
};

// All distinct orbit points with d(o, p) <= R.  Nodes are expanded while
// their distance stays below R + slack so that words overshooting the
// ball radius slightly are still followed; children beyond R + slack are
// discarded.
BallEnumeration enumerate_group_ball(const GeneratorSet& gens,
                                     const RationalVector& seed, double R,
                                     double slack = 1.5);

// Truncated series sum(e^{-s d(o, p)}) over the R-ball.
double poincare_partial(const GeneratorSet& gens, const RationalVector& seed,
                        double s, double R);

struct GrowthSample {
  std::vector<double> R;
  std::vector<std::uint64_t> counts;
};

// Exponential growth rate of ball counts: OLS of log N(R) against R.
FitReport estimate_delta_from_sample(const GrowthSample& sample);
GrowthSample ball_growth_sample(const GeneratorSet& gens,
                                const RationalVector& seed,
                                const std::vector<double>& R_grid);
FitReport estimate_delta(const GeneratorSet& gens, const RationalVector& seed,
                         const std::vector<double>& R_grid);

struct WeightedAtom {
  Eigen::VectorXd point;
  double weight = 0.0;
};

struct DensityApprox {
  std::vector<WeightedAtom> atoms;
  double total_mass = 0.0;  // equals 1 when x is the base point
};

// Orbit atoms weighted by e^{-s d(x, p)}, normalized by the value of the
// same truncated sum at the base point.
DensityApprox ps_density_approx(const GeneratorSet& gens,
                                const HyperboloidPoint& x,
                                const RationalVector& seed, double s,
                                double R);

enum class VectorNorm { Max, Euclidean };

struct SphericalCap {
  Eigen::VectorXd axis;  // unit
  double angle = 0.0;    // in (0, pi]
};

struct OrbitBallQuery {
  RationalVector w0;
  VectorNorm norm = VectorNorm::Max;
  double T = 0.0;
  std::optional<SphericalCap> cone;
};

// Distinct orbit vectors w0 * gamma with norm < T, optionally restricted
// to the cone.  Words are fully expanded to the burn-in depth, past which
// children whose norm strictly decreased are pruned.
std::uint64_t count_vector_orbit(const GeneratorSet& gens,
                                 const OrbitBallQuery& query,
                                 int burn_in_depth = 6);

// One walk bucketed over the grid; equals per-T counts on shared points.
CountSeries count_vector_series(const GeneratorSet& gens,
                                const RationalVector& w0, VectorNorm norm,
                                const std::vector<double>& grid,
                                const std::optional<SphericalCap>& cone =
                                    std::nullopt,
                                int burn_in_depth = 6);

double vector_norm(const Eigen::VectorXd& v, VectorNorm norm);
bool cone_contains(const SphericalCap& cap, const Eigen::VectorXd& v);

}  // namespace orbitcount
