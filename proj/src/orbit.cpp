#include "orbitcount/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "orbitcount/memory_budget.hpp"

namespace orbitcount {

namespace {

Eigen::MatrixXd to_double(const RationalMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<long>(i), static_cast<long>(j)) =
          static_cast<double>(m(i, j));
  return out;
}

Eigen::VectorXd to_double(const RationalVector& v) {
  Eigen::VectorXd out(static_cast<long>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<long>(i)) = static_cast<double>(v[i]);
  return out;
}

constexpr int kMaxFastDim = 8;
// Caps keep row-matrix products (dim terms of |v| * |entry|) well inside
// int64: 2^48 * 2^10 * 8 < 2^62.  Anything larger falls back to the
// exact engine.
constexpr std::int64_t kFastValueCap = std::int64_t{1} << 48;
constexpr std::int64_t kFastEntryCap = std::int64_t{1} << 10;

struct OverflowFastRange {};

// ---------------------------------------------------------------------
// Engines: the walk is generic over the vector representation.

struct Int64Engine {
  struct Vec {
    std::array<std::int64_t, kMaxFastDim> a{};
    bool operator==(const Vec&) const = default;
  };
  struct VecHash {
    std::size_t operator()(const Vec& v) const {
      std::size_t h = 14695981039346656037ULL;
      for (auto x : v.a)
        h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) +
             (h >> 2);
      return h;
    }
  };

  int dim;
  std::vector<std::array<std::int64_t, kMaxFastDim * kMaxFastDim>> gens;
  std::vector<std::int64_t> gram;  // row-major
  Vec seed;

  Int64Engine(const GeneratorSet& gs, const RationalVector& seed_in) {
    dim = gs.form()->dim();
    if (dim > kMaxFastDim) throw OverflowFastRange{};
    auto to_i64 = [](const Rational& r, std::int64_t cap) {
      if (denominator(r) != 1) throw OverflowFastRange{};
      const BigInt n = numerator(r);
      if (n < -cap || n > cap) throw OverflowFastRange{};
      return static_cast<std::int64_t>(n);
    };
    for (std::size_t g = 0; g < gs.size(); ++g) {
      std::array<std::int64_t, kMaxFastDim * kMaxFastDim> m{};
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          m[i * kMaxFastDim + j] = to_i64(gs[g].mat(i, j), kFastEntryCap);
      gens.push_back(m);
    }
    const RationalMatrix& gm = gs.form()->gram();
    gram.assign(dim * dim, 0);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        gram[i * dim + j] = to_i64(gm(i, j), kFastEntryCap);
    for (int i = 0; i < dim; ++i) seed.a[i] = to_i64(seed_in[i], kFastValueCap);
  }

  Vec apply(const Vec& v, std::size_t g) const {
    Vec out{};
    const auto& m = gens[g];
    for (int j = 0; j < dim; ++j) {
      std::int64_t acc = 0;
      for (int i = 0; i < dim; ++i) acc += v.a[i] * m[i * kMaxFastDim + j];
      if (acc < -kFastValueCap || acc > kFastValueCap) throw OverflowFastRange{};
      out.a[j] = acc;
    }
    return out;
  }

  // Exact bilinear form value against the seed, as a double.
  double bilinear_seed(const Vec& v) const {
    std::int64_t acc = 0;
    for (int i = 0; i < dim; ++i) {
      std::int64_t row = 0;
      for (int j = 0; j < dim; ++j) row += gram[i * dim + j] * seed.a[j];
      acc += v.a[i] * row;
    }
    return static_cast<double>(acc);
  }

  Eigen::VectorXd to_vecd(const Vec& v) const {
    Eigen::VectorXd out(dim);
    for (int i = 0; i < dim; ++i) out(i) = static_cast<double>(v.a[i]);
    return out;
  }

  static constexpr std::size_t node_bytes() { return sizeof(Vec) + 48; }
};

struct RationalEngine {
  struct Vec {
    RationalVector v;
    bool operator==(const Vec& o) const { return v == o.v; }
  };
  struct VecHash {
    std::size_t operator()(const Vec& x) const {
      std::size_t h = 1469598103934665603ULL;
      for (const auto& r : x.v) {
        std::ostringstream os;
        os << r;
        for (char c : os.str()) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
      }
      return h;
    }
  };

  int dim;
  const GeneratorSet& gs;
  Vec seed;
  RationalVector seed_gram;  // gram * seed, precomputed

  RationalEngine(const GeneratorSet& generators, const RationalVector& seed_in)
      : gs(generators) {
    dim = gs.form()->dim();
    seed.v = seed_in;
    const RationalMatrix& gm = gs.form()->gram();
    seed_gram.assign(dim, Rational(0));
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) seed_gram[i] += gm(i, j) * seed_in[j];
  }

  Vec apply(const Vec& v, std::size_t g) const {
    return Vec{row_times_matrix(v.v, gs[g].mat)};
  }

  double bilinear_seed(const Vec& v) const {
    Rational acc = 0;
    for (int i = 0; i < dim; ++i) acc += v.v[i] * seed_gram[i];
    return static_cast<double>(acc);
  }

  Eigen::VectorXd to_vecd(const Vec& v) const { return to_double(v.v); }

  static constexpr std::size_t node_bytes() { return 256; }
};

}  // namespace

// ---------------------------------------------------------------------

GeneratorSet::GeneratorSet(FormPtr form,
                           std::vector<RationalMatrix> generators)
    : form_(std::move(form)) {
  if (!form_) throw std::invalid_argument("null form");
  if (generators.empty()) throw std::invalid_argument("no generators");
  const RationalMatrix& gram = form_->gram();
  const std::size_t n = gram.rows();
  auto check = [&](const RationalMatrix& g) {
    if (g.rows() != n || g.cols() != n)
      throw std::invalid_argument("generator dimension mismatch");
    if (g.transposed() * gram * g != gram)
      throw std::invalid_argument(
          "generator does not preserve the form exactly");
  };
  for (auto& g : generators) {
    check(g);
    Generator gen;
    gen.involutive = (g * g).is_identity();
    gen.mat_d = to_double(g);
    gen.mat = std::move(g);
    gens_.push_back(std::move(gen));
  }
  // Pair up inverses; append any that are missing so the walk generates
  // the group rather than a semigroup.
  const std::size_t original = gens_.size();
  for (std::size_t i = 0; i < original; ++i) {
    if (gens_[i].involutive) {
      gens_[i].inverse_index = static_cast<int>(i);
      continue;
    }
    if (gens_[i].inverse_index >= 0) continue;
    auto inv = gens_[i].mat.inverse();
    if (!inv) throw std::invalid_argument("singular generator");
    bool found = false;
    for (std::size_t j = 0; j < gens_.size(); ++j) {
      if (gens_[j].mat == *inv) {
        gens_[i].inverse_index = static_cast<int>(j);
        gens_[j].inverse_index = static_cast<int>(i);
        found = true;
        break;
      }
    }
    if (!found) {
      Generator gen;
      gen.involutive = false;
      gen.mat_d = to_double(*inv);
      gen.mat = std::move(*inv);
      gen.inverse_index = static_cast<int>(i);
      gens_.push_back(std::move(gen));
      gens_[i].inverse_index = static_cast<int>(gens_.size() - 1);
    }
  }
  for (const auto& g : gens_) {
    for (std::size_t i = 0; i < n && integral_; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (denominator(g.mat(i, j)) != 1) {
          integral_ = false;
          break;
        }
  }
}

RationalVector BallEnumeration::vector(std::size_t i) const {
  RationalVector out(static_cast<std::size_t>(dim_));
  if (!flat_ints_.empty()) {
    for (int j = 0; j < dim_; ++j)
      out[static_cast<std::size_t>(j)] = flat_ints_[i * dim_ + j];
  } else {
    for (int j = 0; j < dim_; ++j)
      out[static_cast<std::size_t>(j)] = flat_rationals_[i * dim_ + j];
  }
  return out;
}

Eigen::VectorXd BallEnumeration::vector_d(std::size_t i) const {
  Eigen::VectorXd out(dim_);
  if (!flat_ints_.empty()) {
    for (int j = 0; j < dim_; ++j)
      out(j) = static_cast<double>(flat_ints_[i * dim_ + j]);
  } else {
    for (int j = 0; j < dim_; ++j)
      out(j) = static_cast<double>(flat_rationals_[i * dim_ + j]);
  }
  return out;
}

std::vector<int> BallEnumeration::word(std::size_t index) const {
  std::vector<int> out;
  std::int64_t at = static_cast<std::int64_t>(index);
  while (at > 0) {
    out.push_back(last_gens_[static_cast<std::size_t>(at)]);
    at = parents_[static_cast<std::size_t>(at)];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::uint64_t BallEnumeration::count_within(double R) const {
  std::uint64_t n = 0;
  for (double d : dists_)
    if (d <= R) ++n;
  return n;
}

class BallBuilder {
 public:
  template <typename Engine>
  static BallEnumeration walk(const GeneratorSet& gens, const Engine& eng,
                              double R, double slack, double lambda2) {
  BallEnumeration out;
  out.dim_ = eng.dim;

  auto cosh_dist = [&](const typename Engine::Vec& v) {
    double c = -eng.bilinear_seed(v) / lambda2;
    return c < 1.0 ? 1.0 : c;
  };
  const double expand_limit = R + slack;
  const double cosh_limit = std::cosh(expand_limit);

  std::unordered_set<typename Engine::Vec, typename Engine::VecHash> seen;
  std::deque<std::pair<typename Engine::Vec, std::size_t>> queue;
  const std::size_t budget = memory_budget_bytes();

  auto store = [&](const typename Engine::Vec& v, double d, std::int64_t parent,
                   std::int16_t g) {
    out.dists_.push_back(d);
    out.parents_.push_back(parent);
    out.last_gens_.push_back(g);
    if constexpr (std::is_same_v<Engine, Int64Engine>) {
      for (int j = 0; j < eng.dim; ++j) out.flat_ints_.push_back(v.a[j]);
    } else {
      for (int j = 0; j < eng.dim; ++j) out.flat_rationals_.push_back(v.v[j]);
    }
  };

  seen.insert(eng.seed);
  store(eng.seed, 0.0, -1, -1);
  queue.emplace_back(eng.seed, 0);
  while (!queue.empty()) {
    auto [v, idx] = std::move(queue.front());
    queue.pop_front();
    const int last = out.last_gens_[idx];
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (last >= 0 &&
          static_cast<int>(g) ==
              gens[static_cast<std::size_t>(last)].inverse_index)
        continue;
      typename Engine::Vec child = eng.apply(v, g);
      const double c = cosh_dist(child);
      if (c > cosh_limit) continue;  // beyond the expansion shell
      if (!seen.insert(child).second) continue;
      if (budget && seen.size() * Engine::node_bytes() > budget) {
        out.complete_ = false;
        return out;
      }
      const double d = std::acosh(c);
      store(child, d, static_cast<std::int64_t>(idx),
            static_cast<std::int16_t>(g));
      queue.emplace_back(std::move(child), out.dists_.size() - 1);
    }
  }
  return out;
  }
};

BallEnumeration enumerate_group_ball(const GeneratorSet& gens,
                                     const RationalVector& seed, double R,
                                     double slack) {
  if (R <= 0.0) throw std::invalid_argument("ball radius must be positive");
  if (seed.size() != static_cast<std::size_t>(gens.form()->dim()))
    throw std::invalid_argument("seed dimension mismatch");
  const Rational q_seed = gens.form()->eval(seed);
  if (q_seed >= 0)
    throw std::invalid_argument("seed must be timelike (Q(seed) < 0)");
  const double lambda2 = -static_cast<double>(q_seed);
  if (gens.integral()) {
    try {
      Int64Engine eng(gens, seed);
      return BallBuilder::walk(gens, eng, R, slack, lambda2);
    } catch (const OverflowFastRange&) {
      // fall through to the exact engine
    }
  }
  RationalEngine eng(gens, seed);
  return BallBuilder::walk(gens, eng, R, slack, lambda2);
}

double poincare_partial(const GeneratorSet& gens, const RationalVector& seed,
                        double s, double R) {
  if (s < 0.0) throw std::invalid_argument("s must be nonnegative");
  const BallEnumeration ball = enumerate_group_ball(gens, seed, R);
  double sum = 0.0;
  for (std::size_t i = 0; i < ball.size(); ++i)
    if (ball.dist(i) <= R) sum += std::exp(-s * ball.dist(i));
  return sum;
}

FitReport estimate_delta_from_sample(const GrowthSample& sample) {
  for (std::size_t i = 1; i < sample.R.size(); ++i) {
    if (!(sample.R[i] > sample.R[i - 1]))
      throw std::invalid_argument("R grid must be strictly increasing");
    if (sample.counts[i] < sample.counts[i - 1])
      throw std::invalid_argument("ball counts must be non-decreasing");
  }
  return fit_exponential_growth(sample.R, sample.counts);
}

GrowthSample ball_growth_sample(const GeneratorSet& gens,
                                const RationalVector& seed,
                                const std::vector<double>& R_grid) {
  if (R_grid.size() < 4)
    throw std::invalid_argument("need at least 4 grid points");
  const BallEnumeration ball =
      enumerate_group_ball(gens, seed, R_grid.back());
  GrowthSample sample;
  sample.R = R_grid;
  sample.counts.assign(R_grid.size(), 0);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    auto it = std::lower_bound(R_grid.begin(), R_grid.end(), ball.dist(i));
    for (std::size_t k = static_cast<std::size_t>(it - R_grid.begin());
         k < R_grid.size(); ++k)
      ++sample.counts[k];
  }
  return sample;
}

FitReport estimate_delta(const GeneratorSet& gens, const RationalVector& seed,
                         const std::vector<double>& R_grid) {
  return estimate_delta_from_sample(ball_growth_sample(gens, seed, R_grid));
}

DensityApprox ps_density_approx(const GeneratorSet& gens,
                                const HyperboloidPoint& x,
                                const RationalVector& seed, double s,
                                double R) {
  const Rational q_seed = gens.form()->eval(seed);
  if (q_seed >= 0) throw std::invalid_argument("seed must be timelike");
  const double lambda = std::sqrt(-static_cast<double>(q_seed));

  const BallEnumeration ball = enumerate_group_ball(gens, seed, R);
  DensityApprox out;
  double z = 0.0;
  for (std::size_t i = 0; i < ball.size(); ++i)
    if (ball.dist(i) <= R) z += std::exp(-s * ball.dist(i));
  if (z <= 0.0) throw std::domain_error("empty normalization sum");
  for (std::size_t i = 0; i < ball.size(); ++i) {
    if (ball.dist(i) > R) continue;
    Eigen::VectorXd pd = ball.vector_d(i) / lambda;
    const HyperboloidPoint hp(x.form(), pd);
    const double w = std::exp(-s * distance(x, hp)) / z;
    out.atoms.push_back(WeightedAtom{std::move(pd), w});
    out.total_mass += w;
  }
  return out;
}

double vector_norm(const Eigen::VectorXd& v, VectorNorm norm) {
  return norm == VectorNorm::Max ? v.cwiseAbs().maxCoeff() : v.norm();
}

bool cone_contains(const SphericalCap& cap, const Eigen::VectorXd& v) {
  const double n = v.norm();
  if (n == 0.0) return false;
  double c = v.dot(cap.axis) / n;
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c) <= cap.angle + 1e-12;
}

namespace {

template <typename Engine>
double engine_norm(const Engine& eng, const typename Engine::Vec& v,
                   VectorNorm norm) {
  if constexpr (std::is_same_v<Engine, Int64Engine>) {
    if (norm == VectorNorm::Max) {
      std::int64_t m = 0;
      for (int i = 0; i < eng.dim; ++i)
        m = std::max(m, std::abs(v.a[i]));
      return static_cast<double>(m);
    }
  }
  return vector_norm(eng.to_vecd(v), norm);
}

// Shared walk for the vector-orbit counts: full expansion to the burn-in
// depth, then monotone-norm pruning, dedup by exact vector.
template <typename Engine, typename Visit>
void vector_walk(const GeneratorSet& gens, const Engine& eng, VectorNorm norm,
                 double bound, int burn_in_depth, Visit&& visit) {
  struct WalkNode {
    typename Engine::Vec v;
    double norm_value;
    int depth;
    int last_gen;
  };
  std::unordered_set<typename Engine::Vec, typename Engine::VecHash> seen;
  std::vector<WalkNode> stack;
  const std::size_t budget = memory_budget_bytes();
  std::uint64_t visited = 0;

  seen.insert(eng.seed);
  stack.push_back(WalkNode{eng.seed, engine_norm(eng, eng.seed, norm), 0, -1});
  while (!stack.empty()) {
    WalkNode node = std::move(stack.back());
    stack.pop_back();
    visit(node.v, node.norm_value);
    ++visited;
    if (budget && seen.size() * Engine::node_bytes() > budget)
      throw PartialResultError("orbit walk exceeded the memory budget",
                               visited);
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (node.last_gen >= 0 &&
          static_cast<int>(g) ==
              gens[static_cast<std::size_t>(node.last_gen)].inverse_index)
        continue;
      typename Engine::Vec child = eng.apply(node.v, g);
      const double child_norm = engine_norm(eng, child, norm);
      if (node.depth >= burn_in_depth) {
        if (child_norm < node.norm_value) continue;
        if (child_norm >= bound) continue;
      }
      if (!seen.insert(child).second) continue;
      stack.push_back(WalkNode{std::move(child), child_norm, node.depth + 1,
                               static_cast<int>(g)});
    }
  }
}

// Runs the walk, restarting on the exact engine if the fast range is
// exceeded.  reset() must clear any accumulation done by visit.
template <typename Visit, typename Reset>
void walk_vector_orbit(const GeneratorSet& gens, const RationalVector& w0,
                       VectorNorm norm, double bound, int burn_in_depth,
                       Visit&& visit, Reset&& reset) {
  bool zero = true;
  for (const auto& x : w0)
    if (x != 0) zero = false;
  if (zero) throw std::invalid_argument("w0 must be nonzero");
  if (w0.size() != static_cast<std::size_t>(gens.form()->dim()))
    throw std::invalid_argument("w0 dimension mismatch");
  if (gens.integral()) {
    try {
      Int64Engine eng(gens, w0);
      vector_walk(gens, eng, norm, bound, burn_in_depth,
                  [&](const Int64Engine::Vec& v, double n) {
                    visit(eng.to_vecd(v), n);
                  });
      return;
    } catch (const OverflowFastRange&) {
      reset();  // discard partial tallies, redo exactly
    }
  }
  RationalEngine eng(gens, w0);
  vector_walk(gens, eng, norm, bound, burn_in_depth,
              [&](const RationalEngine::Vec& v, double n) {
                visit(eng.to_vecd(v), n);
              });
}

}  // namespace

std::uint64_t count_vector_orbit(const GeneratorSet& gens,
                                 const OrbitBallQuery& query,
                                 int burn_in_depth) {
  if (query.T <= 0.0) throw std::invalid_argument("T must be positive");
  if (query.cone &&
      (query.cone->angle <= 0.0 || query.cone->angle > M_PI + 1e-12))
    throw std::invalid_argument("cap radius must lie in (0, pi]");
  std::uint64_t count = 0;
  walk_vector_orbit(
      gens, query.w0, query.norm, query.T, burn_in_depth,
      [&](const Eigen::VectorXd& v, double n) {
        if (n >= query.T) return;
        if (query.cone && !cone_contains(*query.cone, v)) return;
        ++count;
      },
      [&] { count = 0; });
  return count;
}

CountSeries count_vector_series(const GeneratorSet& gens,
                                const RationalVector& w0, VectorNorm norm,
                                const std::vector<double>& grid,
                                const std::optional<SphericalCap>& cone,
                                int burn_in_depth) {
  if (grid.size() < 2) throw std::invalid_argument("grid needs >= 2 points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("grid must be strictly increasing");
  std::vector<std::uint64_t> buckets(grid.size(), 0);
  walk_vector_orbit(
      gens, w0, norm, grid.back(), burn_in_depth,
      [&](const Eigen::VectorXd& v, double n) {
        if (cone && !cone_contains(*cone, v)) return;
        auto it = std::upper_bound(grid.begin(), grid.end(), n);
        if (it != grid.end())
          ++buckets[static_cast<std::size_t>(it - grid.begin())];
      },
      [&] { buckets.assign(grid.size(), 0); });
  CountSeries series;
  series.T = grid;
  series.N.resize(grid.size(), 0);
  std::uint64_t running = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    running += buckets[k];
    series.N[k] = running;
  }
  return series;
}

}  // namespace orbitcount
