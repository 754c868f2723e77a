#include "orbitcount/descartes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "orbitcount/memory_budget.hpp"

namespace orbitcount {

std::size_t memory_budget_bytes() {
  static const std::size_t cached = [] {
    const char* env = std::getenv("ORBITCOUNT_MEM_LIMIT_MB");
    if (!env) return std::size_t{0};
    const long mb = std::atol(env);
    return mb > 0 ? static_cast<std::size_t>(mb) * 1024 * 1024 : std::size_t{0};
  }();
  return cached;
}

int packing_target(PackingKind kind) {
  switch (kind) {
    case PackingKind::Euclidean: return 0;
    case PackingKind::Hyperbolic: return 4;
    case PackingKind::Spherical: return -4;
  }
  return 0;
}

const char* packing_name(PackingKind kind) {
  switch (kind) {
    case PackingKind::Euclidean: return "euclidean";
    case PackingKind::Hyperbolic: return "hyperbolic";
    case PackingKind::Spherical: return "spherical";
  }
  return "?";
}

std::optional<PackingKind> packing_from_name(const std::string& name) {
  if (name == "euclidean") return PackingKind::Euclidean;
  if (name == "hyperbolic") return PackingKind::Hyperbolic;
  if (name == "spherical") return PackingKind::Spherical;
  return std::nullopt;
}

BigInt descartes_form(const std::array<BigInt, 4>& c) {
  const BigInt sum = c[0] + c[1] + c[2] + c[3];
  return 2 * (c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]) -
         sum * sum;
}

DescartesQuadruple::DescartesQuadruple(std::array<BigInt, 4> curvatures,
                                       PackingKind k)
    : c(std::move(curvatures)), kind(k) {
  if (descartes_form(c) != packing_target(kind)) {
    std::ostringstream os;
    os << "quadruple " << str() << " has form value " << descartes_form(c)
       << ", expected " << packing_target(kind) << " for " << packing_name(kind)
       << " packings";
    throw std::invalid_argument(os.str());
  }
}

BigInt DescartesQuadruple::form_value() const { return descartes_form(c); }

BigInt DescartesQuadruple::coordinate_sum() const {
  return c[0] + c[1] + c[2] + c[3];
}

BigInt DescartesQuadruple::max_abs() const {
  BigInt m = abs(c[0]);
  for (int i = 1; i < 4; ++i) m = std::max(m, BigInt(abs(c[i])));
  return m;
}

std::string DescartesQuadruple::str() const {
  std::ostringstream os;
  os << "(" << c[0] << "," << c[1] << "," << c[2] << "," << c[3] << ")";
  return os.str();
}

const RationalMatrix& descartes_gram() {
  static const RationalMatrix gram = [] {
    RationalMatrix g(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g(i, j) = (i == j) ? 1 : -1;
    return g;
  }();
  return gram;
}

const RationalMatrix& swap_generator(int i) {
  static const std::array<RationalMatrix, 4> gens = [] {
    std::array<RationalMatrix, 4> out;
    for (int k = 0; k < 4; ++k) {
      RationalMatrix m = RationalMatrix::identity(4);
      for (int j = 0; j < 4; ++j) m(k, j) = (j == k) ? -1 : 2;
      out[k] = m;
    }
    return out;
  }();
  if (i < 0 || i > 3) throw std::out_of_range("generator index");
  return gens[i];
}

namespace {

inline BigInt swapped_value(const std::array<BigInt, 4>& c, int i) {
  BigInt others = -c[i];
  for (int j = 0; j < 4; ++j) others += c[j];
  return 2 * others - c[i];
}

}  // namespace

DescartesQuadruple swap_coordinate(const DescartesQuadruple& q, int i) {
  if (i < 0 || i > 3) throw std::out_of_range("swap index");
  std::array<BigInt, 4> c = q.c;
  c[i] = swapped_value(q.c, i);
  return DescartesQuadruple(std::move(c), q.kind);
}

namespace {

// One normal-form step; false when q is settled.  On the positive-sum
// side take the swap with the largest sum decrease that keeps the sum
// positive; on the negative side walk the sum up first.
bool reduce_step(std::array<BigInt, 4>& c) {
  const BigInt sum = c[0] + c[1] + c[2] + c[3];
  if (sum == 0) return false;
  int best = -1;
  BigInt best_value;
  for (int i = 0; i < 4; ++i) {
    const BigInt v = swapped_value(c, i);
    const BigInt new_sum = sum + (v - c[i]);
    if (sum > 0) {
      if (v < c[i] && new_sum > 0 && (best < 0 || new_sum < best_value)) {
        best = i;
        best_value = new_sum;
      }
    } else {
      if (v > c[i] && (best < 0 || new_sum > best_value)) {
        best = i;
        best_value = new_sum;
      }
    }
  }
  if (best < 0) return false;
  c[best] = swapped_value(c, best);
  return true;
}

}  // namespace

DescartesQuadruple root_reduce(const DescartesQuadruple& q) {
  std::array<BigInt, 4> c = q.c;
  for (std::uint64_t it = 0; it < 1000000; ++it) {
    if (!reduce_step(c)) {
      std::sort(c.begin(), c.end());
      return DescartesQuadruple(std::move(c), q.kind);
    }
  }
  throw std::domain_error(
      "root reduction did not settle within 10^6 steps; check the input "
      "quadruple");
}

bool is_root_quadruple(const DescartesQuadruple& q) {
  std::array<BigInt, 4> c = q.c;
  return !reduce_step(c);
}

namespace {

struct QuadKey {
  std::array<std::int64_t, 4> v;
  bool operator==(const QuadKey&) const = default;
};

struct QuadKeyHash {
  std::size_t operator()(const QuadKey& k) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto x : k.v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return h;
  }
};

std::optional<QuadKey> small_key(const std::array<BigInt, 4>& c) {
  QuadKey k{};
  for (int i = 0; i < 4; ++i) {
    if (c[i] < std::numeric_limits<std::int64_t>::min() ||
        c[i] > std::numeric_limits<std::int64_t>::max())
      return std::nullopt;
    k.v[i] = static_cast<std::int64_t>(c[i]);
  }
  return k;
}

struct Node {
  std::array<BigInt, 4> c;
  std::int8_t slot;       // coordinate written when this node was created
  std::int8_t direction;  // +1 above the root, -1 on the mirror side
  std::int8_t depth;      // saturates at 3; only depths <= 2 matter
};

constexpr std::size_t kNodeBytes = sizeof(Node) + 4 * 32;

// Core walk shared by the streaming and the bucketing paths.
class PackingWalk {
 public:
  PackingWalk(const DescartesQuadruple& root, BigInt bound)
      : root_(root), bound_(std::move(bound)) {
    if (!is_root_quadruple(root))
      throw std::invalid_argument("enumeration requires a root-reduced "
                                  "quadruple; call root_reduce first");
  }

  // Children of the root, with root-level duplicate suppression.
  std::vector<Node> seeds() {
    std::vector<Node> out;
    std::unordered_set<QuadKey, QuadKeyHash> seen;
    if (auto k = small_key(root_.c)) seen.insert(*k);
    for (int i = 0; i < 4; ++i) {
      const BigInt v = swapped_value(root_.c, i);
      if (v == root_.c[i]) continue;
      const std::int8_t dir = v > root_.c[i] ? std::int8_t{1} : std::int8_t{-1};
      if (dir > 0 && v >= bound_) continue;
      if (dir < 0 && v <= -bound_) continue;
      std::array<BigInt, 4> c = root_.c;
      c[i] = v;
      if (auto k = small_key(c); k && !seen.insert(*k).second) continue;
      out.push_back(Node{std::move(c), static_cast<std::int8_t>(i), dir, 1});
    }
    return out;
  }

  // Depth-first expansion of one seed's subtree.  visit receives the
  // quadruple and the slot holding its newly written curvature.
  template <typename Visit>
  void walk_subtree(Node seed, Visit&& visit, std::size_t* peak_stack,
                    std::uint64_t* emitted) {
    std::vector<Node> stack;
    stack.push_back(std::move(seed));
    std::unordered_set<QuadKey, QuadKeyHash> shallow;
    const std::size_t budget = memory_budget_bytes();
    while (!stack.empty()) {
      *peak_stack = std::max(*peak_stack, stack.size());
      if (budget && stack.size() * kNodeBytes > budget)
        throw PartialResultError("enumeration frontier exceeded the memory "
                                 "budget",
                                 *emitted);
      Node node = std::move(stack.back());
      stack.pop_back();
      if (max_abs_below_bound(node.c)) {
        ++*emitted;
        visit(node.c, node.slot);
      }
      for (int i = 0; i < 4; ++i) {
        const BigInt v = swapped_value(node.c, i);
        if (node.direction > 0) {
          if (v <= node.c[i] || v >= bound_) continue;
        } else {
          if (v >= node.c[i] || v <= -bound_) continue;
        }
        std::array<BigInt, 4> c = node.c;
        c[i] = v;
        if (node.depth < 2) {
          if (auto k = small_key(c); k && !shallow.insert(*k).second) continue;
        }
        stack.push_back(Node{std::move(c), static_cast<std::int8_t>(i),
                             node.direction,
                             static_cast<std::int8_t>(
                                 std::min<int>(node.depth + 1, 3))});
      }
    }
  }

  bool max_abs_below_bound(const std::array<BigInt, 4>& c) const {
    for (const auto& x : c)
      if (abs(x) >= bound_) return false;
    return true;
  }

  const DescartesQuadruple& root() const { return root_; }
  const BigInt& bound() const { return bound_; }

 private:
  DescartesQuadruple root_;
  BigInt bound_;
};

}  // namespace

EnumerationStats enumerate_packing(const DescartesQuadruple& root,
                                   const BigInt& bound,
                                   const QuadrupleSink& emit) {
  EnumerationStats stats;
  PackingWalk walk(root, bound);
  for (Node& seed : walk.seeds()) {
    walk.walk_subtree(
        std::move(seed),
        [&](const std::array<BigInt, 4>& c, int slot) { emit(c, c[slot]); },
        &stats.peak_stack, &stats.emitted);
  }
  return stats;
}

std::uint64_t count_circles(const DescartesQuadruple& root, const BigInt& T) {
  std::uint64_t count = 0;
  for (const auto& c : root.c)
    if (abs(c) < T) ++count;
  EnumerationStats stats =
      enumerate_packing(root, T, [](const std::array<BigInt, 4>&,
                                    const BigInt&) {});
  return count + stats.emitted;
}

CountSeries count_packing_series(const DescartesQuadruple& root,
                                 const std::vector<double>& grid, int threads,
                                 EnumerationStats* stats_out) {
  if (grid.size() < 2) throw std::invalid_argument("grid needs >= 2 points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("grid must be strictly increasing");
  BigInt bound = BigInt(static_cast<long long>(std::ceil(grid.back())));

  // Bucket b_k counts emissions whose quadruple max-abs first dips below
  // grid[k]; prefix sums then give N(grid[k]).
  auto bucket_of = [&](const BigInt& maxabs) -> std::ptrdiff_t {
    const double m = static_cast<double>(maxabs);
    auto it = std::upper_bound(grid.begin(), grid.end(), m);
    if (it == grid.end()) return -1;
    return it - grid.begin();
  };

  PackingWalk walk(root, bound);
  std::vector<Node> seeds = walk.seeds();
  std::vector<std::uint64_t> buckets(grid.size(), 0);

  EnumerationStats stats;
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(seeds.size())));
  if (workers <= 1) {
    for (Node& seed : seeds) {
      walk.walk_subtree(
          std::move(seed),
          [&](const std::array<BigInt, 4>& c, int) {
            BigInt m = abs(c[0]);
            for (int i = 1; i < 4; ++i) m = std::max(m, BigInt(abs(c[i])));
            const std::ptrdiff_t b = bucket_of(m);
            if (b >= 0) ++buckets[static_cast<std::size_t>(b)];
          },
          &stats.peak_stack, &stats.emitted);
    }
  } else {
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        std::vector<std::uint64_t> local(grid.size(), 0);
        std::size_t local_peak = 0;
        std::uint64_t local_emitted = 0;
        try {
          for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= seeds.size()) break;
            walk.walk_subtree(
                std::move(seeds[idx]),
                [&](const std::array<BigInt, 4>& c, int) {
                  BigInt m = abs(c[0]);
                  for (int i = 1; i < 4; ++i)
                    m = std::max(m, BigInt(abs(c[i])));
                  const std::ptrdiff_t b = bucket_of(m);
                  if (b >= 0) ++local[static_cast<std::size_t>(b)];
                },
                &local_peak, &local_emitted);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
        std::lock_guard<std::mutex> lock(mu);
        for (std::size_t k = 0; k < grid.size(); ++k) buckets[k] += local[k];
        stats.peak_stack += local_peak;
        stats.emitted += local_emitted;
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  CountSeries series;
  series.T = grid;
  series.N.resize(grid.size(), 0);
  std::uint64_t running = 0;
  // Root entries enter each N(T_k) by their own size.
  std::vector<std::uint64_t> root_entries(grid.size(), 0);
  for (const auto& c : root.c) {
    const std::ptrdiff_t b = bucket_of(abs(c));
    if (b >= 0) ++root_entries[static_cast<std::size_t>(b)];
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    running += buckets[k] + root_entries[k];
    series.N[k] = running;
  }
  if (stats_out) *stats_out = stats;
  return series;
}

DescartesCompletion descartes_complete(const BigInt& a, const BigInt& b,
                                       const BigInt& c, PackingKind kind) {
  // Q(a,b,c,x) = q: x^2 - 2(a+b+c)x + (2(a^2+b^2+c^2) - (a+b+c)^2 - q) = 0,
  // i.e. x = (a+b+c) +/- sqrt(4(ab+bc+ca) + q).
  DescartesCompletion out;
  const BigInt s = a + b + c;
  const BigInt disc = 4 * (a * b + b * c + c * a) + packing_target(kind);
  if (disc < 0) return out;
  out.real = true;
  if (auto r = perfect_sqrt(disc)) {
    out.x1 = s - *r;
    out.x2 = s + *r;
  }
  return out;
}

std::array<BigInt, 4> parse_quadruple(const std::string& text) {
  std::array<BigInt, 4> c;
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 4) throw std::invalid_argument("expected 4 curvatures");
    // Trim spaces.
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos)
      throw std::invalid_argument("empty curvature field");
    try {
      c[i++] = BigInt(item.substr(first, last - first + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad integer '" + item + "'");
    }
  }
  if (i != 4) throw std::invalid_argument("expected 4 curvatures");
  return c;
}

}  // namespace orbitcount
