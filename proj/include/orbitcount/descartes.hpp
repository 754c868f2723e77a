#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitcount/exact.hpp"

namespace orbitcount {

// Exact-integer Descartes quadruples and the pruned orbit enumeration
// behind the circle counts N(T).  Everything here is integer arithmetic;
// the form value Q(c) = 2*sum(c_i^2) - (sum c_i)^2 is preserved exactly
// by every operation.

enum class PackingKind { Euclidean, Hyperbolic, Spherical };

// q(E) = 0, q(H) = 4, q(S) = -4.
int packing_target(PackingKind kind);
const char* packing_name(PackingKind kind);
std::optional<PackingKind> packing_from_name(const std::string& name);

struct DescartesQuadruple {
  std::array<BigInt, 4> c;
  PackingKind kind;

  DescartesQuadruple(std::array<BigInt, 4> curvatures, PackingKind k);

  BigInt form_value() const;
  BigInt coordinate_sum() const;
  BigInt max_abs() const;
  bool operator==(const DescartesQuadruple& rhs) const {
    return c == rhs.c && kind == rhs.kind;
  }
  std::string str() const;
};

BigInt descartes_form(const std::array<BigInt, 4>& c);

// The four curvature-swap reflections as exact integer matrices, indexed
// 0..3.  Involutive and Gram-preserving, both exactly.
const RationalMatrix& swap_generator(int i);
const RationalMatrix& descartes_gram();

// Replace coordinate i by twice the sum of the others minus itself.
DescartesQuadruple swap_coordinate(const DescartesQuadruple& q, int i);

// Normal form: walk the coordinate sum down (keeping it positive) while a
// swap strictly decreases it; quadruples reached on the negative-sum side
// first walk the sum up.  Result is sorted ascending.  The iteration
// guard flags inputs that never settle.
DescartesQuadruple root_reduce(const DescartesQuadruple& q);
bool is_root_quadruple(const DescartesQuadruple& q);

// Raised when an enumeration hits the memory budget; carries the tally of
// emissions made before the abort.
class PartialResultError : public std::runtime_error {
 public:
  PartialResultError(std::string what, std::uint64_t count)
      : std::runtime_error(std::move(what)), count_so_far(count) {}
  std::uint64_t count_so_far;
};

struct EnumerationStats {
  std::uint64_t emitted = 0;
  std::size_t peak_stack = 0;
};

// Called once per orbit quadruple with max-abs below the bound (the root
// itself is not emitted): the quadruple and the curvature it introduced.
using QuadrupleSink =
    std::function<void(const std::array<BigInt, 4>&, const BigInt&)>;

// Pruned depth-first orbit walk from a root quadruple.  Children are
// explored only when the swapped coordinate moves strictly away from the
// root (up on the positive-sum side, down past the root on the mirror
// side), which visits each orbit quadruple exactly once; a small seen-set
// at depth <= 2 guards the root's symmetric collisions.
EnumerationStats enumerate_packing(const DescartesQuadruple& root,
                                   const BigInt& bound,
                                   const QuadrupleSink& emit);

// Number of distinct circles of |curvature| < T: every root entry counts
// (bounding circles included), plus one per emitted quadruple.
std::uint64_t count_circles(const DescartesQuadruple& root, const BigInt& T);

struct CountSeries {
  std::vector<double> T;
  std::vector<std::uint64_t> N;
};

// One enumeration pass bucketed over a strictly increasing grid.
// N(T_k) counts circles discoverable below T_k, i.e. emissions whose
// whole quadruple stays below T_k plus root entries.  threads > 1 splits
// the orbit tree across a worker pool; the counts do not depend on the
// schedule.
CountSeries count_packing_series(const DescartesQuadruple& root,
                                 const std::vector<double>& grid,
                                 int threads = 1,
                                 EnumerationStats* stats = nullptr);

struct DescartesCompletion {
  // Roots of Q(a, b, c, x) = q(kind) in x, ascending; empty when the
  // discriminant is negative, nullopt entries when irrational.
  bool real = false;
  std::optional<BigInt> x1, x2;
};

DescartesCompletion descartes_complete(const BigInt& a, const BigInt& b,
                                       const BigInt& c, PackingKind kind);

// Text form "c1,c2,c3,c4"; throws std::invalid_argument on bad input.
std::array<BigInt, 4> parse_quadruple(const std::string& text);

}  // namespace orbitcount
