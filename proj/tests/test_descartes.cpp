#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "orbitcount/descartes.hpp"
#include "orbitcount/verify.hpp"

using namespace orbitcount;

namespace {
DescartesQuadruple euclid(std::array<BigInt, 4> c) {
  return DescartesQuadruple(std::move(c), PackingKind::Euclidean);
}
DescartesQuadruple hyper(std::array<BigInt, 4> c) {
  return DescartesQuadruple(std::move(c), PackingKind::Hyperbolic);
}

std::multiset<BigInt> new_curvatures(const DescartesQuadruple& root,
                                     long bound) {
  std::multiset<BigInt> out;
  enumerate_packing(root, BigInt(bound),
                    [&](const std::array<BigInt, 4>&, const BigInt& c) {
                      out.insert(c);
                    });
  return out;
}
}  // namespace

TEST_CASE("kind targets") {
  CHECK(packing_target(PackingKind::Euclidean) == 0);
  CHECK(packing_target(PackingKind::Hyperbolic) == 4);
  CHECK(packing_target(PackingKind::Spherical) == -4);
  CHECK(packing_from_name("euclidean") == PackingKind::Euclidean);
  CHECK(!packing_from_name("parabolic").has_value());
}

TEST_CASE("quadruple validation") {
  CHECK_NOTHROW(euclid({-1, 2, 2, 3}));
  CHECK_NOTHROW(hyper({0, 0, 0, 2}));
  CHECK_THROWS_AS(hyper({-1, 2, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(euclid({0, 0, 0, 2}), std::invalid_argument);
}

TEST_CASE("swap action") {
  const DescartesQuadruple q = euclid({-1, 2, 2, 3});
  CHECK(swap_coordinate(q, 0).c == std::array<BigInt, 4>{15, 2, 2, 3});
  CHECK(swap_coordinate(q, 1).c == std::array<BigInt, 4>{-1, 6, 2, 3});
  CHECK(swap_coordinate(q, 3).c == std::array<BigInt, 4>{-1, 2, 2, 3});

  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> pick(0, 3);
  DescartesQuadruple walk = hyper({0, 0, 1, 3});
  for (int i = 0; i < 200; ++i) {
    const int slot = pick(rng);
    const DescartesQuadruple twice =
        swap_coordinate(swap_coordinate(walk, slot), slot);
    CHECK(twice.c == walk.c);
    walk = swap_coordinate(walk, slot);
    CHECK(walk.form_value() == 4);  // exact preservation along the walk
  }
}

TEST_CASE("generator matrices are exact involutions preserving the gram") {
  const RationalMatrix& gram = descartes_gram();
  for (int i = 0; i < 4; ++i) {
    const RationalMatrix& s = swap_generator(i);
    CHECK((s * s).is_identity());
    CHECK(s.transposed() * gram * s == gram);
  }
}

TEST_CASE("row action equals the coordinate swap") {
  for (int i = 0; i < 4; ++i) {
    BigIntVector w{-1, 2, 2, 3};
    const BigIntVector moved = row_times_matrix(w, swap_generator(i).transposed());
    const auto expect = swap_coordinate(euclid({-1, 2, 2, 3}), i).c;
    for (int j = 0; j < 4; ++j) CHECK(moved[j] == expect[j]);
  }
}

TEST_CASE("root reduction") {
  CHECK(root_reduce(euclid({15, 2, 2, 3})).c ==
        std::array<BigInt, 4>{-1, 2, 2, 3});
  CHECK(root_reduce(euclid({-1, 2, 2, 3})).c ==
        std::array<BigInt, 4>{-1, 2, 2, 3});
  CHECK(root_reduce(hyper({0, 0, 3, 5})).c ==
        std::array<BigInt, 4>{0, 0, 1, 3});
  CHECK(root_reduce(hyper({0, 0, 0, 2})).c ==
        std::array<BigInt, 4>{0, 0, 0, 2});
  // Mirror-side input walks back up to the same representative.
  CHECK(root_reduce(hyper({0, 0, 0, -2})).c ==
        std::array<BigInt, 4>{0, 0, 0, 2});
  CHECK(root_reduce(hyper({-4, 0, 0, -2})).c ==
        std::array<BigInt, 4>{0, 0, 0, 2});
  CHECK(is_root_quadruple(euclid({-1, 2, 2, 3})));
  CHECK(!is_root_quadruple(euclid({15, 2, 2, 3})));
}

TEST_CASE("enumeration examples") {
  const DescartesQuadruple root = euclid({-1, 2, 2, 3});
  CHECK(new_curvatures(root, 7) == std::multiset<BigInt>{6, 6});
  CHECK(new_curvatures(root, 12) == std::multiset<BigInt>{6, 6, 11, 11});
  CHECK(new_curvatures(root, 3).empty());
  CHECK_THROWS_AS(enumerate_packing(euclid({15, 2, 2, 3}), BigInt(100),
                                    [](const auto&, const auto&) {}),
                  std::invalid_argument);
}

TEST_CASE("circle counts") {
  const DescartesQuadruple root = euclid({-1, 2, 2, 3});
  CHECK(count_circles(root, BigInt(4)) == 4);
  CHECK(count_circles(root, BigInt(12)) == 8);

  std::uint64_t prev = 0;
  for (long t : {5L, 10L, 20L, 40L, 80L, 160L}) {
    const std::uint64_t n = count_circles(root, BigInt(t));
    CHECK(n >= prev);
    prev = n;
  }
}

TEST_CASE("count is invariant under permuting the root") {
  const std::array<BigInt, 4> base{-1, 2, 2, 3};
  std::array<BigInt, 4> perm = base;
  std::sort(perm.begin(), perm.end());
  std::set<std::uint64_t> counts;
  do {
    counts.insert(count_circles(euclid(perm), BigInt(50)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(counts.size() == 1);
}

TEST_CASE("pruned enumeration equals the reference BFS") {
  for (long bound : {50L, 200L, 1000L}) {
    std::string detail;
    CHECK_MESSAGE(packing_enumeration_matches_reference(
                      euclid({-1, 2, 2, 3}), BigInt(bound), &detail),
                  detail);
    CHECK_MESSAGE(packing_enumeration_matches_reference(
                      hyper({0, 0, 0, 2}), BigInt(bound), &detail),
                  detail);
  }
  // A second hyperbolic orbit with a nontrivial mirror side.
  std::string detail;
  CHECK_MESSAGE(packing_enumeration_matches_reference(hyper({0, 0, 1, 3}),
                                                      BigInt(400), &detail),
                detail);
}

TEST_CASE("every emission satisfies the form constraint exactly") {
  for (auto root : {euclid({-1, 2, 2, 3}), hyper({0, 0, 0, 2})}) {
    const BigInt target = packing_target(root.kind);
    std::uint64_t violations = 0;
    enumerate_packing(root, BigInt(2000),
                      [&](const std::array<BigInt, 4>& c, const BigInt&) {
                        if (descartes_form(c) != target) ++violations;
                      });
    CHECK(violations == 0);
  }
}

TEST_CASE("series bucketing is consistent with per-bound counts") {
  const DescartesQuadruple root = euclid({-1, 2, 2, 3});
  const std::vector<double> grid{10, 30, 100, 300, 1000, 3000, 10000, 20000};
  const CountSeries series = count_packing_series(root, grid);
  REQUIRE(series.N.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(series.N[i] ==
          count_circles(root, BigInt(static_cast<long>(grid[i]))));
  }
  // Doubling resolution leaves shared grid points identical.
  std::vector<double> fine;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    fine.push_back(grid[i]);
    fine.push_back(std::sqrt(grid[i] * grid[i + 1]));
  }
  fine.push_back(grid.back());
  const CountSeries series2 = count_packing_series(root, fine);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(series2.N[2 * i] == series.N[i]);
}

TEST_CASE("threaded series equals single-threaded") {
  const DescartesQuadruple root = hyper({0, 0, 0, 2});
  const std::vector<double> grid{10, 100, 1000, 10000, 30000,
                                 50000, 70000, 100000};
  const CountSeries one = count_packing_series(root, grid, 1);
  const CountSeries four = count_packing_series(root, grid, 4);
  CHECK(one.N == four.N);
}

TEST_CASE("descartes completion") {
  SUBCASE("examples") {
    const auto h1 = descartes_complete(0, 0, 3, PackingKind::Hyperbolic);
    REQUIRE(h1.x1.has_value());
    CHECK(*h1.x1 == 1);
    CHECK(*h1.x2 == 5);
    const auto h2 = descartes_complete(0, 0, 0, PackingKind::Hyperbolic);
    CHECK(*h2.x1 == -2);
    CHECK(*h2.x2 == 2);
    const auto e = descartes_complete(2, 2, 3, PackingKind::Euclidean);
    CHECK(*e.x1 == -1);
    CHECK(*e.x2 == 15);
  }

  SUBCASE("negative discriminant") {
    const auto none = descartes_complete(1, -1, 0, PackingKind::Spherical);
    CHECK(!none.real);
    CHECK(!none.x1.has_value());
  }

  SUBCASE("irrational roots flagged") {
    const auto irr = descartes_complete(1, 1, 2, PackingKind::Euclidean);
    CHECK(irr.real);  // disc = 4*(1+2+2) = 20, not a square
    CHECK(!irr.x1.has_value());
  }

  SUBCASE("swap-pair law on random quadruples") {
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<int> small(-6, 6);
    int found = 0;
    for (int tries = 0; tries < 20000 && found < 100; ++tries) {
      const BigInt a = small(rng), b = small(rng), c = small(rng);
      for (auto kind : {PackingKind::Euclidean, PackingKind::Hyperbolic,
                        PackingKind::Spherical}) {
        const auto comp = descartes_complete(a, b, c, kind);
        if (!comp.x1) continue;
        const DescartesQuadruple q({a, b, c, *comp.x1}, kind);
        CHECK(swap_coordinate(q, 3).c[3] == *comp.x2);
        CHECK(*comp.x1 + *comp.x2 == 2 * (a + b + c));
        ++found;
      }
    }
    CHECK(found >= 100);
  }
}

TEST_CASE("quadruple text form") {
  const auto c = parse_quadruple("-1, 2,2 ,3");
  CHECK(c == std::array<BigInt, 4>{-1, 2, 2, 3});
  CHECK_THROWS_AS(parse_quadruple("1,2,3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_quadruple("1,2,3,x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_quadruple("1,2,3,4,5"), std::invalid_argument);
}
