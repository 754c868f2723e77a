#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "orbitcount/descartes.hpp"

namespace orbitcount {

// Invariant suites runnable from the CLI.  Each suite samples with its
// own seeded RNG and reports the first violated property.

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;  // failure description or a short summary
};

std::vector<std::string> verify_suite_names();
SuiteResult run_verify_suite(const std::string& name, std::uint64_t seed);
std::vector<SuiteResult> run_all_verify_suites(std::uint64_t seed);

// Reference enumeration for the equivalence checks: hash-set BFS over
// reduced words truncated at max-abs < T, independent of the pruned walk.
// Returns every orbit quadruple within the bound, the root included,
// sorted.  Intended for small T.
std::vector<std::array<BigInt, 4>> reference_packing_ball(
    const DescartesQuadruple& root, const BigInt& T);

// Multiset equality of pruned emissions (plus the root) against the
// reference ball.
bool packing_enumeration_matches_reference(const DescartesQuadruple& root,
                                           const BigInt& T,
                                           std::string* detail = nullptr);

}  // namespace orbitcount
