#pragma once

#include <cstddef>

namespace orbitcount {

// Soft cap on enumeration working memory, from ORBITCOUNT_MEM_LIMIT_MB.
// Zero means unlimited.  Read once per process.
std::size_t memory_budget_bytes();

}  // namespace orbitcount
