#pragma once

#include <cstdint>
#include <vector>

#include "fogbisim/term.hpp"

namespace fogbisim {

/// Every regular term over the store's alphabet with size <= s and variables
/// among x1..xj, each once, ordered by (size, canonical code). Throws
/// BudgetExceeded when more than `budget` candidate graphs would be built.
std::vector<TermRef> enumerate_terms(TermStore& store, std::uint32_t j, std::uint32_t s,
                                     std::uint64_t budget = 5'000'000);

/// Strict weak order used by enumerate_terms.
bool canonical_less(const TermStore& store, TermRef a, TermRef b);

}  // namespace fogbisim
