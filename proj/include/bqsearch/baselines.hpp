#pragma once

#include <cstdint>

#include "bqsearch/cost_ledger.hpp"

namespace bqsearch {

/// Grover iterations used by the cost models, ceil((π/4) sqrt(n)).
Invocations grover_iterations(std::uint64_t n);

/// Majority-boost every query to error 1/(100 n), then run Grover on top:
/// grover_iterations(n) * repetitions_for(1/(100 n), 1/10). Cost model only.
Invocations simple_search_cost(std::uint64_t n);

/// Block-recursive search with its constant normalized to one:
/// T(n) = n for n <= cutoff, else T(b) * ceil(sqrt(n / b)) + ceil(log2 n)
/// with b = ceil(log2 n)^2.
Invocations block_recursion_cost(std::uint64_t n, std::uint64_t base_cutoff = 64);

}  // namespace bqsearch
