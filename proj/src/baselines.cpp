#include "bqsearch/baselines.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bqsearch/error_reduction.hpp"

namespace bqsearch {

namespace {

std::uint64_t ceil_log2(std::uint64_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

// Smallest s with s^2 * b >= n.
std::uint64_t ceil_sqrt_ratio(std::uint64_t n, std::uint64_t b) {
    auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n) / static_cast<double>(b)));
    while (s > 0 && (s - 1) * (s - 1) * b >= n) --s;
    while (s * s * b < n) ++s;
    return s;
}

}  // namespace

Invocations grover_iterations(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    return static_cast<Invocations>(
        std::ceil(std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(n))));
}

Invocations simple_search_cost(std::uint64_t n) {
    if (n < 2) throw std::invalid_argument("simple search cost needs n >= 2");
    const int r = repetitions_for(1.0 / (100.0 * static_cast<double>(n)), 0.1);
    return grover_iterations(n) * static_cast<Invocations>(r);
}

Invocations block_recursion_cost(std::uint64_t n, std::uint64_t base_cutoff) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    if (base_cutoff < 36)
        throw std::invalid_argument("base cutoff below 36 does not shrink the problem");
    if (n <= base_cutoff) return n;
    const std::uint64_t lg = ceil_log2(n);
    const std::uint64_t b = lg * lg;
    return block_recursion_cost(b, base_cutoff) * ceil_sqrt_ratio(n, b) + lg;
}

}  // namespace bqsearch
