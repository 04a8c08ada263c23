#include "bqsearch/driver.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "bqsearch/amplification.hpp"
#include "bqsearch/error_reduction.hpp"

namespace bqsearch {

namespace {

Invocations checked_mul(Invocations a, Invocations b) {
    if (b != 0 && a > UINT64_MAX / b) throw std::overflow_error("invocation count overflows");
    return a * b;
}

Invocations checked_add(Invocations a, Invocations b) {
    if (a > UINT64_MAX - b) throw std::overflow_error("invocation count overflows");
    return a + b;
}

}  // namespace

int ceil_log9(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    int l = 0;
    std::uint64_t power = 1;
    while (power < n) {
        ++l;
        if (power > UINT64_MAX / 9) break;
        power *= 9;
    }
    return l;
}

int search_block_count(std::uint64_t n) { return std::max(1, ceil_log9(n)); }

void advance_round(BuiltState& built, const ProblemInstance& instance) {
    const int k = built.state.round;
    built.state = apply_amplification(built.state, instance, built.ledger);
    built.state = apply_error_reduction(built.state, k, instance, built.ledger);
}

BuiltState build_state(const ProblemInstance& instance, int rounds) {
    if (rounds < 0) throw std::invalid_argument("round count must be nonnegative");
    BuiltState built{init_state(instance), {}};
    built.ledger.charge_base();
    for (int i = 0; i < rounds; ++i) advance_round(built, instance);
    return built;
}

Invocations analytic_cost(int rounds) {
    if (rounds < 0) throw std::invalid_argument("round count must be nonnegative");
    Invocations c = 1;
    for (int k = 1; k <= rounds; ++k)
        c = checked_add(checked_mul(3, c),
                        static_cast<Invocations>(schedule_for_round(k).repetitions));
    return c;
}

int verification_repetitions(std::uint64_t n) {
    const double blocks = static_cast<double>(ceil_log9(n)) + 1.0;
    return repetitions_for(1.0 / (100.0 * 1000.0 * blocks), kPromiseBad);
}

std::vector<CurveRow> exact_success_curve(const ProblemInstance& instance, int m_max) {
    if (m_max < 0) throw std::invalid_argument("m_max must be nonnegative");
    std::vector<CurveRow> rows;
    BuiltState built = build_state(instance, 0);
    for (int m = 0; m <= m_max; ++m) {
        if (m > 0) advance_round(built, instance);
        if (built.ledger.invocations() != analytic_cost(m))
            throw std::logic_error("ledger disagrees with analytic cost at m = " +
                                   std::to_string(m));
        const StateStats s = state_stats(built.state, instance);
        rows.push_back({m, s.alpha, s.beta, s.theta, s.p_solution, built.ledger.invocations()});
    }
    return rows;
}

BlockResult run_block(const StructuredState& state, const ProblemInstance& instance, int shots,
                      int verification_reps, Rng& rng) {
    if (shots < 1) throw std::invalid_argument("shots must be positive");
    if (verification_reps < 1 || verification_reps % 2 == 0)
        throw std::invalid_argument("verification needs an odd positive run count");

    std::vector<double> cumulative = class_masses(state, instance);
    for (std::size_t i = 1; i < cumulative.size(); ++i) cumulative[i] += cumulative[i - 1];
    const double total = cumulative.back();

    BlockResult result;
    result.shots = shots;
    const int majority = (verification_reps + 1) / 2;
    for (int shot = 0; shot < shots; ++shot) {
        const double u = uniform01(rng) * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t id = std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);

        const double p = instance.cls(id).p;
        int ones = 0;
        for (int run = 0; run < verification_reps; ++run) ones += bernoulli(rng, p) ? 1 : 0;
        ++result.verified;
        if (ones >= majority && !result.found_class) {
            result.found_class = id;
            result.found_shot = shot;
        }
    }
    return result;
}

SearchResult run_search(const ProblemInstance& instance, std::uint64_t seed,
                        const SearchOptions& options) {
    if (options.shots_per_m < 1) throw std::invalid_argument("shots per block must be positive");
    SearchResult result;
    result.verification_reps = verification_repetitions(instance.n());
    const auto v = static_cast<Invocations>(result.verification_reps);

    BuiltState built = build_state(instance, 0);
    const int blocks = search_block_count(instance.n());
    for (int m = 0; m < blocks; ++m) {
        if (m > 0) advance_round(built, instance);
        Rng rng(split_seed(seed, static_cast<std::uint64_t>(m)));
        const BlockResult block =
            run_block(built.state, instance, options.shots_per_m, result.verification_reps, rng);

        const Invocations c = built.ledger.invocations();
        result.total_cost = checked_add(
            result.total_cost,
            checked_add(checked_mul(static_cast<Invocations>(block.shots), c),
                        checked_mul(static_cast<Invocations>(block.verified), v)));

        const StateStats s = state_stats(built.state, instance);
        result.trace.push_back(
            {m, s.alpha, s.beta, s.theta, s.p_solution, c, block.shots, block.verified});
        if (block.found_class) {
            result.outcome = Outcome::found;
            result.found_class = block.found_class;
            return result;
        }
    }
    result.outcome = Outcome::no_solutions;
    return result;
}

Invocations full_sweep_cost(std::uint64_t n, int shots) {
    if (shots < 1) throw std::invalid_argument("shots must be positive");
    const auto v = static_cast<Invocations>(verification_repetitions(n));
    Invocations total = 0;
    for (int m = 0; m < search_block_count(n); ++m)
        total = checked_add(total, checked_mul(static_cast<Invocations>(shots),
                                               checked_add(analytic_cost(m), v)));
    return total;
}

}  // namespace bqsearch
