#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bqsearch/cost_ledger.hpp"
#include "bqsearch/model.hpp"
#include "bqsearch/random.hpp"

namespace bqsearch {

inline constexpr int kDefaultShots = 1000;

/// Smallest L with 9^L >= n.
int ceil_log9(std::uint64_t n);

/// Number of m-blocks the search loop runs, max(1, ceil(log9 n)). The floor
/// of one block keeps n = 1 searchable.
int search_block_count(std::uint64_t n);

struct BuiltState {
    StructuredState state;
    CostLedger ledger;
};

/// A_{m+1} = (E_m G_m) ... (E_1 G_1) A_1: the base state followed by `rounds`
/// amplify/reduce rounds. rounds = 0 is the base algorithm.
BuiltState build_state(const ProblemInstance& instance, int rounds);

/// Applies one amplify/reduce round in place.
void advance_round(BuiltState& built, const ProblemInstance& instance);

/// C(0) = 1, C(k) = 3 C(k-1) + r_k.
Invocations analytic_cost(int rounds);

/// Majority size for classically verifying one measured index, sized so that
/// false accepts over a whole execution stay below 1/100.
int verification_repetitions(std::uint64_t n);

struct CurveRow {
    int m = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double theta = 0.0;
    double p_solution = 0.0;
    Invocations cost = 0;
};

/// Exact statistics for m = 0..m_max. Throws std::logic_error if a ledger
/// ever disagrees with analytic_cost.
std::vector<CurveRow> exact_success_curve(const ProblemInstance& instance, int m_max);

struct BlockResult {
    std::optional<std::size_t> found_class;
    std::optional<int> found_shot;
    int shots = 0;
    int verified = 0;
};

/// One iteration of the search loop on a prepared state: `shots` samples of
/// the index register, each verified by a majority of `verification_reps`
/// runs of the sampled index's subroutine. All shots are verified; the first
/// accepted shot is reported.
BlockResult run_block(const StructuredState& state, const ProblemInstance& instance, int shots,
                      int verification_reps, Rng& rng);

struct SearchOptions {
    int shots_per_m = kDefaultShots;
};

struct TraceRow {
    int m = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double theta = 0.0;
    double p_solution = 0.0;
    Invocations cost = 0;  // C(m)
    int shots = 0;
    int verified = 0;
};

enum class Outcome { found, no_solutions };

struct SearchResult {
    Outcome outcome = Outcome::no_solutions;
    std::optional<std::size_t> found_class;
    Invocations total_cost = 0;
    int verification_reps = 0;
    std::vector<TraceRow> trace;
};

/// Full search loop. Block m draws from substream split_seed(seed, m).
SearchResult run_search(const ProblemInstance& instance, std::uint64_t seed,
                        const SearchOptions& options = {});

/// Cost of a search that runs every block: sum over m of shots * (C(m) + v(n)).
Invocations full_sweep_cost(std::uint64_t n, int shots = kDefaultShots);

}  // namespace bqsearch
