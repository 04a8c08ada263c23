#pragma once

#include "bqsearch/cost_ledger.hpp"
#include "bqsearch/model.hpp"

namespace bqsearch {

/// P[Binomial(r, p) >= (r + 1) / 2]: probability that the majority of r
/// independent runs outputs 1. r must be odd; throws std::invalid_argument
/// otherwise or when p is outside [0, 1].
double majority_prob(int r, double p);

/// Smallest odd r whose majority vote errs with probability at most eps when
/// each run errs with probability p_fail. Requires 0 < eps < 1 and
/// 0 <= p_fail < 1/2.
int repetitions_for(double eps, double p_fail);

struct RoundSchedule {
    int k = 1;
    double eps = 0.0;  // 2^-(k+5)
    int repetitions = 1;
};

/// Error budget and majority size for round k >= 1, sized for the worst
/// promise case p_fail = 1/10.
RoundSchedule schedule_for_round(int k);

/// E_k: conditional on flag 1, majority-votes r_k fresh runs of F_j into a
/// new flag qubit. Each flag-1 branch keeps amplitude * a and spawns a flag-0
/// branch with amplitude * sqrt(1 - a^2), where a^2 = majority_prob(r_k, p).
/// Flag-0 branches pass through. `k` must equal state.round; the returned
/// state is at round k + 1.
StructuredState apply_error_reduction(const StructuredState& state, int k,
                                      const ProblemInstance& instance, CostLedger& ledger);

}  // namespace bqsearch
