#include "bqsearch/error_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bqsearch {

namespace {

constexpr int kMaxRepetitions = 1'000'001;

}  // namespace

double majority_prob(int r, double p) {
    if (r < 1 || r % 2 == 0)
        throw std::invalid_argument("majority needs an odd positive run count, got " +
                                    std::to_string(r));
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("probability " + std::to_string(p) + " outside [0, 1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;

    // Each term C(r, k) p^k q^(r-k) is evaluated in log space in extended
    // precision; no factorials, no underflow for moderate r.
    const long double lp = std::log(static_cast<long double>(p));
    const long double lq = std::log1p(-static_cast<long double>(p));
    const long double lr = std::lgamma(static_cast<long double>(r) + 1.0L);
    const int half = (r + 1) / 2;
    long double sum = 0.0L;
    // Summed from the tail end; for p < 1/2 those are the small terms.
    for (int k = r; k >= half; --k) {
        const long double lchoose = lr - std::lgamma(static_cast<long double>(k) + 1.0L) -
                                    std::lgamma(static_cast<long double>(r - k) + 1.0L);
        sum += std::exp(lchoose + k * lp + (r - k) * lq);
    }
    return static_cast<double>(std::min(sum, 1.0L));
}

int repetitions_for(double eps, double p_fail) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("error budget " + std::to_string(eps) + " outside (0, 1)");
    if (!(p_fail >= 0.0 && p_fail < 0.5))
        throw std::invalid_argument("per-run error " + std::to_string(p_fail) +
                                    " must lie in [0, 1/2)");
    // Majority fails exactly when at least (r+1)/2 runs err.
    for (int r = 1; r <= kMaxRepetitions; r += 2)
        if (majority_prob(r, p_fail) <= eps) return r;
    throw std::runtime_error("error budget unreachable within repetition cap");
}

RoundSchedule schedule_for_round(int k) {
    if (k < 1) throw std::invalid_argument("round index must be >= 1");
    if (k > 1000) throw std::invalid_argument("round index too large");
    RoundSchedule s;
    s.k = k;
    s.eps = std::ldexp(1.0, -(k + 5));
    s.repetitions = repetitions_for(s.eps, kPromiseBad);
    return s;
}

StructuredState apply_error_reduction(const StructuredState& state, int k,
                                      const ProblemInstance& instance, CostLedger& ledger) {
    if (k != state.round)
        throw std::invalid_argument("error reduction for round " + std::to_string(k) +
                                    " applied to a round-" + std::to_string(state.round) +
                                    " state");
    const int r = schedule_for_round(k).repetitions;

    // a^2 = P[majority says 1], 1 - a^2 = P[majority of 1-p runs says 1];
    // both computed directly to avoid cancellation.
    std::vector<double> keep(instance.num_classes()), drop(instance.num_classes());
    for (std::size_t id = 0; id < instance.num_classes(); ++id) {
        const double p = instance.cls(id).p;
        keep[id] = std::sqrt(majority_prob(r, p));
        drop[id] = std::sqrt(majority_prob(r, 1.0 - p));
    }

    StructuredState out;
    out.round = k + 1;
    out.branches.reserve(state.branches.size() + instance.num_classes());
    std::vector<Branch> pushed_back;
    for (const auto& b : state.branches) {
        if (!b.flag) {
            out.branches.push_back(b);
            continue;
        }
        out.branches.push_back({b.class_id, true, b.amplitude * keep[b.class_id]});
        if (drop[b.class_id] > 0.0)
            pushed_back.push_back({b.class_id, false, b.amplitude * drop[b.class_id]});
    }
    out.branches.insert(out.branches.end(), pushed_back.begin(), pushed_back.end());
    ledger.charge_error_reduction(static_cast<Invocations>(r));
    return out;
}

}  // namespace bqsearch
