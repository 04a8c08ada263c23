#pragma once

#include "bqsearch/cost_ledger.hpp"
#include "bqsearch/model.hpp"

namespace bqsearch {

/// Net effect of one amplitude-amplification step on the two flag sectors:
/// flag-1 amplitudes scale by sin(3θ)/sin(θ), flag-0 amplitudes by
/// cos(3θ)/cos(θ). Both are evaluated through their polynomial forms in
/// sin²θ, which stay finite at θ = 0 and θ = π/2.
struct AmplificationFactors {
    double g1 = 3.0;
    double g0 = 1.0;
    double theta = 0.0;
};

/// Throws std::domain_error unless 0 <= theta <= π/2.
AmplificationFactors amplification_factors(double theta);

/// Same factors from the flag-1 probability w = sin²θ directly.
AmplificationFactors amplification_factors_from_mass(double flag1_probability);

/// Applies G = -A S0 A^-1 S1 (up to its global sign) to a state of the form
/// A|0>. θ is recomputed from the state. Records one amplification on the
/// ledger, which triples the cost of the algorithm built so far.
StructuredState apply_amplification(const StructuredState& state, const ProblemInstance& instance,
                                    CostLedger& ledger);

}  // namespace bqsearch
