#include "bqsearch/amplification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bqsearch {

AmplificationFactors amplification_factors_from_mass(double w) {
    if (!(w >= 0.0 && w <= 1.0))
        throw std::domain_error("flag-1 probability " + std::to_string(w) + " outside [0, 1]");
    AmplificationFactors f;
    f.g1 = 3.0 - 4.0 * w;
    f.g0 = 1.0 - 4.0 * w;
    f.theta = std::asin(std::sqrt(w));
    return f;
}

AmplificationFactors amplification_factors(double theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2))
        throw std::domain_error("angle " + std::to_string(theta) + " outside [0, pi/2]");
    const double s = std::sin(theta);
    AmplificationFactors f = amplification_factors_from_mass(std::min(1.0, s * s));
    f.theta = theta;
    return f;
}

StructuredState apply_amplification(const StructuredState& state, const ProblemInstance& instance,
                                    CostLedger& ledger) {
    const FlagMasses masses = flag_masses(state, instance);
    const double total = masses.flag1 + masses.flag0;
    if (!(total > 0.0)) throw std::invalid_argument("cannot amplify a zero state");

    // sin²θ relative to the actual norm, so rounding drift is not amplified.
    const auto f = amplification_factors_from_mass(std::clamp(masses.flag1 / total, 0.0, 1.0));

    StructuredState out = state;
    for (auto& b : out.branches) b.amplitude *= b.flag ? f.g1 : f.g0;
    ledger.charge_amplification();
    return out;
}

}  // namespace bqsearch
