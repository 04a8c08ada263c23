#include "bqsearch/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bqsearch {

ProblemInstance::ProblemInstance(std::vector<IndexClass> classes, bool strict)
    : classes_(std::move(classes)), strict_(strict) {
    if (classes_.empty())
        throw std::invalid_argument("instance needs at least one index class");
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        const auto& c = classes_[i];
        const std::string where = "class " + std::to_string(i) + ": ";
        if (!(c.p >= 0.0 && c.p <= 1.0))
            throw std::invalid_argument(where + "probability " + std::to_string(c.p) +
                                        " outside [0, 1]");
        if (c.count == 0)
            throw std::invalid_argument(where + "count must be positive");
        if (strict_ && c.is_solution && c.p < kPromiseGood)
            throw std::invalid_argument(where + "solution probability " + std::to_string(c.p) +
                                        " violates the 9/10 promise");
        if (strict_ && !c.is_solution && c.p > kPromiseBad)
            throw std::invalid_argument(where + "non-solution probability " +
                                        std::to_string(c.p) + " violates the 1/10 promise");
        if (n_ > UINT64_MAX - c.count)
            throw std::invalid_argument("total index count overflows");
        n_ += c.count;
        if (c.is_solution) t_ += c.count;
    }
}

ProblemInstance make_instance(std::uint64_t n, std::uint64_t t, double p_good, double p_bad,
                              bool strict) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    if (t > n) throw std::invalid_argument("t exceeds n");
    std::vector<IndexClass> classes;
    if (t > 0) classes.push_back({p_good, t, true});
    if (t < n) classes.push_back({p_bad, n - t, false});
    // Probabilities of omitted classes are still validated.
    for (double p : {p_good, p_bad})
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("probability " + std::to_string(p) + " outside [0, 1]");
    return ProblemInstance(std::move(classes), strict);
}

StructuredState init_state(const ProblemInstance& instance) {
    StructuredState state;
    state.round = 1;
    const double n = static_cast<double>(instance.n());
    for (std::size_t id = 0; id < instance.num_classes(); ++id) {
        const double p = instance.cls(id).p;
        state.branches.push_back({id, true, std::sqrt(p / n)});
        if (p < 1.0) state.branches.push_back({id, false, std::sqrt((1.0 - p) / n)});
    }
    return state;
}

std::vector<FlagMasses> class_flag_masses(const StructuredState& state,
                                          const ProblemInstance& instance) {
    std::vector<FlagMasses> out(instance.num_classes());
    for (const auto& b : state.branches) {
        const double mass =
            static_cast<double>(instance.cls(b.class_id).count) * b.amplitude * b.amplitude;
        (b.flag ? out[b.class_id].flag1 : out[b.class_id].flag0) += mass;
    }
    return out;
}

std::vector<double> class_masses(const StructuredState& state, const ProblemInstance& instance) {
    auto flagged = class_flag_masses(state, instance);
    std::vector<double> out(flagged.size());
    std::transform(flagged.begin(), flagged.end(), out.begin(),
                   [](const FlagMasses& m) { return m.flag1 + m.flag0; });
    return out;
}

FlagMasses flag_masses(const StructuredState& state, const ProblemInstance& instance) {
    FlagMasses total;
    for (const auto& m : class_flag_masses(state, instance)) {
        total.flag1 += m.flag1;
        total.flag0 += m.flag0;
    }
    return total;
}

double total_mass(const StructuredState& state, const ProblemInstance& instance) {
    auto m = flag_masses(state, instance);
    return m.flag1 + m.flag0;
}

StateStats state_stats(const StructuredState& state, const ProblemInstance& instance) {
    double good1 = 0.0, bad1 = 0.0, good_all = 0.0;
    auto per_class = class_flag_masses(state, instance);
    for (std::size_t id = 0; id < per_class.size(); ++id) {
        if (instance.cls(id).is_solution) {
            good1 += per_class[id].flag1;
            good_all += per_class[id].flag1 + per_class[id].flag0;
        } else {
            bad1 += per_class[id].flag1;
        }
    }
    StateStats s;
    s.alpha = std::sqrt(good1);
    s.beta = std::sqrt(bad1);
    s.theta = std::asin(std::sqrt(std::clamp(good1 + bad1, 0.0, 1.0)));
    s.p_solution = good_all;
    return s;
}

}  // namespace bqsearch
