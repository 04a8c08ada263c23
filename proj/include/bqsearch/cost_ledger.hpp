#pragma once

#include <cstdint>
#include <stdexcept>

namespace bqsearch {

using Invocations = std::uint64_t;

/// Running count of subroutine invocations. One superposed call of all F_i
/// (or of their inverses) costs one unit. Arithmetic is overflow-checked.
class CostLedger {
public:
    Invocations invocations() const noexcept { return invocations_; }
    int amplifications() const noexcept { return amplifications_; }
    int reductions() const noexcept { return reductions_; }

    /// The base algorithm: every F_i once in superposition.
    void charge_base() { add(1); }

    /// G = -A S0 A^-1 S1 after A itself: the cost of A triples.
    void charge_amplification() {
        const Invocations before = invocations_;
        add(before);
        add(before);
        ++amplifications_;
    }

    void charge_error_reduction(Invocations repetitions) {
        add(repetitions);
        ++reductions_;
    }

    void charge(Invocations units) { add(units); }

private:
    void add(Invocations units) {
        if (invocations_ > UINT64_MAX - units)
            throw std::overflow_error("invocation count overflows 64 bits");
        invocations_ += units;
    }

    Invocations invocations_ = 0;
    int amplifications_ = 0;
    int reductions_ = 0;
};

}  // namespace bqsearch
