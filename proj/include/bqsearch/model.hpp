#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bqsearch {

/// A group of indices whose subroutines share the same success probability
/// and the same true bit. Collapsing identical indices into one class is
/// what lets the exact engine run at n ~ 1e12.
struct IndexClass {
    double p = 0.0;             // probability that F_i outputs 1
    std::uint64_t count = 1;
    bool is_solution = false;   // f_i
};

/// Strict-mode promise thresholds.
inline constexpr double kPromiseGood = 0.9;
inline constexpr double kPromiseBad = 0.1;

class ProblemInstance {
public:
    /// Throws std::invalid_argument on empty classes, zero counts,
    /// probabilities outside [0, 1] or (strict mode) promise violations.
    explicit ProblemInstance(std::vector<IndexClass> classes, bool strict = true);

    const std::vector<IndexClass>& classes() const noexcept { return classes_; }
    const IndexClass& cls(std::size_t id) const { return classes_.at(id); }
    std::size_t num_classes() const noexcept { return classes_.size(); }
    std::uint64_t n() const noexcept { return n_; }
    std::uint64_t t() const noexcept { return t_; }
    bool strict() const noexcept { return strict_; }

private:
    std::vector<IndexClass> classes_;
    std::uint64_t n_ = 0;
    std::uint64_t t_ = 0;
    bool strict_ = true;
};

/// Canonical two-class instance: t solutions with probability p_good and
/// n - t non-solutions with probability p_bad. Empty classes are omitted.
ProblemInstance make_instance(std::uint64_t n, std::uint64_t t, double p_good, double p_bad,
                              bool strict = true);

struct Branch {
    std::size_t class_id = 0;
    bool flag = false;
    double amplitude = 0.0;  // per-index amplitude
};

/// Exact branch decomposition of A_k|0>. Junk registers are implicit: two
/// branches are orthogonal whenever they are distinct entries of `branches`.
struct StructuredState {
    std::vector<Branch> branches;
    int round = 1;
};

struct StateStats {
    double alpha = 0.0;
    double beta = 0.0;
    double theta = 0.0;
    double p_solution = 0.0;
};

/// Runs every F_i once in uniform superposition.
StructuredState init_state(const ProblemInstance& instance);

StateStats state_stats(const StructuredState& state, const ProblemInstance& instance);

/// Squared norm, sum over branches of count * amplitude^2.
double total_mass(const StructuredState& state, const ProblemInstance& instance);

/// Flag-1 and flag-0 mass.
struct FlagMasses {
    double flag1 = 0.0;
    double flag0 = 0.0;
};
FlagMasses flag_masses(const StructuredState& state, const ProblemInstance& instance);

/// Measurement distribution of the index register, one entry per class.
std::vector<double> class_masses(const StructuredState& state, const ProblemInstance& instance);

/// Flag-resolved mass per class.
std::vector<FlagMasses> class_flag_masses(const StructuredState& state,
                                          const ProblemInstance& instance);

}  // namespace bqsearch
