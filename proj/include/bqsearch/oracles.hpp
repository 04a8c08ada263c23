#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "bqsearch/model.hpp"

namespace bqsearch {

/// Raised when a generated or supplied matrix is not unitary to 1e-12. Kept
/// distinct from a large residual, which would indicate a broken identity.
class NonUnitaryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxDenseDim = 64;
inline constexpr int kMaxDenseQubits = 14;

/// Haar-distributed unitary from the QR decomposition of a seeded complex
/// Gaussian matrix, with the phases of R's diagonal absorbed into Q.
Eigen::MatrixXcd random_unitary(int dim, std::uint64_t seed);

double unitarity_error(const Eigen::MatrixXcd& u);

struct DenseAmplificationCheck {
    double residual = 0.0;       // ||GA|0> - (sin3θ|φ1> + cos3θ|φ0>)|| up to global phase
    double theta = 0.0;
    double flag1_before = 0.0;   // sin²θ
    double flag1_after = 0.0;    // flag-1 mass of GA|0>
};

/// Forms S0, S1 and G = -A S0 A^-1 S1 as explicit matrices. `flag_indices`
/// lists the basis states regarded as having a 1 in the flag register; it
/// must be nonempty and proper.
DenseAmplificationCheck dense_amplification_check(const Eigen::MatrixXcd& a,
                                                  const std::vector<int>& flag_indices);

/// Same check on random_unitary(dim, seed). dim <= 64.
DenseAmplificationCheck dense_amplification_check(int dim, const std::vector<int>& flag_indices,
                                                  std::uint64_t seed);

struct RoundComparison {
    double max_deviation = 0.0;
    std::vector<FlagMasses> dense;       // per class, after one round
    std::vector<FlagMasses> structured;  // per class, after one round
    int qubits = 0;
};

/// Simulates A_2 = E_1 G_1 A_1 on an explicit qubit register for an instance
/// with n <= 2: each F_i is a single-ancilla rotation with flag probability
/// p_i, E_1 computes the majority of r_1 fresh runs into a new flag qubit.
/// Compares per-class flag masses with the structured engine.
RoundComparison structured_vs_dense_round(const ProblemInstance& instance);

/// Majority probability by walking all 2^r outcome strings. r odd, r <= 25.
double majority_prob_enumerated(int r, double p);

/// Smallest odd r whose enumerated majority error is at most eps.
int repetitions_by_enumeration(double eps, double p_fail, int r_max = 25);

}  // namespace bqsearch
