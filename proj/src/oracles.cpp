#include "bqsearch/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <string>

#include "bqsearch/driver.hpp"
#include "bqsearch/error_reduction.hpp"
#include "bqsearch/random.hpp"

namespace bqsearch {

namespace {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using cd = std::complex<double>;

constexpr double kUnitaryTol = 1e-12;

void require_unitary(const Matrix& u, const char* what) {
    const double err = unitarity_error(u);
    if (!(err <= kUnitaryTol))
        throw NonUnitaryError(std::string(what) + " is not unitary (deviation " +
                              std::to_string(err) + ")");
}

bool bit(std::size_t x, int q) { return ((x >> q) & 1U) != 0; }

}  // namespace

double unitarity_error(const Eigen::MatrixXcd& u) {
    if (u.rows() != u.cols()) return INFINITY;
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd random_unitary(int dim, std::uint64_t seed) {
    if (dim < 1 || dim > kMaxDenseDim)
        throw std::invalid_argument("dense dimension must lie in [1, 64]");
    Rng rng(seed);
    Matrix z(dim, dim);
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r) z(r, c) = cd(standard_normal(rng), standard_normal(rng));

    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const double mag = std::abs(r(i, i));
        if (mag > 0.0) q.col(i) *= r(i, i) / mag;
    }
    return q;
}

DenseAmplificationCheck dense_amplification_check(const Eigen::MatrixXcd& a,
                                                  const std::vector<int>& flag_indices) {
    const Eigen::Index dim = a.rows();
    if (dim < 2 || dim > kMaxDenseDim || a.cols() != dim)
        throw std::invalid_argument("dense scenario must be square with dimension in [2, 64]");
    require_unitary(a, "A");

    Eigen::VectorXd flag_sign = Eigen::VectorXd::Ones(dim);
    for (int i : flag_indices) {
        if (i < 0 || i >= dim) throw std::invalid_argument("flag index out of range");
        flag_sign(i) = -1.0;
    }
    const Eigen::Index flagged = (flag_sign.array() < 0.0).count();
    if (flagged == 0 || flagged == dim)
        throw std::invalid_argument("flag partition must be nonempty and proper");

    Matrix s0 = Matrix::Identity(dim, dim);
    s0(0, 0) = -1.0;
    const Matrix s1 = flag_sign.cast<cd>().asDiagonal();
    const Matrix g = -a * s0 * a.adjoint() * s1;

    const Vector psi = a.col(0);
    Vector part1 = Vector::Zero(dim), part0 = Vector::Zero(dim);
    for (Eigen::Index i = 0; i < dim; ++i) (flag_sign(i) < 0.0 ? part1 : part0)(i) = psi(i);

    DenseAmplificationCheck out;
    out.flag1_before = part1.squaredNorm();
    out.theta = std::asin(std::sqrt(std::clamp(out.flag1_before, 0.0, 1.0)));
    const double sin_t = std::sin(out.theta), cos_t = std::cos(out.theta);

    Vector expected = Vector::Zero(dim);
    if (sin_t > 0.0) expected += std::sin(3.0 * out.theta) * (part1 / sin_t);
    if (cos_t > 0.0) expected += std::cos(3.0 * out.theta) * (part0 / cos_t);

    const Vector result = g * psi;
    for (Eigen::Index i = 0; i < dim; ++i)
        if (flag_sign(i) < 0.0) out.flag1_after += std::norm(result(i));

    const cd overlap = expected.dot(result);
    const cd phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cd(1.0);
    out.residual = (result - phase * expected).norm();
    return out;
}

DenseAmplificationCheck dense_amplification_check(int dim, const std::vector<int>& flag_indices,
                                                  std::uint64_t seed) {
    return dense_amplification_check(random_unitary(dim, seed), flag_indices);
}

RoundComparison structured_vs_dense_round(const ProblemInstance& instance) {
    if (instance.n() > 2) throw std::invalid_argument("dense round check supports n <= 2");

    std::vector<std::size_t> class_of_index;
    for (std::size_t id = 0; id < instance.num_classes(); ++id)
        for (std::uint64_t c = 0; c < instance.cls(id).count; ++c) class_of_index.push_back(id);
    const int n = static_cast<int>(class_of_index.size());
    const int runs = schedule_for_round(1).repetitions;

    // Qubit layout: index | first flag | runs... | new flag.
    constexpr int kIndex = 0, kFlag = 1, kFirstRun = 2;
    const int new_flag = kFirstRun + runs;
    const int qubits = new_flag + 1;
    if (qubits > kMaxDenseQubits)
        throw std::length_error("dense round check needs " + std::to_string(qubits) +
                                " qubits, cap is " + std::to_string(kMaxDenseQubits));
    const std::size_t dim = std::size_t{1} << qubits;

    auto p_of = [&](std::size_t x) { return instance.cls(class_of_index[bit(x, kIndex) ? 1 : 0]).p; };

    // F_j on `target`, optionally only where the first flag is 1.
    auto subroutine = [&](int target, bool conditional) {
        Matrix m = Matrix::Identity(dim, dim);
        for (std::size_t x = 0; x < dim; ++x) {
            if (bit(x, target)) continue;
            if (conditional && !bit(x, kFlag)) continue;
            if (n == 1 && bit(x, kIndex)) continue;
            const std::size_t y = x | (std::size_t{1} << target);
            const double p = p_of(x);
            m(x, x) = std::sqrt(1.0 - p);
            m(y, x) = std::sqrt(p);
            m(x, y) = -std::sqrt(p);
            m(y, y) = std::sqrt(1.0 - p);
        }
        return m;
    };

    Matrix prep = Matrix::Identity(dim, dim);
    if (n == 2) {
        const double h = 1.0 / std::sqrt(2.0);
        for (std::size_t x = 0; x < dim; ++x) {
            if (bit(x, kIndex)) continue;
            const std::size_t y = x | 1U;
            prep(x, x) = h;
            prep(y, x) = h;
            prep(x, y) = h;
            prep(y, y) = -h;
        }
    }
    const Matrix a1 = subroutine(kFlag, false) * prep;

    require_unitary(a1, "A_1");

    Vector psi = Vector::Zero(dim);
    psi(0) = 1.0;
    psi = a1 * psi;

    // G_1 = -A_1 S0 A_1^-1 S1, applied right to left.
    for (std::size_t x = 0; x < dim; ++x)
        if (bit(x, kFlag)) psi(static_cast<Eigen::Index>(x)) *= -1.0;
    psi = a1.adjoint() * psi;
    psi(0) *= -1.0;
    psi = -(a1 * psi);

    // E_1: r_1 conditional runs, then the majority into the new flag.
    for (int i = 0; i < runs; ++i) psi = subroutine(kFirstRun + i, true) * psi;
    Vector voted = Vector::Zero(dim);
    const std::size_t run_mask = ((std::size_t{1} << runs) - 1) << kFirstRun;
    for (std::size_t x = 0; x < dim; ++x) {
        const bool majority = std::popcount(x & run_mask) >= (runs + 1) / 2;
        const std::size_t y = (bit(x, kFlag) && majority) ? x ^ (std::size_t{1} << new_flag) : x;
        voted(static_cast<Eigen::Index>(y)) += psi(static_cast<Eigen::Index>(x));
    }
    psi = voted;

    RoundComparison out;
    out.qubits = qubits;
    out.dense.assign(instance.num_classes(), {});
    for (std::size_t x = 0; x < dim; ++x) {
        const double mass = std::norm(psi(static_cast<Eigen::Index>(x)));
        if (mass == 0.0) continue;
        const std::size_t id = class_of_index[bit(x, kIndex) ? 1 : 0];
        (bit(x, new_flag) ? out.dense[id].flag1 : out.dense[id].flag0) += mass;
    }

    const BuiltState built = build_state(instance, 1);
    out.structured = class_flag_masses(built.state, instance);
    for (std::size_t id = 0; id < instance.num_classes(); ++id) {
        out.max_deviation = std::max(
            {out.max_deviation, std::abs(out.dense[id].flag1 - out.structured[id].flag1),
             std::abs(out.dense[id].flag0 - out.structured[id].flag0)});
    }
    return out;
}

}  // namespace bqsearch

namespace bqsearch {

double majority_prob_enumerated(int r, double p) {
    if (r < 1 || r % 2 == 0 || r > 25)
        throw std::invalid_argument("enumeration needs odd r in [1, 25]");
    const double q = 1.0 - p;
    long double sum = 0.0L;
    for (std::uint32_t outcome = 0; outcome < (1U << r); ++outcome) {
        const int ones = std::popcount(outcome);
        if (2 * ones <= r) continue;
        long double w = 1.0L;
        for (int i = 0; i < r; ++i) w *= ((outcome >> i) & 1U) ? p : q;
        sum += w;
    }
    return static_cast<double>(sum);
}

int repetitions_by_enumeration(double eps, double p_fail, int r_max) {
    for (int r = 1; r <= r_max; r += 2)
        if (majority_prob_enumerated(r, p_fail) <= eps) return r;
    throw std::runtime_error("no odd r <= " + std::to_string(r_max) + " meets the budget");
}

}  // namespace bqsearch
