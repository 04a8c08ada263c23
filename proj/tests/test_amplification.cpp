#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "bqsearch/amplification.hpp"
#include "bqsearch/driver.hpp"

using namespace bqsearch;
using std::numbers::pi;

TEST_CASE("amplification factors at reference angles") {
    auto f = amplification_factors(pi / 6);
    CHECK(f.g1 == doctest::Approx(std::sin(pi / 2) / std::sin(pi / 6)).epsilon(1e-14));
    CHECK(f.g1 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(f.g0 - std::cos(pi / 2) / std::cos(pi / 6)) <= 1e-14);
    CHECK(std::abs(f.g0) <= 1e-14);

    f = amplification_factors(pi / 4);
    CHECK(f.g1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.g0 == doctest::Approx(-1.0).epsilon(1e-14));

    f = amplification_factors(0.0);
    CHECK(f.g1 == 3.0);
    CHECK(f.g0 == 1.0);

    f = amplification_factors(pi / 2);
    CHECK(f.g1 == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(f.g0 == doctest::Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("amplification factors reject angles outside [0, pi/2]") {
    CHECK_THROWS_AS(amplification_factors(-1e-9), std::domain_error);
    CHECK_THROWS_AS(amplification_factors(pi / 2 + 1e-9), std::domain_error);
    CHECK_THROWS_AS(amplification_factors(NAN), std::domain_error);
}

TEST_CASE("factors match the sine and cosine ratios and preserve norm") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(1e-6, pi / 2 - 1e-6);
    for (int i = 0; i < 1000; ++i) {
        const double theta = angle(rng);
        const auto f = amplification_factors(theta);
        CHECK(std::abs(f.g1 - std::sin(3 * theta) / std::sin(theta)) <= 1e-12);
        CHECK(std::abs(f.g0 - std::cos(3 * theta) / std::cos(theta)) <= 1e-9);
        const double s2 = std::sin(theta) * std::sin(theta);
        CHECK(std::abs(f.g1 * f.g1 * s2 + f.g0 * f.g0 * (1 - s2) - 1.0) <= 1e-12);
    }
}

TEST_CASE("flag-1 mass 0.3 becomes 0.972") {
    // Three non-solution indices with p = 0.4 and one with p = 0: w = 0.3.
    const ProblemInstance inst({{0.4, 3, false}, {0.0, 1, false}}, false);
    CostLedger ledger;
    const auto before = init_state(inst);
    CHECK(flag_masses(before, inst).flag1 == doctest::Approx(0.3).epsilon(1e-14));
    const auto after = apply_amplification(before, inst, ledger);
    const double w = 0.3;
    CHECK(flag_masses(after, inst).flag1 == doctest::Approx(w * (3 - 4 * w) * (3 - 4 * w)).epsilon(1e-13));
    CHECK(flag_masses(after, inst).flag1 == doctest::Approx(0.972).epsilon(1e-13));
    CHECK(ledger.amplifications() == 1);
}

TEST_CASE("zero flag-1 mass leaves the state unchanged") {
    const auto inst = make_instance(7, 0, 0.9, 0.0);
    CostLedger ledger;
    const auto before = init_state(inst);
    const auto after = apply_amplification(before, inst, ledger);
    REQUIRE(after.branches.size() == before.branches.size());
    for (std::size_t i = 0; i < after.branches.size(); ++i)
        CHECK(after.branches[i].amplitude == before.branches[i].amplitude);
}

TEST_CASE("ledger cost triples per amplification") {
    const auto inst = make_instance(10, 1, 0.9, 0.1);
    CostLedger ledger;
    ledger.charge_base();
    auto s = init_state(inst);
    s = apply_amplification(s, inst, ledger);
    CHECK(ledger.invocations() == 3);
    s = apply_amplification(s, inst, ledger);
    CHECK(ledger.invocations() == 9);
}

TEST_CASE("per-branch scaling is the two-dimensional rotation") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> prob(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const ProblemInstance inst({{prob(rng), 1 + rng() % 50, true},
                                    {prob(rng), 1 + rng() % 50, false},
                                    {prob(rng), 1 + rng() % 50, false}},
                                   false);
        const auto before = init_state(inst);
        const auto m = flag_masses(before, inst);
        if (m.flag1 <= 0.0 || m.flag0 <= 0.0) continue;
        const double theta = std::asin(std::sqrt(m.flag1));
        CostLedger ledger;
        const auto after = apply_amplification(before, inst, ledger);
        for (std::size_t i = 0; i < after.branches.size(); ++i) {
            const auto& b = before.branches[i];
            const double expected = b.flag ? std::sin(3 * theta) * b.amplitude / std::sin(theta)
                                           : std::cos(3 * theta) * b.amplitude / std::cos(theta);
            CHECK(std::abs(after.branches[i].amplitude - expected) <= 1e-12);
        }
        CHECK(std::abs(total_mass(after, inst) - 1.0) <= 1e-12);
    }
}

TEST_CASE("two amplifications with recomputed angle compose to sin(9θ), cos(9θ)") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> prob(0.0, 0.2);
    for (int trial = 0; trial < 100; ++trial) {
        const ProblemInstance inst({{prob(rng), 1 + rng() % 30, true},
                                    {prob(rng), 1 + rng() % 30, false}},
                                   false);
        const auto before = init_state(inst);
        const double theta = std::asin(std::sqrt(flag_masses(before, inst).flag1));
        if (theta == 0.0) continue;
        CostLedger ledger;
        const auto once = apply_amplification(before, inst, ledger);
        const auto twice = apply_amplification(once, inst, ledger);
        for (std::size_t i = 0; i < twice.branches.size(); ++i) {
            const auto& b = before.branches[i];
            const double expected = b.flag ? std::sin(9 * theta) * b.amplitude / std::sin(theta)
                                           : std::cos(9 * theta) * b.amplitude / std::cos(theta);
            CHECK(std::abs(twice.branches[i].amplitude - expected) <= 1e-10);
        }
    }
}
