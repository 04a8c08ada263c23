#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "bqsearch/andor.hpp"

using namespace bqsearch;

namespace {

// Level-by-level reduction over the whole input, independent of the
// recursive evaluator.
bool reduce_levels(const AndOrTree& tree, const Bits& input) {
    std::vector<bool> values(input.begin(), input.end());
    for (int level = tree.depth() - 1; level >= 0; --level) {
        const std::size_t fan = tree.fanouts()[static_cast<std::size_t>(level)];
        const bool is_or = tree.gate_at(level) == Gate::or_gate;
        std::vector<bool> next(values.size() / fan);
        for (std::size_t i = 0; i < next.size(); ++i) {
            bool acc = !is_or;
            for (std::size_t j = 0; j < fan; ++j)
                acc = is_or ? (acc || values[i * fan + j]) : (acc && values[i * fan + j]);
            next[i] = acc;
        }
        values = std::move(next);
    }
    return values[0];
}

Bits one_true_and_block(std::size_t n, std::size_t block) {
    Bits bits(n * n, 0);
    for (std::size_t j = 0; j < n; ++j) bits[block * n + j] = 1;
    // Distractors: every other block is all ones but one.
    for (std::size_t b = 0; b < n; ++b)
        if (b != block)
            for (std::size_t j = 1; j < n; ++j) bits[b * n + j] = 1;
    return bits;
}

}  // namespace

TEST_CASE("tree shape") {
    const AndOrTree tree(Gate::or_gate, {3, 4, 2});
    CHECK(tree.depth() == 3);
    CHECK(tree.leaf_count() == 24);
    CHECK(tree.gate_at(0) == Gate::or_gate);
    CHECK(tree.gate_at(1) == Gate::and_gate);
    CHECK(tree.gate_at(2) == Gate::or_gate);
    CHECK_THROWS_AS(AndOrTree(Gate::or_gate, {3, 0}), std::invalid_argument);
    CHECK(AndOrTree(Gate::and_gate, {}).leaf_count() == 1);
}

TEST_CASE("classical evaluation") {
    CHECK(evaluate_classical(AndOrTree(Gate::or_gate, {4}), Bits{1, 0, 0, 0}));
    CHECK_FALSE(evaluate_classical(AndOrTree(Gate::and_gate, {4}), Bits{1, 0, 1, 1}));
    CHECK(evaluate_classical(AndOrTree(Gate::or_gate, {3, 3}), Bits(9, 1)));
    CHECK(evaluate_classical(AndOrTree(Gate::or_gate, {}), Bits{1}));
    CHECK_THROWS_AS(evaluate_classical(AndOrTree(Gate::or_gate, {4}), Bits{1, 0}),
                    std::invalid_argument);
}

TEST_CASE("classical evaluation matches truth-table enumeration") {
    const std::vector<std::vector<std::uint64_t>> shapes{{2, 2, 2}, {2, 2, 4}, {4, 2, 2}, {2, 4, 2}, {3, 5}, {16}};
    for (const auto& shape : shapes)
        for (Gate root : {Gate::or_gate, Gate::and_gate}) {
            const AndOrTree tree(root, shape);
            const std::size_t n = tree.leaf_count();
            for (std::uint32_t x = 0; x < (1U << n); ++x) {
                Bits input(n);
                for (std::size_t i = 0; i < n; ++i) input[i] = (x >> i) & 1U;
                REQUIRE(evaluate_classical(tree, input) == reduce_levels(tree, input));
            }
        }
}

TEST_CASE("quantum simulation of a 9x9 OR-AND tree with one true AND block") {
    const AndOrTree tree(Gate::or_gate, {9, 9});
    const Bits input = one_true_and_block(9, 4);
    REQUIRE(evaluate_classical(tree, input));
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) agree += evaluate_quantum_sim(tree, input, seed).value ? 1 : 0;
    CHECK(agree >= 180);
}

TEST_CASE("quantum simulation of an all-zeros input") {
    const AndOrTree tree(Gate::or_gate, {9, 9});
    const Bits input(81, 0);
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) agree += evaluate_quantum_sim(tree, input, seed).value ? 0 : 1;
    CHECK(agree >= 180);
}

TEST_CASE("depth-1 tree is a single bounded-error black box") {
    const AndOrTree tree(Gate::or_gate, {8});
    const Bits input{0, 0, 0, 1, 0, 0, 0, 0};
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto eval = evaluate_quantum_sim(tree, input, seed);
        agree += eval.value ? 1 : 0;
        CHECK(eval.searches == 0);
    }
    CHECK(agree >= 880);
    CHECK(agree <= 940);
    CHECK_THROWS_AS(evaluate_quantum_sim(AndOrTree(Gate::or_gate, {}), Bits{1}, 1),
                    std::invalid_argument);
}

TEST_CASE("depth-3 simulation runs one search per node of height >= 2") {
    const AndOrTree tree(Gate::and_gate, {3, 4, 5});
    std::mt19937_64 rng(6);
    Bits input(60);
    for (auto& b : input) b = (rng() % 4 != 0);
    const auto eval = evaluate_quantum_sim(tree, input, 9);
    CHECK(eval.searches == 4);
    CHECK(eval.driver_cost > 0);
}

TEST_CASE("quantum cost model") {
    CHECK(evaluate_quantum_cost(AndOrTree(Gate::or_gate, {})).total == 1);
    CHECK(evaluate_quantum_cost(AndOrTree(Gate::or_gate, {4})).total == 2);

    // OR over 9 AND(9): one block, sweep = 1000 C(0) + 1000 v(9), times 3 Grover steps.
    const auto two = evaluate_quantum_cost(AndOrTree(Gate::or_gate, {9, 9}));
    CHECK(two.per_height.size() == 3);
    CHECK(two.per_height[1] == 3);
    CHECK(two.total == (1000 * 1 + 1000 * static_cast<Invocations>(verification_repetitions(9))) * 3);

    double first = 0.0;
    for (std::uint64_t n : {9, 27, 81}) {
        const double ratio = static_cast<double>(evaluate_quantum_cost(AndOrTree(Gate::or_gate, {n, n})).total) /
                             static_cast<double>(n);
        if (first == 0.0) first = ratio;
        CHECK(ratio <= first);
    }
}

TEST_CASE("tree description round trip and errors") {
    const TreeSpec spec{AndOrTree(Gate::and_gate, {2, 3}), Bits{1, 0, 1, 1, 1, 1}};
    std::stringstream buffer;
    write_tree_description(buffer, spec);
    const TreeSpec back = parse_tree_description(buffer);
    CHECK(back.tree.root_gate() == Gate::and_gate);
    CHECK(back.tree.fanouts() == spec.tree.fanouts());
    CHECK(back.leaves == spec.leaves);

    std::istringstream commented("# a comment\ndepth 2   # inline\nroot or\nfanouts 2 2\nleaves 01\n  10\n");
    const auto parsed = parse_tree_description(commented);
    CHECK(parsed.leaves == Bits{0, 1, 1, 0});

    auto bad = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(parse_tree_description(in), std::invalid_argument);
    };
    bad("depth 2\nroot OR\nfanouts 2\nleaves 01\n");           // depth/fanout mismatch
    bad("depth 1\nroot XOR\nfanouts 2\nleaves 01\n");          // unknown gate
    bad("depth 1\nroot OR\nfanouts 2\nleaves 012\n");          // bad character
    bad("depth 1\nroot OR\nfanouts 2\nleaves 011\n");          // wrong count
    bad("depth 1\nroot OR\nfanouts 2\n");                      // no leaves
    bad("depth 1\ncolor red\nfanouts 2\nleaves 01\n");         // unknown key
    bad("depth 1\ndepth 1\nroot OR\nfanouts 2\nleaves 01\n");  // duplicate
}
