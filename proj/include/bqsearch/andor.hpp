#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bqsearch/cost_ledger.hpp"
#include "bqsearch/driver.hpp"

namespace bqsearch {

enum class Gate { or_gate, and_gate };

std::string to_string(Gate g);
/// Accepts "OR" / "AND" in any case.
Gate parse_gate(const std::string& s);

/// d-level alternating AND/OR tree. fanouts[0] is the root's fanout; level i
/// (0 = root) uses root_gate when i is even and the other gate when odd.
/// A depth-0 tree is a single input variable.
class AndOrTree {
public:
    AndOrTree(Gate root_gate, std::vector<std::uint64_t> fanouts);

    int depth() const noexcept { return static_cast<int>(fanouts_.size()); }
    Gate root_gate() const noexcept { return root_gate_; }
    const std::vector<std::uint64_t>& fanouts() const noexcept { return fanouts_; }
    std::uint64_t leaf_count() const noexcept { return leaves_; }
    Gate gate_at(int level) const;

private:
    Gate root_gate_;
    std::vector<std::uint64_t> fanouts_;
    std::uint64_t leaves_ = 1;
};

using Bits = std::vector<std::uint8_t>;

bool evaluate_classical(const AndOrTree& tree, std::span<const std::uint8_t> input);

struct QuantumEvaluation {
    bool value = false;
    int searches = 0;           // driver runs, one per node of height >= 2
    int searches_correct = 0;   // of those, how many matched the node's true value
    Invocations driver_cost = 0;
};

/// Bottom-up bounded-error evaluation. Nodes of height 1 are black boxes that
/// are correct with probability 9/10; every node of height >= 2 runs the
/// search driver over its children, modeled as worst-case promise black boxes
/// (p = 9/10 for a witnessing child, 1/10 otherwise). OR nodes search for a
/// 1-child, AND nodes for a 0-child. Requires depth >= 1.
QuantumEvaluation evaluate_quantum_sim(const AndOrTree& tree, std::span<const std::uint8_t> input,
                                       std::uint64_t seed, const SearchOptions& options = {});

struct QuantumCost {
    Invocations total = 0;
    std::vector<Invocations> per_height;  // index h: cost of one node of height h
};

/// Worst-case leaf-query count: 1 at height 0, grover_iterations(fanout) at
/// height 1, and (sum_m shots C(m) + shots v(fanout)) times the child cost
/// above that.
QuantumCost evaluate_quantum_cost(const AndOrTree& tree, int shots = kDefaultShots);

struct TreeSpec {
    AndOrTree tree;
    Bits leaves;
};

/// Line-oriented tree description:
///   # comment
///   depth 2
///   root OR
///   fanouts 9 9
///   leaves 0101...
/// `leaves` comes last; the bitstring may continue over following lines and
/// may contain whitespace. Throws std::invalid_argument with a line number.
TreeSpec parse_tree_description(std::istream& in);
TreeSpec load_tree_file(const std::string& path);
void write_tree_description(std::ostream& out, const TreeSpec& spec);

}  // namespace bqsearch
