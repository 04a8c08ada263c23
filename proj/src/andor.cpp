#include "bqsearch/andor.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bqsearch/baselines.hpp"
#include "bqsearch/random.hpp"

namespace bqsearch {

std::string to_string(Gate g) { return g == Gate::or_gate ? "OR" : "AND"; }

Gate parse_gate(const std::string& s) {
    std::string u = s;
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
    if (u == "OR") return Gate::or_gate;
    if (u == "AND") return Gate::and_gate;
    throw std::invalid_argument("unknown gate '" + s + "' (expected OR or AND)");
}

AndOrTree::AndOrTree(Gate root_gate, std::vector<std::uint64_t> fanouts)
    : root_gate_(root_gate), fanouts_(std::move(fanouts)) {
    for (auto f : fanouts_) {
        if (f == 0) throw std::invalid_argument("fanouts must be positive");
        if (leaves_ > UINT64_MAX / f) throw std::invalid_argument("leaf count overflows");
        leaves_ *= f;
    }
}

Gate AndOrTree::gate_at(int level) const {
    if (level < 0 || level >= depth()) throw std::out_of_range("tree level out of range");
    if (level % 2 == 0) return root_gate_;
    return root_gate_ == Gate::or_gate ? Gate::and_gate : Gate::or_gate;
}

namespace {

void check_input(const AndOrTree& tree, std::span<const std::uint8_t> input) {
    if (input.size() != tree.leaf_count())
        throw std::invalid_argument("input has " + std::to_string(input.size()) +
                                    " bits, tree has " + std::to_string(tree.leaf_count()) +
                                    " leaves");
}

// Leaves under one node at `level`.
std::uint64_t subtree_size(const AndOrTree& tree, int level) {
    std::uint64_t size = 1;
    for (int i = level; i < tree.depth(); ++i) size *= tree.fanouts()[static_cast<std::size_t>(i)];
    return size;
}

bool eval_node(const AndOrTree& tree, std::span<const std::uint8_t> input, int level,
               std::uint64_t offset) {
    if (level == tree.depth()) return input[offset] != 0;
    const std::uint64_t child = subtree_size(tree, level + 1);
    const bool is_or = tree.gate_at(level) == Gate::or_gate;
    for (std::uint64_t c = 0; c < tree.fanouts()[static_cast<std::size_t>(level)]; ++c)
        if (eval_node(tree, input, level + 1, offset + c * child) == is_or) return is_or;
    return !is_or;
}

struct SimContext {
    const AndOrTree& tree;
    std::span<const std::uint8_t> input;
    std::uint64_t seed;
    SearchOptions options;
    std::uint64_t next_node = 0;
    QuantumEvaluation stats{};
};

// Returns the node's simulated output. Children of a searching node enter
// only through their true values and the worst-case promise.
bool simulate_node(SimContext& ctx, int level, std::uint64_t offset) {
    const AndOrTree& tree = ctx.tree;
    const int height = tree.depth() - level;
    const std::uint64_t node_id = ctx.next_node++;
    const bool truth = eval_node(tree, ctx.input, level, offset);

    if (height == 1) {
        Rng rng(split_seed(ctx.seed, node_id));
        return bernoulli(rng, kPromiseBad) ? !truth : truth;
    }

    const std::uint64_t fanout = tree.fanouts()[static_cast<std::size_t>(level)];
    const std::uint64_t child = subtree_size(tree, level + 1);
    const bool is_or = tree.gate_at(level) == Gate::or_gate;
    const bool witness = is_or;  // OR looks for a 1-child, AND for a 0-child

    std::uint64_t witnesses = 0;
    for (std::uint64_t c = 0; c < fanout; ++c) {
        const std::uint64_t child_offset = offset + c * child;
        if (height > 2) simulate_node(ctx, level + 1, child_offset);
        if (eval_node(tree, ctx.input, level + 1, child_offset) == witness) ++witnesses;
    }

    const ProblemInstance instance =
        make_instance(fanout, witnesses, kPromiseGood, kPromiseBad, true);
    const SearchResult result = run_search(instance, split_seed(ctx.seed, node_id), ctx.options);
    const bool value = result.outcome == Outcome::found ? witness : !witness;
    ++ctx.stats.searches;
    if (value == truth) ++ctx.stats.searches_correct;
    ctx.stats.driver_cost += result.total_cost;
    return value;
}

}  // namespace

bool evaluate_classical(const AndOrTree& tree, std::span<const std::uint8_t> input) {
    check_input(tree, input);
    return eval_node(tree, input, 0, 0);
}

QuantumEvaluation evaluate_quantum_sim(const AndOrTree& tree, std::span<const std::uint8_t> input,
                                       std::uint64_t seed, const SearchOptions& options) {
    check_input(tree, input);
    if (tree.depth() < 1) throw std::invalid_argument("quantum evaluation needs depth >= 1");
    SimContext ctx{tree, input, seed, options, 0, {}};
    const bool root = simulate_node(ctx, 0, 0);
    ctx.stats.value = root;
    return ctx.stats;
}

QuantumCost evaluate_quantum_cost(const AndOrTree& tree, int shots) {
    if (shots < 1) throw std::invalid_argument("shots must be positive");
    QuantumCost cost;
    cost.per_height.push_back(1);
    for (int height = 1; height <= tree.depth(); ++height) {
        const std::uint64_t fanout = tree.fanouts()[static_cast<std::size_t>(tree.depth() - height)];
        Invocations node = 0;
        if (height == 1) {
            node = grover_iterations(fanout);
        } else {
            Invocations sweep = 0;
            for (int m = 0; m < search_block_count(fanout); ++m)
                sweep += static_cast<Invocations>(shots) * analytic_cost(m);
            sweep += static_cast<Invocations>(shots) *
                     static_cast<Invocations>(verification_repetitions(fanout));
            const Invocations below = cost.per_height.back();
            if (below != 0 && sweep > UINT64_MAX / below)
                throw std::overflow_error("tree query cost overflows");
            node = sweep * below;
        }
        cost.per_height.push_back(node);
    }
    cost.total = cost.per_height.back();
    return cost;
}

TreeSpec parse_tree_description(std::istream& in) {
    std::optional<int> depth;
    std::optional<Gate> root;
    std::optional<std::vector<std::uint64_t>> fanouts;
    std::optional<std::string> leaves;

    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("tree description line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        if (leaves) {
            std::string chunk;
            while (tokens >> chunk) *leaves += chunk;
            continue;
        }
        std::string key;
        if (!(tokens >> key)) continue;
        if (key == "depth") {
            if (depth) fail("duplicate 'depth'");
            int d = -1;
            if (!(tokens >> d) || d < 0) fail("depth must be a nonnegative integer");
            depth = d;
        } else if (key == "root") {
            if (root) fail("duplicate 'root'");
            std::string g;
            if (!(tokens >> g)) fail("missing gate after 'root'");
            try {
                root = parse_gate(g);
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        } else if (key == "fanouts") {
            if (fanouts) fail("duplicate 'fanouts'");
            fanouts.emplace();
            std::string tok;
            while (tokens >> tok) {
                if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit))
                    fail("fanout '" + tok + "' is not a positive integer");
                fanouts->push_back(std::stoull(tok));
            }
        } else if (key == "leaves") {
            leaves.emplace();
            std::string chunk;
            while (tokens >> chunk) *leaves += chunk;
        } else {
            fail("unknown key '" + key + "'");
        }
        std::string extra;
        if (key != "fanouts" && key != "leaves" && tokens >> extra)
            fail("unexpected token '" + extra + "'");
    }

    if (!depth) fail("missing 'depth'");
    if (!fanouts) fanouts.emplace();
    if (static_cast<int>(fanouts->size()) != *depth)
        fail("depth " + std::to_string(*depth) + " but " + std::to_string(fanouts->size()) +
             " fanouts");
    if (!root) {
        if (*depth > 0) fail("missing 'root'");
        root = Gate::or_gate;
    }
    if (!leaves) fail("missing 'leaves'");

    TreeSpec spec{AndOrTree(*root, *fanouts), {}};
    for (char c : *leaves) {
        if (c != '0' && c != '1') fail(std::string("leaf character '") + c + "' is not 0 or 1");
        spec.leaves.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (spec.leaves.size() != spec.tree.leaf_count())
        fail(std::to_string(spec.leaves.size()) + " leaves given, tree has " +
             std::to_string(spec.tree.leaf_count()));
    return spec;
}

TreeSpec load_tree_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open tree file '" + path + "'");
    return parse_tree_description(in);
}

void write_tree_description(std::ostream& out, const TreeSpec& spec) {
    out << "depth " << spec.tree.depth() << '\n';
    out << "root " << to_string(spec.tree.root_gate()) << '\n';
    out << "fanouts";
    for (auto f : spec.tree.fanouts()) out << ' ' << f;
    out << "\nleaves\n";
    for (std::size_t i = 0; i < spec.leaves.size(); ++i) {
        out << static_cast<char>('0' + spec.leaves[i]);
        if (i % 64 == 63 || i + 1 == spec.leaves.size()) out << '\n';
    }
}

}  // namespace bqsearch
