#include "bqsearch/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "bqsearch/andor.hpp"
#include "bqsearch/baselines.hpp"
#include "bqsearch/driver.hpp"
#include "bqsearch/error_reduction.hpp"
#include "bqsearch/oracles.hpp"

namespace bqsearch {

using json = nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view data) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Violation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config file: `key = value` lines or one JSON object. Keys are option long
// names; '_' and '-' are interchangeable.

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("--config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    std::vector<std::pair<std::string, std::string>> items;
    auto normalize = [](std::string key) {
        std::replace(key.begin(), key.end(), '_', '-');
        return key;
    };

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw UsageError("--config: invalid JSON: " + std::string(e.what()));
        }
        for (const auto& [key, value] : doc.items()) {
            std::string rendered;
            if (value.is_array()) {
                for (const auto& v : value) {
                    if (!rendered.empty()) rendered += ',';
                    rendered += v.is_string() ? v.get<std::string>() : v.dump();
                }
            } else {
                rendered = value.is_string() ? value.get<std::string>() : value.dump();
            }
            items.emplace_back(normalize(key), rendered);
        }
        return items;
    }

    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string{};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("--config line " + std::to_string(lineno) + ": expected key = value");
        items.emplace_back(normalize(trim(line.substr(0, eq))), trim(line.substr(eq + 1)));
    }
    return items;
}

std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config requires a path");
            return args[i + 1];
        }
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return std::nullopt;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& name) {
    const std::string flag = "--" + name;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

bool truthy(const std::string& v) {
    std::string s = v;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s == "1" || s == "true" || s == "yes" || s == "on";
}

// ---------------------------------------------------------------------------
// Tables

struct Table {
    std::string name;
    std::vector<std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string render_cell(const json& v) {
    if (v.is_number_float()) return fmt::format("{:.15g}", v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

struct RunContext {
    std::string subcommand;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string csv_path;
    std::string json_path;
};

std::filesystem::path resolve_output(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0')
            p = std::filesystem::path(dir) / p;
    }
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    return p;
}

void write_csv(std::ostream& os, const Table& table, const RunContext& ctx) {
    os << "# bqsearch " << table.name << " schema v" << kSchemaVersion << '\n';
    os << "# config_hash=" << ctx.config_hash << " seed=" << ctx.seed << '\n';
    for (const auto& m : table.meta) os << "# " << m << '\n';
    os << "config_hash,seed";
    for (const auto& c : table.columns) os << ',' << c;
    os << '\n';
    for (const auto& row : table.rows) {
        os << ctx.config_hash << ',' << ctx.seed;
        for (const auto& cell : row) os << ',' << render_cell(cell);
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& table, const RunContext& ctx) {
    json doc;
    doc["schema"] = fmt::format("bqsearch.{}/v{}", table.name, kSchemaVersion);
    doc["config_hash"] = ctx.config_hash;
    doc["seed"] = ctx.seed;
    doc["meta"] = table.meta;
    json rows = json::array();
    for (const auto& row : table.rows) {
        json obj;
        obj["config_hash"] = ctx.config_hash;
        obj["seed"] = ctx.seed;
        for (std::size_t i = 0; i < table.columns.size(); ++i) obj[table.columns[i]] = row[i];
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << '\n';
}

/// CSV goes to --csv, JSON to --json; with neither, CSV goes to `out`.
void emit(const Table& table, const RunContext& ctx, std::ostream& out, bool print_if_no_file = true) {
    if (!ctx.csv_path.empty()) {
        const auto path = resolve_output(ctx.csv_path);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
        write_csv(f, table, ctx);
        out << "wrote " << table.rows.size() << " rows to " << path.string() << '\n';
    }
    if (!ctx.json_path.empty()) {
        const auto path = resolve_output(ctx.json_path);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
        write_json(f, table, ctx);
        out << "wrote " << table.rows.size() << " rows to " << path.string() << '\n';
    }
    if (print_if_no_file && ctx.csv_path.empty() && ctx.json_path.empty()) write_csv(out, table, ctx);
}

// ---------------------------------------------------------------------------
// Options

struct InstanceOptions {
    std::uint64_t t = 1;
    double p_good = kPromiseGood;
    double p_bad = kPromiseBad;
    bool relaxed = false;
};

void add_instance_options(CLI::App* sub, InstanceOptions& o) {
    sub->add_option("--t", o.t, "Number of solution indices");
    sub->add_option("--p-good", o.p_good, "Success probability of solution subroutines");
    sub->add_option("--p-bad", o.p_bad, "Probability that a non-solution subroutine outputs 1");
    sub->add_flag("--relaxed", o.relaxed, "Do not enforce the 9/10 promise");
}

struct Config {
    std::vector<std::uint64_t> n;
    InstanceOptions instance;
    std::optional<std::uint64_t> seed;
    int shots = kDefaultShots;
    std::optional<int> m_max;
    int threads = 0;
    std::string csv;
    std::string json_out;
    std::string config;

    // andor
    std::string tree_path;
    std::vector<std::uint64_t> fanouts;
    std::string root = "OR";
    std::string leaves;
    std::optional<double> random_leaves;
    int trials = 200;

    // check-facts
    int scenarios = 200;
    std::vector<int> dims{2, 4, 8, 16};

    // baselines
    std::uint64_t cutoff = 64;
};

std::string config_hash_of(const CLI::App* sub) {
    static const std::vector<std::string> excluded{"config", "csv", "json", "seed", "threads", "help"};
    std::vector<std::string> parts;
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string& name = opt->get_lnames().front();
        if (std::find(excluded.begin(), excluded.end(), name) != excluded.end()) continue;
        std::string value;
        if (opt->count() > 0) {
            for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
        } else {
            value = opt->get_default_str();
        }
        parts.push_back(name + "=" + value);
    }
    std::sort(parts.begin(), parts.end());
    std::string canonical = sub->get_name();
    for (const auto& p : parts) canonical += ";" + p;
    return fmt::format("{:016x}", fnv1a64(canonical));
}

ProblemInstance instance_for(std::uint64_t n, const InstanceOptions& o) {
    return make_instance(n, o.t, o.p_good, o.p_bad, !o.relaxed);
}

std::string mode_label(const InstanceOptions& o) { return o.relaxed ? "relaxed" : "strict"; }

std::uint64_t single_n(const Config& cfg, const char* sub) {
    if (cfg.n.size() != 1) throw UsageError(std::string(sub) + ": --n takes exactly one value");
    return cfg.n.front();
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_search(const Config& cfg, RunContext& ctx, std::ostream& out) {
    const std::uint64_t n = single_n(cfg, "search");
    const ProblemInstance inst = instance_for(n, cfg.instance);
    if (cfg.shots < 1) throw UsageError("--shots must be positive");

    const SearchResult result = run_search(inst, ctx.seed, SearchOptions{cfg.shots});

    out << fmt::format("# bqsearch search config_hash={} seed={}\n", ctx.config_hash, ctx.seed);
    out << fmt::format("n={} t={} p_good={} p_bad={} mode={} shots={} verification_reps={}\n", n,
                       cfg.instance.t, cfg.instance.p_good, cfg.instance.p_bad,
                       mode_label(cfg.instance), cfg.shots, result.verification_reps);
    if (cfg.instance.relaxed) out << "# relaxed mode: the 9/10 promise is not enforced\n";

    Table trace{"search", {}, {"m", "alpha", "beta", "theta", "p_solution", "cost", "shots", "verified"}, {}};
    for (const auto& r : result.trace)
        trace.rows.push_back({r.m, r.alpha, r.beta, r.theta, r.p_solution, r.cost, r.shots, r.verified});

    out << fmt::format("{:>3} {:>12} {:>12} {:>10} {:>12} {:>10}\n", "m", "alpha", "beta", "theta",
                       "p_solution", "C(m)");
    for (const auto& r : result.trace)
        out << fmt::format("{:>3} {:>12.6g} {:>12.6g} {:>10.6g} {:>12.6g} {:>10}\n", r.m, r.alpha,
                           r.beta, r.theta, r.p_solution, r.cost);

    if (result.outcome == Outcome::found) {
        const bool sol = inst.cls(*result.found_class).is_solution;
        out << fmt::format("outcome: found class={} solution={}\n", *result.found_class,
                           sol ? "yes" : "no (verification false accept)");
    } else {
        out << "outcome: no_solutions\n";
    }
    out << fmt::format("cost: {} invocations ({:.6g} per sqrt(n))\n", result.total_cost,
                       static_cast<double>(result.total_cost) / std::sqrt(static_cast<double>(n)));
    emit(trace, ctx, out, false);
    return kExitOk;
}

int cmd_curve(const Config& cfg, RunContext& ctx, std::ostream& out) {
    const std::uint64_t n = single_n(cfg, "curve");
    const ProblemInstance inst = instance_for(n, cfg.instance);
    const int m_max = cfg.m_max.value_or(search_block_count(n));
    if (m_max < 0 || m_max > 40) throw UsageError("--m-max must lie in [0, 40]");

    Table table{"curve",
                {fmt::format("n={} t={} p_good={} p_bad={} mode={}", n, cfg.instance.t,
                             cfg.instance.p_good, cfg.instance.p_bad, mode_label(cfg.instance))},
                {"m", "alpha", "beta", "theta", "p_solution", "cost"},
                {}};
    for (const auto& r : exact_success_curve(inst, m_max))
        table.rows.push_back({r.m, r.alpha, r.beta, r.theta, r.p_solution, r.cost});
    emit(table, ctx, out);
    return kExitOk;
}

int cmd_sweep(const Config& cfg, RunContext& ctx, std::ostream& out) {
    if (cfg.n.empty()) throw UsageError("sweep: --n needs at least one value");
    if (cfg.shots < 1) throw UsageError("--shots must be positive");
    std::vector<ProblemInstance> instances;
    for (auto n : cfg.n) instances.push_back(instance_for(n, cfg.instance));

    struct Point {
        Invocations full = 0;
        SearchResult run;
    };
    std::vector<Point> points(instances.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < instances.size(); i = next++) {
            points[i].full = full_sweep_cost(cfg.n[i], cfg.shots);
            points[i].run = run_search(instances[i], split_seed(ctx.seed, i), SearchOptions{cfg.shots});
        }
    };
    const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    const std::size_t workers =
        std::min<std::size_t>(instances.size(), cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : hw);
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    Table table{"sweep",
                {fmt::format("t={} p_good={} p_bad={} mode={} shots={}", cfg.instance.t,
                             cfg.instance.p_good, cfg.instance.p_bad, mode_label(cfg.instance), cfg.shots),
                 "grid point i uses seed split_seed(seed, i)"},
                {"n", "blocks", "verification_reps", "full_sweep_cost", "cost_over_sqrt_n", "outcome",
                 "found_solution", "run_cost", "run_cost_over_sqrt_n"},
                {}};
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const double root = std::sqrt(static_cast<double>(cfg.n[i]));
        const auto& run = points[i].run;
        const bool found = run.outcome == Outcome::found;
        table.rows.push_back({cfg.n[i], search_block_count(cfg.n[i]), run.verification_reps,
                              points[i].full, static_cast<double>(points[i].full) / root,
                              found ? "found" : "no_solutions",
                              found && instances[i].cls(*run.found_class).is_solution, run.total_cost,
                              static_cast<double>(run.total_cost) / root});
    }
    emit(table, ctx, out);
    return kExitOk;
}

int cmd_andor(const Config& cfg, RunContext& ctx, std::ostream& out) {
    std::optional<TreeSpec> spec;
    if (!cfg.tree_path.empty()) {
        if (!cfg.fanouts.empty() || !cfg.leaves.empty() || cfg.random_leaves)
            throw UsageError("andor: --tree excludes --fanouts/--leaves/--random-leaves");
        spec = load_tree_file(cfg.tree_path);
    } else {
        AndOrTree tree(parse_gate(cfg.root), cfg.fanouts);
        Bits leaves;
        if (!cfg.leaves.empty() && cfg.random_leaves)
            throw UsageError("andor: give either --leaves or --random-leaves");
        if (cfg.random_leaves) {
            const double density = *cfg.random_leaves;
            if (!(density >= 0.0 && density <= 1.0))
                throw UsageError("--random-leaves density must lie in [0, 1]");
            Rng rng(split_seed(ctx.seed, 0xA11CE));
            for (std::uint64_t i = 0; i < tree.leaf_count(); ++i) leaves.push_back(bernoulli(rng, density) ? 1 : 0);
        } else {
            for (char c : cfg.leaves) {
                if (c != '0' && c != '1') throw UsageError("--leaves must be a 0/1 string");
                leaves.push_back(static_cast<std::uint8_t>(c - '0'));
            }
        }
        if (leaves.size() != tree.leaf_count())
            throw UsageError(fmt::format("andor: {} leaves for a tree with {}", leaves.size(), tree.leaf_count()));
        spec = TreeSpec{tree, leaves};
    }
    const AndOrTree& tree = spec->tree;
    if (tree.depth() < 1) throw UsageError("andor: tree depth must be >= 1");
    if (cfg.trials < 1) throw UsageError("--trials must be positive");

    const bool truth = evaluate_classical(tree, spec->leaves);
    int agree = 0, searches = 0, searches_correct = 0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const auto eval = evaluate_quantum_sim(tree, spec->leaves,
                                               split_seed(ctx.seed, static_cast<std::uint64_t>(trial)),
                                               SearchOptions{cfg.shots});
        agree += eval.value == truth ? 1 : 0;
        searches += eval.searches;
        searches_correct += eval.searches_correct;
    }
    const QuantumCost cost = evaluate_quantum_cost(tree, cfg.shots);
    const double root_n = std::sqrt(static_cast<double>(tree.leaf_count()));

    std::string shape;
    for (auto f : tree.fanouts()) shape += (shape.empty() ? "" : "x") + std::to_string(f);
    Table table{"andor",
                {fmt::format("root={} depth={} fanouts={} N={} classical={}", to_string(tree.root_gate()),
                             tree.depth(), shape, tree.leaf_count(), truth ? 1 : 0),
                 fmt::format("trials={} agreement={:.6g} node_searches={} node_agreement={:.6g}", cfg.trials,
                             static_cast<double>(agree) / cfg.trials, searches,
                             searches ? static_cast<double>(searches_correct) / searches : 1.0),
                 fmt::format("query_cost={} query_cost_over_sqrt_N={:.6g}", cost.total,
                             static_cast<double>(cost.total) / root_n)},
                {"height", "fanout", "node_cost"},
                {}};
    for (int h = 0; h <= tree.depth(); ++h) {
        const std::uint64_t fanout = h == 0 ? 0 : tree.fanouts()[static_cast<std::size_t>(tree.depth() - h)];
        table.rows.push_back({h, fanout, cost.per_height[static_cast<std::size_t>(h)]});
    }
    for (const auto& m : table.meta) out << m << '\n';
    emit(table, ctx, out, false);
    return kExitOk;
}

int cmd_check_facts(const Config& cfg, RunContext& ctx, std::ostream& out) {
    if (cfg.scenarios < 1) throw UsageError("--scenarios must be positive");
    for (int d : cfg.dims)
        if (d < 2 || d > kMaxDenseDim) throw UsageError("--dims entries must lie in [2, 64]");

    Table table{"check-facts", {}, {"check", "value", "threshold", "pass"}, {}};
    bool all_pass = true;
    auto record = [&](const std::string& name, double value, double threshold, bool pass) {
        table.rows.push_back({name, value, threshold, pass});
        all_pass = all_pass && pass;
        out << fmt::format("{:<28} {:>12.4g}  (threshold {:.4g})  {}\n", name, value, threshold,
                           pass ? "PASS" : "FAIL");
    };

    Rng partition_rng(split_seed(ctx.seed, 1));
    double residual = 0.0;
    for (int i = 0; i < cfg.scenarios; ++i) {
        const int dim = cfg.dims[static_cast<std::size_t>(i) % cfg.dims.size()];
        std::vector<int> flagged;
        while (flagged.empty() || static_cast<int>(flagged.size()) == dim) {
            flagged.clear();
            for (int j = 0; j < dim; ++j)
                if (partition_rng() & 1U) flagged.push_back(j);
        }
        const auto check = dense_amplification_check(dim, flagged, split_seed(ctx.seed, 1000 + i));
        residual = std::max(residual, check.residual);
    }
    out << fmt::format("max residual: {:.3g}\n", residual);
    record("amplification_residual", residual, 1e-10, residual <= 1e-10);

    double binom = 0.0;
    for (int r = 1; r <= 15; r += 2)
        for (double p : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0})
            binom = std::max(binom, std::abs(majority_prob(r, p) - majority_prob_enumerated(r, p)));
    record("majority_enumeration_delta", binom, 1e-12, binom <= 1e-12);

    const int expected[] = {5, 7, 7};
    for (int k = 1; k <= 3; ++k) {
        const int r = repetitions_by_enumeration(std::ldexp(1.0, -(k + 5)), kPromiseBad);
        record(fmt::format("schedule_r{}", k), r, expected[k - 1],
               r == expected[k - 1] && schedule_for_round(k).repetitions == r);
    }

    double deviation = 0.0;
    for (double pg : {0.9, 0.95, 1.0})
        for (double pb : {0.0, 0.05, 0.1}) {
            for (std::uint64_t t = 0; t <= 2; ++t)
                deviation = std::max(deviation, structured_vs_dense_round(make_instance(2, t, pg, pb)).max_deviation);
            for (std::uint64_t t = 0; t <= 1; ++t)
                deviation = std::max(deviation, structured_vs_dense_round(make_instance(1, t, pg, pb)).max_deviation);
        }
    record("structured_vs_dense", deviation, 1e-9, deviation <= 1e-9);

    bool ledger_ok = true;
    const auto probe = make_instance(6561, 1, kPromiseGood, kPromiseBad);
    for (int m = 0; m <= 12; ++m) ledger_ok = ledger_ok && build_state(probe, m).ledger.invocations() == analytic_cost(m);
    record("ledger_equals_recursion", ledger_ok ? 0.0 : 1.0, 0.0, ledger_ok);

    emit(table, ctx, out, false);
    if (!all_pass) throw Violation("check-facts: at least one check failed");
    return kExitOk;
}

int cmd_baselines(const Config& cfg, RunContext& ctx, std::ostream& out) {
    std::vector<std::uint64_t> grid = cfg.n;
    if (grid.empty())
        for (std::uint64_t n = 100; n <= 100'000'000; n *= 10) grid.push_back(n);
    for (auto n : grid)
        if (n < 2) throw UsageError("baselines: every n must be >= 2");

    Table table{"baselines",
                {"grover_iterations = ceil((pi/4) sqrt(n)); simple = grover_iterations * r(1/(100 n))",
                 fmt::format("block recursion: constant d = 1, base cutoff {}", cfg.cutoff)},
                {"n", "grover_iterations", "simple_search_cost", "simple_over_sqrt_n_log2_n",
                 "block_recursion_cost", "block_over_sqrt_n", "full_sweep_cost", "simple_over_full_sweep"},
                {}};
    for (auto n : grid) {
        const double dn = static_cast<double>(n);
        const Invocations simple = simple_search_cost(n);
        const Invocations block = block_recursion_cost(n, cfg.cutoff);
        const Invocations full = full_sweep_cost(n, cfg.shots);
        table.rows.push_back({n, grover_iterations(n), simple,
                              static_cast<double>(simple) / (std::sqrt(dn) * std::log2(dn)), block,
                              static_cast<double>(block) / std::sqrt(dn), full,
                              static_cast<double>(simple) / static_cast<double>(full)});
    }
    emit(table, ctx, out);
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& input_args, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Exact simulator and cost toolkit for quantum search over bounded-error subroutines",
                 "bqsearch"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", cfg.config, "key = value file or JSON object; explicit flags win");
        sub->add_option("--csv", cfg.csv, "Write the table as CSV");
        sub->add_option("--json", cfg.json_out, "Write the table as JSON");
        sub->add_option("--seed", cfg.seed, "Master seed (generated and logged when omitted)");
    };

    auto* search = app.add_subcommand("search", "Run the search algorithm once");
    common(search);
    search->add_option("--n", cfg.n, "Search space size")->required()->delimiter(',');
    add_instance_options(search, cfg.instance);
    search->add_option("--shots", cfg.shots, "Measurements per block");

    auto* curve = app.add_subcommand("curve", "Exact alpha/beta/theta per round count");
    common(curve);
    curve->add_option("--n", cfg.n, "Search space size")->required()->delimiter(',');
    add_instance_options(curve, cfg.instance);
    curve->add_option("--m-max", cfg.m_max, "Largest round count (default ceil(log9 n))");

    auto* sweep = app.add_subcommand("sweep", "Cost over a grid of n");
    common(sweep);
    sweep->add_option("--n", cfg.n, "Comma-separated grid")->required()->delimiter(',');
    add_instance_options(sweep, cfg.instance);
    sweep->add_option("--shots", cfg.shots, "Measurements per block");
    sweep->add_option("--threads", cfg.threads, "Worker threads (0 = hardware)");

    auto* andor = app.add_subcommand("andor", "Evaluate an AND-OR tree");
    common(andor);
    andor->add_option("--tree", cfg.tree_path, "Tree description file");
    andor->add_option("--fanouts", cfg.fanouts, "Fanout per level, root first")->delimiter(',');
    andor->add_option("--root", cfg.root, "Root gate, OR or AND");
    andor->add_option("--leaves", cfg.leaves, "Leaf bitstring");
    andor->add_option("--random-leaves", cfg.random_leaves, "Draw leaves with this density of ones");
    andor->add_option("--trials", cfg.trials, "Simulated evaluations");
    andor->add_option("--shots", cfg.shots, "Measurements per search block");

    auto* facts = app.add_subcommand("check-facts", "Dense and binomial oracle suites");
    common(facts);
    facts->add_option("--scenarios", cfg.scenarios, "Random dense scenarios");
    facts->add_option("--dims", cfg.dims, "Scenario dimensions")->delimiter(',');

    auto* baselines = app.add_subcommand("baselines", "Baseline cost models");
    common(baselines);
    baselines->add_option("--n", cfg.n, "Comma-separated grid")->delimiter(',');
    baselines->add_option("--cutoff", cfg.cutoff, "Block recursion base case");
    baselines->add_option("--shots", cfg.shots, "Measurements per block for the full sweep");

    try {
        std::vector<std::string> args = input_args;
        if (const auto config_path = find_config_path(args)) {
            CLI::App* target = nullptr;
            for (const auto& a : args)
                for (CLI::App* sub : app.get_subcommands({}))
                    if (!target && sub->get_name() == a) target = sub;
            if (target == nullptr) throw UsageError("--config needs a subcommand");
            for (const auto& [key, value] : read_config(*config_path)) {
                if (key == "config") throw UsageError("--config: nested config is not supported");
                const CLI::Option* opt = target->get_option_no_throw("--" + key);
                if (opt == nullptr) throw UsageError("--config: unknown key '" + key + "' for " + target->get_name());
                if (given_on_command_line(args, key)) continue;
                if (opt->get_expected_max() == 0) {
                    if (truthy(value)) args.push_back("--" + key);
                } else {
                    args.push_back("--" + key);
                    args.push_back(value);
                }
            }
        }
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    RunContext ctx;
    ctx.subcommand = sub->get_name();
    ctx.csv_path = cfg.csv;
    ctx.json_path = cfg.json_out;
    ctx.config_hash = config_hash_of(sub);

    const bool randomized = ctx.subcommand == "search" || ctx.subcommand == "sweep" || ctx.subcommand == "andor";
    if (cfg.seed) {
        ctx.seed = *cfg.seed;
    } else if (randomized) {
        ctx.seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
        err << "seed " << ctx.seed << " (generated; pass --seed " << ctx.seed << " to reproduce)\n";
    }

    try {
        if (ctx.subcommand == "search") return cmd_search(cfg, ctx, out);
        if (ctx.subcommand == "curve") return cmd_curve(cfg, ctx, out);
        if (ctx.subcommand == "sweep") return cmd_sweep(cfg, ctx, out);
        if (ctx.subcommand == "andor") return cmd_andor(cfg, ctx, out);
        if (ctx.subcommand == "check-facts") return cmd_check_facts(cfg, ctx, out);
        if (ctx.subcommand == "baselines") return cmd_baselines(cfg, ctx, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Violation& e) {
        err << "violation: " << e.what() << '\n';
        return kExitViolation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitViolation;
    }
    return kExitUsage;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace bqsearch
