#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "bqsearch/cli.hpp"

using namespace bqsearch;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("bqsearch_cli_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    return rows;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    return cells;
}

}  // namespace

TEST_CASE("fnv1a64 reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("search smoke run") {
    const auto r = run({"search", "--n", "81", "--t", "1", "--seed", "7"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("outcome: found") != std::string::npos);
    CHECK(r.out.find("cost: ") != std::string::npos);
    CHECK(r.out.find("verification_reps=21") != std::string::npos);
}

TEST_CASE("search without solutions reports no_solutions") {
    const auto r = run({"search", "--n", "81", "--t", "0", "--seed", "3"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("outcome: no_solutions") != std::string::npos);
}

TEST_CASE("missing seed is generated and logged") {
    const auto r = run({"search", "--n", "9"});
    CHECK(r.code == kExitOk);
    CHECK(r.err.find("--seed") != std::string::npos);
}

TEST_CASE("check-facts passes and reports the max residual") {
    const auto r = run({"check-facts", "--scenarios", "40"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("max residual: ") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("usage errors exit 2 and name the problem") {
    auto r = run({"search", "--t", "1"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("--n") != std::string::npos);

    r = run({"search", "--n", "10", "--t", "11"});
    CHECK(r.code == kExitUsage);

    r = run({"search", "--n", "10", "--p-good", "0.5"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("usage error") != std::string::npos);

    r = run({"search", "--n", "10", "--p-good", "0.5", "--relaxed", "--seed", "1"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("relaxed") != std::string::npos);

    r = run({"frobnicate"});
    CHECK(r.code == kExitUsage);

    r = run({});
    CHECK(r.code == kExitUsage);

    r = run({"sweep", "--n", "9,abc"});
    CHECK(r.code == kExitUsage);

    r = run({"andor", "--fanouts", "3,3", "--leaves", "0101"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("leaves") != std::string::npos);

    r = run({"andor", "--tree", "/nonexistent/tree.txt"});
    CHECK(r.code == kExitUsage);

    r = run({"--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("check-facts") != std::string::npos);
}

TEST_CASE("sweep CSV schema, bounded cost ratio, and seeded reproducibility") {
    const auto dir = scratch_dir("sweep");
    const std::vector<std::string> base{"sweep", "--n", "9,81,729,6561,59049", "--seed", "11"};
    auto a = base, b = base;
    a.insert(a.end(), {"--csv", (dir / "a.csv").string(), "--threads", "3"});
    b.insert(b.end(), {"--csv", (dir / "b.csv").string(), "--threads", "1"});
    REQUIRE(run(a).code == kExitOk);
    REQUIRE(run(b).code == kExitOk);
    const std::string csv = slurp(dir / "a.csv");
    CHECK(csv == slurp(dir / "b.csv"));
    CHECK(csv.rfind("# bqsearch sweep schema v1\n", 0) == 0);

    const auto rows = data_rows(csv);
    REQUIRE(rows.size() == 6);
    const auto header = split(rows[0]);
    CHECK(header[0] == "config_hash");
    CHECK(header[1] == "seed");
    const auto ratio_col = std::find(header.begin(), header.end(), "cost_over_sqrt_n") - header.begin();
    std::string hash;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto cells = split(rows[i]);
        if (hash.empty()) hash = cells[0];
        CHECK(cells[0] == hash);
        CHECK(cells[1] == "11");
        const double ratio = std::stod(cells[static_cast<std::size_t>(ratio_col)]);
        CHECK(ratio > 0.0);
        CHECK(ratio <= 20000.0 / 3.0 + 1e-9);
    }
    CHECK(hash.size() == 16);
}

TEST_CASE("config hash ignores output paths and seed but not parameters") {
    auto hash_of = [](std::vector<std::string> args) {
        const auto r = run(args);
        REQUIRE(r.code == kExitOk);
        return split(data_rows(r.out)[1])[0];
    };
    const auto h1 = hash_of({"curve", "--n", "6561", "--seed", "1"});
    const auto h2 = hash_of({"curve", "--n", "6561", "--seed", "2"});
    const auto h3 = hash_of({"curve", "--n", "6561", "--t", "2"});
    CHECK(h1 == h2);
    CHECK(h1 != h3);
}

TEST_CASE("config files merge under explicit flags") {
    const auto dir = scratch_dir("config");
    {
        std::ofstream f(dir / "run.conf");
        f << "# comment\nn = 729\nt = 2  # two solutions\nseed = 5\n";
    }
    {
        std::ofstream f(dir / "run.json");
        f << R"({"n": [9, 81], "p_bad": 0.05, "seed": 5})";
    }
    {
        std::ofstream f(dir / "bad.conf");
        f << "n = 9\ncolour = blue\n";
    }

    auto r = run({"curve", "--config", (dir / "run.conf").string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("n=729 t=2") != std::string::npos);

    r = run({"curve", "--config", (dir / "run.conf").string(), "--t", "3"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("n=729 t=3") != std::string::npos);

    r = run({"sweep", "--config", (dir / "run.json").string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("p_bad=0.05") != std::string::npos);
    CHECK(data_rows(r.out).size() == 3);

    r = run({"curve", "--config", (dir / "bad.conf").string()});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("colour") != std::string::npos);

    r = run({"curve", "--config", (dir / "missing.conf").string()});
    CHECK(r.code == kExitUsage);
}

TEST_CASE("relative output paths land in the output directory") {
    const auto dir = scratch_dir("envdir");
    ::setenv(kOutputDirEnv, dir.string().c_str(), 1);
    const auto r = run({"baselines", "--n", "100,1000", "--csv", "sub/baselines.csv", "--json", "baselines.json"});
    ::unsetenv(kOutputDirEnv);
    REQUIRE(r.code == kExitOk);
    CHECK(std::filesystem::exists(dir / "sub" / "baselines.csv"));
    CHECK(slurp(dir / "baselines.json").find("\"schema\": \"bqsearch.baselines/v1\"") != std::string::npos);
    CHECK(data_rows(slurp(dir / "sub" / "baselines.csv")).size() == 3);
}

TEST_CASE("andor from a tree file and from flags") {
    const auto dir = scratch_dir("andor");
    {
        std::ofstream f(dir / "tree.txt");
        f << "# OR of three ANDs\ndepth 2\nroot OR\nfanouts 3 3\nleaves 011 111 010\n";
    }
    auto r = run({"andor", "--tree", (dir / "tree.txt").string(), "--trials", "20", "--seed", "4"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("classical=1") != std::string::npos);
    CHECK(r.out.find("query_cost=") != std::string::npos);

    r = run({"andor", "--fanouts", "9,9", "--random-leaves", "0.8", "--trials", "10", "--seed", "4", "--csv",
             (dir / "costs.csv").string()});
    REQUIRE(r.code == kExitOk);
    CHECK(data_rows(slurp(dir / "costs.csv")).size() == 4);
}
