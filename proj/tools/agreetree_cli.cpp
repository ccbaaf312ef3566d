#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "agreetree/newick.hpp"
#include "agreetree/oracle.hpp"
#include "agreetree/unrooted.hpp"
#include "agreetree/verify.hpp"

using namespace agreetree;
using nlohmann::json;

namespace {

int env_threads() {
    const char* s = std::getenv("AGREETREE_THREADS");
    if (!s) return 1;
    int v = std::atoi(s);
    return v > 0 ? v : 1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json counters_json(const RunCounters& c) {
    return json{{"pair_evals", c.mast.pair_evals},
                {"matchings", c.mast.matchings},
                {"dp_runs", c.mast.dp_runs},
                {"subproblems_spawned", c.subproblems_spawned},
                {"max_recursion_depth", c.max_depth}};
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

int cmd_mast(const std::string& mode, const std::string& file_a, const std::string& file_b,
             bool witness, bool as_json) {
    if (witness && mode != "rooted") {
        std::cerr << "error: --witness is supported in rooted mode only\n";
        return 2;
    }
    Timer timer;
    RunCounters counters;
    int answer = 0;
    std::string witness_newick;
    if (mode == "rooted") {
        EvolutionaryTree a = parse_newick_rooted(slurp(file_a));
        EvolutionaryTree b = parse_newick_rooted(slurp(file_b));
        auto res = mast_rooted(a, b, &counters.mast);
        answer = res.size;
        if (witness) {
            EvolutionaryTree w = extract_agreement_subtree(res.table, a, b);
            witness_newick = w.size() ? serialize_newick(w) : ";";
        }
    } else if (mode == "unrooted") {
        EvolutionaryTree a = parse_newick(slurp(file_a));
        EvolutionaryTree b = parse_newick(slurp(file_b));
        answer = mast_unrooted(a, b, {}, &counters);
    } else {  // mixed
        EvolutionaryTree a = parse_newick(slurp(file_a));
        EvolutionaryTree b = parse_newick(slurp(file_b));
        answer = mast_mixed(a, b, {}, &counters);
    }
    if (as_json) {
        json rep{{"command", "mast"},
                 {"mode", mode},
                 {"inputs", {file_a, file_b}},
                 {"answer", answer},
                 {"elapsed_ms", timer.ms()},
                 {"counters", counters_json(counters)}};
        if (witness) rep["witness"] = witness_newick;
        std::cout << rep.dump(2) << '\n';
    } else {
        std::cout << "mast " << answer << '\n';
        if (witness) std::cout << witness_newick << '\n';
    }
    return 0;
}

int cmd_cavity(const std::string& file, bool as_json) {
    Timer timer;
    std::ifstream in(file);
    if (!in) {
        std::cerr << "error: cannot open file: " << file << '\n';
        return 2;
    }
    WeightedBipartiteGraph g = read_edge_list(in);
    CavityResult r = all_cavity(g);
    if (as_json) {
        json rep{{"command", "cavity"},
                 {"inputs", {file}},
                 {"answer", r.mwm},
                 {"elapsed_ms", timer.ms()},
                 {"x_values", r.x_values},
                 {"y_values", r.y_values}};
        std::cout << rep.dump(2) << '\n';
    } else {
        write_cavity_result(std::cout, r);
    }
    return 0;
}

int cmd_verify(const std::string& suite, uint64_t seed, long long cases, int max_n,
               bool as_json) {
    verify::SuiteParams params;
    params.seed = seed;
    params.cases = cases;
    params.max_n = max_n;
    params.threads = env_threads();
    std::vector<std::string> suites;
    if (suite == "all")
        suites = verify::suite_names();
    else
        suites.push_back(suite);
    Timer timer;
    json results = json::array();
    bool ok = true;
    for (const auto& name : suites) {
        auto rep = verify::run_suite(name, params);
        ok = ok && rep.ok;
        results.push_back(json{{"suite", rep.suite},
                               {"cases", rep.cases_run},
                               {"ok", rep.ok},
                               {"failed_case", rep.failed_case},
                               {"counterexample", rep.counterexample}});
        if (!as_json) {
            std::cout << (rep.ok ? "ok   " : "FAIL ") << name << " (" << rep.cases_run
                      << " cases)\n";
            if (!rep.ok) std::cout << "  counterexample: " << rep.counterexample << '\n';
        }
        if (!rep.ok) break;  // report the first broken suite
    }
    if (as_json) {
        json rep{{"command", "verify"},
                 {"suite", suite},
                 {"seed", seed},
                 {"cases", cases},
                 {"max_n", max_n},
                 {"answer", ok ? "pass" : "fail"},
                 {"elapsed_ms", timer.ms()},
                 {"results", results}};
        std::cout << rep.dump(2) << '\n';
    }
    return ok ? 0 : 1;
}

int cmd_bench(const std::string& suite, const std::vector<long long>& sizes, uint64_t seed) {
    std::cout << "suite,size,median_ms,pair_evals,matchings,subproblems,depth,answer\n";
    for (long long n : sizes) {
        std::vector<double> times;
        RunCounters last;
        long long answer = 0;
        for (int rep = 0; rep < 3; ++rep) {
            oracle::Rng rng(verify::mix_seed(seed, static_cast<uint64_t>(n * 4 + rep)));
            RunCounters counters;
            Timer t;
            if (suite == "cavity") {
                auto g = oracle::random_bipartite(rng, static_cast<int>(n / 2),
                                                  static_cast<int>(n - n / 2),
                                                  std::min(1.0, 10.0 / n), 1000);
                answer = all_cavity(g).mwm;
            } else {  // unrooted
                auto labels = oracle::label_pool(static_cast<int>(n));
                auto a = oracle::random_unrooted_tree(rng, labels, true);
                auto b = oracle::random_unrooted_tree(rng, labels, true);
                answer = mast_unrooted(a, b, {}, &counters);
            }
            times.push_back(t.ms());
            last = counters;
        }
        std::sort(times.begin(), times.end());
        std::cout << suite << ',' << n << ',' << times[times.size() / 2] << ','
                  << last.mast.pair_evals << ',' << last.mast.matchings << ','
                  << last.subproblems_spawned << ',' << last.max_depth << ',' << answer
                  << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximum agreement subtrees and all-cavity matchings"};
    app.require_subcommand(1);

    std::string mast_mode, file_a, file_b;
    bool witness = false, as_json = false;
    auto* mast_cmd = app.add_subcommand("mast", "compute a maximum agreement subtree size");
    mast_cmd->add_option("mode", mast_mode, "rooted|unrooted|mixed")
        ->check(CLI::IsMember({"rooted", "unrooted", "mixed"}))
        ->required();
    mast_cmd->add_option("A", file_a, "first tree (Newick)")->required();
    mast_cmd->add_option("B", file_b, "second tree (Newick)")->required();
    mast_cmd->add_flag("--witness", witness, "also print an agreement subtree (rooted mode)");
    mast_cmd->add_flag("--json", as_json, "machine-readable report");

    std::string cavity_file;
    auto* cavity_cmd = app.add_subcommand("cavity", "all-cavity maximum weight matchings");
    cavity_cmd->add_option("G", cavity_file, "edge list file")->required();
    cavity_cmd->add_flag("--json", as_json, "machine-readable report");

    std::string suite = "all";
    uint64_t seed = 1;
    long long cases = 100;
    int max_n = 25;
    auto* verify_cmd = app.add_subcommand("verify", "run property suites against the oracles");
    verify_cmd->add_option("--suite", suite, "suite name or all")
        ->check(CLI::IsMember({"cavity", "rooted", "unrooted", "compression", "rangequery",
                               "mixed", "all"}));
    verify_cmd->add_option("--seed", seed, "master seed");
    verify_cmd->add_option("--cases", cases, "cases per suite");
    verify_cmd->add_option("--max-n", max_n, "size cap per case");
    verify_cmd->add_flag("--json", as_json, "machine-readable report");

    std::string bench_suite = "cavity";
    std::vector<long long> sizes;
    uint64_t bench_seed = 1;
    auto* bench_cmd = app.add_subcommand("bench", "timing and counter tables (CSV)");
    bench_cmd->add_option("--suite", bench_suite, "cavity|unrooted")
        ->check(CLI::IsMember({"cavity", "unrooted"}));
    bench_cmd->add_option("--sizes", sizes, "comma separated sizes")->delimiter(',');
    bench_cmd->add_option("--seed", bench_seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (mast_cmd->parsed()) return cmd_mast(mast_mode, file_a, file_b, witness, as_json);
        if (cavity_cmd->parsed()) return cmd_cavity(cavity_file, as_json);
        if (verify_cmd->parsed()) return cmd_verify(suite, seed, cases, max_n, as_json);
        if (bench_cmd->parsed()) return cmd_bench(bench_suite, sizes, bench_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
