#include "doctest.h"

#include <sstream>

#include "agreetree/matching.hpp"
#include "agreetree/oracle.hpp"

using namespace agreetree;

namespace {

WeightedBipartiteGraph example_graph() {
    // u1-v1:5  u1-v2:2  u2-v1:3
    return WeightedBipartiteGraph(2, 2, {{0, 0, 5}, {0, 1, 2}, {1, 0, 3}});
}

}  // namespace

TEST_CASE("max_weight_matching small cases") {
    CHECK(max_weight_matching(example_graph()).weight == 5);
    WeightedBipartiteGraph single(1, 1, {{0, 0, 7}});
    CHECK(max_weight_matching(single).weight == 7);
    WeightedBipartiteGraph empty(3, 2, {});
    CHECK(max_weight_matching(empty).weight == 0);
}

TEST_CASE("graph validation") {
    CHECK_THROWS_AS(WeightedBipartiteGraph(1, 1, {{0, 0, 0}}), MatchingError);
    CHECK_THROWS_AS(WeightedBipartiteGraph(1, 1, {{0, 0, -3}}), MatchingError);
    CHECK_THROWS_AS(WeightedBipartiteGraph(1, 1, {{0, 0, 2}, {0, 0, 5}}), MatchingError);
    CHECK_THROWS_AS(WeightedBipartiteGraph(1, 1, {{0, 1, 2}}), MatchingError);
}

TEST_CASE("cavity digraph of a single matched edge") {
    WeightedBipartiteGraph g(1, 1, {{0, 0, 7}});
    Matching m = max_weight_matching(g);
    CavityDigraph d = build_cavity_digraph(g, m, Side::X);
    // arcs: u -> v (-7), v -> t (0)
    CHECK(d.arcs.size() == 2);
    LongestPathResult lp = longest_path_weights(d);
    CHECK(lp.weight[0] == -7);
    CHECK(lp.weight[1] == 0);
    CHECK(lp.weight[d.t()] == 0);
    CavityResult r = all_cavity(g);
    CHECK(r.mwm == 7);
    CHECK(r.x_values[0] == 0);
    CHECK(r.y_values[0] == 0);
}

TEST_CASE("digraph arc families") {
    WeightedBipartiteGraph g = example_graph();
    Matching m = max_weight_matching(g);
    CavityDigraph d = build_cavity_digraph(g, m, Side::X);
    CHECK(d.arcs.size() <= static_cast<size_t>(g.num_nodes() + g.edges.size()));
    int neg = 0;
    for (const auto& a : d.arcs)
        if (a.w < 0) ++neg;
    int matched = 0;
    for (int x = 0; x < g.nx; ++x)
        if (m.xy[x] != -1) ++matched;
    CHECK(neg == matched);  // one negative arc per matched pair

    // an unmatched x contributes only the x -> t zero arc
    WeightedBipartiteGraph g2(2, 1, {{0, 0, 9}});
    Matching m2 = max_weight_matching(g2);
    CavityDigraph d2 = build_cavity_digraph(g2, m2, Side::X);
    int from_unmatched = 0;
    for (const auto& a : d2.arcs)
        if (a.from == 1) {
            ++from_unmatched;
            CHECK(a.to == d2.t());
            CHECK(a.w == 0);
        }
    CHECK(from_unmatched == 1);
}

TEST_CASE("longest paths against path enumeration") {
    oracle::Rng rng(101);
    for (int it = 0; it < 300; ++it) {
        int nx = 1 + static_cast<int>(rng() % 5);
        int ny = 1 + static_cast<int>(rng() % 5);
        auto g = oracle::random_bipartite(rng, nx, ny, 0.5, 9);
        Matching m = max_weight_matching(g);
        CavityDigraph d = build_cavity_digraph(g, m, Side::X);
        LongestPathResult lp = longest_path_weights(d);
        for (int x = 0; x < nx; ++x) {
            if (m.xy[x] == -1) continue;
            CHECK(lp.reachable[x]);
            CHECK(lp.weight[x] == oracle::best_alternating_change(g, m, Side::X, x));
        }
    }
}

TEST_CASE("a suboptimal matching is rejected via its positive cycle") {
    WeightedBipartiteGraph g(2, 2, {{0, 0, 1}, {0, 1, 5}, {1, 0, 5}, {1, 1, 1}});
    Matching bad;
    bad.xy = {0, 1};
    bad.yx = {0, 1};
    bad.weight = 2;
    CavityDigraph d = build_cavity_digraph(g, bad, Side::X);
    CHECK_THROWS_AS(longest_path_weights(d), MatchingError);
}

TEST_CASE("all_cavity example and oracle sweep") {
    CavityResult r = all_cavity(example_graph());
    CHECK(r.mwm == 5);
    CHECK(r.x_values[0] == 3);
    CHECK(r.x_values[1] == 5);
    CHECK(r.y_values[0] == 2);
    CHECK(r.y_values[1] == 5);

    oracle::Rng rng(103);
    for (int it = 0; it < 500; ++it) {
        int nx = 1 + static_cast<int>(rng() % 8);
        int ny = 1 + static_cast<int>(rng() % 8);
        auto g = oracle::random_bipartite(rng, nx, ny, 0.4, 20);
        CavityResult fast = all_cavity(g);
        CavityResult naive = oracle::naive_all_cavity(g);
        CHECK(fast.mwm == naive.mwm);
        CHECK(fast.mwm == oracle::enumerate_mwm(g));
        CHECK(fast.x_values == naive.x_values);
        CHECK(fast.y_values == naive.y_values);
        for (long long v : fast.x_values) CHECK(v <= fast.mwm);
    }
}

TEST_CASE("isolated nodes keep mwm") {
    WeightedBipartiteGraph g(3, 2, {{0, 0, 4}});
    CavityResult r = all_cavity(g);
    CHECK(r.x_values[1] == 4);
    CHECK(r.x_values[2] == 4);
    CHECK(r.y_values[1] == 4);
}

TEST_CASE("edge list io") {
    std::stringstream ss("2 2 3\n1 1 5\n1 2 2\n2 1 3\n");
    WeightedBipartiteGraph g = read_edge_list(ss);
    CHECK(g.nx == 2);
    CHECK(g.edges.size() == 3);
    CHECK(g.max_weight == 5);
    std::stringstream out;
    write_cavity_result(out, all_cavity(g));
    CHECK(out.str() == "mwm 5\nx 1 3\nx 2 5\ny 1 2\ny 2 5\n");

    std::stringstream bad("2 2\n");
    CHECK_THROWS_AS(read_edge_list(bad), MatchingError);

    std::stringstream empty("0 0 0\n");
    CHECK(all_cavity(read_edge_list(empty)).mwm == 0);
}
