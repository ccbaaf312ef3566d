#include "doctest.h"

#include <set>

#include "agreetree/newick.hpp"
#include "agreetree/oracle.hpp"
#include "agreetree/tree.hpp"

using namespace agreetree;

namespace {

int leaf_count(const EvolutionaryTree& t) {
    int c = 0;
    for (NodeId v = 0; v < t.size(); ++v)
        if (t.is_leaf(v) && t.labeled(v)) ++c;
    return c;
}

EvolutionaryTree path5() {
    EvolutionaryTree t;
    NodeId a = t.add_node("a");
    NodeId b = t.add_node();
    NodeId c = t.add_node();
    NodeId d = t.add_node();
    NodeId e = t.add_node("e");
    t.add_edge(a, b);
    t.add_edge(b, c);
    t.add_edge(c, d);
    t.add_edge(d, e);
    t.finalize();
    return t;
}

}  // namespace

TEST_CASE("parse_newick basics") {
    EvolutionaryTree t = parse_newick("(a,(b,c));");
    CHECK(t.size() == 5);
    CHECK(leaf_count(t) == 3);
    int internal = 0;
    for (NodeId v = 0; v < t.size(); ++v)
        if (!t.is_leaf(v)) ++internal;
    CHECK(internal == 2);

    EvolutionaryTree single = parse_newick("a;");
    CHECK(single.size() == 1);
    CHECK(single.label[0] == "a");

    CHECK_THROWS_AS(parse_newick("(a,(a,b));"), TreeError);
    CHECK_THROWS_AS(parse_newick("(a,(b,c)"), NewickError);
    CHECK_THROWS_AS(parse_newick("(a,);"), NewickError);
}

TEST_CASE("internal names are discarded, whitespace ignored") {
    EvolutionaryTree t = parse_newick(" ( a , ( b , c ) inner ) top ;");
    CHECK(leaf_count(t) == 3);
    for (NodeId v = 0; v < t.size(); ++v)
        if (!t.is_leaf(v)) CHECK(t.label[v].empty());
}

TEST_CASE("direction annotations") {
    EvolutionaryTree t = parse_newick("(a,>(b,c));");
    CHECK(t.has_direction());
    CHECK_THROWS_AS(parse_newick_rooted("(a,>(b,c));"), NewickError);
}

TEST_CASE("serialize round-trip") {
    CHECK(serialize_newick(parse_newick("a;")) == "a;");
    CHECK(serialize_newick(parse_newick("(a,b);")) == "(a,b);");
    oracle::Rng rng(7);
    for (int it = 0; it < 1000; ++it) {
        int n = 2 + static_cast<int>(rng() % 100);
        auto t = oracle::random_unrooted_tree(rng, oracle::label_pool(n), rng() & 1);
        EvolutionaryTree back = parse_newick(serialize_newick(t));
        CHECK(isomorphic_unrooted(t, back));
    }
}

TEST_CASE("mixed round-trip keeps directions") {
    oracle::Rng rng(11);
    for (int it = 0; it < 200; ++it) {
        auto t = oracle::random_mixed_tree(rng, oracle::label_pool(3 + rng() % 10), 0.5);
        EvolutionaryTree back = parse_newick(serialize_newick(t));
        CHECK(t.has_direction() == back.has_direction());
        // consistency sets per rooting must agree
        for (NodeId u = 0; u < t.size(); ++u) {
            auto a = root_at(t, u).leaf_labels();
            bool found = false;
            for (NodeId v = 0; v < back.size() && !found; ++v) {
                auto b = root_at(back, v).leaf_labels();
                std::multiset<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
                found = sa == sb;
            }
            CHECK(found);
        }
    }
}

TEST_CASE("root_at keeps all nodes of undirected trees") {
    EvolutionaryTree t = path5();
    EvolutionaryTree r = root_at(t, 2);
    CHECK(r.size() == 5);
    CHECK(r.children[r.root].size() == 2);
}

TEST_CASE("root_at drops nodes inconsistent with the root") {
    // path a - b - c with the a-b edge directed a->b: from c, the walk
    // b->a goes against the edge, so a is dropped
    EvolutionaryTree t;
    NodeId a = t.add_node("a");
    NodeId b = t.add_node();
    NodeId c = t.add_node("c");
    t.add_edge(a, b, true, false);
    t.add_edge(b, c);
    t.finalize();
    EvolutionaryTree rc = root_at(t, c);
    CHECK(rc.size() == 2);
    auto labels = rc.leaf_labels();
    CHECK(labels == std::vector<std::string>{"c"});
    EvolutionaryTree ra = root_at(t, a);
    CHECK(ra.size() == 3);
}

TEST_CASE("induced_subtree examples") {
    EvolutionaryTree t = parse_newick_rooted("((a,b),c);");
    EvolutionaryTree bc = induced_subtree(t, {"b", "c"});
    CHECK(bc.size() == 3);
    CHECK(bc.children[bc.root].size() == 2);

    EvolutionaryTree all = induced_subtree(t, {"a", "b", "c"});
    CHECK(isomorphic_rooted(all, t));

    EvolutionaryTree one = induced_subtree(t, {"a"});
    CHECK(one.size() == 1);
    CHECK(one.label[one.root] == "a");

    EvolutionaryTree none = induced_subtree(t, {});
    CHECK(none.size() == 0);
}

TEST_CASE("induction composes") {
    oracle::Rng rng(13);
    for (int it = 0; it < 300; ++it) {
        auto labels = oracle::label_pool(3 + rng() % 12);
        EvolutionaryTree t = oracle::random_rooted_tree(rng, labels, rng & 1 ? true : false);
        std::vector<std::string> bset, aset;
        for (const auto& l : labels) {
            if (rng() % 3) bset.push_back(l);
        }
        for (const auto& l : bset)
            if (rng() % 2) aset.push_back(l);
        EvolutionaryTree direct = induced_subtree(t, aset);
        EvolutionaryTree via = induced_subtree(induced_subtree(t, bset), aset);
        CHECK(canonical_rooted(direct) == canonical_rooted(via));
    }
}

TEST_CASE("find_separator") {
    EvolutionaryTree p = path5();
    CHECK(find_separator(p) == 2);

    EvolutionaryTree star = parse_newick("(a,b,c,d,e);");
    NodeId s = find_separator(star);
    CHECK(!star.is_leaf(s));

    EvolutionaryTree two = parse_newick("(a,b);");
    two = root_at(two, 0);  // still fine
    EvolutionaryTree pair;
    pair.add_node("a");
    pair.add_node("b");
    pair.add_edge(0, 1);
    pair.finalize();
    CHECK_THROWS_AS(find_separator(pair), TreeError);

    oracle::Rng rng(17);
    for (int it = 0; it < 200; ++it) {
        int n = 3 + static_cast<int>(rng() % 250);
        auto t = oracle::random_unrooted_tree(rng, oracle::label_pool(n), rng() & 1);
        NodeId sep = find_separator(t);
        for (const auto& comp : components_without(t, sep))
            CHECK(static_cast<int>(comp.size()) <= t.size() / 2);
    }
}

TEST_CASE("insert_dummy_nodes") {
    EvolutionaryTree e;
    e.add_node("a");
    e.add_node("b");
    e.add_edge(0, 1);
    e.finalize();
    EvolutionaryTree d = insert_dummy_nodes(e);
    CHECK(d.size() == 3);
    CHECK(d.dummy[2]);
    CHECK(d.degree(2) == 2);

    oracle::Rng rng(19);
    auto t = oracle::random_unrooted_tree(rng, oracle::label_pool(30), false);
    EvolutionaryTree dt = insert_dummy_nodes(t);
    CHECK(dt.size() == 2 * t.size() - 1);
    CHECK(dt.leaf_labels().size() == t.leaf_labels().size());
}

TEST_CASE("preorder_index subtree intervals") {
    oracle::Rng rng(23);
    for (int it = 0; it < 200; ++it) {
        int n = 2 + static_cast<int>(rng() % 100);
        auto t = oracle::random_rooted_tree(rng, oracle::label_pool(n), false);
        PreorderIndex idx = preorder_index(t);
        CHECK(idx.number[t.root] == 1);
        CHECK(idx.desc_count[t.root] == t.size() - 1);
        // the descendants of v are exactly the numbers in [v, v+desc(v)]
        for (NodeId v = 0; v < t.size(); ++v) {
            std::set<int> want;
            std::vector<NodeId> stack{v};
            while (!stack.empty()) {
                NodeId u = stack.back();
                stack.pop_back();
                want.insert(idx.number[u]);
                for (NodeId c : t.children[u]) stack.push_back(c);
            }
            CHECK(static_cast<int>(want.size()) == idx.desc_count[v] + 1);
            CHECK(*want.begin() == idx.number[v]);
            CHECK(*want.rbegin() == idx.number[v] + idx.desc_count[v]);
            if (t.children[v].empty()) CHECK(idx.desc_count[v] == 0);
        }
    }
}
