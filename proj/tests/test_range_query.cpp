#include "doctest.h"

#include "agreetree/oracle.hpp"
#include "agreetree/range_query.hpp"

using namespace agreetree;

TEST_CASE("static range max") {
    StaticRangeMax rm = range_max({3, 1, 4, 1, 5});
    CHECK(rm.query(2, 4) == 4);
    CHECK(rm.query(3, 3) == 4);
    CHECK(rm.query(1, 5) == 5);
    CHECK_THROWS_AS(rm.query(0, 2), RangeError);
    CHECK_THROWS_AS(rm.query(2, 6), RangeError);
    CHECK_THROWS_AS(range_max({}), RangeError);
}

TEST_CASE("sparse array semantics") {
    SparseArray a(10, 7);
    CHECK(a.read(3) == 7);
    a.write(2, 9);
    a.write(5, 7);  // equals the default: not a distinct value
    CHECK(a.read(2) == 9);
    auto d = a.distinct_values();
    CHECK(d == std::vector<long long>({7, 9}));
    a.init(1);
    CHECK(a.read(2) == 1);  // O(1) re-init wipes overrides
    CHECK(a.distinct_values() == std::vector<long long>({1}));
    CHECK_THROWS_AS(a.read(10), RangeError);
}

TEST_CASE("subtree index single override") {
    // chain of 3 nodes: preorder numbers 1,2,3
    EvolutionaryTree t;
    NodeId r = t.add_node();
    NodeId m = t.add_node();
    NodeId l = t.add_node("a");
    t.add_edge(r, m);
    t.add_edge(m, l);
    t.set_root(r);
    t.finalize();
    PreorderIndex pre = preorder_index(t);
    std::vector<SparseArray> arrays(3, SparseArray(5, 1));
    arrays[1].write(3, 9);  // A_2[3] = 9
    std::vector<const SparseArray*> ptrs{&arrays[0], &arrays[1], &arrays[2]};
    SubtreeMaxIndex idx = build_subtree_index(ptrs, pre);
    CHECK(idx.query_subtree_max(r, 3) == 9);
    CHECK(idx.query_subtree_max(l, 3) == 1);
    CHECK(idx.query_subtree_max(r, 0) == 1);
}

TEST_CASE("dimension mismatch rejected") {
    EvolutionaryTree t;
    NodeId r = t.add_node();
    NodeId l = t.add_node("a");
    t.add_edge(r, l);
    t.set_root(r);
    t.finalize();
    PreorderIndex pre = preorder_index(t);
    SparseArray a(3, 0), b(4, 0);
    std::vector<const SparseArray*> ptrs{&a, &b};
    CHECK_THROWS_AS(build_subtree_index(ptrs, pre), RangeError);
}

TEST_CASE("subtree index equals naive scans") {
    oracle::Rng rng(31);
    for (int it = 0; it < 200; ++it) {
        auto shape = oracle::random_rooted_tree(rng, oracle::label_pool(2 + rng() % 40), false);
        const int h = shape.size();
        const int b = 1 + static_cast<int>(rng() % 30);
        PreorderIndex pre = preorder_index(shape);
        std::vector<SparseArray> arrays(h, SparseArray(b, 0));
        std::vector<std::vector<long long>> dense(h, std::vector<long long>(b));
        for (int k = 0; k < h; ++k) {
            long long def = rng() % 10;
            arrays[k].init(def);
            std::fill(dense[k].begin(), dense[k].end(), def);
            int overrides = static_cast<int>(rng() % 5);
            if (it % 13 == 0) overrides = b;  // full row
            for (int o = 0; o < overrides; ++o) {
                int i = static_cast<int>(rng() % b);
                long long v = rng() % 15;
                arrays[k].write(i, v);
                dense[k][i] = v;
            }
        }
        std::vector<const SparseArray*> ptrs(h);
        for (int k = 0; k < h; ++k) ptrs[k] = &arrays[k];
        SubtreeMaxIndex idx = build_subtree_index(ptrs, pre);
        for (NodeId v = 0; v < h; ++v)
            for (int i = 0; i < b; ++i) {
                long long want = kNegInf;
                int p = pre.number[v];
                for (int z = p; z <= p + pre.desc_count[v]; ++z)
                    want = std::max(want, dense[z - 1][i]);
                CHECK(idx.query_subtree_max(v, i) == want);
            }
    }
}

TEST_CASE("attachment index") {
    EvolutionaryTree t;
    NodeId u = t.add_node();
    NodeId a = t.add_node("a");
    NodeId b = t.add_node("b");
    NodeId c = t.add_node("c");
    t.add_edge(u, a);
    t.add_edge(u, b);
    t.add_edge(u, c);
    t.set_root(u);
    t.finalize();
    AttachmentIndex idx = build_attachment_index(t, {0, 2, 9, 4});
    CHECK(idx.interval_query(u, 1, 2) == 9);
    CHECK(idx.interval_query(u, 1, 3) == 9);
    CHECK(idx.interval_query(u, 3, 3) == 4);
    CHECK(idx.interval_query(u, 2, 1) == kNegInf);
    CHECK_THROWS_AS(idx.interval_query(u, 0, 2), RangeError);
    CHECK(idx.path_query({u}) == 9);
    CHECK(idx.all_but_child(u, b) == 4);
    CHECK(idx.all_but_child(u, a) == 9);
}
