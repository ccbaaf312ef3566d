#include "doctest.h"

#include "agreetree/mast.hpp"
#include "agreetree/newick.hpp"
#include "agreetree/oracle.hpp"

using namespace agreetree;

TEST_CASE("mast_rooted basics") {
    EvolutionaryTree a = parse_newick_rooted("(a,(b,c));");
    EvolutionaryTree b = parse_newick_rooted("((a,b),c);");
    CHECK(mast_rooted(a, a).size == 3);
    CHECK(mast_rooted(a, b).size == 2);

    EvolutionaryTree c = parse_newick_rooted("(x,(y,z));");
    CHECK(mast_rooted(a, c).size == 0);
}

TEST_CASE("mast_rooted equals subset brute force") {
    oracle::Rng rng(41);
    for (int it = 0; it < 400; ++it) {
        auto pool = oracle::label_pool(3 + rng() % 9);
        auto pick = [&](size_t k) {
            auto p = pool;
            std::shuffle(p.begin(), p.end(), rng);
            p.resize(std::min(k, p.size()));
            return p;
        };
        EvolutionaryTree t1 = oracle::random_rooted_tree(rng, pick(2 + rng() % pool.size()),
                                                         rng() & 1);
        EvolutionaryTree t2 = oracle::random_rooted_tree(rng, pick(2 + rng() % pool.size()),
                                                         rng() & 1);
        int fast = mast_rooted(t1, t2).size;
        CHECK(fast == oracle::brute_mast_rooted(t1, t2));
        CHECK(fast == mast_rooted(t2, t1).size);
    }
}

TEST_CASE("table retrieval is the root column") {
    EvolutionaryTree t1 = parse_newick_rooted("((a,b),(c,d));");
    EvolutionaryTree t2 = parse_newick_rooted("((a,c),(b,d));");
    auto res = mast_rooted(t1, t2);
    // monotone under descent and consistent with whole-tree retrieval
    for (NodeId u = 0; u < t1.size(); ++u) {
        CHECK(res.table.whole_vs(u) == res.table.at(u, res.table.root2));
        for (NodeId c : t1.children[u])
            CHECK(res.table.whole_vs(u) >= res.table.whole_vs(c));
    }
}

TEST_CASE("r_mast_internal cases") {
    EvolutionaryTree t1 = parse_newick_rooted("(a,b);");
    EvolutionaryTree t2 = parse_newick_rooted("(a,b);");
    auto res = mast_rooted(t1, t2);
    AnnotatedTree w1 = plain_annotated(t1), w2 = plain_annotated(t2);
    CHECK(r_mast_internal(w1, w2, t1.root, t2.root, res.table) == 2);
}

TEST_CASE("r_mast against assignment enumeration") {
    oracle::Rng rng(43);
    for (int it = 0; it < 200; ++it) {
        auto pool = oracle::label_pool(4 + rng() % 6);
        EvolutionaryTree t1 = oracle::random_rooted_tree(rng, pool, false);
        EvolutionaryTree t2 = oracle::random_rooted_tree(rng, pool, false);
        auto res = mast_rooted(t1, t2);
        AnnotatedTree w1 = plain_annotated(t1), w2 = plain_annotated(t2);
        NodeId u = t1.root, v = t2.root;
        int got = r_mast_internal(w1, w2, u, v, res.table);
        // exhaustive assignment of children pairs
        const auto& A = t1.children[u];
        const auto& B = t2.children[v];
        int bestsum = 0;
        std::vector<int> perm(B.size());
        for (size_t i = 0; i < B.size(); ++i) perm[i] = static_cast<int>(i);
        // enumerate all injections A -> B for |A| <= 5, |B| <= 5
        if (A.size() <= 5 && B.size() <= 5) {
            std::vector<int> chosen(A.size(), -1);
            std::function<void(size_t, int)> rec = [&](size_t i, int acc) {
                bestsum = std::max(bestsum, acc);
                if (i == A.size()) return;
                rec(i + 1, acc);  // leave A[i] unmatched
                for (size_t j = 0; j < B.size(); ++j) {
                    bool used = false;
                    for (size_t k = 0; k < i; ++k) used |= chosen[k] == static_cast<int>(j);
                    if (used) continue;
                    chosen[i] = static_cast<int>(j);
                    rec(i + 1, acc + res.table.at(A[i], B[j]));
                    chosen[i] = -1;
                }
            };
            rec(0, 0);
            CHECK(got == bestsum);
        }
    }
}

TEST_CASE("annotated base cases") {
    // one-subtree form: a single compressed leaf with alpha = 4 against a
    // lone shrunk leaf scores 4
    AnnotatedTree w;
    NodeId r = w.add(NodeKind::OrdinaryInternal);
    NodeId z = w.add(NodeKind::CompressedLeaf);
    w.link(r, z);
    w.root = r;
    w.form = 1;
    w.ann[z].alpha1 = 4;
    w.ann[r].alpha1 = 4;

    AnnotatedTree x;
    NodeId g = x.add(NodeKind::ShrunkLeaf);
    x.root = g;
    x.gamma1 = g;
    CHECK(mast_annotated(w, x).size() == 4);

    // all alpha = 0: gamma maps nowhere
    w.ann[z].alpha1 = 0;
    w.ann[r].alpha1 = 0;
    CHECK(mast_annotated(w, x).size() == 0);

    // auxiliary internal nodes never map
    AnnotatedTree w2;
    NodeId r2 = w2.add(NodeKind::AuxInternal);
    NodeId l2 = w2.add(NodeKind::AuxLeaf);
    NodeId a2 = w2.add(NodeKind::AtomicLeaf, "a");
    w2.link(r2, l2);
    w2.link(r2, a2);
    w2.root = r2;
    AnnotatedTree x2;
    NodeId xr = x2.add(NodeKind::OrdinaryInternal);
    NodeId xa = x2.add(NodeKind::AtomicLeaf, "a");
    NodeId xb = x2.add(NodeKind::AtomicLeaf, "b");
    x2.link(xr, xa);
    x2.link(xr, xb);
    x2.root = xr;
    MastTable t = mast_annotated(w2, x2);
    CHECK(t.size() == 1);
    CHECK(r_mast_internal(w2, x2, r2, xr, t) == 0);
}

TEST_CASE("witness extraction") {
    EvolutionaryTree a = parse_newick_rooted("((a,b),(c,d));");
    auto self = mast_rooted(a, a);
    EvolutionaryTree w = extract_agreement_subtree(self.table, a, a);
    CHECK(oracle::agreement_valid(a, a, w, 4));

    EvolutionaryTree b = parse_newick_rooted("(x,y);");
    auto disjoint = mast_rooted(a, b);
    EvolutionaryTree w0 = extract_agreement_subtree(disjoint.table, a, b);
    CHECK(w0.size() == 0);
    CHECK(oracle::agreement_valid(a, b, w0, 0));

    oracle::Rng rng(47);
    for (int it = 0; it < 300; ++it) {
        auto pool = oracle::label_pool(3 + rng() % 17);
        EvolutionaryTree t1 = oracle::random_rooted_tree(rng, pool, rng() & 1);
        auto p2 = pool;
        std::shuffle(p2.begin(), p2.end(), rng);
        p2.resize(2 + rng() % (pool.size() - 1));
        EvolutionaryTree t2 = oracle::random_rooted_tree(rng, p2, rng() & 1);
        auto res = mast_rooted(t1, t2);
        EvolutionaryTree wit = extract_agreement_subtree(res.table, t1, t2);
        CHECK(oracle::agreement_valid(t1, t2, wit, res.size));
    }

    // annotated tables refuse extraction
    AnnotatedTree aw;
    NodeId r = aw.add(NodeKind::OrdinaryInternal);
    NodeId z = aw.add(NodeKind::CompressedLeaf);
    aw.link(r, z);
    aw.root = r;
    aw.form = 1;
    aw.ann[r].alpha1 = 0;
    aw.ann[z].alpha1 = 1;
    AnnotatedTree x;
    x.gamma1 = x.add(NodeKind::ShrunkLeaf);
    x.root = x.gamma1;
    MastTable t = mast_annotated(aw, x);
    CHECK_THROWS_AS(extract_agreement_subtree(t, a, b), TreeError);
}
