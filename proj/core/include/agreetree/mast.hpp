#pragma once

#include "agreetree/compression.hpp"
#include "agreetree/matching.hpp"

namespace agreetree {

struct MastStats {
    long long pair_evals = 0;
    long long matchings = 0;
    long long dp_runs = 0;
};

// Full node-pair table of mast(W1^u, W2^v).  The root column gives
// mast(W1^u, W2) for any u in O(1).
struct MastTable {
    int n1 = 0, n2 = 0;
    NodeId root1 = kNoNode, root2 = kNoNode;
    bool annotated = false;
    std::vector<int> val;

    int at(NodeId u, NodeId v) const { return val[static_cast<size_t>(u) * n2 + v]; }
    int& at(NodeId u, NodeId v) { return val[static_cast<size_t>(u) * n2 + v]; }
    int size() const { return at(root1, root2); }
    int whole_vs(NodeId u) const { return at(u, root2); }  // mast(W1^u, W2)
};

// Generalized MAST of an annotated tree against a rooted partner view
// whose shrunk leaves reference the annotation slots (gamma1 <-> alpha1,
// gamma2 <-> alpha2, their meet <-> alpha+).  weight_cap, when >= 0,
// asserts every matching edge weight stays below it.
MastTable mast_annotated(const AnnotatedTree& w1, const AnnotatedTree& w2,
                         MastStats* stats = nullptr, long long weight_cap = -1);

struct RootedMastResult {
    int size = 0;
    MastTable table;
};

// Plain rooted MAST (possibly disjoint label sets).
RootedMastResult mast_rooted(const EvolutionaryTree& t1, const EvolutionaryTree& t2,
                             MastStats* stats = nullptr);

// Agreement size with u mapped to v, recomputed from a filled table
// (children matching plus the auxiliary-leaf and compressed-node cases).
int r_mast_internal(const AnnotatedTree& w1, const AnnotatedTree& w2, NodeId u, NodeId v,
                    const MastTable& table);

// Witness for plain tables; throws on annotated ones.
EvolutionaryTree extract_agreement_subtree(const MastTable& table, const EvolutionaryTree& t1,
                                           const EvolutionaryTree& t2);

}  // namespace agreetree
