#pragma once

#include <optional>
#include <random>

#include "agreetree/matching.hpp"
#include "agreetree/tree.hpp"

namespace agreetree::oracle {

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Oracles refuse oversized inputs instead of running forever.
struct OracleBudget {
    int max_shared_labels = 20;
    long long max_states = 1LL << 22;
};

using Rng = std::mt19937_64;

// Exhaustive label-subset MAST: max |L'| with the two induced subtrees
// label-isomorphic.  Enumerates subsets by descending size.
int brute_mast_rooted(const EvolutionaryTree& t1, const EvolutionaryTree& t2,
                      const OracleBudget& budget = {});

// Exhaustive max over root pairs of mast_rooted (internal roots when a
// tree has >= 3 nodes, all nodes otherwise).
int naive_mast_unrooted(const EvolutionaryTree& u1, const EvolutionaryTree& u2);

// Exhaustive max over all consistent rootings of two mixed trees.
int naive_mast_mixed(const EvolutionaryTree& m1, const EvolutionaryTree& m2);

// mwm(G - {u}) by per-node deletion and a fresh matching each time.
CavityResult naive_all_cavity(const WeightedBipartiteGraph& g);

// Maximum matching weight by full enumeration; shares no code with the
// augmenting-path engine.
long long enumerate_mwm(const WeightedBipartiteGraph& g, const OracleBudget& budget = {});

WeightedBipartiteGraph delete_node(const WeightedBipartiteGraph& g, Side side, int idx);

// Largest net change over alternating paths starting at the given matched
// node (direct path enumeration in G).
long long best_alternating_change(const WeightedBipartiteGraph& g, const Matching& m,
                                  Side side, int idx, const OracleBudget& budget = {});

// Checks that `witness` really is an agreement subtree of t1 and t2 with
// `claimed` leaves: label-preserving isomorphism against both inductions.
bool agreement_valid(const EvolutionaryTree& t1, const EvolutionaryTree& t2,
                     const EvolutionaryTree& witness, int claimed);

// Random trees by recursive leaf attachment over the given labels;
// bounded_degree keeps every node at degree <= 3.
EvolutionaryTree random_unrooted_tree(Rng& rng, const std::vector<std::string>& labels,
                                      bool bounded_degree = false);
EvolutionaryTree random_rooted_tree(Rng& rng, const std::vector<std::string>& labels,
                                    bool bounded_degree = false);
// Unrooted tree with each edge directed with probability directed_prob.
EvolutionaryTree random_mixed_tree(Rng& rng, const std::vector<std::string>& labels,
                                   double directed_prob);

std::vector<std::string> label_pool(int count, const std::string& prefix = "t");

WeightedBipartiteGraph random_bipartite(Rng& rng, int nx, int ny, double edge_prob,
                                        long long max_weight);

}  // namespace agreetree::oracle
