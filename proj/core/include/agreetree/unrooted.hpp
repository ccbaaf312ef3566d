#pragma once

#include "agreetree/mast.hpp"
#include "agreetree/range_query.hpp"

namespace agreetree {

// How subproblem annotations are produced: the fast section-6/7 machinery,
// the direct DP reference path, or both with equality asserts.
enum class AuxMode { Fast, Reference, Paranoid };

struct UnrootedOptions {
    AuxMode mode = AuxMode::Fast;
    bool check_discipline = true;  // structural spawn asserts (throw on violation)
};

struct RunCounters {
    MastStats mast;
    long long subproblems_spawned = 0;
    int max_depth = 0;
};

// One recursion subproblem: a compressed tree W paired with a shrunk tree
// X over the same atomic label set.
struct Subproblem {
    AnnotatedTree w;
    ShrunkTree x;
};

// Per-node sparse arrays A_z with A_z[i] = mwm(G_{z,i}) over the component
// columns, plus the subtree-interval index answering
// max { A_z[i] | z in W^v }.
struct CavityArrayBundle {
    std::vector<SparseArray> arrays;  // indexed by W node id
    PreorderIndex pre;
    std::vector<int> max_child;  // per node, the atomic-heaviest child (kNoNode for leaves)
    long long subtree_max(const SubtreeMaxIndex& idx, NodeId v, int i) const;
};

// comp_scores[j][v] = mast(W^v, component j); builds every G_z with the
// max-child edge pruning and fills A_z by all-cavity matching.
CavityArrayBundle build_cavity_arrays(const AnnotatedTree& w,
                                      const std::vector<std::vector<int>>& comp_scores);

// mast(U1, U2) of unrooted evolutionary trees by the separator recursion.
int mast_unrooted(const EvolutionaryTree& u1, const EvolutionaryTree& u2,
                  const UnrootedOptions& opt = {}, RunCounters* counters = nullptr);

// Mixed trees: maximum over consistent rootings.  The left tree's rootings
// are swept directly; the right side runs through the shrunk-tree
// recursion with per-rooting consistency filtering.
int mast_mixed(const EvolutionaryTree& m1, const EvolutionaryTree& m2,
               const UnrootedOptions& opt = {}, RunCounters* counters = nullptr);

// max over rootings z of X of mast(W, X^z); the recursive core.
int mast_wx(const AnnotatedTree& w, const ShrunkTree& x, const UnrootedOptions& opt = {},
            RunCounters* counters = nullptr);

// Subproblem spawning at an internal node y of X (Fig. new_subproblem):
// topologies plus annotations per the selected mode.  The spec-facing
// aux_* wrappers check the shrunk-leaf precondition.
std::vector<Subproblem> new_subproblems(const AnnotatedTree& w, const ShrunkTree& x, NodeId y,
                                        const UnrootedOptions& opt = {},
                                        RunCounters* counters = nullptr);
std::vector<Subproblem> aux_zero_shrunk(const AnnotatedTree& w, const ShrunkTree& x, NodeId y,
                                        const UnrootedOptions& opt = {});
std::vector<Subproblem> aux_one_shrunk(const AnnotatedTree& w, const ShrunkTree& x, NodeId y,
                                       const UnrootedOptions& opt = {});
std::vector<Subproblem> aux_two_shrunk(const AnnotatedTree& w, const ShrunkTree& x, NodeId y,
                                       const UnrootedOptions& opt = {});

}  // namespace agreetree
