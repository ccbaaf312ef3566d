#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "agreetree/tree.hpp"

namespace agreetree {

enum class NodeKind : uint8_t {
    AtomicLeaf,
    CompressedLeaf,      // z: stands for a set of source subtrees
    AuxLeaf,             // z-bar, z-double-bar: unlabeled scaffold
    ShrunkLeaf,          // gamma: stands for a removed subtree of the partner
    CompressedInternal,  // p1: stands for a source path
    AuxInternal,         // p1-bar
    OrdinaryInternal,
};

inline bool is_leaf_kind(NodeKind k) {
    return k == NodeKind::AtomicLeaf || k == NodeKind::CompressedLeaf ||
           k == NodeKind::AuxLeaf || k == NodeKind::ShrunkLeaf;
}

// Annotation slots; -1 = absent.  One-subtree compressions use alpha1 as
// the single alpha.  Reading an absent slot through the checked accessors
// throws.
struct Annotations {
    int alpha1 = -1;
    int alpha2 = -1;
    int alpha_plus = -1;
    int beta = -1;
    int beta12 = -1;
    int beta21 = -1;
};

// Provenance of a compressed node into the tree it was compressed from.
// attach: source nodes the represented subtrees hang from (a single entry
// for an attached set, the path nodes topmost-first for a hanging set);
// groups[k]: roots of the represented subtrees at attach[k];
// cont[k]: the child of attach[k] continuing toward the surviving node
// (kNoNode for attached sets).
struct Provenance {
    std::vector<NodeId> attach;
    std::vector<std::vector<NodeId>> groups;
    std::vector<NodeId> cont;
    std::vector<NodeId> flat() const {
        std::vector<NodeId> out;
        for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
        return out;
    }
};

// Rooted tree with node kinds, annotation payloads and provenance
// back-references; doubles as the DP view of shrunk partners (gamma ids).
struct AnnotatedTree {
    NodeId root = kNoNode;
    std::vector<NodeId> parent;
    std::vector<std::vector<NodeId>> children;
    std::vector<std::string> label;
    std::vector<NodeKind> kind;
    std::vector<Annotations> ann;
    std::vector<NodeId> src;   // node in the source tree, kNoNode for fresh nodes
    std::vector<int> prov_of;  // index into provs or -1
    std::vector<Provenance> provs;
    int form = 0;  // 0 plain, 1 one-subtree, 2 two-subtree compression
    NodeId gamma1 = kNoNode, gamma2 = kNoNode;  // shrunk-partner views only

    int size() const { return static_cast<int>(children.size()); }
    NodeId add(NodeKind k, std::string lab = std::string(), NodeId source = kNoNode);
    void link(NodeId par, NodeId child);

    bool is_leaf(NodeId v) const { return children[v].empty(); }
    const Provenance* prov(NodeId v) const {
        return prov_of[v] >= 0 ? &provs[prov_of[v]] : nullptr;
    }
    int alpha1(NodeId v) const { return checked(ann[v].alpha1, "alpha1"); }
    int alpha2(NodeId v) const { return checked(ann[v].alpha2, "alpha2"); }
    int alpha_plus(NodeId v) const { return checked(ann[v].alpha_plus, "alpha+"); }
    int beta(NodeId v) const { return checked(ann[v].beta, "beta"); }
    int beta12(NodeId v) const { return checked(ann[v].beta12, "beta12"); }
    int beta21(NodeId v) const { return checked(ann[v].beta21, "beta21"); }

    std::vector<NodeId> postorder() const;
    std::vector<NodeId> preorder() const;
    std::vector<std::string> atomic_labels() const;
    EvolutionaryTree skeleton_tree() const;  // plain copy (labels, shape)

private:
    static int checked(int v, const char* slot);
};

// Tree with up to two shrunk leaves standing for removed subtrees.
// gamma1/gamma2 correspond to the partner's alpha1/alpha2 slots.
struct ShrunkTree {
    EvolutionaryTree skeleton;
    NodeId gamma1 = kNoNode;
    NodeId gamma2 = kNoNode;

    int size() const { return skeleton.size(); }
    int shrunk_count() const { return (gamma1 != kNoNode) + (gamma2 != kNoNode); }
    std::vector<std::string> atomic_labels() const { return skeleton.leaf_labels(); }
};

// Replace one or two disjoint rooted subtrees of a rooted tree by shrunk
// leaves.  Throws on overlapping subtrees.
ShrunkTree shrink(const EvolutionaryTree& rooted, const std::vector<NodeId>& subtree_roots);

// View a plain rooted tree as an AnnotatedTree (form 0).
AnnotatedTree plain_annotated(const EvolutionaryTree& rooted);

// Root a shrunk tree at `at` (mixed edges filter unreachable nodes) and
// view it as an AnnotatedTree whose gamma ids track the shrunk leaves.
// `blocked` (if not kNoNode) cuts traversal, yielding the subtree view of
// the component on `at`'s side.
AnnotatedTree shrunk_view(const ShrunkTree& x, NodeId at, NodeId blocked = kNoNode);

// Core compression: rebuild the subproblem tree of `src` keeping only the
// given atomic labels; `form` selects one- or two-subtree scaffolding.
// Annotations are left unset; src/prov reference source node ids.
AnnotatedTree compress_against(const AnnotatedTree& source,
                               const std::set<std::string>& keep_labels, int form);

// Spec-facing wrapper of compress_against for the recursion's topology
// rebuild; annotations unset.
AnnotatedTree rebuild_subproblem_topology(const AnnotatedTree& w,
                                          const std::set<std::string>& keep_labels,
                                          int form = 2);

// Per-source-node score providers used to wire annotations.
struct AnnotationOracle {
    std::function<int(NodeId)> vs_r1;     // mast(T^v, R1); the alpha of form 1
    std::function<int(NodeId)> vs_r2;     // mast(T^v, R2)
    std::function<int(NodeId)> vs_rplus;  // mast(T^v, R+)
};

// Fill every annotation slot of `w` (built by compress_against) from the
// oracle, following the attached/hanging case formulas.
void wire_annotations(AnnotatedTree& w, const AnnotationOracle& oracle);

// Compression of a plain rooted tree with respect to one or two
// label-disjoint rooted subtrees.  The oracle supplies mast(T^v, .)
// scores; r2 may be an empty tree in compress_two.
AnnotatedTree compress_one(const EvolutionaryTree& t, const EvolutionaryTree& r,
                           const std::function<int(NodeId)>& oracle);
AnnotatedTree compress_two(const EvolutionaryTree& t, const EvolutionaryTree& r1,
                           const EvolutionaryTree& r2, const AnnotationOracle& oracle);

// Newick extended with per-node [kind ann] comments, for debugging and
// test fixtures.
std::string annotated_to_string(const AnnotatedTree& w);

}  // namespace agreetree
