#pragma once

#include <string>
#include <vector>
#include <stdexcept>
#include <cstdint>

namespace agreetree {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

struct TreeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Half-edge of an adjacency list.  `passable` is false when the edge is
// directed against this traversal, i.e. walking from the owning node to
// `to` is forbidden.  Undirected edges are passable both ways.
struct HalfEdge {
    NodeId to;
    bool passable = true;
};

// Rooted, unrooted or mixed tree with distinctly labeled leaves.  Node
// identity is a dense integer id; all per-node data are arrays indexed by
// id.  Trees are immutable after finalize(); readers may share freely.
struct EvolutionaryTree {
    std::vector<std::vector<HalfEdge>> adj;
    std::vector<std::string> label;   // empty string = unlabeled
    std::vector<char> dummy;          // nodes added by insert_dummy_nodes
    NodeId root = kNoNode;

    // Rooted form only; empty otherwise.
    std::vector<NodeId> parent;
    std::vector<std::vector<NodeId>> children;

    EvolutionaryTree() = default;
    explicit EvolutionaryTree(int n)
        : adj(n), label(n), dummy(n, 0) {}

    int size() const { return static_cast<int>(adj.size()); }
    bool rooted() const { return root != kNoNode; }
    int degree(NodeId v) const { return static_cast<int>(adj[v].size()); }
    bool is_leaf(NodeId v) const { return degree(v) <= 1; }
    bool labeled(NodeId v) const { return !label[v].empty(); }

    NodeId add_node(std::string name = std::string());
    void add_edge(NodeId a, NodeId b, bool a_to_b = true, bool b_to_a = true);
    // Validates invariants (connected, acyclic, distinct leaf labels,
    // directed edges only on unrooted trees) and, for rooted trees,
    // builds parent/children.  Throws TreeError on violation.
    void finalize();
    void set_root(NodeId r);

    bool has_direction() const;
    std::vector<std::string> leaf_labels() const;
    std::vector<NodeId> preorder_nodes() const;   // rooted only
    std::vector<NodeId> postorder_nodes() const;  // rooted only
};

// Result of a node-remapping construction: `map[old_id]` is the id in
// `tree`, or kNoNode when the node was dropped.
struct MappedTree {
    EvolutionaryTree tree;
    std::vector<NodeId> map;
};

struct PreorderIndex {
    std::vector<int> number;      // node -> 1..h in preorder
    std::vector<int> desc_count;  // node -> number of proper descendants
    std::vector<NodeId> by_number;  // 1..h -> node
};

// Roots `tree` at u.  Mixed input keeps only nodes whose path from u
// traverses every directed edge in its own direction; undirected input
// keeps all nodes.  Already-rooted input is reinterpreted through its
// adjacency.
MappedTree root_at_mapped(const EvolutionaryTree& tree, NodeId u);
EvolutionaryTree root_at(const EvolutionaryTree& tree, NodeId u);

// T | L': selected leaves plus their pairwise LCAs, ancestor order kept,
// pass-through nodes contracted.  Empty label set gives the empty tree.
MappedTree induced_subtree_mapped(const EvolutionaryTree& tree,
                                  const std::vector<std::string>& labels);
EvolutionaryTree induced_subtree(const EvolutionaryTree& tree,
                                 const std::vector<std::string>& labels);

// Unrooted restriction: minimal subtree spanning the selected leaves with
// unlabeled degree-2 nodes contracted.  Directional flags of contracted
// chains are combined (a merged edge is passable only if every hop is).
MappedTree restrict_unrooted_mapped(const EvolutionaryTree& tree,
                                    const std::vector<std::string>& labels);

// Internal node whose removal leaves components of at most floor(n/2)
// nodes.  Deterministic: minimizes the largest component, ties broken by
// smallest preorder number of a traversal from node 0.  Requires >= 3 nodes.
NodeId find_separator(const EvolutionaryTree& tree);

// One unlabeled degree-2 node in the middle of every edge; directed edges
// split into two halves with the same orientation.
EvolutionaryTree insert_dummy_nodes(const EvolutionaryTree& tree);

PreorderIndex preorder_index(const EvolutionaryTree& tree);

// Connected components of tree - {x}: per component, its node list.
std::vector<std::vector<NodeId>> components_without(const EvolutionaryTree& tree, NodeId x);

// Label-preserving isomorphism helpers (used by tests and oracles).
std::string canonical_rooted(const EvolutionaryTree& tree);
std::string canonical_unrooted(const EvolutionaryTree& tree);
bool isomorphic_rooted(const EvolutionaryTree& a, const EvolutionaryTree& b);
bool isomorphic_unrooted(const EvolutionaryTree& a, const EvolutionaryTree& b);

}  // namespace agreetree
