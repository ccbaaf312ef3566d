#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace agreetree {

struct MatchingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bipartite graph with positive integer edge weights <= max_weight.
struct WeightedBipartiteGraph {
    struct Edge {
        int x, y;
        long long w;
    };
    int nx = 0, ny = 0;
    std::vector<Edge> edges;
    long long max_weight = 0;  // the paper's N

    WeightedBipartiteGraph() = default;
    // Validates: indices in range, weights positive, no parallel edges.
    WeightedBipartiteGraph(int nx, int ny, std::vector<Edge> edges);

    int num_nodes() const { return nx + ny; }
};

struct Matching {
    std::vector<int> xy;  // x -> matched y or -1
    std::vector<int> yx;  // y -> matched x or -1
    long long weight = 0;
    std::vector<int> edge_ids;  // indices into graph.edges
};

enum class Side { X, Y };

// Directed graph of section-2 style alternating-path bookkeeping.  Node
// ids: 0..nx-1 the X side, nx..nx+ny-1 the Y side, nx+ny the sink t.
struct CavityDigraph {
    struct Arc {
        int from, to;
        long long w;
    };
    int nx = 0, ny = 0;
    std::vector<Arc> arcs;
    int t() const { return nx + ny; }
    int num_nodes() const { return nx + ny + 1; }
};

struct LongestPathResult {
    std::vector<long long> weight;  // longest path to t per node
    std::vector<char> reachable;
};

struct CavityResult {
    long long mwm = 0;
    std::vector<long long> x_values;  // mwm(G - {x_i})
    std::vector<long long> y_values;  // mwm(G - {y_j})
};

// Maximum weight matching (not necessarily maximum cardinality) by
// successive shortest augmenting paths with node potentials.
Matching max_weight_matching(const WeightedBipartiteGraph& g);

// The four arc families for deleting nodes of the given side: for Side::X,
// unmatched x -> t (0), matched y -> t (0), matched (x,y) as x -> y (-w),
// unmatched (x,y) as y -> x (+w).  Side::Y swaps the roles.
// Throws if m is not a matching of g.
CavityDigraph build_cavity_digraph(const WeightedBipartiteGraph& g, const Matching& m,
                                   Side side = Side::X);

// Longest simple-path weights to t.  Sound because the digraph of an
// optimal matching has no positive cycle; a detected positive cycle throws
// (it signals the matching was not optimal).
LongestPathResult longest_path_weights(const CavityDigraph& d);

// mwm(G - {u}) for every node u, from one matching plus two longest-path
// passes.  Unmatched nodes keep mwm(G).
CavityResult all_cavity(const WeightedBipartiteGraph& g);

// Edge-list format: first line "nx ny m", then m lines "xi yi w" (1-based).
WeightedBipartiteGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const WeightedBipartiteGraph& g);
// CavityResult as "side index value" lines (side is x or y, 1-based index).
void write_cavity_result(std::ostream& out, const CavityResult& r);

// Lightweight entry point for the MAST inner loops: no validation, returns
// only the optimal weight.  Edges are (x, y, w) with positive w.
long long mwm_value(int nx, int ny, const std::vector<WeightedBipartiteGraph::Edge>& edges);

}  // namespace agreetree
