#include "agreetree/oracle.hpp"

#include <algorithm>
#include <set>

#include "agreetree/mast.hpp"

namespace agreetree::oracle {

namespace {

std::vector<std::string> shared_labels(const EvolutionaryTree& a, const EvolutionaryTree& b) {
    std::set<std::string> la;
    for (const auto& s : a.leaf_labels()) la.insert(s);
    std::vector<std::string> out;
    for (const auto& s : b.leaf_labels())
        if (la.count(s)) out.push_back(s);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

int brute_mast_rooted(const EvolutionaryTree& t1, const EvolutionaryTree& t2,
                      const OracleBudget& budget) {
    if (!t1.rooted() || !t2.rooted()) throw TreeError("brute_mast_rooted: trees must be rooted");
    auto shared = shared_labels(t1, t2);
    const int k = static_cast<int>(shared.size());
    if (k > budget.max_shared_labels)
        throw BudgetExceeded("brute_mast_rooted: too many shared labels");
    if (k == 0) return 0;
    // masks by descending popcount; the first isomorphic pair wins
    std::vector<uint32_t> masks;
    masks.reserve(1u << k);
    for (uint32_t m = 1; m < (1u << k); ++m) masks.push_back(m);
    std::sort(masks.begin(), masks.end(), [](uint32_t a, uint32_t b) {
        int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
        return pa != pb ? pa > pb : a < b;
    });
    for (uint32_t m : masks) {
        std::vector<std::string> pick;
        for (int i = 0; i < k; ++i)
            if (m & (1u << i)) pick.push_back(shared[i]);
        EvolutionaryTree a = induced_subtree(t1, pick);
        EvolutionaryTree b = induced_subtree(t2, pick);
        if (canonical_rooted(a) == canonical_rooted(b))
            return __builtin_popcount(m);
    }
    return 0;
}

namespace {

std::vector<NodeId> root_candidates(const EvolutionaryTree& t) {
    std::vector<NodeId> out;
    if (t.size() >= 3) {
        for (NodeId v = 0; v < t.size(); ++v)
            if (!t.is_leaf(v)) out.push_back(v);
    } else {
        for (NodeId v = 0; v < t.size(); ++v) out.push_back(v);
    }
    return out;
}

}  // namespace

int naive_mast_unrooted(const EvolutionaryTree& u1, const EvolutionaryTree& u2) {
    if (u1.size() == 0 || u2.size() == 0) return 0;
    int best = 0;
    for (NodeId a : root_candidates(u1)) {
        EvolutionaryTree r1 = root_at(u1, a);
        for (NodeId b : root_candidates(u2)) {
            EvolutionaryTree r2 = root_at(u2, b);
            best = std::max(best, mast_rooted(r1, r2).size);
        }
    }
    return best;
}

int naive_mast_mixed(const EvolutionaryTree& m1, const EvolutionaryTree& m2) {
    if (m1.size() == 0 || m2.size() == 0) return 0;
    int best = 0;
    for (NodeId a = 0; a < m1.size(); ++a) {
        EvolutionaryTree r1 = root_at(m1, a);
        if (r1.leaf_labels().empty()) continue;
        for (NodeId b = 0; b < m2.size(); ++b) {
            EvolutionaryTree r2 = root_at(m2, b);
            if (r2.leaf_labels().empty()) continue;
            best = std::max(best, mast_rooted(r1, r2).size);
        }
    }
    return best;
}

WeightedBipartiteGraph delete_node(const WeightedBipartiteGraph& g, Side side, int idx) {
    std::vector<WeightedBipartiteGraph::Edge> edges;
    for (const auto& e : g.edges) {
        if (side == Side::X && e.x == idx) continue;
        if (side == Side::Y && e.y == idx) continue;
        edges.push_back(e);
    }
    return WeightedBipartiteGraph(g.nx, g.ny, std::move(edges));
}

CavityResult naive_all_cavity(const WeightedBipartiteGraph& g) {
    CavityResult r;
    r.mwm = max_weight_matching(g).weight;
    r.x_values.resize(g.nx);
    r.y_values.resize(g.ny);
    for (int x = 0; x < g.nx; ++x)
        r.x_values[x] = max_weight_matching(delete_node(g, Side::X, x)).weight;
    for (int y = 0; y < g.ny; ++y)
        r.y_values[y] = max_weight_matching(delete_node(g, Side::Y, y)).weight;
    return r;
}

namespace {

void enum_rec(const std::vector<std::vector<std::pair<int, long long>>>& adj, int x,
              std::vector<char>& used_y, long long acc, long long& best, long long& states,
              long long max_states) {
    if (++states > max_states) throw BudgetExceeded("enumerate_mwm: state budget exceeded");
    if (x == static_cast<int>(adj.size())) {
        best = std::max(best, acc);
        return;
    }
    enum_rec(adj, x + 1, used_y, acc, best, states, max_states);  // x unmatched
    for (const auto& [y, w] : adj[x]) {
        if (used_y[y]) continue;
        used_y[y] = 1;
        enum_rec(adj, x + 1, used_y, acc + w, best, states, max_states);
        used_y[y] = 0;
    }
}

}  // namespace

long long enumerate_mwm(const WeightedBipartiteGraph& g, const OracleBudget& budget) {
    std::vector<std::vector<std::pair<int, long long>>> adj(g.nx);
    for (const auto& e : g.edges) adj[e.x].push_back({e.y, e.w});
    std::vector<char> used(g.ny, 0);
    long long best = 0, states = 0;
    enum_rec(adj, 0, used, 0, best, states, budget.max_states);
    return best;
}

namespace {

struct AltPathSearch {
    const WeightedBipartiteGraph& g;
    const Matching& m;
    std::vector<std::vector<std::pair<int, long long>>> adjx, adjy;  // neighbor, weight
    std::vector<char> used_x, used_y;
    long long best = 0;
    long long states = 0;
    long long max_states;

    AltPathSearch(const WeightedBipartiteGraph& g_, const Matching& m_, long long cap)
        : g(g_), m(m_), adjx(g_.nx), adjy(g_.ny), used_x(g_.nx, 0), used_y(g_.ny, 0),
          max_states(cap) {
        for (const auto& e : g.edges) {
            adjx[e.x].push_back({e.y, e.w});
            adjy[e.y].push_back({e.x, e.w});
        }
    }

    // at an X node, the next edge must be the matched one (side X start) or
    // in general alternation we track whether the next edge is matched
    void from_x(int x, bool next_matched, long long acc) {
        if (++states > max_states) throw BudgetExceeded("alternating-path budget");
        used_x[x] = 1;
        for (const auto& [y, w] : adjx[x]) {
            bool matched = m.xy[x] == y;
            if (matched != next_matched || used_y[y]) continue;
            long long nacc = acc + (matched ? -w : w);
            // stopping rule: after a matched edge always; after an
            // unmatched edge only if y is unmatched
            if (matched || m.yx[y] == -1) best = std::max(best, nacc);
            from_y(y, !next_matched, nacc);
        }
        used_x[x] = 0;
    }
    void from_y(int y, bool next_matched, long long acc) {
        if (++states > max_states) throw BudgetExceeded("alternating-path budget");
        used_y[y] = 1;
        for (const auto& [x, w] : adjy[y]) {
            bool matched = m.yx[y] == x;
            if (matched != next_matched || used_x[x]) continue;
            long long nacc = acc + (matched ? -w : w);
            if (matched || m.xy[x] == -1) best = std::max(best, nacc);
            from_x(x, !next_matched, nacc);
        }
        used_y[y] = 0;
    }
};

}  // namespace

long long best_alternating_change(const WeightedBipartiteGraph& g, const Matching& m,
                                  Side side, int idx, const OracleBudget& budget) {
    AltPathSearch s(g, m, budget.max_states);
    s.best = std::numeric_limits<long long>::min() / 4;
    if (side == Side::X) {
        if (m.xy[idx] == -1) throw MatchingError("best_alternating_change: node not matched");
        s.from_x(idx, true, 0);
    } else {
        if (m.yx[idx] == -1) throw MatchingError("best_alternating_change: node not matched");
        s.from_y(idx, true, 0);
    }
    return s.best;
}

bool agreement_valid(const EvolutionaryTree& t1, const EvolutionaryTree& t2,
                     const EvolutionaryTree& witness, int claimed) {
    auto labels = witness.leaf_labels();
    if (static_cast<int>(labels.size()) != claimed) return false;
    if (claimed == 0) return witness.size() == 0;
    std::set<std::string> uniq(labels.begin(), labels.end());
    if (static_cast<int>(uniq.size()) != claimed) return false;
    EvolutionaryTree a = induced_subtree(t1, labels);
    EvolutionaryTree b = induced_subtree(t2, labels);
    std::string cw = canonical_rooted(witness);
    return canonical_rooted(a) == cw && canonical_rooted(b) == cw;
}

std::vector<std::string> label_pool(int count, const std::string& prefix) {
    std::vector<std::string> out;
    out.reserve(count);
    for (int i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

EvolutionaryTree random_unrooted_tree(Rng& rng, const std::vector<std::string>& labels,
                                      bool bounded_degree) {
    const int L = static_cast<int>(labels.size());
    if (L == 0) return EvolutionaryTree{};
    EvolutionaryTree t;
    t.add_node(labels[0]);
    if (L == 1) {
        t.finalize();
        return t;
    }
    t.add_node(labels[1]);
    t.add_edge(0, 1);
    struct Edge {
        NodeId a, b;
    };
    std::vector<Edge> edges{{0, 1}};
    for (int i = 2; i < L; ++i) {
        NodeId leaf = t.add_node(labels[i]);
        bool onto_node = false;
        NodeId host = kNoNode;
        if (!bounded_degree) {
            // attach directly to an existing internal node half the time
            std::vector<NodeId> internals;
            for (NodeId v = 0; v < leaf; ++v)
                if (t.label[v].empty() && t.degree(v) >= 2) internals.push_back(v);
            if (!internals.empty() && (rng() & 1)) {
                onto_node = true;
                host = internals[rng() % internals.size()];
            }
        }
        if (onto_node) {
            t.add_edge(host, leaf);
        } else {
            // subdivide a random edge with a fresh internal node
            size_t ei = rng() % edges.size();
            Edge e = edges[ei];
            NodeId mid = t.add_node();
            // remove old adjacency entries
            auto drop = [&](NodeId u, NodeId v) {
                auto& vec = t.adj[u];
                for (size_t k = 0; k < vec.size(); ++k)
                    if (vec[k].to == v) {
                        vec.erase(vec.begin() + k);
                        break;
                    }
            };
            drop(e.a, e.b);
            drop(e.b, e.a);
            t.add_edge(e.a, mid);
            t.add_edge(mid, e.b);
            t.add_edge(mid, leaf);
            edges[ei] = {e.a, mid};
            edges.push_back({mid, e.b});
            edges.push_back({mid, leaf});
            continue;
        }
        edges.push_back({host, leaf});
    }
    t.finalize();
    return t;
}

EvolutionaryTree random_rooted_tree(Rng& rng, const std::vector<std::string>& labels,
                                    bool bounded_degree) {
    EvolutionaryTree t = random_unrooted_tree(rng, labels, bounded_degree);
    if (t.size() == 1) {
        t.set_root(0);
        t.finalize();
        return t;
    }
    std::vector<NodeId> internals;
    for (NodeId v = 0; v < t.size(); ++v)
        if (!t.is_leaf(v)) internals.push_back(v);
    NodeId r = internals.empty() ? 0 : internals[rng() % internals.size()];
    return root_at(t, r);
}

EvolutionaryTree random_mixed_tree(Rng& rng, const std::vector<std::string>& labels,
                                   double directed_prob) {
    EvolutionaryTree t = random_unrooted_tree(rng, labels, false);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (NodeId v = 0; v < t.size(); ++v)
        for (auto& h : t.adj[v]) {
            if (h.to < v) continue;
            if (coin(rng) < directed_prob) {
                bool away = rng() & 1;  // direction: v -> h.to or back
                h.passable = away;
                for (auto& hb : t.adj[h.to])
                    if (hb.to == v) {
                        hb.passable = !away;
                        break;
                    }
            }
        }
    return t;
}

WeightedBipartiteGraph random_bipartite(Rng& rng, int nx, int ny, double edge_prob,
                                        long long max_weight) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<WeightedBipartiteGraph::Edge> edges;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            if (coin(rng) < edge_prob)
                edges.push_back({x, y, static_cast<long long>(rng() % max_weight) + 1});
    return WeightedBipartiteGraph(nx, ny, std::move(edges));
}

}  // namespace agreetree::oracle
