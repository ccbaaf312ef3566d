#include "agreetree/mast.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace agreetree {

namespace {

struct LocalEdge {
    int a, b;
    long long w;
};

// Exact max-weight matching over a small child-pair graph.
long long mwm_edges(int na, int nb, const std::vector<LocalEdge>& edges, MastStats* stats) {
    if (edges.empty()) return 0;
    if (stats) ++stats->matchings;
    if (na == 1 || nb == 1) {
        long long best = 0;
        for (const auto& e : edges) best = std::max(best, e.w);
        return best;
    }
    if (na == 2 || nb == 2) {
        // one side has two nodes: best single edge, or best compatible pair
        const bool a_small = na == 2;
        long long best = 0;
        std::vector<LocalEdge> r0, r1;
        for (const auto& e : edges) {
            best = std::max(best, e.w);
            int side = a_small ? e.a : e.b;
            (side == 0 ? r0 : r1).push_back(e);
        }
        // top-2 of r1 by weight, distinct opposite endpoints
        int t1 = -1, t2 = -1;
        for (int i = 0; i < static_cast<int>(r1.size()); ++i) {
            if (t1 == -1 || r1[i].w > r1[t1].w) {
                t2 = t1;
                t1 = i;
            } else if (t2 == -1 || r1[i].w > r1[t2].w) {
                t2 = i;
            }
        }
        for (const auto& e0 : r0) {
            int opp0 = a_small ? e0.b : e0.a;
            for (int cand : {t1, t2}) {
                if (cand == -1) continue;
                const auto& e1 = r1[cand];
                int opp1 = a_small ? e1.b : e1.a;
                if (opp1 != opp0) {
                    best = std::max(best, e0.w + e1.w);
                    break;
                }
            }
        }
        return best;
    }
    std::vector<WeightedBipartiteGraph::Edge> es;
    es.reserve(edges.size());
    for (const auto& e : edges) es.push_back({e.a, e.b, e.w});
    return mwm_value(na, nb, es);
}

struct Side1 {
    const AnnotatedTree* w;
    std::vector<NodeId> post;
    std::vector<int> lab;
    // per node: compressed-leaf child and aux-leaf child, if any
    std::vector<NodeId> zchild, zbchild;
    // per compressed internal (two-subtree form): the scaffold
    std::vector<NodeId> ubar, zbb, wnode;
};

struct Side2 {
    const AnnotatedTree* w;
    std::vector<NodeId> post;
    std::vector<int> lab;
    std::vector<char> g1in, g2in;
    NodeId g1 = kNoNode, g2 = kNoNode;
    NodeId yc = kNoNode, y1 = kNoNode, y2 = kNoNode;
    std::vector<NodeId> hang1, hang2;  // roots hanging strictly between yc and gamma
};

int intern(std::unordered_map<std::string, int>& pool, const std::string& s) {
    auto [it, fresh] = pool.try_emplace(s, static_cast<int>(pool.size()));
    (void)fresh;
    return it->second;
}

Side1 build_side1(const AnnotatedTree& w, std::unordered_map<std::string, int>& pool) {
    Side1 s;
    s.w = &w;
    s.post = w.postorder();
    const int n = w.size();
    s.lab.assign(n, -1);
    s.zchild.assign(n, kNoNode);
    s.zbchild.assign(n, kNoNode);
    s.ubar.assign(n, kNoNode);
    s.zbb.assign(n, kNoNode);
    s.wnode.assign(n, kNoNode);
    for (NodeId v = 0; v < n; ++v) {
        if (!w.label[v].empty()) s.lab[v] = intern(pool, w.label[v]);
        for (NodeId c : w.children[v]) {
            if (w.kind[c] == NodeKind::CompressedLeaf) {
                if (s.zchild[v] != kNoNode)
                    throw TreeError("mast: two compressed leaves under one node");
                s.zchild[v] = c;
            } else if (w.kind[c] == NodeKind::AuxLeaf) {
                s.zbchild[v] = c;
            } else if (w.kind[c] == NodeKind::AuxInternal) {
                s.ubar[v] = c;
            }
        }
    }
    if (w.form == 2) {
        for (NodeId v = 0; v < n; ++v) {
            if (w.kind[v] != NodeKind::CompressedInternal) continue;
            NodeId ub = s.ubar[v];
            if (ub == kNoNode || s.zchild[v] == kNoNode || s.zbchild[v] == kNoNode)
                throw TreeError("mast: compressed internal node lacks its scaffold");
            for (NodeId c : w.children[ub]) {
                if (w.kind[c] == NodeKind::AuxLeaf)
                    s.zbb[v] = c;
                else
                    s.wnode[v] = c;
            }
            if (s.zbb[v] == kNoNode || s.wnode[v] == kNoNode)
                throw TreeError("mast: auxiliary internal node lacks its scaffold");
        }
    }
    return s;
}

Side2 build_side2(const AnnotatedTree& w, std::unordered_map<std::string, int>& pool) {
    Side2 s;
    s.w = &w;
    s.post = w.postorder();
    const int n = w.size();
    s.lab.assign(n, -1);
    s.g1in.assign(n, 0);
    s.g2in.assign(n, 0);
    s.g1 = w.gamma1;
    s.g2 = w.gamma2;
    for (NodeId v = 0; v < n; ++v)
        if (!w.label[v].empty()) s.lab[v] = intern(pool, w.label[v]);
    for (NodeId v : s.post) {
        if (v == s.g1) s.g1in[v] = 1;
        if (v == s.g2) s.g2in[v] = 1;
        for (NodeId c : w.children[v]) {
            s.g1in[v] |= s.g1in[c];
            s.g2in[v] |= s.g2in[c];
        }
    }
    if (s.g1 != kNoNode && s.g2 != kNoNode) {
        // yc = lowest node containing both gammas
        NodeId yc = w.root;
        for (NodeId v : s.post)
            if (s.g1in[v] && s.g2in[v]) {
                yc = v;
                break;  // postorder: first such node is the lowest
            }
        s.yc = yc;
        for (NodeId c : w.children[yc]) {
            if (s.g1in[c]) s.y1 = c;
            if (s.g2in[c]) s.y2 = c;
        }
        auto collect = [&](NodeId gamma, std::vector<NodeId>& out) {
            // walk from yc down to gamma; children off the path of nodes
            // strictly between are the hanging subtrees
            NodeId cur = kNoNode;
            for (NodeId c : w.children[yc])
                if ((gamma == s.g1 ? s.g1in[c] : s.g2in[c])) cur = c;
            while (cur != gamma) {
                NodeId next = kNoNode;
                for (NodeId c : w.children[cur]) {
                    if ((gamma == s.g1 ? s.g1in[c] : s.g2in[c]))
                        next = c;
                    else
                        out.push_back(c);
                }
                cur = next;
            }
        };
        collect(s.g1, s.hang1);
        collect(s.g2, s.hang2);
    }
    return s;
}

struct Engine {
    const Side1& s1;
    const Side2& s2;
    MastTable& T;
    MastStats* stats;
    long long cap;
    std::vector<int> maxs1, maxs2;  // memo: max T(x, tau) over hang1 / hang2

    Engine(const Side1& a, const Side2& b, MastTable& t, MastStats* st, long long c)
        : s1(a), s2(b), T(t), stats(st), cap(c) {
        maxs1.assign(s1.w->size(), -1);
        maxs2.assign(s1.w->size(), -1);
    }

    int slot_alpha1(NodeId u) const {
        switch (s1.w->kind[u]) {
            case NodeKind::OrdinaryInternal:
            case NodeKind::CompressedInternal:
            case NodeKind::CompressedLeaf:
                return s1.w->alpha1(u);
            default:
                return 0;
        }
    }
    int slot_alpha2(NodeId u) const {
        switch (s1.w->kind[u]) {
            case NodeKind::OrdinaryInternal:
            case NodeKind::CompressedInternal:
            case NodeKind::CompressedLeaf:
                return s1.w->alpha2(u);
            default:
                return 0;
        }
    }
    int slot_alpha_plus(NodeId u) const {
        switch (s1.w->kind[u]) {
            case NodeKind::CompressedInternal:
            case NodeKind::CompressedLeaf:
                return s1.w->alpha_plus(u);
            default:
                return 0;
        }
    }

    int direct(NodeId u, NodeId v) const {
        if (v == s2.g1) return slot_alpha1(u);
        if (v == s2.g2) return slot_alpha2(u);
        if (v == s2.yc && s2.yc != kNoNode) return slot_alpha_plus(u);
        if (s1.lab[u] >= 0 && s1.lab[u] == s2.lab[v]) {
            // matching labels; a labeled node with children is a degree-1
            // root, which maps as a leaf above one surviving branch pair
            int best = 0;
            for (NodeId c : s1.w->children[u])
                for (NodeId d : s2.w->children[v]) best = std::max(best, T.at(c, d));
            return 1 + best;
        }
        return 0;
    }

    int hang_max(int which, NodeId x) {
        auto& memo = which == 1 ? maxs1 : maxs2;
        if (memo[x] >= 0) return memo[x];
        const auto& hang = which == 1 ? s2.hang1 : s2.hang2;
        int best = 0;
        for (NodeId r : hang) best = std::max(best, T.at(x, r));
        memo[x] = best;
        return best;
    }

    int rmast(NodeId u, NodeId v) {
        const AnnotatedTree& w1 = *s1.w;
        if (w1.kind[u] == NodeKind::AuxInternal) return 0;
        const auto& A = w1.children[u];
        const auto& B = s2.w->children[v];
        thread_local std::vector<LocalEdge> edges;
        edges.clear();
        for (int ai = 0; ai < static_cast<int>(A.size()); ++ai) {
            const int* row = &T.val[static_cast<size_t>(A[ai]) * T.n2];
            for (int bi = 0; bi < static_cast<int>(B.size()); ++bi) {
                int t = row[B[bi]];
                if (t > 0) {
                    if (cap >= 0 && t > cap)
                        throw TreeError("mast: matching edge weight exceeds cap");
                    edges.push_back({ai, bi, t});
                }
            }
        }
        long long best = mwm_edges(static_cast<int>(A.size()), static_cast<int>(B.size()),
                                   edges, stats);
        if (v == s2.yc && s2.yc != kNoNode) {
            NodeId z = s1.zchild[u];
            if (z != kNoNode && w1.ann[z].beta > 0) {
                // gamma1 -> z, gamma2 -> z-bar: both shrunk-leaf branches of
                // yc collapse onto the (z, z-bar) pair, the rest match on
                NodeId zb = s1.zbchild[u];
                thread_local std::vector<LocalEdge> rest;
                rest.clear();
                int ai_z = -1, ai_zb = -1, bi_1 = -1, bi_2 = -1;
                for (int ai = 0; ai < static_cast<int>(A.size()); ++ai) {
                    if (A[ai] == z) ai_z = ai;
                    if (A[ai] == zb) ai_zb = ai;
                }
                for (int bi = 0; bi < static_cast<int>(B.size()); ++bi) {
                    if (B[bi] == s2.y1) bi_1 = bi;
                    if (B[bi] == s2.y2) bi_2 = bi;
                }
                for (const auto& e : edges) {
                    if (e.a == ai_z || e.a == ai_zb || e.b == bi_1 || e.b == bi_2) continue;
                    rest.push_back(e);
                }
                long long cand = w1.ann[z].beta +
                                 mwm_edges(static_cast<int>(A.size()),
                                           static_cast<int>(B.size()), rest, stats);
                best = std::max(best, cand);
            }
            if (w1.kind[u] == NodeKind::CompressedInternal && w1.form == 2) {
                NodeId wn = s1.wnode[u];
                if (z != kNoNode && w1.ann[z].beta12 > 0)
                    best = std::max(best,
                                    static_cast<long long>(w1.ann[z].beta12) + hang_max(2, wn));
                if (z != kNoNode && w1.ann[z].beta21 > 0)
                    best = std::max(best,
                                    static_cast<long long>(w1.ann[z].beta21) + hang_max(1, wn));
            }
        }
        return static_cast<int>(best);
    }

    void run() {
        const AnnotatedTree& w1 = *s1.w;
        const AnnotatedTree& w2 = *s2.w;
        for (NodeId v : s2.post) {
            const bool v_internal = !w2.children[v].empty();
            for (NodeId u : s1.post) {
                int best = direct(u, v);
                for (NodeId c : w1.children[u]) best = std::max(best, T.at(c, v));
                for (NodeId d : w2.children[v]) best = std::max(best, T.at(u, d));
                if (v_internal && !w1.children[u].empty()) best = std::max(best, rmast(u, v));
                T.at(u, v) = best;
                if (stats) ++stats->pair_evals;
            }
        }
    }
};

void check_forms(const AnnotatedTree& w1, const AnnotatedTree& w2) {
    if (w2.gamma1 != kNoNode && w1.form < 1)
        throw TreeError("mast: partner has a shrunk leaf but tree carries no annotations");
    if (w2.gamma2 != kNoNode && w1.form != 2)
        throw TreeError("mast: partner has two shrunk leaves but tree is not two-subtree form");
}

}  // namespace

MastTable mast_annotated(const AnnotatedTree& w1, const AnnotatedTree& w2, MastStats* stats,
                         long long weight_cap) {
    check_forms(w1, w2);
    if (w1.root == kNoNode || w2.root == kNoNode)
        throw TreeError("mast: empty operand");
    std::unordered_map<std::string, int> pool;
    Side1 s1 = build_side1(w1, pool);
    Side2 s2 = build_side2(w2, pool);
    MastTable T;
    T.n1 = w1.size();
    T.n2 = w2.size();
    T.root1 = w1.root;
    T.root2 = w2.root;
    T.annotated = w1.form != 0 || w2.gamma1 != kNoNode || w2.gamma2 != kNoNode;
    T.val.assign(static_cast<size_t>(T.n1) * T.n2, 0);
    if (stats) ++stats->dp_runs;
    Engine eng(s1, s2, T, stats, weight_cap);
    eng.run();
    return T;
}

RootedMastResult mast_rooted(const EvolutionaryTree& t1, const EvolutionaryTree& t2,
                             MastStats* stats) {
    AnnotatedTree a = plain_annotated(t1);
    AnnotatedTree b = plain_annotated(t2);
    long long cap = std::max(t1.size(), t2.size());
    MastTable T = mast_annotated(a, b, stats, cap);
    T.annotated = false;
    return {T.size(), std::move(T)};
}

int r_mast_internal(const AnnotatedTree& w1, const AnnotatedTree& w2, NodeId u, NodeId v,
                    const MastTable& table) {
    check_forms(w1, w2);
    std::unordered_map<std::string, int> pool;
    Side1 s1 = build_side1(w1, pool);
    Side2 s2 = build_side2(w2, pool);
    MastTable& T = const_cast<MastTable&>(table);
    Engine eng(s1, s2, T, nullptr, -1);
    if (w1.children[u].empty() || w2.children[v].empty()) return 0;
    return eng.rmast(u, v);
}

namespace {

// Backtracking over a plain table; returns kNoNode when no positive value.
NodeId rebuild(const MastTable& T, const EvolutionaryTree& t1, const EvolutionaryTree& t2,
               NodeId u, NodeId v, EvolutionaryTree& out) {
    int val = T.at(u, v);
    if (val == 0) return kNoNode;
    if (!t1.label[u].empty() && t1.label[u] == t2.label[v]) {
        // label pairing; with children it is a degree-1 root mapped as a
        // leaf over a single branch pair
        int bestpair = 0;
        NodeId bx = kNoNode, by = kNoNode;
        for (NodeId c : t1.children[u])
            for (NodeId d : t2.children[v])
                if (T.at(c, d) > bestpair) {
                    bestpair = T.at(c, d);
                    bx = c;
                    by = d;
                }
        if (val == 1 + bestpair) {
            NodeId me = out.add_node(t1.label[u]);
            if (bx != kNoNode && bestpair > 0) {
                NodeId sub = rebuild(T, t1, t2, bx, by, out);
                if (sub != kNoNode) out.add_edge(me, sub);
            }
            return me;
        }
    }
    for (NodeId c : t1.children[u])
        if (T.at(c, v) == val) return rebuild(T, t1, t2, c, v, out);
    for (NodeId d : t2.children[v])
        if (T.at(u, d) == val) return rebuild(T, t1, t2, u, d, out);
    // r-mast: recover a maximum matching over child pairs
    const auto& A = t1.children[u];
    const auto& B = t2.children[v];
    std::vector<WeightedBipartiteGraph::Edge> es;
    for (int ai = 0; ai < static_cast<int>(A.size()); ++ai)
        for (int bi = 0; bi < static_cast<int>(B.size()); ++bi)
            if (T.at(A[ai], B[bi]) > 0) es.push_back({ai, bi, T.at(A[ai], B[bi])});
    WeightedBipartiteGraph g(static_cast<int>(A.size()), static_cast<int>(B.size()), es);
    Matching m = max_weight_matching(g);
    if (m.weight != val)
        throw TreeError("extract_agreement_subtree: inconsistent table");
    std::vector<NodeId> parts;
    for (int ei : m.edge_ids) {
        NodeId sub = rebuild(T, t1, t2, A[g.edges[ei].x], B[g.edges[ei].y], out);
        if (sub != kNoNode) parts.push_back(sub);
    }
    if (parts.empty()) return kNoNode;
    if (parts.size() == 1) return parts[0];
    NodeId nv = out.add_node();
    for (NodeId p : parts) out.add_edge(nv, p);
    return nv;
}

}  // namespace

EvolutionaryTree extract_agreement_subtree(const MastTable& table, const EvolutionaryTree& t1,
                                           const EvolutionaryTree& t2) {
    if (table.annotated)
        throw TreeError("extract_agreement_subtree: unsupported on annotated pairs");
    EvolutionaryTree out;
    if (table.size() > 0) {
        NodeId r = rebuild(table, t1, t2, table.root1, table.root2, out);
        out.set_root(r);
    }
    out.finalize();
    return out;
}

}  // namespace agreetree
