#include "agreetree/unrooted.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace agreetree {

namespace {

struct Ctx {
    AuxMode mode = AuxMode::Fast;
    bool discipline = true;
    RunCounters* counters = nullptr;
    long long cap = -1;

    MastStats* stats() { return counters ? &counters->mast : nullptr; }
    void note_depth(int d) {
        if (counters && d > counters->max_depth) counters->max_depth = d;
    }
    void note_spawn(long long b) {
        if (counters) counters->subproblems_spawned += b;
    }
};

std::vector<NodeId> path_between(const EvolutionaryTree& t, NodeId a, NodeId b) {
    std::vector<NodeId> par(t.size(), kNoNode);
    std::vector<char> vis(t.size(), 0);
    std::vector<NodeId> stack{a};
    vis[a] = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        if (v == b) break;
        for (const auto& h : t.adj[v])
            if (!vis[h.to]) {
                vis[h.to] = 1;
                par[h.to] = v;
                stack.push_back(h.to);
            }
    }
    std::vector<NodeId> path;
    for (NodeId v = b; v != kNoNode; v = par[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;  // a .. b
}

NodeId closest_on_set(const EvolutionaryTree& t, NodeId y, const std::set<NodeId>& target) {
    if (target.count(y)) return y;
    std::vector<char> vis(t.size(), 0);
    std::vector<NodeId> frontier{y}, next;
    vis[y] = 1;
    while (!frontier.empty()) {
        next.clear();
        for (NodeId v : frontier)
            for (const auto& h : t.adj[v]) {
                if (vis[h.to]) continue;
                if (target.count(h.to)) return h.to;
                vis[h.to] = 1;
                next.push_back(h.to);
            }
        frontier.swap(next);
    }
    throw TreeError("closest_on_set: target unreachable");
}

struct Comp {
    std::vector<NodeId> nodes;
    NodeId entry = kNoNode;
    bool has_g1 = false, has_g2 = false;
    bool has_gamma() const { return has_g1 || has_g2; }
};

std::vector<Comp> components_around(const ShrunkTree& x, NodeId y) {
    std::vector<Comp> comps;
    for (auto& nodes : components_without(x.skeleton, y)) {
        Comp c;
        c.entry = nodes.front();
        for (NodeId v : nodes) {
            if (v == x.gamma1) c.has_g1 = true;
            if (v == x.gamma2) c.has_g2 = true;
        }
        c.nodes = std::move(nodes);
        comps.push_back(std::move(c));
    }
    // shrunk-free components first, then gamma1's, then gamma2's
    std::stable_sort(comps.begin(), comps.end(), [](const Comp& a, const Comp& b) {
        auto rank = [](const Comp& c) { return c.has_g2 ? 2 : (c.has_g1 ? 1 : 0); };
        return rank(a) < rank(b);
    });
    return comps;
}

std::set<std::string> comp_labels(const ShrunkTree& x, const Comp& c) {
    std::set<std::string> out;
    for (NodeId v : c.nodes)
        if (x.skeleton.is_leaf(v) && x.skeleton.labeled(v)) out.insert(x.skeleton.label[v]);
    return out;
}

// X_i: the component plus a fresh shrunk leaf standing for the rest of X.
// An inherited shrunk leaf keeps slot 1; the fresh cut takes slot 2.
ShrunkTree make_subtree_x(const ShrunkTree& x, const Comp& c, NodeId y) {
    ShrunkTree out;
    std::vector<NodeId> map(x.skeleton.size(), kNoNode);
    for (NodeId v : c.nodes) {
        map[v] = out.skeleton.add_node(x.skeleton.label[v]);
        out.skeleton.dummy[map[v]] = x.skeleton.dummy[v];
    }
    for (NodeId v : c.nodes)
        for (const auto& h : x.skeleton.adj[v]) {
            if (h.to == y || map[h.to] == kNoNode) continue;
            if (h.to < v) continue;  // each edge once
            bool bwd = true;
            for (const auto& hb : x.skeleton.adj[h.to])
                if (hb.to == v) { bwd = hb.passable; break; }
            out.skeleton.adj[map[v]].push_back({map[h.to], h.passable});
            out.skeleton.adj[map[h.to]].push_back({map[v], bwd});
        }
    NodeId g = out.skeleton.add_node();
    {
        bool fwd = true, bwd = true;
        for (const auto& h : x.skeleton.adj[c.entry])
            if (h.to == y) { fwd = h.passable; break; }
        for (const auto& h : x.skeleton.adj[y])
            if (h.to == c.entry) { bwd = h.passable; break; }
        out.skeleton.adj[map[c.entry]].push_back({g, fwd});
        out.skeleton.adj[g].push_back({map[c.entry], bwd});
    }
    out.skeleton.finalize();
    if (c.has_g1) {
        out.gamma1 = map[x.gamma1];
        out.gamma2 = g;
    } else if (c.has_g2) {
        out.gamma1 = map[x.gamma2];
        out.gamma2 = g;
    } else {
        out.gamma1 = g;
    }
    return out;
}

AnnotatedTree join_under_gamma(AnnotatedTree base, int slot) {
    NodeId g = base.add(NodeKind::ShrunkLeaf);
    NodeId r = base.add(NodeKind::OrdinaryInternal);
    base.link(r, base.root);
    base.link(r, g);
    base.root = r;
    if (slot == 1)
        base.gamma1 = g;
    else
        base.gamma2 = g;
    return base;
}

AnnotatedTree single_gamma_tree(int slot) {
    AnnotatedTree t;
    NodeId g = t.add(NodeKind::ShrunkLeaf);
    t.root = g;
    if (slot == 1)
        t.gamma1 = g;
    else
        t.gamma2 = g;
    return t;
}

int slot_value(const AnnotatedTree& w, NodeId v, int slot) {
    switch (w.kind[v]) {
        case NodeKind::OrdinaryInternal:
        case NodeKind::CompressedInternal:
        case NodeKind::CompressedLeaf:
            return slot == 1 ? w.alpha1(v) : w.alpha2(v);
        default:
            return 0;
    }
}

void expect_equal(int fast, int ref, const char* what, NodeId node) {
    if (fast != ref)
        throw TreeError(std::string("paranoid: ") + what + " mismatch at node " +
                        std::to_string(node) + ": fast=" + std::to_string(fast) +
                        " reference=" + std::to_string(ref));
}

// Shared per-spawn machinery --------------------------------------------
struct SpawnWork {
    const AnnotatedTree& w;
    const ShrunkTree& x;
    NodeId y;
    Ctx& ctx;

    std::vector<Comp> comps;
    AnnotatedTree main_view;           // X rooted at y
    MastTable table_main;              // mast(W^., X^y)
    std::vector<std::vector<int>> comp_scores;  // [j][v] = mast(W^v, comp_j)

    // fast-path structures
    std::optional<CavityArrayBundle> bundle;
    std::optional<SubtreeMaxIndex> sidx;
    EvolutionaryTree wskel;
    std::optional<AttachmentIndex> aidx;
    std::vector<int> child_pos;     // W node -> 1-based position under parent
    std::vector<int> aplus_submax;  // subtree max of stored alpha+ per W node

    SpawnWork(Ctx& c, const AnnotatedTree& w_, const ShrunkTree& x_, NodeId y_,
              AnnotatedTree mv, MastTable tm)
        : w(w_), x(x_), y(y_), ctx(c), main_view(std::move(mv)), table_main(std::move(tm)) {
        comps = components_around(x, y);
        const int b = static_cast<int>(comps.size());
        comp_scores.resize(b);
        for (int j = 0; j < b; ++j) {
            AnnotatedTree view = shrunk_view(x, comps[j].entry, y);
            MastTable t = mast_annotated(w, view, ctx.stats(), ctx.cap);
            comp_scores[j].resize(w.size());
            for (NodeId v = 0; v < w.size(); ++v) comp_scores[j][v] = t.at(v, t.root2);
        }
        if (ctx.mode != AuxMode::Reference) {
            bundle = build_cavity_arrays(w, comp_scores);
            std::vector<const SparseArray*> ptrs(w.size());
            for (int k = 1; k <= w.size(); ++k)
                ptrs[k - 1] = &bundle->arrays[bundle->pre.by_number[k]];
            sidx.emplace(build_subtree_index(ptrs, bundle->pre));
            wskel = w.skeleton_tree();
            std::vector<long long> main_score(w.size());
            for (NodeId v = 0; v < w.size(); ++v) main_score[v] = table_main.at(v, table_main.root2);
            aidx.emplace(build_attachment_index(wskel, main_score));
            child_pos.assign(w.size(), 0);
            for (NodeId v = 0; v < w.size(); ++v)
                for (size_t k = 0; k < w.children[v].size(); ++k)
                    child_pos[w.children[v][k]] = static_cast<int>(k) + 1;
            aplus_submax.assign(w.size(), 0);
            for (NodeId v : w.postorder()) {
                int best = std::max(0, w.ann[v].alpha_plus);
                for (NodeId ch : w.children[v]) best = std::max(best, aplus_submax[ch]);
                aplus_submax[v] = best;
            }
        }
    }

    int b() const { return static_cast<int>(comps.size()); }

    // Lemma-6.3 style evaluation of mast(W^v, R_i): complement queries plus
    // the subtree max over the cavity arrays; when R_i holds both shrunk
    // leaves their meet may also map, as a leaf, to a stored alpha+ node.
    int internal_alpha_fast(NodeId v, int i, bool rplus_live) const {
        int best = 0;
        for (int j = 0; j < b(); ++j)
            if (j != i) best = std::max(best, comp_scores[j][v]);
        best = std::max(best, static_cast<int>(bundle->subtree_max(*sidx, v, i)));
        if (rplus_live) best = std::max(best, aplus_submax[v]);
        return best;
    }

    // max over the represented source subtrees of mast(W^q, X^y), via the
    // interval and exclusion queries of the attachment index.
    int leaf_alpha_fast(const Provenance& p) const {
        long long best = 0;
        for (size_t k = 0; k < p.attach.size(); ++k) {
            if (p.cont[k] == kNoNode) {
                // attached set: maximal runs of consecutive child positions
                const auto& g = p.groups[k];
                size_t s = 0;
                while (s < g.size()) {
                    size_t e = s;
                    while (e + 1 < g.size() &&
                           child_pos[g[e + 1]] == child_pos[g[e]] + 1)
                        ++e;
                    best = std::max(best, aidx->interval_query(p.attach[k], child_pos[g[s]],
                                                               child_pos[g[e]]));
                    s = e + 1;
                }
            } else {
                best = std::max(best, aidx->all_but_child(p.attach[k], p.cont[k]));
            }
        }
        return static_cast<int>(std::max(0LL, best));
    }

    MastTable cut_table(int i) const {
        AnnotatedTree view = shrunk_view(x, y, comps[i].entry);
        return mast_annotated(w, view, ctx.stats(), ctx.cap);
    }

    // One-subtree subproblem: every annotation is a mast(., R_i) value.
    void fill_one_form(AnnotatedTree& wi, int i) {
        const bool fast = ctx.mode != AuxMode::Reference;
        const bool ref = ctx.mode != AuxMode::Fast;
        std::optional<MastTable> tc;
        if (ref) tc = cut_table(i);
        const bool rplus_live = x.shrunk_count() == 2 && !comps[i].has_gamma();
        for (NodeId ov = 0; ov < wi.size(); ++ov) {
            int fast_val = -1, ref_val = -1;
            switch (wi.kind[ov]) {
                case NodeKind::OrdinaryInternal:
                case NodeKind::CompressedInternal: {
                    NodeId v = wi.src[ov];
                    if (fast) fast_val = internal_alpha_fast(v, i, rplus_live);
                    if (ref) ref_val = tc->at(v, tc->root2);
                    break;
                }
                case NodeKind::CompressedLeaf: {
                    const Provenance* p = wi.prov(ov);
                    if (fast) fast_val = leaf_alpha_fast(*p);
                    if (ref) {
                        int bestr = 0;
                        for (NodeId q : p->flat()) bestr = std::max(bestr, tc->at(q, tc->root2));
                        ref_val = bestr;
                    }
                    break;
                }
                default:
                    continue;
            }
            if (fast && ref) expect_equal(fast_val, ref_val, "one-form alpha", ov);
            wi.ann[ov].alpha1 = fast ? fast_val : ref_val;
        }
    }

    // Two-subtree subproblem: slot-1 values come from the inherited shrunk
    // leaf's stored annotations, slot 2 and plus from fresh DP runs.
    void fill_two_form(AnnotatedTree& wi, int i) {
        const int s_old = comps[i].has_g1 ? 1 : 2;
        MastTable tcut = cut_table(i);
        AnnotatedTree qview = join_under_gamma(shrunk_view(x, y, comps[i].entry), s_old);
        MastTable tplus = mast_annotated(w, qview, ctx.stats(), ctx.cap);

        std::optional<MastTable> tg;
        if (ctx.mode == AuxMode::Paranoid) {
            AnnotatedTree gview = single_gamma_tree(s_old);
            tg = mast_annotated(w, gview, ctx.stats(), ctx.cap);
            for (NodeId v = 0; v < w.size(); ++v) {
                expect_equal(slot_value(w, v, s_old), tg->at(v, tg->root2),
                             "stored gamma value", v);
                expect_equal(internal_alpha_fast(v, i, false), tcut.at(v, tcut.root2),
                             "cut value vs cavity evaluation", v);
            }
        }
        AnnotationOracle oracle;
        oracle.vs_r1 = [&](NodeId v) { return slot_value(w, v, s_old); };
        oracle.vs_r2 = [&](NodeId v) { return tcut.at(v, tcut.root2); };
        oracle.vs_rplus = [&](NodeId v) { return tplus.at(v, tplus.root2); };
        wire_annotations(wi, oracle);
    }

    std::vector<Subproblem> build_all() {
        std::vector<Subproblem> out;
        for (int i = 0; i < b(); ++i) {
            std::set<std::string> keep = comp_labels(x, comps[i]);
            int form = comps[i].has_gamma() ? 2 : 1;
            AnnotatedTree wi = compress_against(w, keep, form);
            if (form == 1)
                fill_one_form(wi, i);
            else
                fill_two_form(wi, i);
            ShrunkTree xi = make_subtree_x(x, comps[i], y);
            {
                auto wl = wi.atomic_labels();
                auto xl = xi.atomic_labels();
                std::sort(wl.begin(), wl.end());
                std::sort(xl.begin(), xl.end());
                if (wl != xl)
                    throw TreeError("spawn: atomic label sets of W_i and X_i differ");
            }
            out.push_back({std::move(wi), std::move(xi)});
        }
        return out;
    }
};

void check_discipline(const Ctx& ctx, const ShrunkTree& x, const std::vector<Subproblem>& subs,
                      bool pivot_is_separator) {
    if (!ctx.discipline) return;
    const int n = x.size();
    long long total = 0;
    int oversize = 0;
    for (const auto& s : subs) {
        const int ci = s.x.size() - 1;  // component size (fresh shrunk leaf excluded)
        total += ci;
        if (s.x.shrunk_count() > 2) throw TreeError("discipline: more than two shrunk leaves");
        if (ci > n / 2) {
            ++oversize;
            if (s.x.shrunk_count() != 1)
                throw TreeError("discipline: oversize subproblem without exactly one shrunk leaf");
            if (pivot_is_separator)
                throw TreeError("discipline: oversize subproblem at a separator spawn");
        }
    }
    if (total != n - 1) throw TreeError("discipline: component sizes do not add up");
    if (oversize > 1) throw TreeError("discipline: more than one oversize subproblem");
}

std::vector<Subproblem> spawn_core(Ctx& ctx, const AnnotatedTree& w, const ShrunkTree& x,
                                   NodeId y, AnnotatedTree main_view, MastTable table_main) {
    SpawnWork work(ctx, w, x, y, std::move(main_view), std::move(table_main));
    auto subs = work.build_all();
    ctx.note_spawn(static_cast<long long>(subs.size()));
    return subs;
}

int wx_rec(Ctx& ctx, const AnnotatedTree& w, const ShrunkTree& x, int depth, int parent_size,
           int grandparent_size) {
    ctx.note_depth(depth);
    if (ctx.discipline && grandparent_size >= 0 && x.size() > grandparent_size / 2 + 1)
        throw TreeError("discipline: two-level halving violated");
    if (x.size() == 0) return 0;
    if (x.atomic_labels().empty()) return 0;
    if (x.size() <= 2) {
        int best = 0;
        for (NodeId z = 0; z < x.size(); ++z) {
            AnnotatedTree view = shrunk_view(x, z);
            best = std::max(best, mast_annotated(w, view, ctx.stats(), ctx.cap).size());
        }
        return best;
    }
    NodeId y = find_separator(x.skeleton);
    bool pivot_is_separator = true;
    if (x.shrunk_count() == 2) {
        auto path = path_between(x.skeleton, x.gamma1, x.gamma2);
        std::set<NodeId> on_path(path.begin(), path.end());
        if (!on_path.count(y)) {
            y = closest_on_set(x.skeleton, y, on_path);
            pivot_is_separator = false;
        }
    }
    AnnotatedTree main_view = shrunk_view(x, y);
    MastTable table_main = mast_annotated(w, main_view, ctx.stats(), ctx.cap);
    int best = table_main.size();
    if (x.skeleton.has_direction()) {
        // directed edges can make a leaf rooting uniquely consistent
        for (NodeId z = 0; z < x.size(); ++z) {
            if (!x.skeleton.is_leaf(z)) continue;
            AnnotatedTree view = shrunk_view(x, z);
            best = std::max(best, mast_annotated(w, view, ctx.stats(), ctx.cap).size());
        }
    }
    auto subs = spawn_core(ctx, w, x, y, std::move(main_view), std::move(table_main));
    check_discipline(ctx, x, subs, pivot_is_separator);
    for (const auto& s : subs)
        best = std::max(best, wx_rec(ctx, s.w, s.x, depth + 1, x.size(), parent_size));
    return best;
}

EvolutionaryTree extract_component_tree(const EvolutionaryTree& t,
                                        const std::vector<NodeId>& nodes) {
    EvolutionaryTree out;
    std::vector<NodeId> map(t.size(), kNoNode);
    for (NodeId v : nodes) {
        map[v] = out.add_node(t.label[v]);
        out.dummy[map[v]] = t.dummy[v];
    }
    for (NodeId v : nodes)
        for (const auto& h : t.adj[v]) {
            if (map[h.to] == kNoNode || h.to < v) continue;
            bool bwd = true;
            for (const auto& hb : t.adj[h.to])
                if (hb.to == v) { bwd = hb.passable; break; }
            out.adj[map[v]].push_back({map[h.to], h.passable});
            out.adj[map[h.to]].push_back({map[v], bwd});
        }
    out.finalize();
    return out;
}

int shared_label_count(const EvolutionaryTree& a, const EvolutionaryTree& b) {
    std::set<std::string> la;
    for (const auto& s : a.leaf_labels()) la.insert(s);
    int cnt = 0;
    for (const auto& s : b.leaf_labels()) cnt += la.count(s) ? 1 : 0;
    return cnt;
}

int unrooted_rec(Ctx& ctx, const EvolutionaryTree& u1, const EvolutionaryTree& u2) {
    if (u1.size() == 0 || u2.size() == 0) return 0;
    if (u1.size() <= 2 || u2.size() <= 2) return shared_label_count(u1, u2);
    NodeId x = find_separator(u1);
    AnnotatedTree w = plain_annotated(root_at(u1, x));
    int best = wx_rec(ctx, w, ShrunkTree{u2, kNoNode, kNoNode}, 0, -1, -1);
    {
        ShrunkTree xdummy{insert_dummy_nodes(u2), kNoNode, kNoNode};
        best = std::max(best, wx_rec(ctx, w, xdummy, 0, -1, -1));
    }
    for (auto& nodes : components_without(u1, x)) {
        EvolutionaryTree u1i = extract_component_tree(u1, nodes);
        auto labels = u1i.leaf_labels();
        EvolutionaryTree u2i = restrict_unrooted_mapped(u2, labels).tree;
        if (u2i.size() == 0) continue;
        best = std::max(best, unrooted_rec(ctx, u1i, u2i));
    }
    return best;
}

Ctx make_ctx(const UnrootedOptions& opt, RunCounters* counters, long long cap) {
    Ctx ctx;
    ctx.mode = opt.mode;
    ctx.discipline = opt.check_discipline;
    ctx.counters = counters;
    ctx.cap = cap;
    return ctx;
}

}  // namespace

long long CavityArrayBundle::subtree_max(const SubtreeMaxIndex& idx, NodeId v, int i) const {
    int p = pre.number[v];
    return idx.query_interval_max(p, p + pre.desc_count[v], i);
}

CavityArrayBundle build_cavity_arrays(const AnnotatedTree& w,
                                      const std::vector<std::vector<int>>& comp_scores) {
    const int n = w.size();
    const int b = static_cast<int>(comp_scores.size());
    CavityArrayBundle out;
    out.pre = preorder_index(w.skeleton_tree());
    out.max_child.assign(n, kNoNode);
    out.arrays.assign(n, SparseArray(b, 0));

    std::vector<int> atoms(n, 0);
    for (NodeId v : w.postorder()) {
        if (!w.label[v].empty()) atoms[v] = 1;
        for (NodeId c : w.children[v]) atoms[v] += atoms[c];
    }
    std::vector<char> touched(b, 0);
    for (NodeId z = 0; z < n; ++z) {
        const auto& ch = w.children[z];
        if (ch.empty()) continue;  // empty graph: all-zero array
        NodeId zmax = ch[0];
        for (NodeId c : ch)
            if (atoms[c] > atoms[zmax]) zmax = c;
        out.max_child[z] = zmax;

        std::vector<WeightedBipartiteGraph::Edge> edges;
        std::vector<int> cols;  // the columns present in G_z
        std::fill(touched.begin(), touched.end(), 0);
        int ai = 0;
        for (NodeId c : ch) {
            if (c == zmax) continue;
            for (int j = 0; j < b; ++j) {
                int val = comp_scores[j][c];
                if (val > 0) {
                    if (!touched[j]) {
                        touched[j] = 1;
                        cols.push_back(j);
                    }
                    edges.push_back({ai, j, val});
                }
            }
            ++ai;
        }
        // max-child edges: touched columns in full, plus the two best
        // untouched ones
        int mi = ai;  // local index of the max child
        int top1 = -1, top2 = -1;
        for (int j = 0; j < b; ++j) {
            int val = comp_scores[j][zmax];
            if (val <= 0) continue;
            if (touched[j]) {
                edges.push_back({mi, j, val});
            } else {
                if (top1 == -1 || val > comp_scores[top1][zmax]) {
                    top2 = top1;
                    top1 = j;
                } else if (top2 == -1 || val > comp_scores[top2][zmax]) {
                    top2 = j;
                }
            }
        }
        for (int j : {top1, top2})
            if (j != -1) {
                edges.push_back({mi, j, comp_scores[j][zmax]});
                cols.push_back(j);
            }
        if (edges.empty()) continue;
        // compact column ids
        std::sort(cols.begin(), cols.end());
        std::vector<int> colmap(b, -1);
        for (size_t k = 0; k < cols.size(); ++k) colmap[cols[k]] = static_cast<int>(k);
        for (auto& e : edges) e.y = colmap[e.y];
        WeightedBipartiteGraph g(mi + 1, static_cast<int>(cols.size()), std::move(edges));
        CavityResult res = all_cavity(g);
        SparseArray& a = out.arrays[z];
        a.init(res.mwm);
        for (size_t k = 0; k < cols.size(); ++k) a.write(cols[k], res.y_values[k]);
        // the degree bound of the sparse lemma: at most d_z + 1 distinct
        int dz = static_cast<int>(ch.size()) + (w.parent[z] != kNoNode ? 1 : 0);
        if (static_cast<int>(a.distinct_values().size()) > dz + 1)
            throw TreeError("cavity arrays: distinct-value bound violated");
    }
    return out;
}

std::vector<Subproblem> new_subproblems(const AnnotatedTree& w, const ShrunkTree& x, NodeId y,
                                        const UnrootedOptions& opt, RunCounters* counters) {
    if (y < 0 || y >= x.size() || x.skeleton.is_leaf(y))
        throw TreeError("new_subproblems: y must be an internal node of x");
    Ctx ctx = make_ctx(opt, counters, -1);
    AnnotatedTree main_view = shrunk_view(x, y);
    MastTable tm = mast_annotated(w, main_view, ctx.stats(), ctx.cap);
    return spawn_core(ctx, w, x, y, std::move(main_view), std::move(tm));
}

std::vector<Subproblem> aux_zero_shrunk(const AnnotatedTree& w, const ShrunkTree& x, NodeId y,
                                        const UnrootedOptions& opt) {
    if (x.shrunk_count() != 0) throw TreeError("aux_zero_shrunk: x has a shrunk leaf");
    return new_subproblems(w, x, y, opt, nullptr);
}

std::vector<Subproblem> aux_one_shrunk(const AnnotatedTree& w, const ShrunkTree& x, NodeId y,
                                       const UnrootedOptions& opt) {
    if (x.shrunk_count() != 1) throw TreeError("aux_one_shrunk: x must have one shrunk leaf");
    return new_subproblems(w, x, y, opt, nullptr);
}

std::vector<Subproblem> aux_two_shrunk(const AnnotatedTree& w, const ShrunkTree& x, NodeId y,
                                       const UnrootedOptions& opt) {
    if (x.shrunk_count() != 2) throw TreeError("aux_two_shrunk: x must have two shrunk leaves");
    auto path = path_between(x.skeleton, x.gamma1, x.gamma2);
    if (std::find(path.begin(), path.end(), y) == path.end())
        throw TreeError("aux_two_shrunk: y must lie on the path between the shrunk leaves");
    return new_subproblems(w, x, y, opt, nullptr);
}

int mast_wx(const AnnotatedTree& w, const ShrunkTree& x, const UnrootedOptions& opt,
            RunCounters* counters) {
    Ctx ctx = make_ctx(opt, counters, -1);
    return wx_rec(ctx, w, x, 0, -1, -1);
}

int mast_unrooted(const EvolutionaryTree& u1, const EvolutionaryTree& u2,
                  const UnrootedOptions& opt, RunCounters* counters) {
    if (u1.rooted() || u2.rooted()) throw TreeError("mast_unrooted: trees must be unrooted");
    if (u1.has_direction() || u2.has_direction())
        throw TreeError("mast_unrooted: directed edges, use mast_mixed");
    Ctx ctx = make_ctx(opt, counters, std::max(u1.size(), u2.size()));
    return unrooted_rec(ctx, u1, u2);
}

int mast_mixed(const EvolutionaryTree& m1, const EvolutionaryTree& m2,
               const UnrootedOptions& opt, RunCounters* counters) {
    if (m1.rooted() || m2.rooted()) throw TreeError("mast_mixed: trees must be unrooted");
    if (!m1.has_direction() && !m2.has_direction())
        return mast_unrooted(m1, m2, opt, counters);
    Ctx ctx = make_ctx(opt, counters, std::max(m1.size(), m2.size()));
    ShrunkTree x{m2, kNoNode, kNoNode};
    int best = 0;
    for (NodeId u = 0; u < m1.size(); ++u) {
        EvolutionaryTree rooted = root_at(m1, u);
        if (rooted.leaf_labels().empty()) continue;
        AnnotatedTree w = plain_annotated(rooted);
        best = std::max(best, wx_rec(ctx, w, x, 0, -1, -1));
    }
    return best;
}

}  // namespace agreetree
