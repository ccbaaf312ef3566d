#include "agreetree/tree.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <functional>

namespace agreetree {

NodeId EvolutionaryTree::add_node(std::string name) {
    adj.emplace_back();
    label.push_back(std::move(name));
    dummy.push_back(0);
    return static_cast<NodeId>(adj.size()) - 1;
}

void EvolutionaryTree::add_edge(NodeId a, NodeId b, bool a_to_b, bool b_to_a) {
    adj[a].push_back({b, a_to_b});
    adj[b].push_back({a, b_to_a});
}

void EvolutionaryTree::set_root(NodeId r) {
    root = r;
}

bool EvolutionaryTree::has_direction() const {
    for (const auto& nbrs : adj)
        for (const auto& h : nbrs)
            if (!h.passable) return true;
    return false;
}

std::vector<std::string> EvolutionaryTree::leaf_labels() const {
    std::vector<std::string> out;
    for (NodeId v = 0; v < size(); ++v)
        if (is_leaf(v) && labeled(v)) out.push_back(label[v]);
    return out;
}

void EvolutionaryTree::finalize() {
    const int n = size();
    if (n == 0) {
        parent.clear();
        children.clear();
        return;
    }
    // Connectivity and acyclicity: a tree has n-1 edges and one BFS
    // component (traversal ignores direction flags).
    long long half_edges = 0;
    for (const auto& nbrs : adj) half_edges += static_cast<long long>(nbrs.size());
    if (half_edges != 2LL * (n - 1)) throw TreeError("not a tree: wrong edge count");
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    int cnt = 0;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        ++cnt;
        for (const auto& h : adj[v])
            if (!seen[h.to]) {
                seen[h.to] = 1;
                stack.push_back(h.to);
            }
    }
    if (cnt != n) throw TreeError("not a tree: disconnected");

    std::set<std::string> used;
    for (NodeId v = 0; v < n; ++v) {
        if (is_leaf(v) && labeled(v) && !used.insert(label[v]).second)
            throw TreeError("duplicate leaf label: " + label[v]);
    }

    if (rooted()) {
        if (has_direction()) throw TreeError("directed edges on a rooted tree");
        parent.assign(n, kNoNode);
        children.assign(n, {});
        std::vector<NodeId> order{root};
        std::vector<char> vis(n, 0);
        vis[root] = 1;
        for (size_t i = 0; i < order.size(); ++i) {
            NodeId v = order[i];
            for (const auto& h : adj[v])
                if (!vis[h.to]) {
                    vis[h.to] = 1;
                    parent[h.to] = v;
                    children[v].push_back(h.to);
                    order.push_back(h.to);
                }
        }
    } else {
        parent.clear();
        children.clear();
    }
}

std::vector<NodeId> EvolutionaryTree::preorder_nodes() const {
    std::vector<NodeId> out;
    out.reserve(size());
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        out.push_back(v);
        const auto& ch = children[v];
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    return out;
}

std::vector<NodeId> EvolutionaryTree::postorder_nodes() const {
    std::vector<NodeId> pre = preorder_nodes();
    std::reverse(pre.begin(), pre.end());
    return pre;  // reverse preorder visits children before parents
}

MappedTree root_at_mapped(const EvolutionaryTree& tree, NodeId u) {
    const int n = tree.size();
    if (u < 0 || u >= n) throw TreeError("root_at: node out of range");
    std::vector<NodeId> map(n, kNoNode);
    EvolutionaryTree out;
    map[u] = out.add_node(tree.label[u]);
    out.dummy[0] = tree.dummy[u];
    std::vector<NodeId> order{u};
    for (size_t i = 0; i < order.size(); ++i) {
        NodeId v = order[i];
        for (const auto& h : tree.adj[v]) {
            if (map[h.to] != kNoNode || !h.passable) continue;
            NodeId nv = out.add_node(tree.label[h.to]);
            out.dummy[nv] = tree.dummy[h.to];
            map[h.to] = nv;
            out.add_edge(map[v], nv);
            order.push_back(h.to);
        }
    }
    out.set_root(map[u]);
    out.finalize();
    return {std::move(out), std::move(map)};
}

EvolutionaryTree root_at(const EvolutionaryTree& tree, NodeId u) {
    return root_at_mapped(tree, u).tree;
}

MappedTree induced_subtree_mapped(const EvolutionaryTree& tree,
                                  const std::vector<std::string>& labels) {
    if (!tree.rooted()) throw TreeError("induced_subtree: tree must be rooted");
    const int n = tree.size();
    std::set<std::string> want(labels.begin(), labels.end());
    std::vector<NodeId> map(n, kNoNode);
    // selected-leaf counts and branching structure, bottom-up
    std::vector<int> cnt(n, 0);
    std::vector<NodeId> post = tree.postorder_nodes();
    for (NodeId v : post) {
        if (tree.children[v].empty()) {
            if (tree.labeled(v) && want.count(tree.label[v])) cnt[v] = 1;
        } else {
            for (NodeId c : tree.children[v]) cnt[v] += cnt[c];
        }
    }
    EvolutionaryTree out;
    // a label on a degree-1 root acts as a leaf label (root-is-a-leaf
    // convention) and survives the restriction alongside the others
    const bool root_label_in = tree.labeled(tree.root) &&
                               tree.children[tree.root].size() == 1 &&
                               want.count(tree.label[tree.root]) > 0;
    if (cnt[tree.root] == 0 && !root_label_in) {
        out.finalize();
        return {std::move(out), std::move(map)};
    }
    if (cnt[tree.root] == 0) {  // only the root label selected
        map[tree.root] = out.add_node(tree.label[tree.root]);
        out.set_root(map[tree.root]);
        out.finalize();
        return {std::move(out), std::move(map)};
    }
    // keep: selected leaves and nodes with >= 2 children carrying content
    std::function<NodeId(NodeId)> build = [&](NodeId v) -> NodeId {
        while (true) {
            if (tree.children[v].empty()) {
                NodeId nv = out.add_node(tree.label[v]);
                out.dummy[nv] = tree.dummy[v];
                map[v] = nv;
                return nv;
            }
            std::vector<NodeId> live;
            for (NodeId c : tree.children[v])
                if (cnt[c] > 0) live.push_back(c);
            if (live.empty()) {
                // v is itself a selected leaf? impossible: internal nodes carry no label
                throw TreeError("induced_subtree: internal inconsistency");
            }
            if (live.size() == 1) {
                v = live[0];  // pass-through
                continue;
            }
            NodeId nv = out.add_node();
            map[v] = nv;
            for (NodeId c : live) {
                NodeId sub = build(c);
                out.add_edge(nv, sub);
            }
            return nv;
        }
    };
    NodeId r = build(tree.root);
    if (root_label_in) {
        NodeId lr = out.add_node(tree.label[tree.root]);
        map[tree.root] = lr;
        out.add_edge(lr, r);
        r = lr;
    }
    out.set_root(r);
    out.finalize();
    return {std::move(out), std::move(map)};
}

EvolutionaryTree induced_subtree(const EvolutionaryTree& tree,
                                 const std::vector<std::string>& labels) {
    return induced_subtree_mapped(tree, labels).tree;
}

MappedTree restrict_unrooted_mapped(const EvolutionaryTree& tree,
                                    const std::vector<std::string>& labels) {
    const int n = tree.size();
    std::set<std::string> want(labels.begin(), labels.end());
    std::vector<NodeId> map(n, kNoNode);
    std::vector<char> selected(n, 0);
    int nsel = 0;
    for (NodeId v = 0; v < n; ++v)
        if (tree.is_leaf(v) && tree.labeled(v) && want.count(tree.label[v])) {
            selected[v] = 1;
            ++nsel;
        }
    EvolutionaryTree out;
    if (nsel == 0) {
        out.finalize();
        return {std::move(out), std::move(map)};
    }
    if (nsel == 1) {
        for (NodeId v = 0; v < n; ++v)
            if (selected[v]) {
                map[v] = out.add_node(tree.label[v]);
            }
        out.finalize();
        return {std::move(out), std::move(map)};
    }
    // keep = nodes on paths between selected leaves; root anywhere selected
    // and orient to find, per node, how many selected leaves in each direction
    NodeId start = kNoNode;
    for (NodeId v = 0; v < n && start == kNoNode; ++v)
        if (selected[v]) start = v;
    std::vector<NodeId> par(n, kNoNode), order;
    order.reserve(n);
    {
        std::vector<char> vis(n, 0);
        std::vector<NodeId> stack{start};
        vis[start] = 1;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (const auto& h : tree.adj[v])
                if (!vis[h.to]) {
                    vis[h.to] = 1;
                    par[h.to] = v;
                    stack.push_back(h.to);
                }
        }
    }
    std::vector<int> below(n, 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        NodeId v = *it;
        if (selected[v]) below[v] += 1;
        if (par[v] != kNoNode) below[par[v]] += below[v];
    }
    // keep v iff it lies on a path between two selected leaves
    std::vector<char> keep(n, 0);
    for (NodeId v : order) {
        if (selected[v]) { keep[v] = 1; continue; }
        int branches = 0;
        for (const auto& h : tree.adj[v]) {
            int cside = (h.to == par[v]) ? nsel - below[v] : below[h.to];
            if (cside > 0) ++branches;
        }
        if (branches >= 2) keep[v] = 1;
    }
    // Joints (selected leaves, >=3 kept branches) become output nodes;
    // chains between joints contract to single edges.
    std::vector<int> kept_deg(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        if (!keep[v]) continue;
        for (const auto& h : tree.adj[v])
            if (keep[h.to]) ++kept_deg[v];
    }
    std::vector<char> joint(n, 0);
    for (NodeId v = 0; v < n; ++v)
        if (keep[v] && (selected[v] || kept_deg[v] >= 3)) joint[v] = 1;
    for (NodeId v = 0; v < n; ++v)
        if (keep[v] && joint[v]) map[v] = out.add_node(tree.label[v]);
    // walk chains between joints
    std::set<std::pair<NodeId, NodeId>> done;
    for (NodeId v = 0; v < n; ++v) {
        if (!keep[v] || !joint[v]) continue;
        for (const auto& h0 : tree.adj[v]) {
            if (!keep[h0.to]) continue;
            bool fwd = h0.passable;
            bool bwd = true;
            // find reverse passability of first hop
            for (const auto& hb : tree.adj[h0.to])
                if (hb.to == v) { bwd = hb.passable; break; }
            NodeId prev = v, cur = h0.to;
            while (!joint[cur]) {
                NodeId nxt = kNoNode;
                bool nf = true, nb = true;
                for (const auto& h : tree.adj[cur])
                    if (keep[h.to] && h.to != prev) {
                        nxt = h.to;
                        nf = h.passable;
                        for (const auto& hb : tree.adj[h.to])
                            if (hb.to == cur) { nb = hb.passable; break; }
                        break;
                    }
                fwd = fwd && nf;
                bwd = bwd && nb;
                prev = cur;
                cur = nxt;
            }
            if (done.count({std::min(v, cur), std::max(v, cur)})) continue;
            done.insert({std::min(v, cur), std::max(v, cur)});
            out.adj[map[v]].push_back({map[cur], fwd});
            out.adj[map[cur]].push_back({map[v], bwd});
        }
    }
    out.finalize();
    return {std::move(out), std::move(map)};
}

std::vector<std::vector<NodeId>> components_without(const EvolutionaryTree& tree, NodeId x) {
    const int n = tree.size();
    std::vector<char> vis(n, 0);
    vis[x] = 1;
    std::vector<std::vector<NodeId>> comps;
    for (const auto& h : tree.adj[x]) {
        if (vis[h.to]) continue;
        std::vector<NodeId> comp;
        std::vector<NodeId> stack{h.to};
        vis[h.to] = 1;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (const auto& g : tree.adj[v])
                if (!vis[g.to]) {
                    vis[g.to] = 1;
                    stack.push_back(g.to);
                }
        }
        comps.push_back(std::move(comp));
    }
    return comps;
}

NodeId find_separator(const EvolutionaryTree& tree) {
    const int n = tree.size();
    if (n < 3) throw TreeError("find_separator: tree has fewer than 3 nodes");
    // subtree sizes from an arbitrary rooting at node 0
    std::vector<NodeId> par(n, kNoNode), order;
    order.reserve(n);
    std::vector<char> vis(n, 0);
    std::vector<NodeId> stack{0};
    vis[0] = 1;
    std::vector<int> prenum(n, 0);
    int t = 0;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        prenum[v] = ++t;
        order.push_back(v);
        for (const auto& h : tree.adj[v])
            if (!vis[h.to]) {
                vis[h.to] = 1;
                par[h.to] = v;
                stack.push_back(h.to);
            }
    }
    std::vector<int> sz(n, 1);
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (par[*it] != kNoNode) sz[par[*it]] += sz[*it];
    NodeId best = kNoNode;
    int best_big = n + 1, best_pre = n + 1;
    for (NodeId v = 0; v < n; ++v) {
        if (tree.degree(v) < 2) continue;  // leaves cannot be separators
        int big = (par[v] == kNoNode) ? 0 : n - sz[v];
        for (const auto& h : tree.adj[v])
            if (h.to != par[v]) big = std::max(big, sz[h.to]);
        if (big < best_big || (big == best_big && prenum[v] < best_pre)) {
            best = v;
            best_big = big;
            best_pre = prenum[v];
        }
    }
    if (best == kNoNode || best_big > n / 2)
        throw TreeError("find_separator: no valid separator");
    return best;
}

EvolutionaryTree insert_dummy_nodes(const EvolutionaryTree& tree) {
    if (tree.rooted()) throw TreeError("insert_dummy_nodes: tree must be unrooted");
    const int n = tree.size();
    EvolutionaryTree out(n);
    for (NodeId v = 0; v < n; ++v) {
        out.label[v] = tree.label[v];
        out.dummy[v] = tree.dummy[v];
    }
    for (NodeId v = 0; v < n; ++v) {
        for (const auto& h : tree.adj[v]) {
            if (h.to < v) continue;  // each edge once
            bool fwd = h.passable, bwd = true;
            for (const auto& hb : tree.adj[h.to])
                if (hb.to == v) { bwd = hb.passable; break; }
            NodeId d = out.add_node();
            out.dummy[d] = 1;
            out.adj[v].push_back({d, fwd});
            out.adj[d].push_back({v, bwd});
            out.adj[d].push_back({h.to, fwd});
            out.adj[h.to].push_back({d, bwd});
        }
    }
    out.finalize();
    return out;
}

PreorderIndex preorder_index(const EvolutionaryTree& tree) {
    if (!tree.rooted()) throw TreeError("preorder_index: tree must be rooted");
    const int n = tree.size();
    PreorderIndex idx;
    idx.number.assign(n, 0);
    idx.desc_count.assign(n, 0);
    idx.by_number.assign(n + 1, kNoNode);
    int t = 0;
    std::function<int(NodeId)> dfs = [&](NodeId v) -> int {
        idx.number[v] = ++t;
        idx.by_number[t] = v;
        int sz = 1;
        for (NodeId c : tree.children[v]) sz += dfs(c);
        idx.desc_count[v] = sz - 1;
        return sz;
    };
    dfs(tree.root);
    return idx;
}

namespace {

std::string canon_from(const EvolutionaryTree& t, NodeId v, NodeId from) {
    std::vector<std::string> parts;
    for (const auto& h : t.adj[v])
        if (h.to != from) parts.push_back(canon_from(t, h.to, v));
    if (parts.empty()) return "<" + t.label[v] + ">";
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (auto& p : parts) s += p;
    s += ")";
    if (t.labeled(v) && t.is_leaf(v)) s += "<" + t.label[v] + ">";
    return s;
}

}  // namespace

std::string canonical_rooted(const EvolutionaryTree& tree) {
    if (tree.size() == 0) return "()";
    if (!tree.rooted()) throw TreeError("canonical_rooted: tree must be rooted");
    return canon_from(tree, tree.root, kNoNode);
}

std::string canonical_unrooted(const EvolutionaryTree& tree) {
    const int n = tree.size();
    if (n == 0) return "()";
    if (n == 1) return canon_from(tree, 0, kNoNode);
    if (n == 2) {
        std::string a = "<" + tree.label[0] + ">", b = "<" + tree.label[1] + ">";
        if (b < a) std::swap(a, b);
        return "(" + a + b + ")";
    }
    // centroid rooting (1 or 2 candidates) for a canonical start
    std::vector<NodeId> par(n, kNoNode), order;
    std::vector<char> vis(n, 0);
    std::vector<NodeId> stack{0};
    vis[0] = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (const auto& h : tree.adj[v])
            if (!vis[h.to]) {
                vis[h.to] = 1;
                par[h.to] = v;
                stack.push_back(h.to);
            }
    }
    std::vector<int> sz(n, 1);
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (par[*it] != kNoNode) sz[par[*it]] += sz[*it];
    int best_big = n + 1;
    std::vector<NodeId> centroids;
    for (NodeId v = 0; v < n; ++v) {
        int big = (par[v] == kNoNode) ? 0 : n - sz[v];
        for (const auto& h : tree.adj[v])
            if (h.to != par[v]) big = std::max(big, sz[h.to]);
        if (big < best_big) {
            best_big = big;
            centroids.assign(1, v);
        } else if (big == best_big) {
            centroids.push_back(v);
        }
    }
    std::string best;
    for (NodeId c : centroids) {
        std::string s = canon_from(tree, c, kNoNode);
        if (best.empty() || s < best) best = s;
    }
    return best;
}

bool isomorphic_rooted(const EvolutionaryTree& a, const EvolutionaryTree& b) {
    return canonical_rooted(a) == canonical_rooted(b);
}

bool isomorphic_unrooted(const EvolutionaryTree& a, const EvolutionaryTree& b) {
    return canonical_unrooted(a) == canonical_unrooted(b);
}

}  // namespace agreetree
