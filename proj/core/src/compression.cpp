#include "agreetree/compression.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace agreetree {

NodeId AnnotatedTree::add(NodeKind k, std::string lab, NodeId source) {
    parent.push_back(kNoNode);
    children.emplace_back();
    label.push_back(std::move(lab));
    kind.push_back(k);
    ann.emplace_back();
    src.push_back(source);
    prov_of.push_back(-1);
    return size() - 1;
}

void AnnotatedTree::link(NodeId par, NodeId child) {
    parent[child] = par;
    children[par].push_back(child);
}

int AnnotatedTree::checked(int v, const char* slot) {
    if (v < 0) throw TreeError(std::string("annotation slot missing: ") + slot);
    return v;
}

std::vector<NodeId> AnnotatedTree::preorder() const {
    std::vector<NodeId> out;
    if (root == kNoNode) return out;
    out.reserve(size());
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (auto it = children[v].rbegin(); it != children[v].rend(); ++it)
            stack.push_back(*it);
    }
    return out;
}

std::vector<NodeId> AnnotatedTree::postorder() const {
    auto out = preorder();
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<std::string> AnnotatedTree::atomic_labels() const {
    // labels live on atomic leaves and, by the degree-1-root-is-a-leaf
    // convention, possibly on the root
    std::vector<std::string> out;
    for (NodeId v = 0; v < size(); ++v)
        if (!label[v].empty()) out.push_back(label[v]);
    return out;
}

EvolutionaryTree AnnotatedTree::skeleton_tree() const {
    EvolutionaryTree t(size());
    for (NodeId v = 0; v < size(); ++v) {
        t.label[v] = label[v];
        if (parent[v] != kNoNode) t.add_edge(parent[v], v);
    }
    t.set_root(root);
    t.finalize();
    return t;
}

ShrunkTree shrink(const EvolutionaryTree& rooted, const std::vector<NodeId>& subtree_roots) {
    if (!rooted.rooted()) throw TreeError("shrink: tree must be rooted");
    if (subtree_roots.empty() || subtree_roots.size() > 2)
        throw TreeError("shrink: one or two subtrees");
    const int n = rooted.size();
    std::vector<int> owner(n, -1);
    for (size_t k = 0; k < subtree_roots.size(); ++k) {
        std::vector<NodeId> stack{subtree_roots[k]};
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            if (owner[v] != -1) throw TreeError("shrink: overlapping subtrees");
            owner[v] = static_cast<int>(k);
            for (NodeId c : rooted.children[v]) stack.push_back(c);
        }
    }
    ShrunkTree out;
    std::vector<NodeId> map(n, kNoNode);
    std::vector<NodeId> gid(subtree_roots.size(), kNoNode);
    std::function<NodeId(NodeId)> build = [&](NodeId v) -> NodeId {
        if (owner[v] != -1) {
            NodeId g = out.skeleton.add_node();
            gid[owner[v]] = g;
            return g;
        }
        NodeId nv = out.skeleton.add_node(rooted.label[v]);
        map[v] = nv;
        for (NodeId c : rooted.children[v]) {
            NodeId sub = build(c);
            out.skeleton.add_edge(nv, sub);
        }
        return nv;
    };
    NodeId r = build(rooted.root);
    out.skeleton.set_root(r);
    out.skeleton.finalize();
    out.gamma1 = gid[0];
    if (subtree_roots.size() == 2) out.gamma2 = gid[1];
    return out;
}

AnnotatedTree plain_annotated(const EvolutionaryTree& rooted) {
    if (!rooted.rooted()) throw TreeError("plain_annotated: tree must be rooted");
    AnnotatedTree w;
    const int n = rooted.size();
    for (NodeId v = 0; v < n; ++v) {
        NodeKind k;
        if (rooted.children.empty() || rooted.children[v].empty())
            k = rooted.labeled(v) ? NodeKind::AtomicLeaf : NodeKind::AuxLeaf;
        else
            k = NodeKind::OrdinaryInternal;
        w.add(k, rooted.label[v], v);
    }
    for (NodeId v = 0; v < n; ++v)
        for (NodeId c : rooted.children[v]) w.link(v, c);
    w.root = rooted.root;
    w.form = 0;
    return w;
}

AnnotatedTree shrunk_view(const ShrunkTree& x, NodeId at, NodeId blocked) {
    AnnotatedTree w;
    const auto& sk = x.skeleton;
    const int n = sk.size();
    std::vector<NodeId> map(n, kNoNode);
    auto kind_of = [&](NodeId s, bool leaf) {
        if (s == x.gamma1 || s == x.gamma2) return NodeKind::ShrunkLeaf;
        if (!leaf) return NodeKind::OrdinaryInternal;
        return sk.labeled(s) ? NodeKind::AtomicLeaf : NodeKind::AuxLeaf;
    };
    std::vector<NodeId> order{at};
    map[at] = w.add(NodeKind::OrdinaryInternal, sk.label[at], at);
    for (size_t i = 0; i < order.size(); ++i) {
        NodeId v = order[i];
        for (const auto& h : sk.adj[v]) {
            if (h.to == blocked || map[h.to] != kNoNode || !h.passable) continue;
            map[h.to] = w.add(NodeKind::OrdinaryInternal, sk.label[h.to], h.to);
            w.link(map[v], map[h.to]);
            order.push_back(h.to);
        }
    }
    w.root = map[at];
    // fix leaf kinds now that the shape is known
    for (NodeId v = 0; v < w.size(); ++v)
        w.kind[v] = kind_of(w.src[v], w.is_leaf(v));
    if (x.gamma1 != kNoNode && map[x.gamma1] != kNoNode) w.gamma1 = map[x.gamma1];
    if (x.gamma2 != kNoNode && map[x.gamma2] != kNoNode) w.gamma2 = map[x.gamma2];
    w.form = 0;
    return w;
}

AnnotatedTree compress_against(const AnnotatedTree& source,
                               const std::set<std::string>& keep_labels, int form) {
    if (form != 1 && form != 2) throw TreeError("compress_against: form must be 1 or 2");
    if (source.root == kNoNode) throw TreeError("compress_against: empty source");
    {
        std::set<std::string> have;
        for (NodeId v = 0; v < source.size(); ++v)
            if (source.kind[v] == NodeKind::AtomicLeaf) have.insert(source.label[v]);
        for (const auto& lab : keep_labels)
            if (!have.count(lab))
                throw TreeError("compress_against: label not in source: " + lab);
    }
    const int n = source.size();
    std::vector<int> cnt(n, 0);  // kept atomic leaves per subtree
    for (NodeId v : source.postorder()) {
        if (source.kind[v] == NodeKind::AtomicLeaf && keep_labels.count(source.label[v]))
            cnt[v] = 1;
        for (NodeId c : source.children[v]) cnt[v] += cnt[c];
    }

    AnnotatedTree out;
    out.form = form;

    // Attach compressed/auxiliary leaves for the dropped children of ys.
    auto attach_set = [&](NodeId out_y, NodeId ys) {
        std::vector<NodeId> dropped;
        for (NodeId c : source.children[ys])
            if (cnt[c] == 0) dropped.push_back(c);
        if (dropped.empty()) return;
        NodeId z = out.add(NodeKind::CompressedLeaf);
        out.link(out_y, z);
        Provenance p;
        p.attach = {ys};
        p.groups = {dropped};
        p.cont = {kNoNode};
        out.prov_of[z] = static_cast<int>(out.provs.size());
        out.provs.push_back(std::move(p));
        if (form == 2) {
            NodeId zb = out.add(NodeKind::AuxLeaf);
            out.link(out_y, zb);
        }
    };

    // Skeleton nodes: nodes with >= 2 content children, kept atomic
    // leaves, and the source root (kept so every dropped subtree stays
    // attached below some output node).
    std::function<NodeId(NodeId)> build = [&](NodeId vs) -> NodeId {
        bool leafish = source.is_leaf(vs);
        bool kept_label = !source.label[vs].empty() && keep_labels.count(source.label[vs]);
        NodeId ov;
        if (leafish) {
            ov = kept_label ? out.add(NodeKind::AtomicLeaf, source.label[vs], vs)
                            : out.add(NodeKind::AuxLeaf, std::string(), vs);
        } else {
            // a label on an internal node means a degree-1 root; keep it
            // exactly when it survives the restriction
            ov = out.add(NodeKind::OrdinaryInternal,
                         kept_label ? source.label[vs] : std::string(), vs);
        }
        if (!leafish) {
            for (NodeId c0 : source.children[vs]) {
                if (cnt[c0] == 0) continue;  // handled by attach_set
                // walk the chain of single-content intermediates
                std::vector<NodeId> path_nodes;          // hanger-bearing intermediates
                std::vector<std::vector<NodeId>> hangs;  // their dropped children
                std::vector<NodeId> conts;               // continuation children
                NodeId c = c0;
                while (true) {
                    // c has cnt > 0; is it a skeleton node?
                    bool is_kept_leaf = source.kind[c] == NodeKind::AtomicLeaf && cnt[c] == 1 &&
                                        source.is_leaf(c);
                    int content_children = 0;
                    NodeId next = kNoNode;
                    for (NodeId cc : source.children[c])
                        if (cnt[cc] > 0) {
                            ++content_children;
                            next = cc;
                        }
                    if (is_kept_leaf || content_children >= 2) break;
                    // intermediate: its dropped children hang between
                    std::vector<NodeId> dropped;
                    for (NodeId cc : source.children[c])
                        if (cnt[cc] == 0) dropped.push_back(cc);
                    if (!dropped.empty()) {
                        path_nodes.push_back(c);
                        hangs.push_back(std::move(dropped));
                        conts.push_back(next);
                    }
                    c = next;
                }
                NodeId sub = build(c);
                if (path_nodes.empty()) {
                    out.link(ov, sub);
                } else {
                    NodeId p = out.add(NodeKind::CompressedInternal, std::string(),
                                       path_nodes.front());
                    out.link(ov, p);
                    NodeId z = out.add(NodeKind::CompressedLeaf);
                    Provenance pv;
                    pv.attach = path_nodes;
                    pv.groups = hangs;
                    pv.cont = conts;
                    out.prov_of[z] = static_cast<int>(out.provs.size());
                    out.provs.push_back(std::move(pv));
                    if (form == 1) {
                        out.link(p, sub);
                        out.link(p, z);
                    } else {
                        NodeId zb = out.add(NodeKind::AuxLeaf);
                        NodeId pb = out.add(NodeKind::AuxInternal);
                        NodeId zbb = out.add(NodeKind::AuxLeaf);
                        out.link(p, z);
                        out.link(p, zb);
                        out.link(p, pb);
                        out.link(pb, zbb);
                        out.link(pb, sub);
                    }
                }
            }
            attach_set(ov, vs);
        }
        return ov;
    };
    out.root = build(source.root);
    return out;
}

AnnotatedTree rebuild_subproblem_topology(const AnnotatedTree& w,
                                          const std::set<std::string>& keep_labels,
                                          int form) {
    return compress_against(w, keep_labels, form);
}

namespace {

int group_max(const std::vector<NodeId>& g, const std::function<int(NodeId)>& f) {
    int best = 0;
    for (NodeId q : g) best = std::max(best, f(q));
    return best;
}

// max over ordered pairs q != q' in one group of f1(q) + f2(q').
int pair_max(const std::vector<NodeId>& g, const std::function<int(NodeId)>& f1,
             const std::function<int(NodeId)>& f2) {
    if (g.size() < 2) return 0;
    std::vector<int> v1(g.size()), v2(g.size());
    for (size_t i = 0; i < g.size(); ++i) {
        v1[i] = f1(g[i]);
        v2[i] = f2(g[i]);
    }
    // top-2 of f2 lets each q pair with the best other q'
    int b1 = -1, b2 = -1;
    for (int i = 0; i < static_cast<int>(g.size()); ++i) {
        if (b1 == -1 || v2[i] > v2[b1]) {
            b2 = b1;
            b1 = i;
        } else if (b2 == -1 || v2[i] > v2[b2]) {
            b2 = i;
        }
    }
    int best = 0;
    for (int i = 0; i < static_cast<int>(g.size()); ++i) {
        int other = (i == b1) ? b2 : b1;
        if (other == -1) continue;
        best = std::max(best, v1[i] + v2[other]);
    }
    return best;
}

}  // namespace

void wire_annotations(AnnotatedTree& w, const AnnotationOracle& oracle) {
    const bool two = w.form == 2;
    if (!oracle.vs_r1) throw TreeError("wire_annotations: missing oracle");
    if (two && (!oracle.vs_r2 || !oracle.vs_rplus))
        throw TreeError("wire_annotations: two-subtree oracle incomplete");
    for (NodeId v = 0; v < w.size(); ++v) {
        Annotations& a = w.ann[v];
        switch (w.kind[v]) {
            case NodeKind::OrdinaryInternal: {
                a.alpha1 = oracle.vs_r1(w.src[v]);
                if (two) a.alpha2 = oracle.vs_r2(w.src[v]);
                break;
            }
            case NodeKind::CompressedInternal: {
                a.alpha1 = oracle.vs_r1(w.src[v]);
                if (two) {
                    a.alpha2 = oracle.vs_r2(w.src[v]);
                    a.alpha_plus = oracle.vs_rplus(w.src[v]);
                }
                break;
            }
            case NodeKind::CompressedLeaf: {
                const Provenance* p = w.prov(v);
                auto flat = p->flat();
                a.alpha1 = group_max(flat, oracle.vs_r1);
                if (!two) break;
                a.alpha2 = group_max(flat, oracle.vs_r2);
                a.alpha_plus = group_max(flat, oracle.vs_rplus);
                // beta: two distinct subtrees attached to the same node
                int beta = 0;
                for (const auto& g : p->groups)
                    beta = std::max(beta, pair_max(g, oracle.vs_r1, oracle.vs_r2));
                a.beta = beta;
                if (p->attach.size() > 1 || p->cont[0] != kNoNode) {
                    // hanging set: ordered cross-group pairs; groups are
                    // topmost-first, R1 hosted by the higher hanger in
                    // beta12 and by the lower one in beta21
                    int b12 = 0, b21 = 0;
                    int pref1 = 0, pref2 = 0;  // best f1/f2 among groups above
                    for (size_t i = 0; i < p->groups.size(); ++i) {
                        int g1 = group_max(p->groups[i], oracle.vs_r1);
                        int g2 = group_max(p->groups[i], oracle.vs_r2);
                        if (i > 0) {
                            b12 = std::max(b12, pref1 + g2);
                            b21 = std::max(b21, pref2 + g1);
                        }
                        pref1 = std::max(pref1, g1);
                        pref2 = std::max(pref2, g2);
                    }
                    a.beta12 = b12;
                    a.beta21 = b21;
                }
                break;
            }
            default:
                break;
        }
    }
}

AnnotatedTree compress_one(const EvolutionaryTree& t, const EvolutionaryTree& r,
                           const std::function<int(NodeId)>& oracle) {
    std::set<std::string> keep;
    {
        std::set<std::string> drop;
        for (const auto& lab : r.leaf_labels()) drop.insert(lab);
        for (const auto& lab : t.leaf_labels())
            if (!drop.count(lab)) keep.insert(lab);
    }
    AnnotatedTree w = compress_against(plain_annotated(t), keep, 1);
    AnnotationOracle o;
    o.vs_r1 = oracle;
    wire_annotations(w, o);
    return w;
}

AnnotatedTree compress_two(const EvolutionaryTree& t, const EvolutionaryTree& r1,
                           const EvolutionaryTree& r2, const AnnotationOracle& oracle) {
    std::set<std::string> k1, k2, keep;
    for (const auto& lab : r1.leaf_labels()) k1.insert(lab);
    for (const auto& lab : r2.leaf_labels()) {
        if (k1.count(lab)) throw TreeError("compress_two: label overlap between subtrees");
        k2.insert(lab);
    }
    for (const auto& lab : t.leaf_labels())
        if (!k1.count(lab) && !k2.count(lab)) keep.insert(lab);
    AnnotatedTree w = compress_against(plain_annotated(t), keep, 2);
    wire_annotations(w, oracle);
    return w;
}

namespace {

const char* kind_code(NodeKind k) {
    switch (k) {
        case NodeKind::AtomicLeaf: return "leaf";
        case NodeKind::CompressedLeaf: return "z";
        case NodeKind::AuxLeaf: return "aux";
        case NodeKind::ShrunkLeaf: return "gamma";
        case NodeKind::CompressedInternal: return "p1";
        case NodeKind::AuxInternal: return "p1bar";
        case NodeKind::OrdinaryInternal: return "int";
    }
    return "?";
}

void write_ann(const AnnotatedTree& w, NodeId v, std::string& out) {
    if (!w.children[v].empty()) {
        out += '(';
        bool first = true;
        for (NodeId c : w.children[v]) {
            if (!first) out += ',';
            first = false;
            write_ann(w, c, out);
        }
        out += ')';
    }
    out += w.label[v];
    out += '[';
    out += kind_code(w.kind[v]);
    const Annotations& a = w.ann[v];
    auto slot = [&](const char* name, int val) {
        if (val >= 0) {
            out += ' ';
            out += name;
            out += '=';
            out += std::to_string(val);
        }
    };
    slot("a1", a.alpha1);
    slot("a2", a.alpha2);
    slot("a+", a.alpha_plus);
    slot("b", a.beta);
    slot("b12", a.beta12);
    slot("b21", a.beta21);
    out += ']';
}

}  // namespace

std::string annotated_to_string(const AnnotatedTree& w) {
    std::string out;
    if (w.root == kNoNode) return "[];";
    write_ann(w, w.root, out);
    out += ';';
    return out;
}

}  // namespace agreetree
