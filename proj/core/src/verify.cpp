#include "agreetree/verify.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "agreetree/newick.hpp"
#include "agreetree/oracle.hpp"
#include "agreetree/range_query.hpp"
#include "agreetree/unrooted.hpp"

namespace agreetree::verify {

namespace {

using oracle::Rng;

using CaseFn = std::function<std::optional<std::string>(uint64_t, long long)>;

SuiteReport drive(const std::string& name, const SuiteParams& p, const CaseFn& fn) {
    SuiteReport rep;
    rep.suite = name;
    if (p.cases <= 0) return rep;
    std::atomic<long long> next{0};
    std::mutex mu;
    long long worst = -1;
    std::string message;
    auto worker = [&]() {
        while (true) {
            long long i = next.fetch_add(1);
            if (i >= p.cases) break;
            {
                std::lock_guard<std::mutex> lk(mu);
                if (worst != -1 && worst < i) break;  // earlier failure already found
            }
            std::optional<std::string> fail;
            try {
                fail = fn(mix_seed(p.seed, static_cast<uint64_t>(i)), i);
            } catch (const std::exception& e) {
                fail = std::string("exception: ") + e.what();
            }
            if (fail) {
                std::lock_guard<std::mutex> lk(mu);
                if (worst == -1 || i < worst) {
                    worst = i;
                    message = *fail;
                }
            }
        }
    };
    int nthreads = std::max(1, p.threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    rep.cases_run = p.cases;
    if (worst != -1) {
        rep.ok = false;
        rep.failed_case = worst;
        std::ostringstream os;
        os << "case " << worst << " (seed " << p.seed << ", derived "
           << mix_seed(p.seed, static_cast<uint64_t>(worst)) << "): " << message;
        rep.counterexample = os.str();
    }
    return rep;
}

std::vector<std::string> pick_labels(Rng& rng, std::vector<std::string> pool, size_t count) {
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min(count, pool.size()));
    return pool;
}

// random tree pair over a partially shared label pool
std::pair<EvolutionaryTree, EvolutionaryTree> random_unrooted_pair(Rng& rng, int max_nodes) {
    int leaves = 2 + static_cast<int>(rng() % std::max(1, max_nodes / 2 - 1));
    auto pool = oracle::label_pool(leaves + static_cast<int>(rng() % 4));
    size_t l1 = 2 + rng() % leaves, l2 = 2 + rng() % leaves;
    bool bounded = rng() & 1;
    EvolutionaryTree a = oracle::random_unrooted_tree(rng, pick_labels(rng, pool, l1), bounded);
    EvolutionaryTree b = oracle::random_unrooted_tree(rng, pick_labels(rng, pool, l2), bounded);
    return {std::move(a), std::move(b)};
}

std::optional<std::string> cavity_case(uint64_t seed, long long, int max_n) {
    Rng rng(seed);
    int half = std::max(1, max_n / 2);
    int nx = 1 + static_cast<int>(rng() % half);
    int ny = 1 + static_cast<int>(rng() % half);
    double p = 0.05 + 0.3 * (rng() % 100) / 100.0;
    long long maxw = 1 + rng() % 50;
    WeightedBipartiteGraph g = oracle::random_bipartite(rng, nx, ny, p, maxw);
    CavityResult fast = all_cavity(g);
    CavityResult naive = oracle::naive_all_cavity(g);
    auto describe = [&]() {
        std::ostringstream os;
        write_edge_list(os, g);
        return os.str();
    };
    if (fast.mwm != naive.mwm)
        return "mwm mismatch fast=" + std::to_string(fast.mwm) +
               " naive=" + std::to_string(naive.mwm) + "\n" + describe();
    for (int x = 0; x < nx; ++x)
        if (fast.x_values[x] != naive.x_values[x])
            return "cavity x" + std::to_string(x + 1) + " fast=" +
                   std::to_string(fast.x_values[x]) +
                   " naive=" + std::to_string(naive.x_values[x]) + "\n" + describe();
    for (int y = 0; y < ny; ++y)
        if (fast.y_values[y] != naive.y_values[y])
            return "cavity y" + std::to_string(y + 1) + " fast=" +
                   std::to_string(fast.y_values[y]) +
                   " naive=" + std::to_string(naive.y_values[y]) + "\n" + describe();
    if (nx + ny <= 12) {
        long long enumd = oracle::enumerate_mwm(g);
        if (enumd != fast.mwm)
            return "enumeration mwm mismatch: engine=" + std::to_string(fast.mwm) +
                   " enum=" + std::to_string(enumd) + "\n" + describe();
        for (int x = 0; x < nx; ++x) {
            long long e = oracle::enumerate_mwm(oracle::delete_node(g, Side::X, x));
            if (e != fast.x_values[x])
                return "enumeration cavity mismatch at x" + std::to_string(x + 1) + "\n" +
                       describe();
        }
    }
    if (nx + ny <= 8) {
        // alternating-path correspondence (the digraph simply rephrases G)
        Matching m = max_weight_matching(g);
        for (Side side : {Side::X, Side::Y}) {
            CavityDigraph d = build_cavity_digraph(g, m, side);
            LongestPathResult lp = longest_path_weights(d);
            int count = side == Side::X ? nx : ny;
            for (int i = 0; i < count; ++i) {
                bool matched = side == Side::X ? m.xy[i] != -1 : m.yx[i] != -1;
                int node = side == Side::X ? i : nx + i;
                if (!matched) {
                    if (lp.reachable[node] && lp.weight[node] > 0)
                        return "unmatched node with positive longest path\n" + describe();
                    continue;
                }
                long long alt = oracle::best_alternating_change(g, m, side, i);
                if (!lp.reachable[node] || lp.weight[node] != alt)
                    return "alternating-path correspondence failed at node " +
                           std::to_string(i + 1) + "\n" + describe();
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> rooted_case(uint64_t seed, long long) {
    Rng rng(seed);
    int pool_n = 3 + static_cast<int>(rng() % 10);  // shared labels <= 12
    auto pool = oracle::label_pool(pool_n);
    bool bounded = rng() & 1;
    EvolutionaryTree t1 =
        oracle::random_rooted_tree(rng, pick_labels(rng, pool, 2 + rng() % pool_n), bounded);
    EvolutionaryTree t2 =
        oracle::random_rooted_tree(rng, pick_labels(rng, pool, 2 + rng() % pool_n), bounded);
    auto r12 = mast_rooted(t1, t2);
    auto r21 = mast_rooted(t2, t1);
    int brute = oracle::brute_mast_rooted(t1, t2);
    auto describe = [&]() {
        return "t1=" + serialize_newick(t1) + " t2=" + serialize_newick(t2);
    };
    if (r12.size != brute)
        return "mast_rooted=" + std::to_string(r12.size) + " brute=" + std::to_string(brute) +
               " " + describe();
    if (r12.size != r21.size) return "symmetry violated " + describe();
    EvolutionaryTree wit = extract_agreement_subtree(r12.table, t1, t2);
    if (!oracle::agreement_valid(t1, t2, wit, r12.size))
        return "witness rejected by validator " + describe();
    return std::nullopt;
}

// pick a random rooted subtree of t below (not equal to) the root
NodeId random_proper_subtree(Rng& rng, const EvolutionaryTree& t) {
    std::vector<NodeId> cands;
    for (NodeId v = 0; v < t.size(); ++v)
        if (v != t.root) cands.push_back(v);
    return cands[rng() % cands.size()];
}

EvolutionaryTree join_trees(const EvolutionaryTree& a, const EvolutionaryTree& b) {
    // fresh root over copies of two rooted trees (the R+ construction)
    EvolutionaryTree out;
    NodeId r = out.add_node();
    auto copy = [&](const EvolutionaryTree& t) {
        if (t.size() == 0) return;
        std::vector<NodeId> map(t.size(), kNoNode);
        for (NodeId v : t.preorder_nodes()) {
            map[v] = out.add_node(t.label[v]);
            if (t.parent[v] != kNoNode)
                out.add_edge(map[t.parent[v]], map[v]);
            else
                out.add_edge(r, map[v]);
        }
    };
    copy(a);
    copy(b);
    out.set_root(r);
    out.finalize();
    return out;
}

EvolutionaryTree subtree_of(const EvolutionaryTree& t, NodeId r) {
    EvolutionaryTree out;
    std::vector<NodeId> map(t.size(), kNoNode);
    std::function<void(NodeId)> rec = [&](NodeId v) {
        map[v] = out.add_node(t.label[v]);
        if (v != r) out.add_edge(map[t.parent[v]], map[v]);
        for (NodeId c : t.children[v]) rec(c);
    };
    rec(r);
    out.set_root(map[r]);
    out.finalize();
    return out;
}

std::string kinds_canonical(const AnnotatedTree& w, NodeId v) {
    std::vector<std::string> parts;
    for (NodeId c : w.children[v]) parts.push_back(kinds_canonical(w, c));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (auto& p : parts) s += p;
    s += ")";
    s += std::to_string(static_cast<int>(w.kind[v]));
    if (!w.label[v].empty()) s += w.label[v];
    return s;
}

std::optional<std::string> compression_case(uint64_t seed, long long idx, int max_n) {
    Rng rng(seed);
    int cap = std::min(10, std::max(2, max_n / 2 - 1));
    int pool_n = 2 + static_cast<int>(rng() % cap);
    auto pool = oracle::label_pool(pool_n);
    bool bounded = rng() & 1;
    EvolutionaryTree t1 =
        oracle::random_rooted_tree(rng, pick_labels(rng, pool, 2 + rng() % pool_n), bounded);
    EvolutionaryTree t2 =
        oracle::random_rooted_tree(rng, pick_labels(rng, pool, 2 + rng() % pool_n), bounded);
    if (t2.size() < 2) return std::nullopt;
    int plain = mast_rooted(t1, t2).size;

    const bool two = rng() & 1;
    std::vector<NodeId> roots;
    NodeId ra = random_proper_subtree(rng, t2);
    roots.push_back(ra);
    if (two) {
        // a disjoint second subtree if one exists
        std::set<NodeId> inside;
        std::function<void(NodeId)> mark = [&](NodeId v) {
            inside.insert(v);
            for (NodeId c : t2.children[v]) mark(c);
        };
        mark(ra);
        for (NodeId v = ra; v != kNoNode; v = t2.parent[v]) inside.insert(v);
        std::vector<NodeId> cands;
        for (NodeId v = 0; v < t2.size(); ++v)
            if (v != t2.root && !inside.count(v)) cands.push_back(v);
        if (!cands.empty()) roots.push_back(cands[rng() % cands.size()]);
    }
    ShrunkTree x2 = shrink(t2, roots);
    EvolutionaryTree r1tree = subtree_of(t2, roots[0]);
    EvolutionaryTree r2tree;
    if (roots.size() == 2) r2tree = subtree_of(t2, roots[1]);

    AnnotatedTree w1;
    if (roots.size() == 1) {
        MastTable tr = mast_rooted(t1, r1tree).table;
        w1 = compress_one(t1, r1tree, [&](NodeId v) { return tr.at(v, tr.root2); });
    } else {
        MastTable ta = mast_rooted(t1, r1tree).table;
        MastTable tb = mast_rooted(t1, r2tree).table;
        EvolutionaryTree rplus = join_trees(r1tree, r2tree);
        MastTable tp = mast_rooted(t1, rplus).table;
        AnnotationOracle o;
        o.vs_r1 = [&](NodeId v) { return ta.at(v, ta.root2); };
        o.vs_r2 = [&](NodeId v) { return tb.at(v, tb.root2); };
        o.vs_rplus = [&](NodeId v) { return tp.at(v, tp.root2); };
        w1 = compress_two(t1, r1tree, r2tree, o);
    }
    AnnotatedTree w2view = shrunk_view(x2, x2.skeleton.root);
    int compressed = mast_annotated(w1, w2view).size();
    if (compressed != plain)
        return "compression changed mast: plain=" + std::to_string(plain) +
               " compressed=" + std::to_string(compressed) + " t1=" + serialize_newick(t1) +
               " t2=" + serialize_newick(t2) + " w1=" + annotated_to_string(w1);

    // topology rebuild agrees with compressing the original (section 5.2)
    if (idx % 4 == 0) {
        std::set<std::string> keep;
        for (const auto& lab : t1.leaf_labels())
            if (rng() & 1) keep.insert(lab);
        bool has = false;
        for (const auto& lab : t1.leaf_labels())
            if (keep.count(lab)) has = true;
        if (has) {
            AnnotatedTree direct = compress_against(plain_annotated(t1), keep, 2);
            AnnotatedTree via_w = rebuild_subproblem_topology(w1, keep, 2);
            if (kinds_canonical(direct, direct.root) != kinds_canonical(via_w, via_w.root))
                return "rebuilt topology differs from direct compression t1=" +
                       serialize_newick(t1) + " w1=" + annotated_to_string(w1);
        }
    }
    return std::nullopt;
}

std::optional<std::string> rangequery_case(uint64_t seed, long long) {
    Rng rng(seed);
    // random rooted tree shape for preorder structure
    int h = 2 + static_cast<int>(rng() % 99);
    int b = 1 + static_cast<int>(rng() % 50);
    auto pool = oracle::label_pool(std::max(2, h / 2));
    EvolutionaryTree shape = oracle::random_rooted_tree(rng, pool, false);
    PreorderIndex pre = preorder_index(shape);
    h = shape.size();

    std::vector<SparseArray> arrays(h, SparseArray(b, 0));
    std::vector<std::vector<long long>> dense(h, std::vector<long long>(b, 0));
    for (int k = 0; k < h; ++k) {
        long long def = rng() % 20;
        arrays[k].init(def);
        std::fill(dense[k].begin(), dense[k].end(), def);
        int overrides = static_cast<int>(rng() % std::min(b, 8));
        if (rng() % 7 == 0) overrides = b;  // adversarial full row
        for (int t = 0; t < overrides; ++t) {
            int i = static_cast<int>(rng() % b);
            long long val = rng() % 25;
            arrays[k].write(i, val);
            dense[k][i] = val;
        }
        // sparse-array semantics
        auto distinct = arrays[k].distinct_values();
        std::set<long long> expect(dense[k].begin(), dense[k].end());
        expect.insert(def);  // default is always reported
        for (long long v : distinct)
            if (!expect.count(v)) return "sparse array reports a value never stored";
    }
    // arrays are addressed by preorder number: arrays[k] belongs to number k+1
    std::vector<const SparseArray*> ptrs(h);
    for (int k = 0; k < h; ++k) ptrs[k] = &arrays[k];
    for (int k = 0; k < h; ++k) arrays[k].reset_read_count();
    SubtreeMaxIndex idx = build_subtree_index(ptrs, pre);
    long long reads = 0, m_total = 0;
    for (int k = 0; k < h; ++k) {
        reads += arrays[k].read_count();
        m_total += static_cast<long long>(arrays[k].touched().size()) + 1;
    }
    if (reads > 4 * m_total)
        return "subtree index build touched too many cells: " + std::to_string(reads) +
               " for m=" + std::to_string(m_total);
    for (NodeId v = 0; v < h; ++v) {
        int p = pre.number[v];
        for (int i = 0; i < b; ++i) {
            long long got = idx.query_subtree_max(v, i);
            long long want = kNegInf;
            for (int z = p; z <= p + pre.desc_count[v]; ++z)
                want = std::max(want, dense[z - 1][i]);
            if (got != want)
                return "subtree max mismatch at v=" + std::to_string(v) +
                       " i=" + std::to_string(i) + " got=" + std::to_string(got) +
                       " want=" + std::to_string(want);
        }
    }
    // attachment index vs direct scans
    std::vector<long long> score(h);
    for (int k = 0; k < h; ++k) score[k] = rng() % 100;
    AttachmentIndex aidx = build_attachment_index(shape, score);
    for (NodeId u = 0; u < h; ++u) {
        const auto& ch = shape.children[u];
        if (ch.empty()) continue;
        int a = 1 + static_cast<int>(rng() % ch.size());
        int bb = 1 + static_cast<int>(rng() % ch.size());
        if (a > bb) std::swap(a, bb);
        long long want = kNegInf;
        for (int t = a; t <= bb; ++t) want = std::max(want, score[ch[t - 1]]);
        if (aidx.interval_query(u, a, bb) != want) return "attachment interval query mismatch";
    }
    return std::nullopt;
}

std::optional<std::string> unrooted_case(uint64_t seed, long long, int max_n) {
    Rng rng(seed);
    auto [a, b] = random_unrooted_pair(rng, max_n);
    UnrootedOptions opt;
    opt.mode = AuxMode::Paranoid;
    int fast = mast_unrooted(a, b, opt);
    int naive = oracle::naive_mast_unrooted(a, b);
    if (fast != naive)
        return "mast_unrooted=" + std::to_string(fast) + " naive=" + std::to_string(naive) +
               " u1=" + serialize_newick(a) + " u2=" + serialize_newick(b);
    return std::nullopt;
}

std::optional<std::string> mixed_case(uint64_t seed, long long, int max_n) {
    Rng rng(seed);
    int leaves = 2 + static_cast<int>(rng() % std::max(2, max_n / 3));
    auto pool = oracle::label_pool(leaves + 2);
    double p = (rng() % 100) / 150.0;
    EvolutionaryTree a =
        oracle::random_mixed_tree(rng, pick_labels(rng, pool, 2 + rng() % leaves), p);
    EvolutionaryTree b =
        oracle::random_mixed_tree(rng, pick_labels(rng, pool, 2 + rng() % leaves), p);
    UnrootedOptions opt;
    opt.mode = AuxMode::Paranoid;
    int fast = mast_mixed(a, b, opt);
    int naive = oracle::naive_mast_mixed(a, b);
    if (fast != naive)
        return "mast_mixed=" + std::to_string(fast) + " naive=" + std::to_string(naive) +
               " m1=" + serialize_newick(a) + " m2=" + serialize_newick(b);
    return std::nullopt;
}

}  // namespace

uint64_t mix_seed(uint64_t seed, uint64_t index) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<std::string> suite_names() {
    return {"cavity", "rooted", "unrooted", "compression", "rangequery", "mixed"};
}

bool is_suite(const std::string& name) {
    auto names = suite_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

SuiteReport run_suite(const std::string& name, const SuiteParams& params) {
    const int mn = params.max_n;
    if (name == "cavity")
        return drive(name, params,
                     [mn](uint64_t s, long long i) { return cavity_case(s, i, mn); });
    if (name == "rooted") return drive(name, params, rooted_case);
    if (name == "unrooted")
        return drive(name, params,
                     [mn](uint64_t s, long long i) { return unrooted_case(s, i, mn); });
    if (name == "compression") return drive(name, params, compression_case);
    if (name == "rangequery") return drive(name, params, rangequery_case);
    if (name == "mixed")
        return drive(name, params,
                     [mn](uint64_t s, long long i) { return mixed_case(s, i, mn); });
    throw std::runtime_error("unknown suite: " + name);
}

}  // namespace agreetree::verify
