#include "agreetree/matching.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <unordered_set>

namespace agreetree {

namespace {
constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
}

WeightedBipartiteGraph::WeightedBipartiteGraph(int nx_, int ny_, std::vector<Edge> edges_)
    : nx(nx_), ny(ny_), edges(std::move(edges_)) {
    if (nx < 0 || ny < 0) throw MatchingError("negative part size");
    std::unordered_set<long long> seen;
    seen.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        if (e.x < 0 || e.x >= nx || e.y < 0 || e.y >= ny)
            throw MatchingError("edge endpoint out of range");
        if (e.w <= 0) throw MatchingError("edge weight must be a positive integer");
        long long key = static_cast<long long>(e.x) * (ny + 1) + e.y;
        if (!seen.insert(key).second) throw MatchingError("parallel edge");
        max_weight = std::max(max_weight, e.w);
    }
}

namespace {

// Successive shortest augmenting paths with node potentials; stops when
// no augmenting path has positive gain.
Matching mwm_core(int nx, int ny, const std::vector<WeightedBipartiteGraph::Edge>& edges) {
    Matching m;
    m.xy.assign(nx, -1);
    m.yx.assign(ny, -1);
    m.weight = 0;
    if (edges.empty()) return m;

    std::vector<std::vector<int>> adjx(nx);  // edge ids per x
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) adjx[edges[i].x].push_back(i);

    std::vector<long long> px(nx, 0), py(ny, 0);
    for (const auto& e : edges) py[e.y] = std::min(py[e.y], -e.w);

    std::vector<long long> dx(nx), dy(ny);
    std::vector<int> prev_edge_y(ny);  // edge used to reach y
    std::vector<int> match_edge(ny, -1);

    using QE = std::pair<long long, int>;  // (dist, node) node: x in [0,nx), y in [nx,nx+ny)
    const int rounds = std::min(nx, ny);
    for (int round = 0; round < rounds; ++round) {
        std::fill(dx.begin(), dx.end(), kInf);
        std::fill(dy.begin(), dy.end(), kInf);
        std::fill(prev_edge_y.begin(), prev_edge_y.end(), -1);
        std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
        for (int x = 0; x < nx; ++x)
            if (m.xy[x] == -1 && !adjx[x].empty()) {
                dx[x] = 0;
                pq.push({0, x});
            }
        if (pq.empty()) break;
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (v < nx) {
                int x = v;
                if (d != dx[x]) continue;
                for (int ei : adjx[x]) {
                    const auto& e = edges[ei];
                    if (m.xy[x] == e.y) continue;  // matched edge is traversed y->x
                    long long rc = -e.w + px[x] - py[e.y];
                    // rc >= 0 by the potential invariant
                    if (d + rc < dy[e.y]) {
                        dy[e.y] = d + rc;
                        prev_edge_y[e.y] = ei;
                        pq.push({dy[e.y], nx + e.y});
                    }
                }
            } else {
                int y = v - nx;
                if (d != dy[y]) continue;
                int xi = m.yx[y];
                if (xi != -1) {
                    const auto& e = edges[match_edge[y]];
                    long long rc = e.w + py[y] - px[xi];
                    if (d + rc < dx[xi]) {
                        dx[xi] = d + rc;
                        pq.push({dx[xi], xi});
                    }
                }
            }
        }
        long long best = kInf;
        int target = -1;
        for (int y = 0; y < ny; ++y) {
            if (m.yx[y] != -1 || dy[y] >= kInf) continue;
            long long real_cost = dy[y] + py[y];
            if (target == -1 || real_cost < best) {
                best = real_cost;
                target = y;
            }
        }
        if (target == -1 || best >= 0) break;  // no positive-gain augmentation left
        long long cap = dy[target];
        for (int x = 0; x < nx; ++x)
            if (dx[x] < kInf) px[x] += std::min(dx[x], cap);
        for (int y = 0; y < ny; ++y)
            if (dy[y] < kInf) py[y] += std::min(dy[y], cap);
        // flip the alternating path ending at target
        int y = target;
        while (y != -1) {
            int ei = prev_edge_y[y];
            const auto& e = edges[ei];
            int prev_y = (m.xy[e.x] == -1) ? -1 : m.xy[e.x];
            m.xy[e.x] = y;
            m.yx[y] = e.x;
            match_edge[y] = ei;
            y = prev_y;
        }
        m.weight -= best;  // best is negative (the gain)
    }
    m.edge_ids.clear();
    for (int y = 0; y < ny; ++y)
        if (m.yx[y] != -1) m.edge_ids.push_back(match_edge[y]);
    // recompute weight from scratch as a consistency check
    long long w = 0;
    for (int ei : m.edge_ids) w += edges[ei].w;
    if (w != m.weight) throw MatchingError("internal: matching weight mismatch");
    return m;
}

}  // namespace

Matching max_weight_matching(const WeightedBipartiteGraph& g) {
    return mwm_core(g.nx, g.ny, g.edges);
}

long long mwm_value(int nx, int ny, const std::vector<WeightedBipartiteGraph::Edge>& edges) {
    return mwm_core(nx, ny, edges).weight;
}

CavityDigraph build_cavity_digraph(const WeightedBipartiteGraph& g, const Matching& m,
                                   Side side) {
    if (static_cast<int>(m.xy.size()) != g.nx || static_cast<int>(m.yx.size()) != g.ny)
        throw MatchingError("matching does not fit the graph");
    // verify m is a matching of g
    std::unordered_set<long long> present;
    present.reserve(g.edges.size() * 2);
    for (const auto& e : g.edges) present.insert(static_cast<long long>(e.x) * (g.ny + 1) + e.y);
    for (int x = 0; x < g.nx; ++x) {
        int y = m.xy[x];
        if (y == -1) continue;
        if (y < 0 || y >= g.ny || m.yx[y] != x ||
            !present.count(static_cast<long long>(x) * (g.ny + 1) + y))
            throw MatchingError("not a matching of the graph");
    }
    for (int y = 0; y < g.ny; ++y)
        if (m.yx[y] != -1 && m.xy[m.yx[y]] != y) throw MatchingError("not a matching of the graph");

    CavityDigraph d;
    const bool xs = side == Side::X;
    d.nx = g.nx;
    d.ny = g.ny;
    const int t = d.t();
    // "deleted side" nodes: X ids as-is; arcs mirror the section-2 bullets,
    // with the two sides swapped for Side::Y.
    if (xs) {
        for (int x = 0; x < g.nx; ++x)
            if (m.xy[x] == -1) d.arcs.push_back({x, t, 0});
        for (int y = 0; y < g.ny; ++y)
            if (m.yx[y] != -1) d.arcs.push_back({g.nx + y, t, 0});
        for (const auto& e : g.edges) {
            if (m.xy[e.x] == e.y)
                d.arcs.push_back({e.x, g.nx + e.y, -e.w});
            else
                d.arcs.push_back({g.nx + e.y, e.x, e.w});
        }
    } else {
        for (int y = 0; y < g.ny; ++y)
            if (m.yx[y] == -1) d.arcs.push_back({g.nx + y, t, 0});
        for (int x = 0; x < g.nx; ++x)
            if (m.xy[x] != -1) d.arcs.push_back({x, t, 0});
        for (const auto& e : g.edges) {
            if (m.xy[e.x] == e.y)
                d.arcs.push_back({g.nx + e.y, e.x, -e.w});
            else
                d.arcs.push_back({e.x, g.nx + e.y, e.w});
        }
    }
    return d;
}

LongestPathResult longest_path_weights(const CavityDigraph& d) {
    const int n = d.num_nodes();
    LongestPathResult res;
    res.weight.assign(n, -kInf);
    res.reachable.assign(n, 0);
    res.weight[d.t()] = 0;
    res.reachable[d.t()] = 1;
    // Bellman-Ford toward t: relax longest(u) = max(w + longest(v)).
    bool changed = true;
    for (int it = 0; it < n && changed; ++it) {
        changed = false;
        for (const auto& a : d.arcs) {
            if (!res.reachable[a.to]) continue;
            long long cand = a.w + res.weight[a.to];
            if (!res.reachable[a.from] || cand > res.weight[a.from]) {
                res.reachable[a.from] = 1;
                res.weight[a.from] = cand;
                changed = true;
            }
        }
    }
    if (changed) {
        // one more round: any improvement means a positive cycle
        for (const auto& a : d.arcs) {
            if (!res.reachable[a.to]) continue;
            if (a.w + res.weight[a.to] > res.weight[a.from])
                throw MatchingError(
                    "positive cycle in cavity digraph: matching was not optimal");
        }
    }
    return res;
}

CavityResult all_cavity(const WeightedBipartiteGraph& g) {
    Matching m = max_weight_matching(g);
    CavityResult r;
    r.mwm = m.weight;
    r.x_values.assign(g.nx, m.weight);
    r.y_values.assign(g.ny, m.weight);

    {
        CavityDigraph d = build_cavity_digraph(g, m, Side::X);
        LongestPathResult lp = longest_path_weights(d);
        for (int x = 0; x < g.nx; ++x)
            if (m.xy[x] != -1) {
                if (!lp.reachable[x])
                    throw MatchingError("internal: matched node cannot reach t");
                r.x_values[x] = m.weight + lp.weight[x];
            }
    }
    {
        CavityDigraph d = build_cavity_digraph(g, m, Side::Y);
        LongestPathResult lp = longest_path_weights(d);
        for (int y = 0; y < g.ny; ++y)
            if (m.yx[y] != -1) {
                if (!lp.reachable[g.nx + y])
                    throw MatchingError("internal: matched node cannot reach t");
                r.y_values[y] = m.weight + lp.weight[g.nx + y];
            }
    }
    return r;
}

WeightedBipartiteGraph read_edge_list(std::istream& in) {
    int nx, ny;
    long long mcount;
    if (!(in >> nx >> ny >> mcount)) throw MatchingError("edge list: bad header");
    std::vector<WeightedBipartiteGraph::Edge> edges;
    edges.reserve(static_cast<size_t>(mcount));
    for (long long i = 0; i < mcount; ++i) {
        int x, y;
        long long w;
        if (!(in >> x >> y >> w)) throw MatchingError("edge list: truncated");
        edges.push_back({x - 1, y - 1, w});
    }
    return WeightedBipartiteGraph(nx, ny, std::move(edges));
}

void write_edge_list(std::ostream& out, const WeightedBipartiteGraph& g) {
    out << g.nx << ' ' << g.ny << ' ' << g.edges.size() << '\n';
    for (const auto& e : g.edges) out << e.x + 1 << ' ' << e.y + 1 << ' ' << e.w << '\n';
}

void write_cavity_result(std::ostream& out, const CavityResult& r) {
    out << "mwm " << r.mwm << '\n';
    for (size_t i = 0; i < r.x_values.size(); ++i)
        out << "x " << i + 1 << ' ' << r.x_values[i] << '\n';
    for (size_t j = 0; j < r.y_values.size(); ++j)
        out << "y " << j + 1 << ' ' << r.y_values[j] << '\n';
}

}  // namespace agreetree
