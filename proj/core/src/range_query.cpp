#include "agreetree/range_query.hpp"

#include <algorithm>

namespace agreetree {

std::vector<long long> SparseArray::distinct_values() const {
    std::vector<long long> out{def_};
    for (int i : touched_) {
        ++reads_;
        if (val_[i] != def_) out.push_back(val_[i]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

StaticRangeMax::StaticRangeMax(std::vector<long long> seq) : seq_(std::move(seq)) {
    const int n = size();
    log2_.assign(n + 1, 0);
    for (int i = 2; i <= n; ++i) log2_[i] = log2_[i / 2] + 1;
    table_.push_back(seq_);
    for (int k = 1; (1 << k) <= n; ++k) {
        const auto& prev = table_[k - 1];
        std::vector<long long> row(n - (1 << k) + 1);
        for (int i = 0; i + (1 << k) <= n; ++i)
            row[i] = std::max(prev[i], prev[i + (1 << (k - 1))]);
        table_.push_back(std::move(row));
    }
}

long long StaticRangeMax::query(int x, int y) const {
    if (x < 1 || y > size() || x > y) throw RangeError("range_max query out of range");
    int k = log2_[y - x + 1];
    return std::max(table_[k][x - 1], table_[k][y - (1 << k)]);
}

StaticRangeMax range_max(std::vector<long long> seq) {
    if (seq.empty()) throw RangeError("range_max: empty sequence");
    return StaticRangeMax(std::move(seq));
}

SubtreeMaxIndex::SubtreeMaxIndex(const std::vector<const SparseArray*>& arrays,
                                 const PreorderIndex& pre)
    : pre_(&pre) {
    h_ = static_cast<int>(arrays.size());
    if (h_ == 0) throw RangeError("build_subtree_index: no arrays");
    b_ = arrays[0]->dimension();
    for (const auto* a : arrays)
        if (a->dimension() != b_) throw RangeError("build_subtree_index: dimension mismatch");

    defaults_.resize(h_);
    for (int k = 0; k < h_; ++k) defaults_[k] = arrays[k]->default_value();
    default_rmq_ = StaticRangeMax(defaults_);

    // Step 1: per column, the ascending list of rows that override it.
    // Scanning rows in preorder keeps each gamma list sorted for free.
    col_of_.assign(b_, -1);
    std::vector<std::vector<std::pair<int, long long>>> entries;  // per column
    for (int k = 0; k < h_; ++k) {
        const SparseArray* a = arrays[k];
        std::vector<int> idx(a->touched().begin(), a->touched().end());
        std::sort(idx.begin(), idx.end());
        for (int i : idx) {
            long long v = a->read(i);
            if (v == defaults_[k]) continue;  // written but equal: not in gamma
            if (col_of_[i] == -1) {
                col_of_[i] = static_cast<int>(entries.size());
                entries.emplace_back();
            }
            entries[col_of_[i]].push_back({k + 1, v});
        }
    }
    // Step 3: interleaved sequences A_{x1}, beta_1, ..., A_{xd} per column.
    cols_.resize(entries.size());
    for (size_t c = 0; c < entries.size(); ++c) {
        auto& col = cols_[c];
        const auto& es = entries[c];
        std::vector<long long> inter;
        inter.reserve(es.size() * 2 - 1);
        for (size_t t = 0; t < es.size(); ++t) {
            if (t > 0) {
                int lo = es[t - 1].first + 1, hi = es[t].first - 1;
                inter.push_back(lo <= hi ? default_rmq_.query(lo, hi) : kNegInf);
            }
            col.gamma.push_back(es[t].first);
            inter.push_back(es[t].second);
        }
        col.inter = StaticRangeMax(std::move(inter));
    }
}

long long SubtreeMaxIndex::query_interval_max(int p, int q, int i) const {
    if (p < 1 || q > h_ || p > q) throw RangeError("subtree index: bad interval");
    if (i < 0 || i >= b_) throw RangeError("subtree index: bad column");
    int c = col_of_[i];
    if (c == -1) return default_rmq_.query(p, q);
    const Column& col = cols_[c];
    // positions of gamma members inside [p, q]
    auto lo = std::lower_bound(col.gamma.begin(), col.gamma.end(), p);
    auto hi = std::upper_bound(col.gamma.begin(), col.gamma.end(), q);
    if (lo == hi) return default_rmq_.query(p, q);
    int s = static_cast<int>(lo - col.gamma.begin());
    int t = static_cast<int>(hi - col.gamma.begin()) - 1;
    long long best = kNegInf;
    if (p <= col.gamma[s] - 1) best = std::max(best, default_rmq_.query(p, col.gamma[s] - 1));
    if (col.gamma[t] + 1 <= q) best = std::max(best, default_rmq_.query(col.gamma[t] + 1, q));
    // interleaved positions: A_{x_k} sits at 2k+1 (1-based)
    best = std::max(best, col.inter.query(2 * s + 1, 2 * t + 1));
    return best;
}

long long SubtreeMaxIndex::query_subtree_max(NodeId v, int i) const {
    int p = pre_->number[v];
    return query_interval_max(p, p + pre_->desc_count[v], i);
}

SubtreeMaxIndex build_subtree_index(const std::vector<const SparseArray*>& arrays,
                                    const PreorderIndex& pre) {
    return SubtreeMaxIndex(arrays, pre);
}

AttachmentIndex::AttachmentIndex(const EvolutionaryTree& rooted,
                                 const std::vector<long long>& score)
    : tree_(&rooted), score_(score) {
    if (!rooted.rooted()) throw RangeError("attachment index: tree must be rooted");
    const int n = rooted.size();
    if (static_cast<int>(score.size()) != n)
        throw RangeError("attachment index: score size mismatch");
    per_node_.resize(n);
    child_pos_.assign(n, 0);
    for (NodeId u = 0; u < n; ++u) {
        const auto& ch = rooted.children[u];
        if (ch.empty()) continue;
        std::vector<long long> row(ch.size());
        for (size_t k = 0; k < ch.size(); ++k) {
            row[k] = score[ch[k]];
            child_pos_[ch[k]] = static_cast<int>(k) + 1;
        }
        per_node_[u] = StaticRangeMax(std::move(row));
    }
}

long long AttachmentIndex::interval_query(NodeId u, int a, int b) const {
    const auto& ch = tree_->children[u];
    if (a > b) return kNegInf;
    if (a < 1 || b > static_cast<int>(ch.size()))
        throw RangeError("attachment index: invalid interval");
    return per_node_[u].query(a, b);
}

long long AttachmentIndex::path_query(const std::vector<NodeId>& path) const {
    long long best = kNegInf;
    for (NodeId u : path) {
        int deg = static_cast<int>(tree_->children[u].size());
        if (deg > 0) best = std::max(best, per_node_[u].query(1, deg));
    }
    return best;
}

long long AttachmentIndex::all_but_child(NodeId u, NodeId excluded) const {
    int deg = static_cast<int>(tree_->children[u].size());
    if (deg == 0) return kNegInf;
    if (excluded == kNoNode) return per_node_[u].query(1, deg);
    int pos = child_pos_[excluded];
    long long best = kNegInf;
    if (pos > 1) best = std::max(best, per_node_[u].query(1, pos - 1));
    if (pos < deg) best = std::max(best, per_node_[u].query(pos + 1, deg));
    return best;
}

AttachmentIndex build_attachment_index(const EvolutionaryTree& rooted,
                                       const std::vector<long long>& score) {
    return AttachmentIndex(rooted, score);
}

}  // namespace agreetree
