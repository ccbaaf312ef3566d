#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "agreetree/tree.hpp"

namespace agreetree {

struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr long long kNegInf = std::numeric_limits<long long>::min() / 4;

// Array with O(1) whole-array initialization via generation stamps.
// Reads are counted so tests can assert how many cells a build touches.
class SparseArray {
public:
    SparseArray() = default;
    SparseArray(int dimension, long long default_value)
        : dim_(dimension), def_(default_value), stamp_(dimension, 0), val_(dimension, 0) {}

    void init(long long default_value) {
        def_ = default_value;
        ++gen_;
        touched_.clear();
    }
    int dimension() const { return dim_; }
    long long default_value() const { return def_; }

    long long read(int i) const {
        check(i);
        ++reads_;
        return stamp_[i] == gen_ ? val_[i] : def_;
    }
    void write(int i, long long v) {
        check(i);
        if (stamp_[i] != gen_) {
            stamp_[i] = gen_;
            touched_.push_back(i);
        }
        val_[i] = v;
    }
    // Indices written since the last init, ascending order not guaranteed.
    const std::vector<int>& touched() const { return touched_; }
    // Distinct stored values: overrides plus the default.
    std::vector<long long> distinct_values() const;

    long long read_count() const { return reads_; }
    void reset_read_count() { reads_ = 0; }

private:
    void check(int i) const {
        if (i < 0 || i >= dim_) throw RangeError("sparse array index out of range");
    }
    int dim_ = 0;
    long long def_ = 0;
    uint64_t gen_ = 1;
    std::vector<uint64_t> stamp_;
    std::vector<long long> val_;
    std::vector<int> touched_;
    mutable long long reads_ = 0;
};

// Static range maximum over a fixed sequence: doubling table, O(1) query.
class StaticRangeMax {
public:
    StaticRangeMax() = default;
    explicit StaticRangeMax(std::vector<long long> seq);
    int size() const { return static_cast<int>(seq_.size()); }
    // 1-based inclusive bounds, 1 <= x <= y <= size().
    long long query(int x, int y) const;

private:
    std::vector<long long> seq_;
    std::vector<std::vector<long long>> table_;
    std::vector<int> log2_;
};

StaticRangeMax range_max(std::vector<long long> seq);

// max { A_z[i] | z in subtree of v } queries over sparse per-node arrays,
// using preorder intervals.  Build touches only the overridden cells plus
// one default per node.
class SubtreeMaxIndex {
public:
    // arrays[k] belongs to the node with preorder number k+1 (h arrays).
    SubtreeMaxIndex(const std::vector<const SparseArray*>& arrays, const PreorderIndex& pre);

    // Exact max of A_z[i] over z in the subtree of v (node id).
    long long query_subtree_max(NodeId v, int i) const;
    long long query_interval_max(int p, int q, int i) const;  // preorder interval
    int columns() const { return b_; }

private:
    struct Column {
        std::vector<int> gamma;  // preorder numbers with A[.] != default, ascending
        StaticRangeMax inter;    // A_{x1}, beta_1, A_{x2}, ..., A_{xd}
    };
    int h_ = 0, b_ = 0;
    std::vector<long long> defaults_;  // c_1..c_h by preorder number
    StaticRangeMax default_rmq_;
    std::vector<Column> cols_;         // only for columns with overrides
    std::vector<int> col_of_;          // i -> index into cols_ or -1
    const PreorderIndex* pre_ = nullptr;
};

SubtreeMaxIndex build_subtree_index(const std::vector<const SparseArray*>& arrays,
                                    const PreorderIndex& pre);

// Subtree-attachment score queries (Lemma 6.1 style): per node, the scores
// of its attached subtrees are indexed by child number 1..deg.
class AttachmentIndex {
public:
    AttachmentIndex(const EvolutionaryTree& rooted, const std::vector<long long>& score);

    // max score of subtrees attached to u with child number in [a,b]; an
    // empty or reversed interval yields kNegInf.
    long long interval_query(NodeId u, int a, int b) const;
    // max score over all subtrees attached to any node of the path.
    long long path_query(const std::vector<NodeId>& path) const;
    // max over u's children excluding one child id (kNoNode = none).
    long long all_but_child(NodeId u, NodeId excluded) const;

private:
    const EvolutionaryTree* tree_;
    std::vector<long long> score_;
    std::vector<StaticRangeMax> per_node_;
    std::vector<int> child_pos_;  // node -> its 1-based number under its parent
};

AttachmentIndex build_attachment_index(const EvolutionaryTree& rooted,
                                       const std::vector<long long>& score);

}  // namespace agreetree
