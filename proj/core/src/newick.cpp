#include "agreetree/newick.hpp"

#include <cctype>
#include <functional>

namespace agreetree {

namespace {

// Edge direction request from a '>'/'<' prefix: 0 none, 1 away from
// parent (parent->child only), 2 toward parent.
struct Parser {
    const std::string& s;
    size_t pos = 0;
    EvolutionaryTree tree;
    bool saw_direction = false;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    void expect(char c) {
        if (peek() != c) throw NewickError(std::string("expected '") + c + "'", pos);
        ++pos;
    }

    std::string parse_name() {
        skip_ws();
        if (pos < s.size() && s[pos] == '\'') {
            ++pos;
            std::string out;
            while (pos < s.size() && s[pos] != '\'') out += s[pos++];
            if (pos >= s.size()) throw NewickError("unterminated quoted name", pos);
            ++pos;
            return out;
        }
        std::string out;
        while (pos < s.size()) {
            char c = s[pos];
            if (c == '(' || c == ')' || c == ',' || c == ';' || c == '>' || c == '<' ||
                std::isspace(static_cast<unsigned char>(c)))
                break;
            out += c;
            ++pos;
        }
        return out;
    }

    // Returns (node id, direction request of the edge to the parent).
    std::pair<NodeId, int> parse_subtree() {
        int dir = 0;
        char c = peek();
        if (c == '>' || c == '<') {
            dir = (c == '>') ? 1 : 2;
            saw_direction = true;
            ++pos;
            c = peek();
        }
        if (c == '(') {
            ++pos;
            std::vector<std::pair<NodeId, int>> kids;
            kids.push_back(parse_subtree());
            while (peek() == ',') {
                ++pos;
                kids.push_back(parse_subtree());
            }
            expect(')');
            std::string name = parse_name();
            NodeId v = tree.add_node(name);
            for (auto& [k, kdir] : kids) {
                bool down = kdir != 2;  // v -> child passable
                bool up = kdir != 1;    // child -> v passable
                tree.add_edge(v, k, down, up);
            }
            return {v, dir};
        }
        std::string name = parse_name();
        if (name.empty()) throw NewickError("leaf name expected", pos);
        return {tree.add_node(name), dir};
    }

    NodeId parse_tree() {
        auto [v, dir] = parse_subtree();
        if (dir != 0) throw NewickError("direction mark on the outermost group", pos);
        expect(';');
        skip_ws();
        if (pos != s.size()) throw NewickError("trailing characters after ';'", pos);
        return v;
    }
};

}  // namespace

EvolutionaryTree parse_newick(const std::string& text) {
    Parser p(text);
    NodeId top = p.parse_tree();
    EvolutionaryTree t = std::move(p.tree);
    // Discard names on internal nodes.
    for (NodeId v = 0; v < t.size(); ++v)
        if (!t.is_leaf(v)) t.label[v].clear();
    (void)top;
    t.finalize();
    return t;
}

EvolutionaryTree parse_newick_rooted(const std::string& text) {
    Parser p(text);
    NodeId top = p.parse_tree();
    if (p.saw_direction)
        throw NewickError("direction annotation on a rooted parse", 0);
    EvolutionaryTree t = std::move(p.tree);
    t.set_root(top);
    // The root keeps its name only while it is a leaf (degree <= 1).
    for (NodeId v = 0; v < t.size(); ++v)
        if (!t.is_leaf(v)) t.label[v].clear();
    t.finalize();
    return t;
}

namespace {

void write_subtree(const EvolutionaryTree& t, NodeId v, NodeId from, std::string& out) {
    std::vector<const HalfEdge*> kids;
    for (const auto& h : t.adj[v])
        if (h.to != from) kids.push_back(&h);
    if (kids.empty()) {
        out += t.label[v];
        return;
    }
    out += '(';
    bool first = true;
    for (const auto* h : kids) {
        if (!first) out += ',';
        first = false;
        bool down = h->passable;
        bool up = true;
        for (const auto& hb : t.adj[h->to])
            if (hb.to == v) { up = hb.passable; break; }
        if (down && !up) out += '>';
        if (!down && up) out += '<';
        write_subtree(t, h->to, v, out);
    }
    out += ')';
    if (t.is_leaf(v)) out += t.label[v];
}

}  // namespace

std::string serialize_newick(const EvolutionaryTree& tree) {
    if (tree.size() == 0) throw TreeError("serialize_newick: empty tree");
    NodeId start = tree.rooted() ? tree.root : kNoNode;
    if (start == kNoNode) {
        for (NodeId v = 0; v < tree.size() && start == kNoNode; ++v)
            if (tree.degree(v) >= 2) start = v;
        if (start == kNoNode) start = 0;  // 1- or 2-node tree
    }
    std::string out;
    write_subtree(tree, start, kNoNode, out);
    out += ';';
    return out;
}

}  // namespace agreetree
