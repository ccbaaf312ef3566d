#pragma once

#include "agreetree/tree.hpp"

namespace agreetree {

struct NewickError : TreeError {
    size_t position;
    NewickError(const std::string& msg, size_t pos)
        : TreeError(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

// Grammar: tree := subtree ';'   subtree := leaf | '(' subtree (',' subtree)* ')' [name]
// A child may be prefixed '>' (edge directed away from the parent group) or
// '<' (directed toward it).  Whitespace is insignificant.  Names on nodes
// that end up internal are discarded; a name on a degree<=1 group node is a
// leaf label.  The outermost grouping is an unrooted star joint.
EvolutionaryTree parse_newick(const std::string& text);

// Same grammar with the outermost grouping taken as the root.  Direction
// annotations are rejected.
EvolutionaryTree parse_newick_rooted(const std::string& text);

std::string serialize_newick(const EvolutionaryTree& tree);

}  // namespace agreetree
