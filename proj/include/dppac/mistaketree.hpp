#pragma once
// Mistake trees over a concept class: validation of the branching side
// condition, exact Littlestone dimension with a witness tree, collision-free
// integer halfspace representations, the inductive halfspace tree, and the
// embedding that turns a complete tree into an augmented-index instance.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dppac/concepts.hpp"

namespace dppac {

struct MistakeTree {
    struct Node {
        bool leaf = false;
        std::size_t point = 0;        // internal: domain point index
        std::size_t concept_idx = 0;  // leaf: concept index
        std::int32_t left = -1, right = -1;
    };
    std::vector<Node> nodes;  // preorder arena; node 0 is the root

    static MistakeTree make_leaf(std::size_t concept_idx);
    static MistakeTree make_node(std::size_t point, const MistakeTree& l, const MistakeTree& r);

    std::size_t depth() const;
    bool complete() const;  // every leaf at equal depth, every internal binary
};

struct TreeCheck {
    bool valid = false;
    // (internal node arena index, leaf arena index) of the first violating
    // pair in preorder (left subtree scanned before right at each node).
    std::optional<std::pair<std::size_t, std::size_t>> first_violation;
};

// Checks: leaf concept evaluates to 1 at an ancestor's point iff the leaf
// lies in that ancestor's right subtree.
TreeCheck validate_tree(const MistakeTree& t, const ConceptClass& c);

struct LdimResult {
    std::size_t dim = 0;
    MistakeTree witness;  // complete, validate_tree-passing, depth == dim
};

LdimResult ldim(const ConceptClass& c);

struct IntHalfspace {
    std::vector<std::int64_t> w;
    std::int64_t theta = 0;
};

// Rewrites an integer halfspace over I_b^d so the truth table is unchanged
// and all dot products w.x over the grid are pairwise distinct.
IntHalfspace collision_free_halfspace(const std::vector<std::int64_t>& w_in,
                                      std::int64_t theta_in, std::int64_t b);

struct HalfspaceTree {
    MistakeTree tree;
    ConceptClass cls;  // the enumerated halfspace class the tree labels into
};

// Complete mistake tree over halfspaces on I_b^d of depth (d(d-1)/2+1)*b;
// dimension 1 is a balanced search tree over the 2^b up-thresholds.
HalfspaceTree build_halfspace_tree(std::int64_t d, std::int64_t b);

struct AugIndexEmbedding {
    std::size_t depth = 0;
    // concept_map[x]: x read as depth bits, first branching bit most
    // significant; value is a concept index.
    std::vector<std::size_t> concept_map;
    // point_map in heap order: the length-L prefix p (as an L-bit integer)
    // sits at offset (2^L - 1) + p; value is a domain point index.
    std::vector<std::size_t> point_map;
};

// For every x and position i, the concept at x evaluated on the point of
// x's length-(i-1) prefix equals bit i of x; verified before returning.
AugIndexEmbedding augindex_embedding(const MistakeTree& t, const ConceptClass& c);

nlohmann::ordered_json mistake_tree_to_json(const MistakeTree& t);
MistakeTree mistake_tree_from_json(const nlohmann::ordered_json& j);

}  // namespace dppac
