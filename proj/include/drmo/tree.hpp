#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "drmo/measure.hpp"

namespace drmo {

/// Staged scenario tree. Node 0 is the root at stage 1; every leaf sits at
/// the last stage. Leaves are ordered depth-first, children in the listed
/// order, and leaf k is scenario k.
class ScenarioTree {
public:
    struct Node {
        Index parent;  // root is its own parent
        std::size_t stage;  // 1-based
        std::vector<Index> children;
        std::string label;
    };

    /// parents[v] is the parent of node v; parents[0] must be 0 (the root).
    /// Nodes must be listed so that every parent precedes its children.
    explicit ScenarioTree(std::span<const Index> parents, std::vector<std::string> labels = {});

    /// Full tree with branching[k] children per node at stage k+1; nodes are
    /// numbered breadth-first, so leaves appear in lexicographic order.
    static ScenarioTree product(std::span<const std::size_t> branching);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t depth() const noexcept { return depth_; }
    const Node& node(Index v) const { return nodes_[v]; }
    bool is_leaf(Index v) const { return nodes_[v].children.empty(); }
    const std::vector<Index>& leaves() const noexcept { return leaves_; }
    std::size_t leaf_count() const noexcept { return leaves_.size(); }
    /// Node at the given stage on the path from the root to `v`.
    Index ancestor(Index v, std::size_t stage) const;
    /// Leaf positions (scenario indices) below node v.
    std::vector<Index> scenarios_below(Index v) const;

private:
    std::vector<Node> nodes_;
    std::vector<Index> leaves_;
    std::vector<Index> leaf_position_;
    std::size_t depth_ = 1;
};

/// Filtration on the leaves: stage t groups scenarios by their stage-t ancestor.
Filtration tree_filtration(const ScenarioTree& tree);

}  // namespace drmo
