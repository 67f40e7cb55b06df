#include "drmo/tree.hpp"

#include <functional>

#include "drmo/error.hpp"

namespace drmo {

ScenarioTree::ScenarioTree(std::span<const Index> parents, std::vector<std::string> labels) {
    if (parents.empty()) throw ValidationError("scenario tree needs a root");
    if (parents[0] != 0) throw ValidationError("node 0 must be the root (its own parent)");
    if (!labels.empty() && labels.size() != parents.size())
        throw ValidationError("scenario tree label count must match the node count");

    nodes_.resize(parents.size());
    nodes_[0] = Node{0, 1, {}, labels.empty() ? std::string{} : labels[0]};
    for (Index v = 1; v < parents.size(); ++v) {
        const Index p = parents[v];
        if (p >= v) throw ValidationError("node " + std::to_string(v) + " must come after its parent");
        nodes_[v] = Node{p, nodes_[p].stage + 1, {}, labels.empty() ? std::string{} : labels[v]};
        nodes_[p].children.push_back(v);
    }

    // Depth-first leaf order.
    std::function<void(Index)> visit = [&](Index v) {
        if (nodes_[v].children.empty()) {
            leaves_.push_back(v);
            return;
        }
        for (Index c : nodes_[v].children) visit(c);
    };
    visit(0);

    depth_ = nodes_[leaves_.front()].stage;
    for (Index leaf : leaves_)
        if (nodes_[leaf].stage != depth_)
            throw ValidationError("all leaves of a scenario tree must sit at the last stage");

    leaf_position_.assign(nodes_.size(), nodes_.size());
    for (Index k = 0; k < leaves_.size(); ++k) leaf_position_[leaves_[k]] = k;
}

ScenarioTree ScenarioTree::product(std::span<const std::size_t> branching) {
    std::vector<Index> parents{0};
    std::vector<Index> frontier{0};
    for (std::size_t b : branching) {
        if (b == 0) throw ValidationError("branching factors must be positive");
        std::vector<Index> next;
        for (Index p : frontier)
            for (std::size_t c = 0; c < b; ++c) {
                next.push_back(parents.size());
                parents.push_back(p);
            }
        frontier = std::move(next);
    }
    return ScenarioTree(parents);
}

Index ScenarioTree::ancestor(Index v, std::size_t stage) const {
    if (stage == 0 || stage > nodes_[v].stage) throw ValidationError("ancestor stage out of range");
    while (nodes_[v].stage > stage) v = nodes_[v].parent;
    return v;
}

std::vector<Index> ScenarioTree::scenarios_below(Index v) const {
    std::vector<Index> out;
    std::function<void(Index)> visit = [&](Index u) {
        if (nodes_[u].children.empty()) {
            out.push_back(leaf_position_[u]);
            return;
        }
        for (Index c : nodes_[u].children) visit(c);
    };
    visit(v);
    return out;
}

Filtration tree_filtration(const ScenarioTree& tree) {
    std::vector<Partition> stages;
    const auto& leaves = tree.leaves();
    for (std::size_t t = 1; t <= tree.depth(); ++t) {
        std::vector<Index> labels(leaves.size());
        for (Index k = 0; k < leaves.size(); ++k) labels[k] = tree.ancestor(leaves[k], t);
        stages.push_back(Partition::from_labels(labels));
    }
    return Filtration(std::move(stages));
}

}  // namespace drmo
