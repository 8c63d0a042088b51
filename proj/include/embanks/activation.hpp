#pragma once

#include <span>
#include <utility>
#include <vector>

#include "embanks/graph.hpp"

namespace embanks {

/// Per (node, keyword) activation. Values only grow: a receiver keeps the
/// maximum of what it holds and what it is offered.
class ActivationState {
public:
    ActivationState(NodeId nodes, std::size_t keywords, double mu);

    [[nodiscard]] double get(NodeId u, std::size_t i) const { return a_[index(u, i)]; }
    /// Sum over keywords; the queue priority of u.
    [[nodiscard]] double total(NodeId u) const;
    /// a[u][i] = max(a[u][i], value). Returns true when it grew.
    bool offer(NodeId u, std::size_t i, double value);

    [[nodiscard]] std::size_t keyword_count() const noexcept { return w_; }
    [[nodiscard]] NodeId node_count() const noexcept { return n_; }
    [[nodiscard]] double mu() const noexcept { return mu_; }

private:
    [[nodiscard]] std::size_t index(NodeId u, std::size_t i) const {
        return static_cast<std::size_t>(u) * w_ + i;
    }

    NodeId n_;
    std::size_t w_;
    double mu_;
    std::vector<double> a_;
};

/// a[u][i] = prestige(u) / |S_i| for u in S_i, 0 elsewhere.
ActivationState init_activation(std::span<const std::vector<NodeId>> keywordSets,
                                std::span<const float> prestige, double mu);

struct SpreadNeighbor {
    NodeId node;
    float weight;
};

struct SpreadStep {
    double received = 0.0;
    double retained = 0.0;
    /// offered share per neighbor, same order as the input
    std::vector<double> offered;
};

/**
 * Spreads keyword i's activation of `from`: the node keeps (1 - mu) of it and
 * offers mu of it to the neighbors in inverse proportion to edge weight.
 * Neighbors take the max of old and offered. The node's own value is not
 * reduced, so retained is accounting only.
 */
SpreadStep spread_activation(ActivationState& state, NodeId from, std::size_t i,
                             std::span<const SpreadNeighbor> neighbors);

}  // namespace embanks
