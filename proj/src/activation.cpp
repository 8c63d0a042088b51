#include "embanks/activation.hpp"

#include <stdexcept>

namespace embanks {

ActivationState::ActivationState(NodeId nodes, std::size_t keywords, double mu)
    : n_(nodes), w_(keywords), mu_(mu), a_(static_cast<std::size_t>(nodes) * keywords, 0.0) {
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("activation: mu must lie in (0,1)");
}

double ActivationState::total(NodeId u) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w_; ++i) s += a_[index(u, i)];
    return s;
}

bool ActivationState::offer(NodeId u, std::size_t i, double value) {
    auto& cur = a_[index(u, i)];
    if (value <= cur) return false;
    cur = value;
    return true;
}

ActivationState init_activation(std::span<const std::vector<NodeId>> keywordSets,
                                std::span<const float> prestige, double mu) {
    ActivationState st(static_cast<NodeId>(prestige.size()), keywordSets.size(), mu);
    for (std::size_t i = 0; i < keywordSets.size(); ++i) {
        const auto& s = keywordSets[i];
        if (s.empty()) throw std::invalid_argument("activation: empty keyword set");
        for (auto u : s) st.offer(u, i, static_cast<double>(prestige[u]) / static_cast<double>(s.size()));
    }
    return st;
}

SpreadStep spread_activation(ActivationState& state, NodeId from, std::size_t i,
                             std::span<const SpreadNeighbor> neighbors) {
    SpreadStep step;
    step.received = state.get(from, i);
    if (neighbors.empty()) {
        step.retained = step.received;
        return step;
    }
    const double mu = state.mu();
    double inverseSum = 0.0;
    for (const auto& nb : neighbors) inverseSum += 1.0 / nb.weight;
    const double pool = mu * step.received;
    step.retained = step.received - pool;
    step.offered.reserve(neighbors.size());
    for (const auto& nb : neighbors) {
        const double share = pool * (1.0 / nb.weight) / inverseSum;
        step.offered.push_back(share);
        state.offer(nb.node, i, share);
    }
    return step;
}

}  // namespace embanks
