#include "embanks/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace embanks {

DataGraph::DataGraph(std::vector<float> prestige, std::vector<std::uint16_t> nodeType,
                     std::vector<EdgeSlot> adjacencyOffset, std::vector<NodeId> adjacentNodes,
                     std::vector<float> edgeWeight, std::vector<float> edgePriority,
                     std::vector<std::uint8_t> edgeForward)
    : prestige_(std::move(prestige)),
      nodeType_(std::move(nodeType)),
      adjacencyOffset_(std::move(adjacencyOffset)),
      adjacentNodes_(std::move(adjacentNodes)),
      edgeWeight_(std::move(edgeWeight)),
      edgePriority_(std::move(edgePriority)),
      edgeForward_(std::move(edgeForward)) {
    validate();
    derive_indices();
}

void DataGraph::validate() const {
    const std::size_t n = prestige_.size();
    if (n >= kNoNode) throw std::invalid_argument("graph: too many nodes for 32-bit ids");
    if (nodeType_.size() != n) throw std::invalid_argument("graph: nodeType length mismatch");
    if (adjacencyOffset_.size() != n + 1)
        throw std::invalid_argument("graph: adjacencyOffset must have nodeCount+1 entries");
    if (adjacencyOffset_.front() != 0) throw std::invalid_argument("graph: adjacencyOffset[0] != 0");
    for (std::size_t i = 0; i < n; ++i)
        if (adjacencyOffset_[i + 1] < adjacencyOffset_[i])
            throw std::invalid_argument("graph: adjacencyOffset not monotone at node " +
                                        std::to_string(i));
    const EdgeSlot e = adjacencyOffset_.back();
    if (adjacentNodes_.size() != e || edgeWeight_.size() != e || edgePriority_.size() != e ||
        edgeForward_.size() != e)
        throw std::invalid_argument("graph: slot array lengths disagree with adjacencyOffset");
    for (EdgeSlot s = 0; s < e; ++s) {
        if (adjacentNodes_[s] >= n)
            throw std::invalid_argument("graph: slot " + std::to_string(s) + " targets unknown node");
        if (!(edgeWeight_[s] > 0.0f) || !std::isfinite(edgeWeight_[s]))
            throw std::invalid_argument("graph: slot " + std::to_string(s) +
                                        " has non-positive weight");
        if (edgeForward_[s] > 1) throw std::invalid_argument("graph: direction flag must be 0 or 1");
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!(prestige_[i] >= 0.0f) || !std::isfinite(prestige_[i]))
            throw std::invalid_argument("graph: node " + std::to_string(i) +
                                        " has negative prestige");
}

void DataGraph::derive_indices() {
    const NodeId n = node_count();
    const EdgeSlot e = slot_count();
    slotSource_.resize(e);
    for (NodeId u = 0; u < n; ++u)
        for (EdgeSlot s = adjacencyOffset_[u]; s < adjacencyOffset_[u + 1]; ++s) slotSource_[s] = u;

    inOffset_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (EdgeSlot s = 0; s < e; ++s) ++inOffset_[adjacentNodes_[s] + 1];
    for (NodeId v = 0; v < n; ++v) inOffset_[v + 1] += inOffset_[v];
    inSlots_.resize(e);
    std::vector<EdgeSlot> cursor(inOffset_.begin(), inOffset_.end() - 1);
    for (EdgeSlot s = 0; s < e; ++s) inSlots_[cursor[adjacentNodes_[s]]++] = s;
}

GraphBuilder::GraphBuilder(NodeId nodes) : prestige_(nodes, 0.0f), nodeType_(nodes, 0) {}

NodeId GraphBuilder::add_node(float prestige, std::uint16_t type) {
    prestige_.push_back(prestige);
    nodeType_.push_back(type);
    return static_cast<NodeId>(prestige_.size() - 1);
}

void GraphBuilder::set_prestige(NodeId u, float prestige) { prestige_.at(u) = prestige; }

void GraphBuilder::add_edge(NodeId from, NodeId to, float weight, bool forward, float priority) {
    if (from >= node_count() || to >= node_count())
        throw std::out_of_range("GraphBuilder: edge endpoint out of range");
    slots_.push_back({from, to, weight, priority, forward});
}

void GraphBuilder::add_link(NodeId from, NodeId to, float forwardWeight, float backwardWeight,
                            float priority) {
    add_edge(from, to, forwardWeight, true, priority);
    add_edge(to, from, backwardWeight, false, priority);
}

DataGraph GraphBuilder::build() const {
    std::vector<PendingSlot> sorted = slots_;
    std::sort(sorted.begin(), sorted.end(), [](const PendingSlot& a, const PendingSlot& b) {
        return std::tie(a.from, a.to, a.weight, a.forward, a.priority) <
               std::tie(b.from, b.to, b.weight, b.forward, b.priority);
    });
    const NodeId n = node_count();
    std::vector<EdgeSlot> offset(static_cast<std::size_t>(n) + 1, 0);
    std::vector<NodeId> adj;
    std::vector<float> w, p;
    std::vector<std::uint8_t> fwd;
    adj.reserve(sorted.size());
    w.reserve(sorted.size());
    p.reserve(sorted.size());
    fwd.reserve(sorted.size());
    for (const auto& s : sorted) {
        ++offset[s.from + 1];
        adj.push_back(s.to);
        w.push_back(s.weight);
        p.push_back(s.priority);
        fwd.push_back(s.forward ? 1 : 0);
    }
    for (NodeId u = 0; u < n; ++u) offset[u + 1] += offset[u];
    return DataGraph(prestige_, nodeType_, std::move(offset), std::move(adj), std::move(w),
                     std::move(p), std::move(fwd));
}

std::uint64_t degree(const DataGraph& g, NodeId u, DegreeMode mode) {
    const auto r = g.out_slots(u);
    std::uint64_t count = 0;
    for (EdgeSlot s = r.first; s < r.last; ++s)
        if (g.is_forward(s) == (mode == DegreeMode::out)) ++count;
    return count;
}

std::uint64_t bidirectional_degree(const DataGraph& g, NodeId u) { return g.out_slots(u).size() / 2; }

bool check_pairing(const DataGraph& g) {
    // (u, v) -> forward count of u->v minus backward count of v->u
    std::map<std::pair<NodeId, NodeId>, std::int64_t> balance;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto r = g.out_slots(u);
        for (EdgeSlot s = r.first; s < r.last; ++s) {
            const NodeId v = g.target(s);
            if (g.is_forward(s))
                ++balance[{u, v}];
            else
                --balance[{v, u}];
        }
    }
    return std::all_of(balance.begin(), balance.end(), [](const auto& kv) { return kv.second == 0; });
}

DataGraph assign_backward_weights(const DataGraph& g, float floorWeight) {
    const NodeId n = g.node_count();
    std::vector<std::uint64_t> inDegree(n);
    for (NodeId u = 0; u < n; ++u) inDegree[u] = degree(g, u, DegreeMode::in);

    std::vector<float> weights(g.edge_weights().begin(), g.edge_weights().end());
    for (EdgeSlot s = 0; s < g.slot_count(); ++s) {
        if (g.is_forward(s)) continue;
        const double w = std::log1p(static_cast<double>(inDegree[g.target(s)]));
        weights[s] = std::max(static_cast<float>(w), floorWeight);
    }
    return DataGraph({g.prestige().begin(), g.prestige().end()},
                     {g.node_types().begin(), g.node_types().end()},
                     {g.adjacency_offset().begin(), g.adjacency_offset().end()},
                     {g.adjacent_nodes().begin(), g.adjacent_nodes().end()}, std::move(weights),
                     {g.edge_priorities().begin(), g.edge_priorities().end()},
                     {g.edge_forward().begin(), g.edge_forward().end()});
}

}  // namespace embanks
