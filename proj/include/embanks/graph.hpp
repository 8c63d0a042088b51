#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace embanks {

using NodeId = std::uint32_t;
using ClusterId = std::uint32_t;
using EdgeSlot = std::uint64_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Half-open range of adjacency slots owned by one node.
struct SlotRange {
    EdgeSlot first = 0;
    EdgeSlot last = 0;

    [[nodiscard]] EdgeSlot size() const noexcept { return last - first; }
    [[nodiscard]] bool empty() const noexcept { return first == last; }
};

/**
 * Flat-array directed graph of tuples.
 *
 * Node u's outgoing slots are adjacencyOffset[u] .. adjacencyOffset[u+1].
 * A slot carries its target, a positive weight, a priority and a direction
 * bit (forward = foreign-key direction). Ingested graphs store every link in
 * both directions, see check_pairing().
 *
 * The graph is immutable once built. A transposed index of incoming slots is
 * derived on construction and never serialized.
 */
class DataGraph {
public:
    DataGraph() : adjacencyOffset_{0}, inOffset_{0} {}

    /// Validates all structural invariants and throws std::invalid_argument
    /// on the first violation.
    DataGraph(std::vector<float> prestige, std::vector<std::uint16_t> nodeType,
              std::vector<EdgeSlot> adjacencyOffset, std::vector<NodeId> adjacentNodes,
              std::vector<float> edgeWeight, std::vector<float> edgePriority,
              std::vector<std::uint8_t> edgeForward);

    [[nodiscard]] NodeId node_count() const noexcept {
        return static_cast<NodeId>(prestige_.size());
    }
    [[nodiscard]] EdgeSlot slot_count() const noexcept { return adjacentNodes_.size(); }

    [[nodiscard]] SlotRange out_slots(NodeId u) const noexcept {
        return {adjacencyOffset_[u], adjacencyOffset_[u + 1]};
    }
    /// Slots whose target is v, in ascending slot order.
    [[nodiscard]] std::span<const EdgeSlot> in_slots(NodeId v) const noexcept {
        return {inSlots_.data() + inOffset_[v], inSlots_.data() + inOffset_[v + 1]};
    }

    [[nodiscard]] NodeId target(EdgeSlot s) const noexcept { return adjacentNodes_[s]; }
    [[nodiscard]] NodeId source(EdgeSlot s) const noexcept { return slotSource_[s]; }
    [[nodiscard]] float weight(EdgeSlot s) const noexcept { return edgeWeight_[s]; }
    [[nodiscard]] float priority(EdgeSlot s) const noexcept { return edgePriority_[s]; }
    [[nodiscard]] bool is_forward(EdgeSlot s) const noexcept { return edgeForward_[s] != 0; }

    [[nodiscard]] float prestige(NodeId u) const noexcept { return prestige_[u]; }
    [[nodiscard]] std::uint16_t node_type(NodeId u) const noexcept { return nodeType_[u]; }

    [[nodiscard]] std::span<const float> prestige() const noexcept { return prestige_; }
    [[nodiscard]] std::span<const std::uint16_t> node_types() const noexcept { return nodeType_; }
    [[nodiscard]] std::span<const EdgeSlot> adjacency_offset() const noexcept {
        return adjacencyOffset_;
    }
    [[nodiscard]] std::span<const NodeId> adjacent_nodes() const noexcept { return adjacentNodes_; }
    [[nodiscard]] std::span<const float> edge_weights() const noexcept { return edgeWeight_; }
    [[nodiscard]] std::span<const float> edge_priorities() const noexcept { return edgePriority_; }
    [[nodiscard]] std::span<const std::uint8_t> edge_forward() const noexcept {
        return edgeForward_;
    }

    friend bool operator==(const DataGraph& a, const DataGraph& b) {
        return a.prestige_ == b.prestige_ && a.nodeType_ == b.nodeType_ &&
               a.adjacencyOffset_ == b.adjacencyOffset_ && a.adjacentNodes_ == b.adjacentNodes_ &&
               a.edgeWeight_ == b.edgeWeight_ && a.edgePriority_ == b.edgePriority_ &&
               a.edgeForward_ == b.edgeForward_;
    }

private:
    void validate() const;
    void derive_indices();

    std::vector<float> prestige_;
    std::vector<std::uint16_t> nodeType_;
    std::vector<EdgeSlot> adjacencyOffset_;
    std::vector<NodeId> adjacentNodes_;
    std::vector<float> edgeWeight_;
    std::vector<float> edgePriority_;
    std::vector<std::uint8_t> edgeForward_;

    // derived
    std::vector<NodeId> slotSource_;
    std::vector<EdgeSlot> inOffset_;
    std::vector<EdgeSlot> inSlots_;
};

/// Accumulates nodes and slots, then emits a DataGraph whose per-node slots
/// are in canonical order (target, weight, direction, priority).
class GraphBuilder {
public:
    GraphBuilder() = default;
    explicit GraphBuilder(NodeId nodes);

    NodeId add_node(float prestige = 0.0f, std::uint16_t type = 0);
    void set_prestige(NodeId u, float prestige);
    [[nodiscard]] NodeId node_count() const noexcept {
        return static_cast<NodeId>(prestige_.size());
    }

    /// One directed slot from -> to.
    void add_edge(NodeId from, NodeId to, float weight, bool forward = true, float priority = 1.0f);
    /// A foreign-key link: forward slot from -> to plus its backward partner to -> from.
    void add_link(NodeId from, NodeId to, float forwardWeight, float backwardWeight,
                  float priority = 1.0f);

    [[nodiscard]] DataGraph build() const;

private:
    struct PendingSlot {
        NodeId from;
        NodeId to;
        float weight;
        float priority;
        bool forward;
    };

    std::vector<float> prestige_;
    std::vector<std::uint16_t> nodeType_;
    std::vector<PendingSlot> slots_;
};

enum class DegreeMode { in, out };

/// Foreign-key degree read from direction bits: `out` counts forward slots,
/// `in` counts backward slots (each is the partner of an incoming link).
std::uint64_t degree(const DataGraph& g, NodeId u, DegreeMode mode);

/// Degree in the both-directions representation, where in = out = span / 2.
std::uint64_t bidirectional_degree(const DataGraph& g, NodeId u);

/// True iff every forward slot u->v has exactly one backward slot v->u and
/// vice versa (multiset pairing).
bool check_pairing(const DataGraph& g);

/// Backward slot v->u gets max(ln(1 + inDegree(u)), floorWeight); forward
/// slots are left untouched.
DataGraph assign_backward_weights(const DataGraph& g, float floorWeight = 1.0f);

struct MemoryEstimate {
    std::uint64_t bytes = 0;
    friend bool operator==(const MemoryEstimate&, const MemoryEstimate&) = default;
};

/// 20 bytes per vertex (five ints) and 12 bytes per edge (three floats).
constexpr MemoryEstimate estimate_memory(std::uint64_t nodes, std::uint64_t edges) noexcept {
    return {20 * nodes + 12 * edges};
}

inline MemoryEstimate estimate_memory(const DataGraph& g) noexcept {
    return estimate_memory(g.node_count(), g.slot_count());
}

}  // namespace embanks
