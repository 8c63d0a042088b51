#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "embanks/graph.hpp"
#include "embanks/scoring.hpp"

namespace embanks {

/**
 * Partition of the nodes into clusters.
 *
 * nodeOrder[clusterOffset[c] .. clusterOffset[c+1]) lists the members of
 * cluster c, and nodeMapping[u] names the cluster of node u.
 */
struct Clustering {
    std::vector<ClusterId> nodeMapping;
    std::vector<NodeId> nodeOrder;
    std::vector<std::uint64_t> clusterOffset{0};
    std::uint32_t maxClusterSize = 1;

    [[nodiscard]] ClusterId cluster_count() const noexcept {
        return static_cast<ClusterId>(clusterOffset.size() - 1);
    }
    [[nodiscard]] std::span<const NodeId> members(ClusterId c) const noexcept {
        return {nodeOrder.data() + clusterOffset[c], nodeOrder.data() + clusterOffset[c + 1]};
    }
    [[nodiscard]] std::uint64_t size(ClusterId c) const noexcept {
        return clusterOffset[c + 1] - clusterOffset[c];
    }

    /// Throws std::invalid_argument unless mapping, order and offsets agree
    /// and every cluster size lies in [1, maxClusterSize].
    void validate() const;

    /// Members ordered by ascending node id within each cluster.
    static Clustering from_mapping(std::vector<ClusterId> mapping, std::uint32_t maxClusterSize);
    static Clustering identity(NodeId nodes);

    friend bool operator==(const Clustering&, const Clustering&) = default;
};

enum class ClusterAlgorithm { close_to_1, greedy_minimum, connection_naive, adjacency_naive };

ClusterAlgorithm parse_cluster_algorithm(std::string_view s);
const char* to_string(ClusterAlgorithm a);

/// Linear probe for a seed, then grow by the unused frontier neighbor whose
/// forward/backward weight ratio is nearest 1.
Clustering cluster_close_to_1(const DataGraph& g, std::uint32_t maxClusterSize);
/// Random seed, then repeatedly add the unused neighbors of the member nearest the seed. A
/// cluster that runs out of neighbors before it is full continues from the next random seed.
Clustering cluster_greedy_minimum(const DataGraph& g, std::uint32_t maxClusterSize, std::uint64_t seed);
/// Random seed, then random growth along edges.
Clustering cluster_connection_naive(const DataGraph& g, std::uint32_t maxClusterSize, std::uint64_t seed);
/// Groups nodes with identical neighbor lists, ignoring connectivity.
Clustering cluster_adjacency_naive(const DataGraph& g, std::uint32_t maxClusterSize);

Clustering run_clustering(ClusterAlgorithm algo, const DataGraph& g, std::uint32_t maxClusterSize,
                          std::uint64_t seed);

enum class EdgeCombiner { inverse_sum, harmonic_mean, min };
enum class PrestigeCombiner { sum, max, avg };

EdgeCombiner parse_edge_combiner(std::string_view s);
PrestigeCombiner parse_prestige_combiner(std::string_view s);
const char* to_string(EdgeCombiner c);
const char* to_string(PrestigeCombiner c);

struct WeightConfig {
    EdgeCombiner edgeCombiner = EdgeCombiner::inverse_sum;
    PrestigeCombiner prestigeCombiner = PrestigeCombiner::sum;
};

/// Throws std::invalid_argument on an empty set.
double combine_edge_weights(std::span<const double> weights, EdgeCombiner c);
double combine_prestige(std::span<const double> prestige, PrestigeCombiner c);

/**
 * One node per cluster and one superedge per ordered cluster pair joined by
 * at least one member slot; slots inside a cluster are dropped. A superedge
 * is forward when most of its member slots are, with ties going forward from
 * the lower cluster id. Its priority is the member mean; a cluster takes the
 * node type of its first member.
 */
DataGraph build_cluster_graph(const DataGraph& g, const Clustering& clustering, const WeightConfig& wcfg);

/// Cheapest intra-cluster costs between entry nodes (targets of slots from
/// other clusters) and exit nodes (sources of slots to other clusters).
struct InOutTable {
    std::vector<NodeId> entries;
    std::vector<NodeId> exits;
    /// row-major entries x exits, +inf when unreachable
    std::vector<float> cost;

    friend bool operator==(const InOutTable&, const InOutTable&) = default;
};

struct ClusterMetadata {
    /// largest finite directed intra-cluster distance
    std::vector<float> diameter;
    /// cheapest entry -> exit cost, +inf when the cluster has no such path
    std::vector<float> minInOut;
    /// slots owned by the members, boundary slots included
    std::vector<std::uint64_t> slotCount;
    /// empty unless requested
    std::vector<InOutTable> tables;

    [[nodiscard]] std::size_t size() const noexcept { return diameter.size(); }
    friend bool operator==(const ClusterMetadata&, const ClusterMetadata&) = default;
};

ClusterMetadata compute_cluster_metadata(const DataGraph& g, const Clustering& clustering,
                                         bool withTables = false);

/// Estimated in-memory bytes of a set of expanded clusters.
std::uint64_t expansion_bytes(const Clustering& clustering, const ClusterMetadata& meta,
                              std::span<const ClusterId> clusters);

struct CostBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/**
 * Bounds on the edge cost of a node-level answer realizing a cluster-level
 * one. lower sums minInOut over clusters that are neither the root nor in
 * keywordClusters; upper sums the superedge weights and every diameter.
 * Throws std::out_of_range when a cluster has no metadata.
 */
CostBounds answer_cost_bounds(const AnswerTree& clusterAnswer, const ClusterMetadata& meta,
                              std::span<const ClusterId> keywordClusters);

}  // namespace embanks
