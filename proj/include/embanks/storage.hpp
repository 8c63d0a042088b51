#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "embanks/clustering.hpp"
#include "embanks/graph.hpp"
#include "embanks/ingest.hpp"
#include "embanks/keyword_index.hpp"

namespace embanks {

enum class StoreErrorKind { io, bad_magic, version_mismatch, truncated, checksum, out_of_order, missing };

const char* to_string(StoreErrorKind k);

class StoreError : public std::runtime_error {
public:
    StoreError(StoreErrorKind kind, const std::filesystem::path& path, const std::string& what)
        : std::runtime_error(path.string() + ": " + what), kind_(kind), path_(path) {}
    [[nodiscard]] StoreErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

private:
    StoreErrorKind kind_;
    std::filesystem::path path_;
};

inline constexpr std::uint32_t kFormatVersion = 1;

/// Cluster-level graph plus everything needed to plan an expansion.
struct CompressedGraph {
    DataGraph clusterGraph;
    Clustering clustering;
    ClusterMetadata meta;
    std::optional<ClusterKeywordIndex> clusterIndex;

    friend bool operator==(const CompressedGraph&, const CompressedGraph&) = default;
};

/// `<path>`: magic "EMBK", version, flags (bit 0 cluster index, bit 1
/// entry/exit tables), byte length, counts, arrays, trailing CRC32. Synced
/// to disk before returning.
void write_compressed_graph(const CompressedGraph& cg, const std::filesystem::path& path);
CompressedGraph read_compressed_graph(const std::filesystem::path& path);

struct IntraEdge {
    std::uint32_t from = 0;  // local member index
    std::uint32_t to = 0;
    float weight = 0.0f;
    float priority = 0.0f;
    std::uint8_t forward = 0;

    friend bool operator==(const IntraEdge&, const IntraEdge&) = default;
};

struct BoundaryEdge {
    std::uint32_t from = 0;  // local member index
    NodeId target = 0;       // global node id
    ClusterId targetCluster = 0;
    float weight = 0.0f;
    float priority = 0.0f;
    std::uint8_t forward = 0;

    friend bool operator==(const BoundaryEdge&, const BoundaryEdge&) = default;
};

/// Node-level content of one cluster. Boundary edges are stored on their source side only.
struct ClusterFile {
    ClusterId id = 0;
    std::vector<NodeId> members;
    std::vector<float> prestige;
    std::vector<std::uint16_t> nodeType;
    std::vector<std::uint64_t> textOffset;
    std::vector<std::uint32_t> textLength;
    std::vector<IntraEdge> intra;
    std::vector<BoundaryEdge> boundary;

    friend bool operator==(const ClusterFile&, const ClusterFile&) = default;
};

/// Slices cluster c out of g. Text offsets index the concatenated text file; may be empty.
ClusterFile make_cluster_file(const DataGraph& g, const Clustering& cl, ClusterId c,
                              std::span<const std::uint64_t> textOffset = {},
                              std::span<const std::uint32_t> textLength = {});

/// Zero-padded decimal, at least four digits and wide enough for clusterCount - 1.
std::string cluster_file_name(ClusterId id, ClusterId clusterCount);

std::vector<std::uint8_t> encode_cluster(const ClusterFile& f);
ClusterFile decode_cluster(std::span<const std::uint8_t> bytes, const std::filesystem::path& where);

/// Writes `<dir>/clusters/NNNN.clu` files in strictly ascending id order.
class ClusterStoreWriter {
public:
    ClusterStoreWriter(std::filesystem::path storeDir, ClusterId clusterCount);
    /// Throws StoreError(out_of_order) unless f.id is above every id written so far.
    void write(const ClusterFile& f);

private:
    std::filesystem::path dir_;
    ClusterId count_;
    std::optional<ClusterId> last_;
};

ClusterFile read_cluster(ClusterId id, const std::filesystem::path& storeDir, ClusterId clusterCount);

void write_keyword_index(const KeywordIndex& idx, const std::filesystem::path& path);
KeywordIndex read_keyword_index(const std::filesystem::path& path);

/// Node-level graph and metadata produced by ingest ("tuples.emg").
void write_tuples(const DataGraph& g, const NodeMeta& meta, const std::filesystem::path& path,
                  const std::filesystem::path& textPath);
std::pair<DataGraph, NodeMeta> read_tuples(const std::filesystem::path& path,
                                           const std::filesystem::path& textPath);

/// Node-level subgraph induced by a set of clusters. Local ids follow
/// ascending global id, so relative order is preserved.
struct ExpandedGraph {
    DataGraph graph;
    std::vector<NodeId> globalId;
    std::vector<ClusterId> clusters;
    std::vector<std::uint64_t> textOffset;
    std::vector<std::uint32_t> textLength;

    /// kNoNode when the global node is not expanded.
    [[nodiscard]] NodeId local_id(NodeId global) const;
};

/// Store directory: graph.emb, index.kwi, text.dat, tuples.emg, clusters/.
class Store {
public:
    explicit Store(std::filesystem::path dir);

    [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }
    [[nodiscard]] const CompressedGraph& compressed() const noexcept { return cg_; }
    [[nodiscard]] const KeywordIndex& node_index() const noexcept { return nodeIndex_; }
    [[nodiscard]] const ClusterKeywordIndex& cluster_index() const noexcept { return clusterIndex_; }

    ClusterFile read_cluster(ClusterId id) const;
    /// Reads every listed cluster (duplicates ignored) and joins them.
    ExpandedGraph expand_clusters(std::span<const ClusterId> ids) const;
    /// Text of one node, read from text.dat.
    std::string node_text(std::uint64_t offset, std::uint32_t length) const;

    [[nodiscard]] std::uint64_t cluster_reads() const noexcept { return reads_; }

private:
    std::filesystem::path dir_;
    CompressedGraph cg_;
    KeywordIndex nodeIndex_;
    ClusterKeywordIndex clusterIndex_;
    mutable std::uint64_t reads_ = 0;
};

/// Everything `cluster` writes for one clustering of an ingested store.
void write_cluster_store(const std::filesystem::path& storeDir, const DataGraph& g, const NodeMeta& meta,
                         const KeywordIndex& nodeIndex, const Clustering& cl, const WeightConfig& wcfg,
                         bool withTables = false);

/// Offsets of each node's text inside the concatenated text file.
void text_layout(const NodeMeta& meta, std::vector<std::uint64_t>& offset, std::vector<std::uint32_t>& length);

}  // namespace embanks
