#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "embanks/graph.hpp"

namespace embanks {

struct TableSpec {
    std::string name;
    std::vector<std::string> textColumns;
    std::optional<std::string> prestigeColumn;

    /// Relations without text hold only keys; their tuples exist for transitivity.
    [[nodiscard]] bool key_only() const noexcept { return textColumns.empty(); }
};

struct ForeignKeySpec {
    std::string fromTable;
    std::string fromColumn;
    std::string toTable;
    std::string toColumn;
};

struct IngestSpec {
    std::vector<TableSpec> tables;
    std::vector<ForeignKeySpec> foreignKeys;
    float forwardWeightDefault = 1.0f;

    /// Throws IngestError when names repeat or a key references an unknown table.
    void validate() const;
    [[nodiscard]] std::optional<std::uint16_t> table_index(const std::string& name) const;
};

class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the line-oriented schema format:
///
///     # comment
///     table <name> text=<col>[,<col>...] [prestige=<col>]
///     fk <table>.<col> -> <table>.<col>
///     weight <forward-weight-default>
IngestSpec parse_schema(std::string_view text);
IngestSpec load_schema(const std::filesystem::path& path);

/// Per-node relation id and display text; relation ids index relationNames.
struct NodeMeta {
    std::vector<std::string> relationNames;
    std::vector<std::uint16_t> relation;
    std::vector<std::string> text;

    [[nodiscard]] std::size_t size() const noexcept { return text.size(); }
};

struct IngestResult {
    DataGraph graph;
    NodeMeta meta;
    std::vector<std::string> warnings;
};

/// Reads <dataDir>/<table>.tsv for every table (first row = column names),
/// creates one node per tuple and one forward/backward slot pair per resolved
/// foreign-key value. Backward slots carry the forward default weight; see
/// assign_backward_weights(). Prestige defaults to foreign-key in-degree.
IngestResult ingest(const IngestSpec& spec, const std::filesystem::path& dataDir);

struct PruneResult {
    DataGraph graph;
    /// old id -> new id, kNoNode for removed nodes
    std::vector<NodeId> newId;
};

/// Removes tuples of key-only relations. Each path that enters and leaves a
/// region of removed nodes is replaced by one direct edge weighted with the
/// cheapest such path, so distances between surviving nodes are preserved.
PruneResult prune_transitive(const DataGraph& g, const IngestSpec& schema);

NodeMeta remap_meta(const NodeMeta& meta, const std::vector<NodeId>& newId);

/// ingest + prune_transitive (optional) + assign_backward_weights.
IngestResult load_database(const IngestSpec& spec, const std::filesystem::path& dataDir,
                           bool prune = true);

}  // namespace embanks
