#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "embanks/search.hpp"
#include "embanks/storage.hpp"

namespace embanks {

enum class ExtraClusterPolicy { none, keyword_clusters, keyword_clusters_random_fill };

ExtraClusterPolicy parse_extra_policy(std::string_view s);
const char* to_string(ExtraClusterPolicy p);

struct EngineConfig {
    /// Cluster-level answers collected before expansion.
    std::size_t phase1Limit = 100;
    Algorithm phase1Algorithm = Algorithm::backward;
    Algorithm phase2Algorithm = Algorithm::bidirectional;
    double gamma = 0.5;
    /// Re-fetch rounds allowed per query; 0 disables the gamma trigger.
    std::size_t maxRefetch = 3;
    /// Bytes allowed on top of the clusters named by phase-1 answers.
    std::uint64_t memoryBudgetBytes = 0;
    ExtraClusterPolicy extraClusterPolicy = ExtraClusterPolicy::keyword_clusters;
    std::uint64_t rngSeed = 1;
    /// k, candidate cap, mu and scoring for both phases; phase 1 uses phase1Limit as k.
    SearchConfig search;

    void validate() const;
};

struct QueryResult {
    /// Ranked answers over global node ids.
    std::vector<ScoredAnswer> answers;
    /// Cluster-level answers of phase 1.
    std::vector<ScoredAnswer> phase1Answers;
    SearchStats stats;
    SearchStats phase1Stats;
    SearchStats phase2Stats;
    std::vector<ClusterId> expandedClusterIds;
    std::size_t refetchEvents = 0;
    /// Text of every node in the final answers.
    std::map<NodeId, std::string> nodeText;
};

QueryResult two_phase_query(const Store& store, std::span<const std::string> terms, const EngineConfig& cfg);
QueryResult two_phase_query(const Store& store, std::string_view query, const EngineConfig& cfg);

/// Full-graph search in one phase: the reference the two-phase engine is measured against.
SearchResult single_phase_query(const DataGraph& g, const KeywordIndex& idx, std::string_view query,
                                Algorithm algo, const SearchConfig& cfg = {});

/// True iff some consecutive pair has next <= gamma * previous.
bool gamma_trigger(std::span<const double> scores, double gamma);

/**
 * Keyword clusters that are not yet expanded, in ascending id order, as
 * long as they fit the budget. The random-fill policy shuffles them first
 * when they do not all fit.
 */
std::vector<ClusterId> select_extra_clusters(const Clustering& cl, const ClusterMetadata& meta,
                                             std::span<const ClusterId> keywordClusterIds,
                                             std::span<const ClusterId> alreadyExpanded, std::uint64_t budget,
                                             ExtraClusterPolicy policy, std::mt19937_64& rng);

struct QueryComparison {
    std::string query;
    std::size_t exactOverlap = 0;
    std::size_t acceptableCount = 0;
    std::size_t systemCount = 0;
    std::size_t baselineCount = 0;
};

struct ComparisonReport {
    std::vector<QueryComparison> perQuery;
    double meanExactOverlap = 0.0;
    double meanAcceptable = 0.0;
};

/// Compares the top 10 of each list.
QueryComparison compare_precision(std::span<const ScoredAnswer> system, std::span<const ScoredAnswer> baseline);
ComparisonReport summarize(std::vector<QueryComparison> perQuery);

}  // namespace embanks
