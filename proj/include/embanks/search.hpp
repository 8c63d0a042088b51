#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "embanks/graph.hpp"
#include "embanks/keyword_index.hpp"
#include "embanks/scoring.hpp"

namespace embanks {

/// One sorted, duplicate-free node set per query term.
struct KeywordSets {
    std::vector<std::vector<NodeId>> sets;
    std::vector<std::string> terms;

    [[nodiscard]] std::size_t size() const noexcept { return sets.size(); }
};

class NoAnswerError : public std::runtime_error {
public:
    explicit NoAnswerError(std::string term)
        : std::runtime_error("no node matches keyword '" + term + "'"), term_(std::move(term)) {}
    [[nodiscard]] const std::string& term() const noexcept { return term_; }

private:
    std::string term_;
};

/// Splits the query into normalized terms and looks each one up. Throws
/// NoAnswerError naming the first term without postings.
KeywordSets keyword_sets(const KeywordIndex& idx, std::string_view query);
KeywordSets keyword_sets(const KeywordIndex& idx, std::span<const std::string> terms);

enum class Algorithm { backward, bidirectional };

struct SearchConfig {
    std::size_t k = 10;
    /// Candidate trees generated before the search stops and flushes; 0 = no cap.
    std::size_t maxCandidates = 2000;
    double mu = 0.5;
    /// Drop answers whose node set strictly contains another candidate's.
    bool steinerFilter = false;
    ScoreConfig score;
};

struct SearchStats {
    std::uint64_t nodesTouched = 0;
    std::uint64_t nodesExplored = 0;
    std::uint64_t answersEmitted = 0;
    double elapsedSeconds = 0.0;

    SearchStats& operator+=(const SearchStats& o) {
        nodesTouched += o.nodesTouched;
        nodesExplored += o.nodesExplored;
        answersEmitted += o.answersEmitted;
        elapsedSeconds += o.elapsedSeconds;
        return *this;
    }
};

struct SearchResult {
    /// In emission order, which is rank order.
    std::vector<ScoredAnswer> answers;
    SearchStats stats;
};

/// One shortest-path iterator per keyword node over reversed edges; the
/// globally nearest frontier entry is expanded next.
SearchResult backward_search(const DataGraph& g, const KeywordSets& ks, const SearchConfig& cfg = {});

/// Incoming and outgoing frontiers prioritized by spreading activation.
SearchResult bidirectional_search(const DataGraph& g, const KeywordSets& ks,
                                  const SearchConfig& cfg = {});

SearchResult search(const DataGraph& g, const KeywordSets& ks, Algorithm algo,
                    const SearchConfig& cfg = {});

/// Removes every answer whose node set strictly contains another's. Order is kept.
std::vector<ScoredAnswer> steiner_minimality_filter(std::vector<ScoredAnswer> answers);

const char* to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);

}  // namespace embanks
