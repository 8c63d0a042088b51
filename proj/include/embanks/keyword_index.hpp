#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embanks/graph.hpp"
#include "embanks/ingest.hpp"

namespace embanks {

/// Lowercased maximal runs of ASCII letters and digits. Bytes >= 0x80 count
/// as word characters so UTF-8 sequences stay inside their token.
std::vector<std::string> tokenize(std::string_view text);

/// Normalizes a single query term; returns "" when it holds no word characters.
std::string normalize_term(std::string_view term);

/**
 * Inverted index from normalized term to a strictly increasing id list.
 * The same type serves node-level and cluster-level postings.
 */
class KeywordIndex {
public:
    using Postings = std::vector<std::uint32_t>;

    KeywordIndex() = default;
    explicit KeywordIndex(std::map<std::string, Postings> postings);

    /// Empty when the term is absent. The term is normalized first.
    [[nodiscard]] std::span<const std::uint32_t> lookup(std::string_view term) const;
    [[nodiscard]] const std::map<std::string, Postings>& postings() const noexcept {
        return postings_;
    }
    [[nodiscard]] std::size_t term_count() const noexcept { return postings_.size(); }

    friend bool operator==(const KeywordIndex&, const KeywordIndex&) = default;

private:
    std::map<std::string, Postings> postings_;
};

using ClusterKeywordIndex = KeywordIndex;

struct IndexOptions {
    /// Also map each relation name to every tuple of that relation.
    bool indexRelationNames = false;
};

KeywordIndex build_index(const NodeMeta& meta, IndexOptions options = {});

/// Image of every posting list under nodeMapping, sorted and deduplicated.
ClusterKeywordIndex project_to_clusters(const KeywordIndex& idx,
                                        std::span<const ClusterId> nodeMapping);

}  // namespace embanks
