#include <stdexcept>

#include "search_detail.hpp"

namespace embanks {

KeywordSets keyword_sets(const KeywordIndex& idx, std::span<const std::string> terms) {
    KeywordSets ks;
    for (const auto& raw : terms) {
        const auto term = normalize_term(raw);
        const auto ids = idx.lookup(term);
        if (ids.empty()) throw NoAnswerError(term.empty() ? raw : term);
        ks.terms.push_back(term);
        ks.sets.emplace_back(ids.begin(), ids.end());
    }
    if (ks.sets.empty()) throw NoAnswerError("");
    return ks;
}

KeywordSets keyword_sets(const KeywordIndex& idx, std::string_view query) {
    const auto terms = tokenize(query);
    return keyword_sets(idx, std::span<const std::string>(terms));
}

SearchResult search(const DataGraph& g, const KeywordSets& ks, Algorithm algo, const SearchConfig& cfg) {
    return algo == Algorithm::backward ? backward_search(g, ks, cfg) : bidirectional_search(g, ks, cfg);
}

std::vector<ScoredAnswer> steiner_minimality_filter(std::vector<ScoredAnswer> answers) {
    std::vector<std::uint8_t> dominated(answers.size(), 0);
    for (std::size_t a = 0; a < answers.size(); ++a) {
        const auto& na = answers[a].tree.nodes;
        for (std::size_t b = 0; b < answers.size() && !dominated[a]; ++b) {
            const auto& nb = answers[b].tree.nodes;
            dominated[a] = nb.size() < na.size() && std::includes(na.begin(), na.end(), nb.begin(), nb.end());
        }
    }
    std::vector<ScoredAnswer> kept;
    for (std::size_t a = 0; a < answers.size(); ++a)
        if (!dominated[a]) kept.push_back(std::move(answers[a]));
    return kept;
}

const char* to_string(Algorithm a) { return a == Algorithm::backward ? "backward" : "bidi"; }

Algorithm parse_algorithm(std::string_view s) {
    if (s == "backward") return Algorithm::backward;
    if (s == "bidi" || s == "bidirectional") return Algorithm::bidirectional;
    throw std::invalid_argument("unknown search algorithm '" + std::string(s) + "'");
}

}  // namespace embanks
