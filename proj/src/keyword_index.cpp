#include "embanks/keyword_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace embanks {
namespace {

bool word_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

char lower(unsigned char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c); }

void sort_unique(std::vector<std::uint32_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (word_char(c)) {
            cur.push_back(lower(c));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::string normalize_term(std::string_view term) {
    std::string out;
    for (unsigned char c : term)
        if (word_char(c)) out.push_back(lower(c));
    return out;
}

KeywordIndex::KeywordIndex(std::map<std::string, Postings> postings) : postings_(std::move(postings)) {
    for (const auto& [term, ids] : postings_) {
        if (term.empty()) throw std::invalid_argument("keyword index: empty term");
        if (!std::is_sorted(ids.begin(), ids.end()) ||
            std::adjacent_find(ids.begin(), ids.end()) != ids.end())
            throw std::invalid_argument("keyword index: postings for '" + term +
                                        "' are not strictly increasing");
    }
}

std::span<const std::uint32_t> KeywordIndex::lookup(std::string_view term) const {
    const auto it = postings_.find(normalize_term(term));
    if (it == postings_.end()) return {};
    return it->second;
}

KeywordIndex build_index(const NodeMeta& meta, IndexOptions options) {
    std::map<std::string, KeywordIndex::Postings> postings;
    for (std::size_t u = 0; u < meta.size(); ++u) {
        for (auto& t : tokenize(meta.text[u])) {
            auto& list = postings[std::move(t)];
            if (list.empty() || list.back() != u) list.push_back(static_cast<NodeId>(u));
        }
    }
    if (options.indexRelationNames) {
        for (std::size_t u = 0; u < meta.size(); ++u) {
            const auto rel = meta.relation[u];
            if (rel >= meta.relationNames.size()) continue;
            const auto term = normalize_term(meta.relationNames[rel]);
            if (term.empty()) continue;
            postings[term].push_back(static_cast<NodeId>(u));
        }
        for (auto& [_, ids] : postings) sort_unique(ids);
    }
    return KeywordIndex(std::move(postings));
}

ClusterKeywordIndex project_to_clusters(const KeywordIndex& idx,
                                        std::span<const ClusterId> nodeMapping) {
    std::map<std::string, KeywordIndex::Postings> out;
    for (const auto& [term, ids] : idx.postings()) {
        auto& list = out[term];
        list.reserve(ids.size());
        for (auto u : ids) {
            if (u >= nodeMapping.size())
                throw std::out_of_range("project_to_clusters: node outside clustering");
            list.push_back(nodeMapping[u]);
        }
        sort_unique(list);
    }
    return ClusterKeywordIndex(std::move(out));
}

}  // namespace embanks
