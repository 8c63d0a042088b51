#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace embanks;
using embanks::testing::Rng;

TEST(Tokenize, LowercasesAlnumRuns) {
    EXPECT_EQ(tokenize("Keyword-Search in DBs, 2006!"),
              (std::vector<std::string>{"keyword", "search", "in", "dbs", "2006"}));
    EXPECT_TRUE(tokenize("  ,.; ").empty());
    EXPECT_EQ(tokenize("caf\xc3\xa9 bar"), (std::vector<std::string>{"caf\xc3\xa9", "bar"}));
    EXPECT_EQ(normalize_term("  XML! "), "xml");
    EXPECT_EQ(normalize_term("--"), "");
}

TEST(KeywordIndex, RejectsUnsortedPostings) {
    EXPECT_THROW(KeywordIndex({{"a", {2, 1}}}), std::invalid_argument);
    EXPECT_THROW(KeywordIndex({{"a", {1, 1}}}), std::invalid_argument);
}

TEST(KeywordIndex, MatchesLinearScan) {
    Rng rng(11);
    const char* vocab[] = {"xml", "query", "graph", "soumen", "db", "Tree"};
    std::uniform_int_distribution<int> pick(0, 5), len(0, 4);
    for (int trial = 0; trial < 30; ++trial) {
        NodeMeta meta;
        meta.relationNames = {"paper", "author"};
        for (int u = 0; u < 40; ++u) {
            std::string t;
            for (int j = len(rng); j > 0; --j) t += std::string(vocab[pick(rng)]) + (j % 2 ? "," : " ");
            meta.text.push_back(t);
            meta.relation.push_back(static_cast<std::uint16_t>(u % 2));
        }
        for (bool rel : {false, true}) {
            const auto idx = build_index(meta, {.indexRelationNames = rel});
            for (std::string term : {"xml", "tree", "TREE", "paper", "author", "absent"}) {
                std::vector<std::uint32_t> expect;
                const auto norm = normalize_term(term);
                for (std::uint32_t u = 0; u < meta.size(); ++u) {
                    const auto toks = tokenize(meta.text[u]);
                    bool hit = std::find(toks.begin(), toks.end(), norm) != toks.end();
                    if (rel && meta.relationNames[meta.relation[u]] == norm) hit = true;
                    if (hit) expect.push_back(u);
                }
                const auto got = idx.lookup(term);
                EXPECT_EQ(std::vector<std::uint32_t>(got.begin(), got.end()), expect) << term;
            }
        }
    }
}

TEST(KeywordIndex, ProjectionIsImageOfPostings) {
    Rng rng(5);
    std::uniform_int_distribution<ClusterId> cid(0, 6);
    std::map<std::string, KeywordIndex::Postings> p{{"a", {0, 3, 4, 9}}, {"b", {1, 2}}, {"c", {}}};
    const KeywordIndex idx(p);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<ClusterId> mapping(10);
        for (auto& m : mapping) m = cid(rng);
        const auto proj = project_to_clusters(idx, mapping);
        for (const auto& [term, list] : p) {
            std::set<std::uint32_t> img;
            for (auto u : list) img.insert(mapping[u]);
            const auto got = proj.lookup(term);
            EXPECT_EQ(std::vector<std::uint32_t>(got.begin(), got.end()),
                      std::vector<std::uint32_t>(img.begin(), img.end()));
        }
    }
}
