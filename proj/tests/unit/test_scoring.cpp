#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "oracles.hpp"

using namespace embanks;
using embanks::testing::Rng;

namespace {

AnswerTree tree(NodeId root, std::vector<TreeEdge> edges, std::vector<NodeId> kw) {
    AnswerTree t{root, std::move(edges), std::move(kw), {}};
    t.normalize();
    return t;
}

}  // namespace

TEST(AnswerTree, NormalizeSortsAndCollectsNodes) {
    auto t = tree(4, {{4, 5, 1.0f}, {1, 2, 1.0f}, {4, 1, 1.0f}}, {5, 2});
    EXPECT_EQ(t.nodes, (std::vector<NodeId>{1, 2, 4, 5}));
    EXPECT_EQ(t.edges.front().parent, 1u);
    EXPECT_TRUE(t.contains(5));
    EXPECT_FALSE(t.contains(3));
    const auto k = tree_key(t);
    EXPECT_EQ(k.root, 4u);
    EXPECT_EQ(k.edges.size(), 3u);
}

TEST(AnswerTree, RootMinimality) {
    EXPECT_TRUE(is_root_minimal(tree(1, {{1, 2, 1}, {1, 3, 1}}, {2, 3})));
    EXPECT_FALSE(is_root_minimal(tree(1, {{1, 2, 1}, {2, 3, 1}}, {2, 3})));
    EXPECT_TRUE(is_root_minimal(tree(1, {{1, 2, 1}}, {1, 2})));
    EXPECT_TRUE(is_root_minimal(tree(2, {}, {2, 2})));
}

TEST(AnswerTree, ValidateCatchesViolations) {
    GraphBuilder b(4);
    b.add_edge(0, 1, 1.0f);
    b.add_edge(0, 2, 2.0f);
    b.add_edge(2, 3, 1.0f);
    const DataGraph g = b.build();
    const std::vector<std::vector<NodeId>> sets{{1}, {3}};
    EXPECT_FALSE(validate_tree(tree(0, {{0, 1, 1}, {0, 2, 2}, {2, 3, 1}}, {1, 3}), g, sets));
    EXPECT_TRUE(validate_tree(tree(0, {{0, 1, 1}, {0, 3, 1}}, {1, 3}), g, sets));        // no such edge
    EXPECT_TRUE(validate_tree(tree(0, {{0, 1, 1}, {0, 2, 2}, {2, 3, 1}}, {2, 3}), g, sets));  // wrong keyword
    EXPECT_TRUE(validate_tree(tree(2, {{2, 3, 1}}, {3, 3}), g, std::vector<std::vector<NodeId>>{{3}, {3}}));
}

TEST(Scoring, NodeScoreCountsDistinctKeywordNodes) {
    const std::vector<float> p{1.0f, 2.0f, 4.0f, 8.0f};
    EXPECT_DOUBLE_EQ(node_score(tree(0, {{0, 1, 1}, {0, 2, 1}}, {1, 2}), p), 7.0);
    EXPECT_DOUBLE_EQ(node_score(tree(0, {{0, 1, 1}}, {1, 1}), p), 3.0);
    EXPECT_DOUBLE_EQ(node_score(tree(0, {{0, 1, 1}}, {0, 1}), p), 3.0);
}

TEST(Scoring, EdgeScoreVariants) {
    const auto t = tree(0, {{0, 1, 1.5f}, {0, 2, 2.5f}}, {1, 2});
    ScoreConfig cfg;
    EXPECT_DOUBLE_EQ(edge_score(t, cfg), 1.0 / (1.0 + 1.0 / 4.0));
    cfg.edgeVariant = EdgeScoreVariant::reciprocal_sum;
    EXPECT_DOUBLE_EQ(edge_score(t, cfg), 1.0 / 5.0);
    EXPECT_DOUBLE_EQ(edge_score(tree(3, {}, {3, 3}), cfg), 1.0);
}

TEST(Scoring, TreeScoreCombinations) {
    ScoreConfig cfg;
    EXPECT_DOUBLE_EQ(tree_score(10.0, 0.5, cfg), 0.2 * 10.0 + 0.8 * 0.5);
    cfg.combine = Combine::multiplicative;
    EXPECT_DOUBLE_EQ(tree_score(10.0, 0.5, cfg), 0.5 * std::pow(10.0, 0.2));
    cfg.lambda = 1.5;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Scoring, GoodAndAcceptable) {
    ScoreConfig cfg;
    EXPECT_TRUE(is_good(0.96, 1.0, cfg));
    EXPECT_FALSE(is_good(0.94, 1.0, cfg));
    std::vector<AnswerTree> base{tree(0, {{0, 1, 1}}, {0, 1}), tree(0, {{0, 1, 1}, {0, 2, 1}}, {1, 2})};
    EXPECT_TRUE(is_acceptable(tree(5, {{5, 6, 1}, {5, 7, 1}}, {6, 7}), base));
    EXPECT_FALSE(is_acceptable(tree(5, {{5, 6, 1}, {5, 7, 1}, {7, 8, 1}}, {6, 8}), base));
    EXPECT_THROW(is_acceptable(base[0], {}), std::invalid_argument);
}

TEST(Scoring, RankOrderTieBreaks) {
    const std::vector<float> p(10, 1.0f);
    ScoreConfig cfg;
    auto a = score_answer(tree(2, {}, {2, 2}), p, cfg);
    auto b = score_answer(tree(3, {}, {3, 3}), p, cfg);
    EXPECT_TRUE(ranks_before(a, b));
    EXPECT_FALSE(ranks_before(b, a));
    EXPECT_FALSE(ranks_before(a, a));
    b.score += 1.0;
    EXPECT_TRUE(ranks_before(b, a));
}

// Replays random push/emit/drain sequences against a sorted-vector model.
TEST(OutputHeap, MatchesReplayOracle) {
    Rng rng(99);
    std::uniform_int_distribution<int> op(0, 9), node(0, 5), sc(0, 8);
    for (int trial = 0; trial < 300; ++trial) {
        OutputHeap heap;
        std::map<TreeKey, ScoredAnswer> pending;
        std::set<TreeKey> emitted;
        for (int step = 0; step < 40; ++step) {
            const int o = op(rng);
            if (o < 7) {
                const NodeId r = static_cast<NodeId>(node(rng));
                const NodeId c = static_cast<NodeId>(node(rng));
                ScoredAnswer a;
                a.tree = r == c ? tree(r, {}, {r}) : tree(r, {{r, c, 1.0f}}, {c});
                a.score = 0.25 * sc(rng);
                const auto key = tree_key(a.tree);
                bool expect = false;
                if (!emitted.count(key)) {
                    auto it = pending.find(key);
                    if (it == pending.end() || ranks_before(a, it->second)) {
                        pending[key] = a;
                        expect = true;
                    }
                }
                EXPECT_EQ(heap.push(a), expect);
            } else {
                const double bound = o == 9 ? -1.0 : 0.25 * sc(rng);
                const std::size_t limit = static_cast<std::size_t>(node(rng)) + 1;
                std::vector<ScoredAnswer> model;
                for (auto& [k, a] : pending) model.push_back(a);
                std::sort(model.begin(), model.end(), ranks_before);
                std::vector<ScoredAnswer> want;
                for (auto& a : model) {
                    if (want.size() == limit || a.score < bound) break;
                    want.push_back(a);
                }
                const auto got = o == 9 ? heap.drain(limit) : heap.emit(bound, limit);
                ASSERT_EQ(got.size(), want.size());
                for (std::size_t i = 0; i < got.size(); ++i) {
                    EXPECT_EQ(tree_key(got[i].tree), tree_key(want[i].tree));
                    EXPECT_EQ(got[i].score, want[i].score);
                    pending.erase(tree_key(want[i].tree));
                    emitted.insert(tree_key(want[i].tree));
                }
            }
            EXPECT_EQ(heap.size(), pending.size());
            EXPECT_EQ(heap.emitted_count(), emitted.size());
        }
    }
}
