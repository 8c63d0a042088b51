#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace embanks;
using embanks::testing::Rng;

TEST(Graph, BuilderSortsSlotsCanonically) {
    GraphBuilder b(3);
    b.add_edge(0, 2, 1.0f);
    b.add_edge(0, 1, 3.0f);
    b.add_edge(0, 1, 2.0f, false);
    const DataGraph g = b.build();
    ASSERT_EQ(g.slot_count(), 3u);
    EXPECT_EQ(g.target(0), 1u);
    EXPECT_FLOAT_EQ(g.weight(0), 2.0f);
    EXPECT_FALSE(g.is_forward(0));
    EXPECT_EQ(g.target(2), 2u);
    EXPECT_EQ(g.source(2), 0u);
}

TEST(Graph, RejectsBrokenArrays) {
    EXPECT_THROW(DataGraph({1.0f}, {0}, {0, 1}, {5}, {1.0f}, {1.0f}, {1}), std::invalid_argument);
    EXPECT_THROW(DataGraph({1.0f}, {0}, {0, 1}, {0}, {0.0f}, {1.0f}, {1}), std::invalid_argument);
    EXPECT_THROW(DataGraph({-1.0f}, {0}, {0, 0}, {}, {}, {}, {}), std::invalid_argument);
    EXPECT_THROW(DataGraph({1.0f, 1.0f}, {0, 0}, {0, 1}, {}, {}, {}, {}), std::invalid_argument);
    EXPECT_THROW(DataGraph({1.0f}, {0}, {0, 1}, {0}, {1.0f}, {1.0f}, {2}), std::invalid_argument);
}

TEST(Graph, InSlotsMatchLinearScan) {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const DataGraph g = embanks::testing::random_graph(rng, {.nodes = 15, .linkProbability = 0.3});
        for (NodeId v = 0; v < g.node_count(); ++v) {
            std::vector<EdgeSlot> expect;
            for (EdgeSlot s = 0; s < g.slot_count(); ++s)
                if (g.target(s) == v) expect.push_back(s);
            const auto got = g.in_slots(v);
            EXPECT_EQ(std::vector<EdgeSlot>(got.begin(), got.end()), expect);
        }
    }
}

TEST(Graph, PairingAndDegrees) {
    GraphBuilder b(3);
    b.add_link(0, 1, 1.0f, 1.0f);
    b.add_link(2, 1, 1.0f, 1.0f);
    const DataGraph g = b.build();
    EXPECT_TRUE(check_pairing(g));
    EXPECT_EQ(degree(g, 1, DegreeMode::in), 2u);
    EXPECT_EQ(degree(g, 1, DegreeMode::out), 0u);
    EXPECT_EQ(degree(g, 0, DegreeMode::out), 1u);
    EXPECT_EQ(bidirectional_degree(g, 1), 1u);

    GraphBuilder lone(2);
    lone.add_edge(0, 1, 1.0f, true);
    EXPECT_FALSE(check_pairing(lone.build()));
}

TEST(Graph, BackwardWeightsFollowInDegree) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const DataGraph g = embanks::testing::random_graph(rng, {.nodes = 12, .linkProbability = 0.3});
        const DataGraph w = assign_backward_weights(g, 1.0f);
        for (EdgeSlot s = 0; s < g.slot_count(); ++s) {
            if (g.is_forward(s)) {
                EXPECT_EQ(w.weight(s), g.weight(s));
                continue;
            }
            // count forward links that end in the backward slot's target
            std::uint64_t in = 0;
            for (EdgeSlot t = 0; t < g.slot_count(); ++t)
                if (g.is_forward(t) && g.target(t) == g.target(s)) ++in;
            const float expect = std::max(static_cast<float>(std::log1p(static_cast<double>(in))), 1.0f);
            EXPECT_FLOAT_EQ(w.weight(s), expect);
        }
    }
}

TEST(Graph, MemoryEstimateConstants) {
    EXPECT_EQ(estimate_memory(1'000'000, 10'000'000).bytes, 140'000'000u);
    EXPECT_EQ(estimate_memory(500'000, 5'000'000).bytes, 70'000'000u);
    EXPECT_EQ(estimate_memory(0, 0).bytes, 0u);
    GraphBuilder b(4);
    b.add_link(0, 1, 1.0f, 1.0f);
    EXPECT_EQ(estimate_memory(b.build()).bytes, 20u * 4 + 12u * 2);
}
