#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "oracles.hpp"

using namespace embanks;
using embanks::testing::Rng;

namespace {

constexpr ClusterAlgorithm kAll[] = {ClusterAlgorithm::close_to_1, ClusterAlgorithm::greedy_minimum,
                                     ClusterAlgorithm::connection_naive, ClusterAlgorithm::adjacency_naive};

// Some member reaches every other member along slots that stay inside the cluster.
bool rooted_inside(const DataGraph& g, const Clustering& cl, ClusterId c) {
    const auto mem = cl.members(c);
    for (NodeId start : mem) {
        std::set<NodeId> seen{start};
        std::vector<NodeId> stack{start};
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            const auto r = g.out_slots(u);
            for (EdgeSlot s = r.first; s < r.last; ++s) {
                const NodeId v = g.target(s);
                if (cl.nodeMapping[v] == c && seen.insert(v).second) stack.push_back(v);
            }
        }
        if (seen.size() == mem.size()) return true;
    }
    return false;
}

Clustering random_clustering(Rng& rng, NodeId n, ClusterId k) {
    std::vector<ClusterId> mapping(n);
    for (NodeId u = 0; u < n; ++u) mapping[u] = u < k ? u : std::uniform_int_distribution<ClusterId>(0, k - 1)(rng);
    return Clustering::from_mapping(std::move(mapping), n);
}

}  // namespace

TEST(Clustering, ValidateRejectsInconsistentParts) {
    auto cl = Clustering::from_mapping({0, 1, 0}, 2);
    EXPECT_NO_THROW(cl.validate());
    EXPECT_EQ(cl.cluster_count(), 2u);
    EXPECT_EQ(cl.size(0), 2u);
    auto bad = cl;
    bad.maxClusterSize = 1;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = cl;
    bad.nodeMapping[0] = 1;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    EXPECT_THROW(Clustering::from_mapping({0, 2}, 2), std::invalid_argument);
    const auto id = Clustering::identity(4);
    EXPECT_EQ(id.cluster_count(), 4u);
    EXPECT_EQ(id.nodeMapping, (std::vector<ClusterId>{0, 1, 2, 3}));
}

TEST(Clustering, AlgorithmsProduceValidPartitions) {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const DataGraph g = embanks::testing::random_graph(rng, {.nodes = 60, .linkProbability = 0.05});
        for (auto algo : kAll)
            for (std::uint32_t size : {1u, 4u, 10u}) {
                const auto cl = run_clustering(algo, g, size, 3);
                EXPECT_NO_THROW(cl.validate());
                EXPECT_EQ(cl.nodeMapping.size(), g.node_count());
                for (ClusterId c = 0; c < cl.cluster_count(); ++c) {
                    EXPECT_LE(cl.size(c), size);
                    // greedy-minimum may fill a cluster from several seeds
                    if (algo == ClusterAlgorithm::close_to_1 || algo == ClusterAlgorithm::connection_naive) {
                        EXPECT_TRUE(rooted_inside(g, cl, c)) << to_string(algo);
                    }
                }
                if (algo == ClusterAlgorithm::greedy_minimum) {
                    EXPECT_EQ(cl.cluster_count(), (g.node_count() + size - 1) / size);
                }
                EXPECT_EQ(cl, run_clustering(algo, g, size, 3)) << "not deterministic";
            }
    }
}

TEST(Clustering, SeedChangesRandomizedAlgorithms) {
    Rng rng(2);
    const DataGraph g = embanks::testing::random_graph(rng, {.nodes = 200, .linkProbability = 0.02});
    EXPECT_NE(cluster_greedy_minimum(g, 8, 1), cluster_greedy_minimum(g, 8, 2));
    EXPECT_NE(cluster_connection_naive(g, 8, 1), cluster_connection_naive(g, 8, 2));
}

TEST(Clustering, CloseTo1PrefersBalancedLinks) {
    GraphBuilder b(4);
    b.add_link(0, 1, 1.0f, 5.0f);
    b.add_link(0, 2, 1.0f, 1.0f);
    b.add_link(0, 3, 1.0f, 2.0f);
    const auto cl = cluster_close_to_1(b.build(), 2);
    EXPECT_EQ(cl.nodeMapping[0], cl.nodeMapping[2]);
    EXPECT_NE(cl.nodeMapping[0], cl.nodeMapping[1]);
}

TEST(Clustering, AdjacencyNaiveGroupsIdenticalNeighborLists) {
    GraphBuilder b(6);
    for (NodeId u : {1u, 2u, 3u}) b.add_edge(u, 0, 1.0f);
    b.add_edge(4, 5, 1.0f);
    const auto cl = cluster_adjacency_naive(b.build(), 3);
    EXPECT_EQ(cl.nodeMapping[1], cl.nodeMapping[2]);
    EXPECT_EQ(cl.nodeMapping[2], cl.nodeMapping[3]);
    EXPECT_NE(cl.nodeMapping[1], cl.nodeMapping[4]);
}

TEST(Clustering, NamesRoundTrip) {
    for (auto a : kAll) EXPECT_EQ(parse_cluster_algorithm(to_string(a)), a);
    EXPECT_THROW(parse_cluster_algorithm("kmeans"), std::invalid_argument);
    for (auto c : {EdgeCombiner::inverse_sum, EdgeCombiner::harmonic_mean, EdgeCombiner::min})
        EXPECT_EQ(parse_edge_combiner(to_string(c)), c);
    for (auto c : {PrestigeCombiner::sum, PrestigeCombiner::max, PrestigeCombiner::avg})
        EXPECT_EQ(parse_prestige_combiner(to_string(c)), c);
}

TEST(Combiners, Algebra) {
    const std::vector<double> w{1.0, 2.0, 4.0};
    const double is = 1.0 / (1.0 + 0.5 + 0.25);
    EXPECT_DOUBLE_EQ(combine_edge_weights(w, EdgeCombiner::inverse_sum), is);
    EXPECT_DOUBLE_EQ(combine_edge_weights(w, EdgeCombiner::harmonic_mean), 3.0 * is);
    EXPECT_DOUBLE_EQ(combine_edge_weights(w, EdgeCombiner::min), 1.0);
    const std::vector<double> one{2.5};
    for (auto c : {EdgeCombiner::inverse_sum, EdgeCombiner::harmonic_mean, EdgeCombiner::min})
        EXPECT_EQ(combine_edge_weights(one, c), 2.5);
    EXPECT_THROW(combine_edge_weights({}, EdgeCombiner::min), std::invalid_argument);
    EXPECT_DOUBLE_EQ(combine_prestige(w, PrestigeCombiner::sum), 7.0);
    EXPECT_DOUBLE_EQ(combine_prestige(w, PrestigeCombiner::max), 4.0);
    EXPECT_DOUBLE_EQ(combine_prestige(w, PrestigeCombiner::avg), 7.0 / 3.0);
}

TEST(ClusterGraph, MatchesMemberOracle) {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const DataGraph g = embanks::testing::random_graph(rng, {.nodes = 25, .linkProbability = 0.15});
        const auto cl = random_clustering(rng, 25, 6);
        for (auto ec : {EdgeCombiner::inverse_sum, EdgeCombiner::harmonic_mean, EdgeCombiner::min}) {
            const WeightConfig wcfg{ec, PrestigeCombiner::max};
            const DataGraph cg = build_cluster_graph(g, cl, wcfg);
            ASSERT_EQ(cg.node_count(), cl.cluster_count());
            std::map<std::pair<ClusterId, ClusterId>, std::vector<EdgeSlot>> members;
            for (EdgeSlot s = 0; s < g.slot_count(); ++s) {
                const ClusterId a = cl.nodeMapping[g.source(s)], b = cl.nodeMapping[g.target(s)];
                if (a != b) members[{a, b}].push_back(s);
            }
            ASSERT_EQ(cg.slot_count(), members.size());
            for (EdgeSlot s = 0; s < cg.slot_count(); ++s) {
                const auto& ms = members.at({cg.source(s), cg.target(s)});
                std::vector<double> w;
                double prio = 0.0;
                std::size_t fwd = 0;
                for (auto m : ms) {
                    w.push_back(g.weight(m));
                    prio += g.priority(m);
                    fwd += g.is_forward(m);
                }
                std::sort(w.begin(), w.end());
                EXPECT_NEAR(cg.weight(s), combine_edge_weights(w, ec), 1e-5);
                EXPECT_NEAR(cg.priority(s), prio / static_cast<double>(ms.size()), 1e-5);
                const bool expectFwd =
                    2 * fwd > ms.size() || (2 * fwd == ms.size() && cg.source(s) < cg.target(s));
                EXPECT_EQ(cg.is_forward(s), expectFwd);
            }
            for (ClusterId c = 0; c < cl.cluster_count(); ++c) {
                float mx = 0.0f;
                for (NodeId u : cl.members(c)) mx = std::max(mx, g.prestige(u));
                EXPECT_EQ(cg.prestige(c), mx);
            }
        }
    }
}

TEST(ClusterMetadata, MatchesFloydWarshallPerCluster) {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const DataGraph g = embanks::testing::random_graph(rng, {.nodes = 20, .linkProbability = 0.2});
        const auto cl = random_clustering(rng, 20, 4);
        const auto meta = compute_cluster_metadata(g, cl, true);
        ASSERT_EQ(meta.size(), cl.cluster_count());
        for (ClusterId c = 0; c < cl.cluster_count(); ++c) {
            const std::vector<ClusterId> one{c};
            const DataGraph sub = embanks::testing::induced_subgraph(g, cl, one);
            const auto d = embanks::testing::all_pairs(sub);
            std::vector<NodeId> mem(cl.members(c).begin(), cl.members(c).end());
            std::sort(mem.begin(), mem.end());
            const std::size_t m = mem.size();
            double diam = 0.0;
            for (double x : d)
                if (!std::isinf(x)) diam = std::max(diam, x);
            EXPECT_FLOAT_EQ(meta.diameter[c], static_cast<float>(diam));

            std::vector<std::size_t> entries, exits;
            std::uint64_t slots = 0;
            for (std::size_t i = 0; i < m; ++i) {
                const NodeId u = mem[i];
                slots += g.out_slots(u).size();
                bool in = false, out = false;
                for (EdgeSlot s = 0; s < g.slot_count(); ++s) {
                    if (g.source(s) == u && cl.nodeMapping[g.target(s)] != c) out = true;
                    if (g.target(s) == u && cl.nodeMapping[g.source(s)] != c) in = true;
                }
                if (in) entries.push_back(i);
                if (out) exits.push_back(i);
            }
            double best = std::numeric_limits<double>::infinity();
            for (auto e : entries)
                for (auto x : exits) best = std::min(best, d[e * m + x]);
            EXPECT_EQ(meta.minInOut[c], static_cast<float>(best));
            EXPECT_EQ(meta.slotCount[c], slots);
            EXPECT_EQ(meta.tables[c].entries.size(), entries.size());
            EXPECT_EQ(meta.tables[c].cost.size(), entries.size() * exits.size());
        }
        const std::vector<ClusterId> all{0, 1, 2, 3};
        EXPECT_EQ(expansion_bytes(cl, meta, all), 20u * 20 + 12u * g.slot_count());
    }
}

TEST(ClusterBounds, SandwichOptimalRealization) {
    Rng rng(31);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const DataGraph g = embanks::testing::random_graph(rng, {.nodes = 16, .linkProbability = 0.18});
        const auto cl = cluster_connection_naive(g, 4, static_cast<std::uint64_t>(trial));
        const auto meta = compute_cluster_metadata(g, cl);
        const DataGraph cg = build_cluster_graph(g, cl, {EdgeCombiner::min, PrestigeCombiner::sum});
        const auto sets = embanks::testing::random_keyword_sets(rng, 16, 2, 3);
        KeywordSets cks;
        std::vector<ClusterId> kwClusters;
        for (const auto& s : sets) {
            std::set<ClusterId> cs;
            for (NodeId u : s) cs.insert(cl.nodeMapping[u]);
            cks.sets.emplace_back(cs.begin(), cs.end());
            kwClusters.insert(kwClusters.end(), cs.begin(), cs.end());
        }
        SearchConfig cfg;
        cfg.k = 1000;
        cfg.maxCandidates = 0;
        for (const auto& a : backward_search(cg, cks, cfg).answers) {
            const double opt = embanks::testing::best_realization_cost(g, cl, a.tree, sets);
            if (std::isinf(opt)) continue;
            const auto b = answer_cost_bounds(a.tree, meta, kwClusters);
            EXPECT_LE(b.lower, opt + 1e-9);
            EXPECT_GE(b.upper, opt - 1e-9);
            ++checked;
        }
    }
    EXPECT_GT(checked, 50);
    AnswerTree t{7, {}, {7}, {7}};
    EXPECT_THROW(answer_cost_bounds(t, ClusterMetadata{}, {}), std::out_of_range);
}
