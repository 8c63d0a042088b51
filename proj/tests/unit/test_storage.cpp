#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <set>

#include "oracles.hpp"

using namespace embanks;
using embanks::testing::Rng;
namespace fs = std::filesystem;

namespace {

std::vector<char> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::vector<char>& bytes) {
    std::ofstream(p, std::ios::binary | std::ios::trunc).write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

StoreErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const StoreError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no StoreError thrown";
    return StoreErrorKind::io;
}

CompressedGraph random_compressed(Rng& rng, bool tables) {
    const DataGraph g = embanks::testing::random_graph(rng, {.nodes = 30, .linkProbability = 0.1});
    CompressedGraph cg;
    cg.clustering = cluster_greedy_minimum(g, 5, rng());
    cg.clusterGraph = build_cluster_graph(g, cg.clustering, {});
    cg.meta = compute_cluster_metadata(g, cg.clustering, tables);
    if (tables) cg.clusterIndex = KeywordIndex({{"xml", {0, 2}}, {"query", {1}}});
    return cg;
}

}  // namespace

TEST(Storage, ClusterFileNames) {
    EXPECT_EQ(cluster_file_name(7, 10), "0007.clu");
    EXPECT_EQ(cluster_file_name(42, 100000), "00042.clu");
    EXPECT_EQ(cluster_file_name(0, 0), "0000.clu");
}

TEST(Storage, CompressedGraphRoundTripIsBitExact) {
    Rng rng(4);
    const auto dir = embanks::testing::temp_dir("cg");
    for (int trial = 0; trial < 10; ++trial) {
        const auto cg = random_compressed(rng, trial % 2 == 0);
        write_compressed_graph(cg, dir / "a.emb");
        const auto back = read_compressed_graph(dir / "a.emb");
        EXPECT_EQ(back, cg);
        write_compressed_graph(back, dir / "b.emb");
        EXPECT_EQ(slurp(dir / "a.emb"), slurp(dir / "b.emb"));
    }
}

TEST(Storage, HeaderErrorsAreClassified) {
    Rng rng(6);
    const auto dir = embanks::testing::temp_dir("corrupt");
    write_compressed_graph(random_compressed(rng, true), dir / "g.emb");
    const auto good = slurp(dir / "g.emb");
    const auto read = [&] { read_compressed_graph(dir / "g.emb"); };

    auto bytes = good;
    bytes[0] = 'X';
    spit(dir / "g.emb", bytes);
    EXPECT_EQ(kind_of(read), StoreErrorKind::bad_magic);

    bytes = good;
    bytes[4] = 9;
    spit(dir / "g.emb", bytes);
    EXPECT_EQ(kind_of(read), StoreErrorKind::version_mismatch);

    bytes = good;
    bytes.resize(bytes.size() - 10);
    spit(dir / "g.emb", bytes);
    EXPECT_EQ(kind_of(read), StoreErrorKind::truncated);

    bytes = {good.begin(), good.begin() + 2};
    spit(dir / "g.emb", bytes);
    EXPECT_EQ(kind_of(read), StoreErrorKind::truncated);

    bytes = good;
    bytes[bytes.size() / 2] ^= 0x40;
    spit(dir / "g.emb", bytes);
    EXPECT_EQ(kind_of(read), StoreErrorKind::checksum);

    bytes = good;
    bytes.push_back(0);
    spit(dir / "g.emb", bytes);
    EXPECT_EQ(kind_of(read), StoreErrorKind::checksum);

    fs::remove(dir / "g.emb");
    EXPECT_EQ(kind_of(read), StoreErrorKind::missing);

    spit(dir / "g.emb", good);
    EXPECT_NO_THROW(read());
    EXPECT_EQ(kind_of([&] { read_keyword_index(dir / "g.emb"); }), StoreErrorKind::bad_magic);
}

TEST(Storage, ClusterFilesRoundTripAndOrder) {
    Rng rng(12);
    const auto dir = embanks::testing::temp_dir("clu");
    const DataGraph g = embanks::testing::random_graph(rng, {.nodes = 40, .linkProbability = 0.1});
    const auto cl = cluster_connection_naive(g, 6, 9);
    {
        ClusterStoreWriter w(dir, cl.cluster_count());
        for (ClusterId c = 0; c < cl.cluster_count(); ++c) w.write(make_cluster_file(g, cl, c));
        EXPECT_EQ(kind_of([&] { w.write(make_cluster_file(g, cl, 0)); }), StoreErrorKind::out_of_order);
    }
    for (ClusterId c = 0; c < cl.cluster_count(); ++c) {
        const auto f = make_cluster_file(g, cl, c);
        EXPECT_EQ(read_cluster(c, dir, cl.cluster_count()), f);
        EXPECT_EQ(decode_cluster(encode_cluster(f), "mem"), f);
        EXPECT_EQ(f.members.size(), cl.size(c));
    }
    ClusterStoreWriter w2(dir, cl.cluster_count());
    EXPECT_EQ(kind_of([&] { w2.write(make_cluster_file(g, cl, 0)); w2.write(make_cluster_file(g, cl, 0)); }),
              StoreErrorKind::out_of_order);
    ClusterStoreWriter w3(dir, 1);
    EXPECT_EQ(kind_of([&] { w3.write(make_cluster_file(g, cl, 1)); }), StoreErrorKind::out_of_order);
    EXPECT_EQ(kind_of([&] { read_cluster(cl.cluster_count() + 5, dir, cl.cluster_count()); }), StoreErrorKind::missing);
}

TEST(Storage, IndexAndTuplesRoundTrip) {
    Rng rng(3);
    const auto dir = embanks::testing::temp_dir("tuples");
    const DataGraph g = embanks::testing::random_graph(rng, {.nodes = 25, .linkProbability = 0.1});
    const auto sets = embanks::testing::random_keyword_sets(rng, 25, 2, 5);
    const NodeMeta meta = embanks::testing::random_meta(rng, 25, sets);
    const auto idx = build_index(meta);
    write_keyword_index(idx, dir / "index.kwi");
    EXPECT_EQ(read_keyword_index(dir / "index.kwi"), idx);
    write_tuples(g, meta, dir / "tuples.emg", dir / "text.dat");
    const auto [g2, meta2] = read_tuples(dir / "tuples.emg", dir / "text.dat");
    EXPECT_EQ(g2, g);
    EXPECT_EQ(meta2.text, meta.text);
    EXPECT_EQ(meta2.relation, meta.relation);
    EXPECT_EQ(meta2.relationNames, meta.relationNames);
}

TEST(Storage, ExpandMatchesInducedSubgraph) {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const auto dir = embanks::testing::temp_dir("expand");
        const DataGraph g = embanks::testing::random_graph(rng, {.nodes = 50, .linkProbability = 0.08});
        const auto sets = embanks::testing::random_keyword_sets(rng, 50, 2, 5);
        const NodeMeta meta = embanks::testing::random_meta(rng, 50, sets);
        const auto cl = cluster_greedy_minimum(g, 7, static_cast<std::uint64_t>(trial));
        embanks::testing::build_store(dir, g, meta, cl);
        const Store store(dir);
        EXPECT_EQ(store.compressed().clustering, cl);
        EXPECT_EQ(store.cluster_index(), project_to_clusters(build_index(meta), cl.nodeMapping));

        std::vector<ClusterId> pick;
        for (ClusterId c = 0; c < cl.cluster_count(); ++c)
            if (rng() % 2) pick.push_back(c);
        pick.push_back(pick.empty() ? 0 : pick.front());  // duplicates are ignored
        const auto x = store.expand_clusters(pick);
        EXPECT_EQ(x.graph, embanks::testing::induced_subgraph(g, cl, pick));
        for (NodeId l = 0; l < x.globalId.size(); ++l) {
            EXPECT_EQ(x.local_id(x.globalId[l]), l);
            EXPECT_EQ(store.node_text(x.textOffset[l], x.textLength[l]), meta.text[x.globalId[l]]);
        }

        std::vector<ClusterId> all(cl.cluster_count());
        std::iota(all.begin(), all.end(), 0);
        const auto full = store.expand_clusters(all);
        EXPECT_EQ(full.graph, g);
        EXPECT_EQ(store.cluster_reads(), std::set<ClusterId>(pick.begin(), pick.end()).size() + all.size());
    }
}
