#include "embanks/storage.hpp"

#include <algorithm>
#include <fstream>

#include "binary_io.hpp"

namespace embanks {
namespace {

using detail::BinaryReader;
using detail::BinaryWriter;

constexpr std::uint32_t kFlagClusterIndex = 1u << 0;
constexpr std::uint32_t kFlagTables = 1u << 1;

void put_graph(BinaryWriter& w, const DataGraph& g) {
    w.put<std::uint32_t>(g.node_count());
    w.put<std::uint64_t>(g.slot_count());
    w.put_array(g.prestige());
    w.put_array(g.node_types());
    w.put_array(g.adjacency_offset());
    w.put_array(g.adjacent_nodes());
    w.put_array(g.edge_weights());
    w.put_array(g.edge_priorities());
    w.put_array(g.edge_forward());
}

DataGraph get_graph(BinaryReader& r, const std::filesystem::path& where) {
    const auto n = r.get<std::uint32_t>();
    const auto e = r.get<std::uint64_t>();
    auto prestige = r.get_array<float>(n);
    auto type = r.get_array<std::uint16_t>(n);
    auto offset = r.get_array<EdgeSlot>(static_cast<std::uint64_t>(n) + 1);
    auto adj = r.get_array<NodeId>(e);
    auto weight = r.get_array<float>(e);
    auto priority = r.get_array<float>(e);
    auto forward = r.get_array<std::uint8_t>(e);
    try {
        return DataGraph(std::move(prestige), std::move(type), std::move(offset), std::move(adj),
                         std::move(weight), std::move(priority), std::move(forward));
    } catch (const std::invalid_argument& ex) {
        throw StoreError(StoreErrorKind::checksum, where, std::string("invalid graph: ") + ex.what());
    }
}

void put_index(BinaryWriter& w, const KeywordIndex& idx) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(idx.term_count()));
    for (const auto& [term, ids] : idx.postings()) {
        w.put_string(term);
        w.put<std::uint32_t>(static_cast<std::uint32_t>(ids.size()));
        w.put_array(std::span<const std::uint32_t>(ids));
    }
}

KeywordIndex get_index(BinaryReader& r, const std::filesystem::path& where) {
    const auto terms = r.get<std::uint32_t>();
    std::map<std::string, KeywordIndex::Postings> postings;
    for (std::uint32_t t = 0; t < terms; ++t) {
        auto term = r.get_string();
        const auto count = r.get<std::uint32_t>();
        postings[std::move(term)] = r.get_array<std::uint32_t>(count);
    }
    try {
        return KeywordIndex(std::move(postings));
    } catch (const std::invalid_argument& ex) {
        throw StoreError(StoreErrorKind::checksum, where, ex.what());
    }
}

}  // namespace

const char* to_string(StoreErrorKind k) {
    switch (k) {
        case StoreErrorKind::io: return "io";
        case StoreErrorKind::bad_magic: return "bad_magic";
        case StoreErrorKind::version_mismatch: return "version_mismatch";
        case StoreErrorKind::truncated: return "truncated";
        case StoreErrorKind::checksum: return "checksum";
        case StoreErrorKind::out_of_order: return "out_of_order";
        case StoreErrorKind::missing: return "missing";
    }
    return "?";
}

void write_compressed_graph(const CompressedGraph& cg, const std::filesystem::path& path) {
    const bool tables = !cg.meta.tables.empty();
    BinaryWriter w("EMBK", (cg.clusterIndex ? kFlagClusterIndex : 0) | (tables ? kFlagTables : 0));
    put_graph(w, cg.clusterGraph);
    const auto& cl = cg.clustering;
    w.put<std::uint32_t>(cl.maxClusterSize);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(cl.nodeMapping.size()));
    w.put<std::uint32_t>(cl.cluster_count());
    w.put_array(std::span<const ClusterId>(cl.nodeMapping));
    w.put_array(std::span<const std::uint64_t>(cl.clusterOffset));
    w.put_array(std::span<const NodeId>(cl.nodeOrder));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(cg.meta.size()));
    w.put_array(std::span<const float>(cg.meta.diameter));
    w.put_array(std::span<const float>(cg.meta.minInOut));
    w.put_array(std::span<const std::uint64_t>(cg.meta.slotCount));
    if (tables) {
        for (const auto& t : cg.meta.tables) {
            w.put<std::uint32_t>(static_cast<std::uint32_t>(t.entries.size()));
            w.put<std::uint32_t>(static_cast<std::uint32_t>(t.exits.size()));
            w.put_array(std::span<const NodeId>(t.entries));
            w.put_array(std::span<const NodeId>(t.exits));
            w.put_array(std::span<const float>(t.cost));
        }
    }
    if (cg.clusterIndex) put_index(w, *cg.clusterIndex);
    detail::write_file(path, w.finish());
}

CompressedGraph read_compressed_graph(const std::filesystem::path& path) {
    const auto bytes = detail::read_file(path);
    BinaryReader r(bytes, "EMBK", path);
    CompressedGraph cg;
    cg.clusterGraph = get_graph(r, path);
    auto& cl = cg.clustering;
    cl.maxClusterSize = r.get<std::uint32_t>();
    const auto n = r.get<std::uint32_t>();
    const auto k = r.get<std::uint32_t>();
    cl.nodeMapping = r.get_array<ClusterId>(n);
    cl.clusterOffset = r.get_array<std::uint64_t>(static_cast<std::uint64_t>(k) + 1);
    cl.nodeOrder = r.get_array<NodeId>(n);
    try {
        cl.validate();
    } catch (const std::invalid_argument& ex) {
        throw StoreError(StoreErrorKind::checksum, path, ex.what());
    }
    const auto m = r.get<std::uint32_t>();
    cg.meta.diameter = r.get_array<float>(m);
    cg.meta.minInOut = r.get_array<float>(m);
    cg.meta.slotCount = r.get_array<std::uint64_t>(m);
    if (r.flags() & kFlagTables) {
        cg.meta.tables.resize(m);
        for (auto& t : cg.meta.tables) {
            const auto ne = r.get<std::uint32_t>();
            const auto nx = r.get<std::uint32_t>();
            t.entries = r.get_array<NodeId>(ne);
            t.exits = r.get_array<NodeId>(nx);
            t.cost = r.get_array<float>(static_cast<std::uint64_t>(ne) * nx);
        }
    }
    if (r.flags() & kFlagClusterIndex) cg.clusterIndex = get_index(r, path);
    r.expect_end();
    return cg;
}

ClusterFile make_cluster_file(const DataGraph& g, const Clustering& cl, ClusterId c,
                              std::span<const std::uint64_t> textOffset,
                              std::span<const std::uint32_t> textLength) {
    ClusterFile f;
    f.id = c;
    const auto members = cl.members(c);
    f.members.assign(members.begin(), members.end());
    std::vector<std::pair<NodeId, std::uint32_t>> byId;
    for (std::uint32_t i = 0; i < members.size(); ++i) byId.emplace_back(members[i], i);
    std::sort(byId.begin(), byId.end());
    auto local_of = [&](NodeId u) {
        return std::lower_bound(byId.begin(), byId.end(), std::pair<NodeId, std::uint32_t>{u, 0})->second;
    };
    for (std::uint32_t i = 0; i < members.size(); ++i) {
        const NodeId u = members[i];
        f.prestige.push_back(g.prestige(u));
        f.nodeType.push_back(g.node_type(u));
        f.textOffset.push_back(textOffset.empty() ? 0 : textOffset[u]);
        f.textLength.push_back(textLength.empty() ? 0 : textLength[u]);
        const auto r = g.out_slots(u);
        for (EdgeSlot s = r.first; s < r.last; ++s) {
            const NodeId v = g.target(s);
            const ClusterId cv = cl.nodeMapping[v];
            const auto fwd = static_cast<std::uint8_t>(g.is_forward(s));
            if (cv == c)
                f.intra.push_back({i, local_of(v), g.weight(s), g.priority(s), fwd});
            else
                f.boundary.push_back({i, v, cv, g.weight(s), g.priority(s), fwd});
        }
    }
    return f;
}

std::string cluster_file_name(ClusterId id, ClusterId clusterCount) {
    std::size_t width = 4;
    if (clusterCount > 0) width = std::max(width, std::to_string(clusterCount - 1).size());
    auto digits = std::to_string(id);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return digits + ".clu";
}

std::vector<std::uint8_t> encode_cluster(const ClusterFile& f) {
    BinaryWriter w("EMBC", 0);
    w.put<std::uint32_t>(f.id);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(f.members.size()));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(f.intra.size()));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(f.boundary.size()));
    w.put_array(std::span<const NodeId>(f.members));
    w.put_array(std::span<const float>(f.prestige));
    w.put_array(std::span<const std::uint16_t>(f.nodeType));
    w.put_array(std::span<const std::uint64_t>(f.textOffset));
    w.put_array(std::span<const std::uint32_t>(f.textLength));
    for (const auto& e : f.intra) {
        w.put(e.from);
        w.put(e.to);
        w.put(e.weight);
        w.put(e.priority);
        w.put(e.forward);
    }
    for (const auto& e : f.boundary) {
        w.put(e.from);
        w.put(e.target);
        w.put(e.targetCluster);
        w.put(e.weight);
        w.put(e.priority);
        w.put(e.forward);
    }
    return w.finish();
}

ClusterFile decode_cluster(std::span<const std::uint8_t> bytes, const std::filesystem::path& where) {
    BinaryReader r(bytes, "EMBC", where);
    ClusterFile f;
    f.id = r.get<std::uint32_t>();
    const auto m = r.get<std::uint32_t>();
    const auto ni = r.get<std::uint32_t>();
    const auto nb = r.get<std::uint32_t>();
    f.members = r.get_array<NodeId>(m);
    f.prestige = r.get_array<float>(m);
    f.nodeType = r.get_array<std::uint16_t>(m);
    f.textOffset = r.get_array<std::uint64_t>(m);
    f.textLength = r.get_array<std::uint32_t>(m);
    f.intra.resize(ni);
    for (auto& e : f.intra) {
        e.from = r.get<std::uint32_t>();
        e.to = r.get<std::uint32_t>();
        e.weight = r.get<float>();
        e.priority = r.get<float>();
        e.forward = r.get<std::uint8_t>();
        if (e.from >= m || e.to >= m) throw StoreError(StoreErrorKind::checksum, where, "intra edge out of range");
    }
    f.boundary.resize(nb);
    for (auto& e : f.boundary) {
        e.from = r.get<std::uint32_t>();
        e.target = r.get<NodeId>();
        e.targetCluster = r.get<ClusterId>();
        e.weight = r.get<float>();
        e.priority = r.get<float>();
        e.forward = r.get<std::uint8_t>();
        if (e.from >= m) throw StoreError(StoreErrorKind::checksum, where, "boundary edge out of range");
        if (e.targetCluster == f.id)
            throw StoreError(StoreErrorKind::checksum, where, "boundary edge targets its own cluster");
    }
    r.expect_end();
    return f;
}

ClusterStoreWriter::ClusterStoreWriter(std::filesystem::path storeDir, ClusterId clusterCount)
    : dir_(std::move(storeDir) / "clusters"), count_(clusterCount) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw StoreError(StoreErrorKind::io, dir_, ec.message());
}

void ClusterStoreWriter::write(const ClusterFile& f) {
    if (last_ && f.id <= *last_)
        throw StoreError(StoreErrorKind::out_of_order, dir_,
                         "cluster " + std::to_string(f.id) + " written after " + std::to_string(*last_));
    if (f.id >= count_)
        throw StoreError(StoreErrorKind::out_of_order, dir_, "cluster id " + std::to_string(f.id) + " out of range");
    detail::write_file(dir_ / cluster_file_name(f.id, count_), encode_cluster(f));
    last_ = f.id;
}

ClusterFile read_cluster(ClusterId id, const std::filesystem::path& storeDir, ClusterId clusterCount) {
    const auto path = storeDir / "clusters" / cluster_file_name(id, clusterCount);
    auto f = decode_cluster(detail::read_file(path), path);
    if (f.id != id) throw StoreError(StoreErrorKind::checksum, path, "file holds another cluster id");
    return f;
}

void write_keyword_index(const KeywordIndex& idx, const std::filesystem::path& path) {
    BinaryWriter w("EMBI", 0);
    put_index(w, idx);
    detail::write_file(path, w.finish());
}

KeywordIndex read_keyword_index(const std::filesystem::path& path) {
    const auto bytes = detail::read_file(path);
    BinaryReader r(bytes, "EMBI", path);
    auto idx = get_index(r, path);
    r.expect_end();
    return idx;
}

void text_layout(const NodeMeta& meta, std::vector<std::uint64_t>& offset, std::vector<std::uint32_t>& length) {
    offset.resize(meta.size());
    length.resize(meta.size());
    std::uint64_t pos = 0;
    for (std::size_t u = 0; u < meta.size(); ++u) {
        offset[u] = pos;
        length[u] = static_cast<std::uint32_t>(meta.text[u].size());
        pos += meta.text[u].size();
    }
}

void write_tuples(const DataGraph& g, const NodeMeta& meta, const std::filesystem::path& path,
                  const std::filesystem::path& textPath) {
    BinaryWriter w("EMBT", 0);
    put_graph(w, g);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(meta.relationNames.size()));
    for (const auto& name : meta.relationNames) w.put_string(name);
    w.put_array(std::span<const std::uint16_t>(meta.relation));
    std::vector<std::uint64_t> offset;
    std::vector<std::uint32_t> length;
    text_layout(meta, offset, length);
    w.put_array(std::span<const std::uint32_t>(length));
    detail::write_file(path, w.finish());

    std::vector<std::uint8_t> text;
    for (const auto& t : meta.text) text.insert(text.end(), t.begin(), t.end());
    detail::write_file(textPath, text);
}

std::pair<DataGraph, NodeMeta> read_tuples(const std::filesystem::path& path,
                                           const std::filesystem::path& textPath) {
    const auto bytes = detail::read_file(path);
    BinaryReader r(bytes, "EMBT", path);
    auto g = get_graph(r, path);
    NodeMeta meta;
    const auto rel = r.get<std::uint32_t>();
    for (std::uint32_t i = 0; i < rel; ++i) meta.relationNames.push_back(r.get_string());
    meta.relation = r.get_array<std::uint16_t>(g.node_count());
    const auto length = r.get_array<std::uint32_t>(g.node_count());
    r.expect_end();

    const auto text = detail::read_file(textPath);
    std::uint64_t pos = 0;
    meta.text.reserve(length.size());
    for (auto len : length) {
        if (pos + len > text.size()) throw StoreError(StoreErrorKind::truncated, textPath, "text file too short");
        meta.text.emplace_back(reinterpret_cast<const char*>(text.data() + pos), len);
        pos += len;
    }
    return {std::move(g), std::move(meta)};
}

NodeId ExpandedGraph::local_id(NodeId global) const {
    const auto it = std::lower_bound(globalId.begin(), globalId.end(), global);
    if (it == globalId.end() || *it != global) return kNoNode;
    return static_cast<NodeId>(it - globalId.begin());
}

Store::Store(std::filesystem::path dir) : dir_(std::move(dir)) {
    cg_ = read_compressed_graph(dir_ / "graph.emb");
    nodeIndex_ = read_keyword_index(dir_ / "index.kwi");
    clusterIndex_ = cg_.clusterIndex ? *cg_.clusterIndex
                                     : project_to_clusters(nodeIndex_, cg_.clustering.nodeMapping);
}

ClusterFile Store::read_cluster(ClusterId id) const {
    ++reads_;
    return embanks::read_cluster(id, dir_, cg_.clustering.cluster_count());
}

ExpandedGraph Store::expand_clusters(std::span<const ClusterId> ids) const {
    ExpandedGraph x;
    x.clusters.assign(ids.begin(), ids.end());
    std::sort(x.clusters.begin(), x.clusters.end());
    x.clusters.erase(std::unique(x.clusters.begin(), x.clusters.end()), x.clusters.end());
    std::vector<ClusterFile> files;
    files.reserve(x.clusters.size());
    for (auto c : x.clusters) files.push_back(read_cluster(c));

    struct NodeInfo {
        NodeId global;
        float prestige;
        std::uint16_t type;
        std::uint64_t textOffset;
        std::uint32_t textLength;
    };
    std::vector<NodeInfo> nodes;
    for (const auto& f : files)
        for (std::size_t i = 0; i < f.members.size(); ++i)
            nodes.push_back({f.members[i], f.prestige[i], f.nodeType[i], f.textOffset[i], f.textLength[i]});
    std::sort(nodes.begin(), nodes.end(), [](const NodeInfo& a, const NodeInfo& b) { return a.global < b.global; });

    GraphBuilder b;
    for (const auto& n : nodes) {
        x.globalId.push_back(n.global);
        x.textOffset.push_back(n.textOffset);
        x.textLength.push_back(n.textLength);
        b.add_node(n.prestige, n.type);
    }
    for (const auto& f : files) {
        for (const auto& e : f.intra)
            b.add_edge(x.local_id(f.members[e.from]), x.local_id(f.members[e.to]), e.weight, e.forward != 0,
                       e.priority);
        for (const auto& e : f.boundary) {
            if (!std::binary_search(x.clusters.begin(), x.clusters.end(), e.targetCluster)) continue;
            b.add_edge(x.local_id(f.members[e.from]), x.local_id(e.target), e.weight, e.forward != 0, e.priority);
        }
    }
    x.graph = b.build();
    return x;
}

std::string Store::node_text(std::uint64_t offset, std::uint32_t length) const {
    const auto path = dir_ / "text.dat";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError(StoreErrorKind::missing, path, "cannot open");
    std::string s(length, '\0');
    in.seekg(static_cast<std::streamoff>(offset));
    in.read(s.data(), length);
    if (in.gcount() != static_cast<std::streamsize>(length))
        throw StoreError(StoreErrorKind::truncated, path, "text out of range");
    return s;
}

void write_cluster_store(const std::filesystem::path& storeDir, const DataGraph& g, const NodeMeta& meta,
                         const KeywordIndex& nodeIndex, const Clustering& cl, const WeightConfig& wcfg,
                         bool withTables) {
    CompressedGraph cg;
    cg.clusterGraph = build_cluster_graph(g, cl, wcfg);
    cg.clustering = cl;
    cg.meta = compute_cluster_metadata(g, cl, withTables);
    cg.clusterIndex = project_to_clusters(nodeIndex, cl.nodeMapping);

    std::error_code ec;
    std::filesystem::remove_all(storeDir / "clusters", ec);
    std::vector<std::uint64_t> offset;
    std::vector<std::uint32_t> length;
    text_layout(meta, offset, length);
    ClusterStoreWriter writer(storeDir, cl.cluster_count());
    for (ClusterId c = 0; c < cl.cluster_count(); ++c) writer.write(make_cluster_file(g, cl, c, offset, length));
    write_compressed_graph(cg, storeDir / "graph.emb");
}

}  // namespace embanks
