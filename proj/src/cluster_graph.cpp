#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

#include "embanks/clustering.hpp"

namespace embanks {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Directed shortest distances inside one cluster, row-major over local indices.
std::vector<double> intra_distances(const DataGraph& g, const Clustering& cl, ClusterId c,
                                    const std::vector<std::uint32_t>& local) {
    const auto members = cl.members(c);
    const std::size_t m = members.size();
    std::vector<double> dist(m * m, kInf);
    using Entry = std::pair<double, std::uint32_t>;
    for (std::uint32_t a = 0; a < m; ++a) {
        double* row = dist.data() + a * m;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
        row[a] = 0.0;
        heap.emplace(0.0, a);
        while (!heap.empty()) {
            const auto [d, x] = heap.top();
            heap.pop();
            if (d > row[x]) continue;
            const auto r = g.out_slots(members[x]);
            for (EdgeSlot s = r.first; s < r.last; ++s) {
                const NodeId v = g.target(s);
                if (cl.nodeMapping[v] != c) continue;
                const auto y = local[v];
                const double nd = d + g.weight(s);
                if (nd < row[y]) {
                    row[y] = nd;
                    heap.emplace(nd, y);
                }
            }
        }
    }
    return dist;
}

}  // namespace

EdgeCombiner parse_edge_combiner(std::string_view s) {
    if (s == "invsum") return EdgeCombiner::inverse_sum;
    if (s == "harmonic") return EdgeCombiner::harmonic_mean;
    if (s == "min") return EdgeCombiner::min;
    throw std::invalid_argument("unknown edge combiner '" + std::string(s) + "'");
}

PrestigeCombiner parse_prestige_combiner(std::string_view s) {
    if (s == "sum") return PrestigeCombiner::sum;
    if (s == "max") return PrestigeCombiner::max;
    if (s == "avg") return PrestigeCombiner::avg;
    throw std::invalid_argument("unknown prestige combiner '" + std::string(s) + "'");
}

const char* to_string(EdgeCombiner c) {
    switch (c) {
        case EdgeCombiner::inverse_sum: return "invsum";
        case EdgeCombiner::harmonic_mean: return "harmonic";
        case EdgeCombiner::min: return "min";
    }
    return "?";
}

const char* to_string(PrestigeCombiner c) {
    switch (c) {
        case PrestigeCombiner::sum: return "sum";
        case PrestigeCombiner::max: return "max";
        case PrestigeCombiner::avg: return "avg";
    }
    return "?";
}

double combine_edge_weights(std::span<const double> weights, EdgeCombiner c) {
    if (weights.empty()) throw std::invalid_argument("combine_edge_weights: empty weight set");
    if (weights.size() == 1) return weights[0];
    if (c == EdgeCombiner::min) return *std::min_element(weights.begin(), weights.end());
    double inverse = 0.0;
    for (auto w : weights) inverse += 1.0 / w;
    if (c == EdgeCombiner::harmonic_mean) inverse /= static_cast<double>(weights.size());
    return 1.0 / inverse;
}

double combine_prestige(std::span<const double> prestige, PrestigeCombiner c) {
    if (prestige.empty()) throw std::invalid_argument("combine_prestige: empty set");
    double sum = 0.0, mx = prestige[0];
    for (auto p : prestige) {
        sum += p;
        mx = std::max(mx, p);
    }
    switch (c) {
        case PrestigeCombiner::sum: return sum;
        case PrestigeCombiner::max: return mx;
        case PrestigeCombiner::avg: return sum / static_cast<double>(prestige.size());
    }
    return sum;
}

DataGraph build_cluster_graph(const DataGraph& g, const Clustering& cl, const WeightConfig& wcfg) {
    if (cl.nodeMapping.size() != g.node_count())
        throw std::invalid_argument("build_cluster_graph: clustering does not cover the graph");
    const ClusterId k = cl.cluster_count();
    GraphBuilder b;
    std::vector<double> buf;
    for (ClusterId c = 0; c < k; ++c) {
        buf.clear();
        for (auto u : cl.members(c)) buf.push_back(g.prestige(u));
        b.add_node(static_cast<float>(combine_prestige(buf, wcfg.prestigeCombiner)),
                   g.node_type(cl.members(c)[0]));
    }

    struct Member {
        ClusterId from, to;
        float weight;
        bool forward;
        float priority;
    };
    std::vector<Member> cross;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto r = g.out_slots(u);
        for (EdgeSlot s = r.first; s < r.last; ++s) {
            const ClusterId cu = cl.nodeMapping[u], cv = cl.nodeMapping[g.target(s)];
            if (cu != cv) cross.push_back({cu, cv, g.weight(s), g.is_forward(s), g.priority(s)});
        }
    }
    std::sort(cross.begin(), cross.end(), [](const Member& a, const Member& b) {
        return std::tie(a.from, a.to, a.weight, a.forward, a.priority) <
               std::tie(b.from, b.to, b.weight, b.forward, b.priority);
    });
    for (std::size_t i = 0; i < cross.size();) {
        std::size_t j = i;
        buf.clear();
        std::size_t forward = 0;
        double prioritySum = 0.0;
        while (j < cross.size() && cross[j].from == cross[i].from && cross[j].to == cross[i].to) {
            buf.push_back(cross[j].weight);
            forward += cross[j].forward;
            prioritySum += cross[j].priority;
            ++j;
        }
        const std::size_t s = j - i;
        const bool isForward = 2 * forward > s || (2 * forward == s && cross[i].from < cross[i].to);
        b.add_edge(cross[i].from, cross[i].to, static_cast<float>(combine_edge_weights(buf, wcfg.edgeCombiner)),
                   isForward, static_cast<float>(prioritySum / static_cast<double>(s)));
        i = j;
    }
    return b.build();
}

ClusterMetadata compute_cluster_metadata(const DataGraph& g, const Clustering& cl, bool withTables) {
    const ClusterId k = cl.cluster_count();
    ClusterMetadata meta;
    meta.diameter.resize(k);
    meta.minInOut.resize(k);
    meta.slotCount.resize(k);
    if (withTables) meta.tables.resize(k);

    std::vector<std::uint32_t> local(g.node_count(), 0);
    for (ClusterId c = 0; c < k; ++c) {
        const auto members = cl.members(c);
        const std::size_t m = members.size();
        for (std::uint32_t i = 0; i < m; ++i) local[members[i]] = i;
        const auto dist = intra_distances(g, cl, c, local);

        double diameter = 0.0;
        for (auto d : dist)
            if (d != kInf) diameter = std::max(diameter, d);

        std::vector<std::uint32_t> entries, exits;
        std::uint64_t slots = 0;
        for (std::uint32_t i = 0; i < m; ++i) {
            const NodeId u = members[i];
            const auto r = g.out_slots(u);
            slots += r.size();
            bool exit = false, entry = false;
            for (EdgeSlot s = r.first; s < r.last && !exit; ++s) exit = cl.nodeMapping[g.target(s)] != c;
            for (auto s : g.in_slots(u))
                if (cl.nodeMapping[g.source(s)] != c) {
                    entry = true;
                    break;
                }
            if (entry) entries.push_back(i);
            if (exit) exits.push_back(i);
        }
        double best = kInf;
        for (auto e : entries)
            for (auto x : exits) best = std::min(best, dist[e * m + x]);

        meta.diameter[c] = static_cast<float>(diameter);
        meta.minInOut[c] = static_cast<float>(best);
        meta.slotCount[c] = slots;
        if (withTables) {
            auto& t = meta.tables[c];
            for (auto e : entries) t.entries.push_back(members[e]);
            for (auto x : exits) t.exits.push_back(members[x]);
            for (auto e : entries)
                for (auto x : exits) t.cost.push_back(static_cast<float>(dist[e * m + x]));
        }
    }
    return meta;
}

std::uint64_t expansion_bytes(const Clustering& cl, const ClusterMetadata& meta,
                              std::span<const ClusterId> clusters) {
    std::uint64_t nodes = 0, slots = 0;
    for (auto c : clusters) {
        nodes += cl.size(c);
        slots += meta.slotCount.at(c);
    }
    return estimate_memory(nodes, slots).bytes;
}

CostBounds answer_cost_bounds(const AnswerTree& t, const ClusterMetadata& meta,
                              std::span<const ClusterId> keywordClusters) {
    CostBounds b;
    for (auto c : t.nodes) {
        if (c >= meta.size())
            throw std::out_of_range("answer_cost_bounds: no metadata for cluster " + std::to_string(c));
        b.upper += meta.diameter[c];
        const bool keyword =
            std::find(keywordClusters.begin(), keywordClusters.end(), c) != keywordClusters.end();
        if (c != t.root && !keyword) b.lower += meta.minInOut[c];
    }
    for (const auto& e : t.edges) b.upper += e.weight;
    return b;
}

}  // namespace embanks
