#include "embanks/clustering.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>

namespace embanks {
namespace {

/// Accumulates clusters in creation order.
class ClusterSink {
public:
    ClusterSink(NodeId n, std::uint32_t maxSize) : used_(n, 0), maxSize_(maxSize) {
        if (maxSize == 0) throw std::invalid_argument("maxClusterSize must be >= 1");
        out_.maxClusterSize = maxSize;
        out_.nodeMapping.assign(n, 0);
        out_.nodeOrder.reserve(n);
    }

    [[nodiscard]] bool used(NodeId u) const { return used_[u] != 0; }
    [[nodiscard]] bool full() const { return current_ >= maxSize_; }
    [[nodiscard]] std::uint32_t current_size() const { return current_; }

    void add(NodeId u) {
        used_[u] = 1;
        out_.nodeMapping[u] = out_.cluster_count();
        out_.nodeOrder.push_back(u);
        ++current_;
    }

    void close() {
        if (current_ == 0) return;
        out_.clusterOffset.push_back(out_.nodeOrder.size());
        current_ = 0;
    }

    Clustering finish() {
        close();
        out_.validate();
        return std::move(out_);
    }

private:
    std::vector<std::uint8_t> used_;
    std::uint32_t maxSize_;
    std::uint32_t current_ = 0;
    Clustering out_;
};

std::vector<NodeId> shuffled_nodes(NodeId n, std::uint64_t seed) {
    std::vector<NodeId> order(n);
    for (NodeId u = 0; u < n; ++u) order[u] = u;
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

/// Weight of the cheapest slot from -> to, or +inf.
double slot_weight(const DataGraph& g, NodeId from, NodeId to) {
    const auto r = g.out_slots(from);
    const auto targets = g.adjacent_nodes();
    const auto it = std::lower_bound(targets.begin() + static_cast<std::ptrdiff_t>(r.first),
                                     targets.begin() + static_cast<std::ptrdiff_t>(r.last), to);
    if (it == targets.begin() + static_cast<std::ptrdiff_t>(r.last) || *it != to)
        return std::numeric_limits<double>::infinity();
    return g.weight(static_cast<EdgeSlot>(it - targets.begin()));
}

}  // namespace

void Clustering::validate() const {
    const std::size_t n = nodeMapping.size();
    if (clusterOffset.empty() || clusterOffset.front() != 0)
        throw std::invalid_argument("clustering: clusterOffset must start at 0");
    if (clusterOffset.back() != nodeOrder.size() || nodeOrder.size() != n)
        throw std::invalid_argument("clustering: nodeOrder must list every node once");
    if (maxClusterSize == 0) throw std::invalid_argument("clustering: maxClusterSize must be >= 1");
    std::vector<std::uint8_t> seen(n, 0);
    for (ClusterId c = 0; c < cluster_count(); ++c) {
        if (clusterOffset[c + 1] <= clusterOffset[c])
            throw std::invalid_argument("clustering: empty cluster " + std::to_string(c));
        if (size(c) > maxClusterSize)
            throw std::invalid_argument("clustering: cluster " + std::to_string(c) + " exceeds max size");
        for (auto u : members(c)) {
            if (u >= n || seen[u]) throw std::invalid_argument("clustering: nodeOrder is not a permutation");
            seen[u] = 1;
            if (nodeMapping[u] != c)
                throw std::invalid_argument("clustering: nodeMapping disagrees with nodeOrder at node " +
                                            std::to_string(u));
        }
    }
}

Clustering Clustering::from_mapping(std::vector<ClusterId> mapping, std::uint32_t maxClusterSize) {
    Clustering c;
    c.maxClusterSize = maxClusterSize;
    ClusterId k = 0;
    for (auto m : mapping) k = std::max(k, m + 1);
    std::vector<std::uint64_t> count(static_cast<std::size_t>(k) + 1, 0);
    for (auto m : mapping) ++count[m + 1];
    for (ClusterId i = 0; i < k; ++i) count[i + 1] += count[i];
    c.clusterOffset = count;
    c.nodeOrder.resize(mapping.size());
    for (NodeId u = 0; u < mapping.size(); ++u) c.nodeOrder[count[mapping[u]]++] = u;
    c.nodeMapping = std::move(mapping);
    c.validate();
    return c;
}

Clustering Clustering::identity(NodeId nodes) {
    std::vector<ClusterId> m(nodes);
    for (NodeId u = 0; u < nodes; ++u) m[u] = u;
    return from_mapping(std::move(m), 1);
}

ClusterAlgorithm parse_cluster_algorithm(std::string_view s) {
    if (s == "close1") return ClusterAlgorithm::close_to_1;
    if (s == "greedymin") return ClusterAlgorithm::greedy_minimum;
    if (s == "connection") return ClusterAlgorithm::connection_naive;
    if (s == "adjacency") return ClusterAlgorithm::adjacency_naive;
    throw std::invalid_argument("unknown clustering algorithm '" + std::string(s) + "'");
}

const char* to_string(ClusterAlgorithm a) {
    switch (a) {
        case ClusterAlgorithm::close_to_1: return "close1";
        case ClusterAlgorithm::greedy_minimum: return "greedymin";
        case ClusterAlgorithm::connection_naive: return "connection";
        case ClusterAlgorithm::adjacency_naive: return "adjacency";
    }
    return "?";
}

Clustering cluster_close_to_1(const DataGraph& g, std::uint32_t maxClusterSize) {
    const NodeId n = g.node_count();
    ClusterSink sink(n, maxClusterSize);
    for (NodeId seed = 0; seed < n; ++seed) {
        if (sink.used(seed)) continue;
        // frontier node -> best (ratio) over the slots reaching it; missing reverse = +inf
        std::map<NodeId, double> frontier;
        auto grow_from = [&](NodeId m) {
            const auto r = g.out_slots(m);
            for (EdgeSlot s = r.first; s < r.last; ++s) {
                const NodeId v = g.target(s);
                if (sink.used(v)) continue;
                const double w1 = g.weight(s);
                const double w2 = slot_weight(g, v, m);
                const double ratio = std::max(w1, w2) / std::min(w1, w2);
                auto [it, fresh] = frontier.try_emplace(v, ratio);
                if (!fresh) it->second = std::min(it->second, ratio);
            }
        };
        sink.add(seed);
        grow_from(seed);
        while (!sink.full()) {
            for (auto it = frontier.begin(); it != frontier.end();)
                it = sink.used(it->first) ? frontier.erase(it) : std::next(it);
            if (frontier.empty()) break;
            auto best = frontier.begin();
            for (auto it = frontier.begin(); it != frontier.end(); ++it)
                if (it->second < best->second) best = it;
            const NodeId v = best->first;
            frontier.erase(best);
            sink.add(v);
            grow_from(v);
        }
        sink.close();
    }
    return sink.finish();
}

Clustering cluster_greedy_minimum(const DataGraph& g, std::uint32_t maxClusterSize, std::uint64_t seed) {
    const NodeId n = g.node_count();
    ClusterSink sink(n, maxClusterSize);
    using Entry = std::pair<double, NodeId>;
    const auto order = shuffled_nodes(n, seed);
    std::size_t next = 0;
    // a cluster whose neighborhood runs dry keeps filling from the next random seed
    while (true) {
        while (next < order.size() && sink.used(order[next])) ++next;
        if (next == order.size()) break;
        const NodeId start = order[next];
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> nearest;
        sink.add(start);
        nearest.emplace(0.0, start);
        while (!nearest.empty() && !sink.full()) {
            const auto [d, m] = nearest.top();
            nearest.pop();
            const auto r = g.out_slots(m);
            for (EdgeSlot s = r.first; s < r.last && !sink.full(); ++s) {
                const NodeId v = g.target(s);
                if (sink.used(v)) continue;
                sink.add(v);
                nearest.emplace(d + g.weight(s), v);
            }
        }
        if (sink.full()) sink.close();
    }
    return sink.finish();
}

Clustering cluster_connection_naive(const DataGraph& g, std::uint32_t maxClusterSize, std::uint64_t seed) {
    const NodeId n = g.node_count();
    ClusterSink sink(n, maxClusterSize);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (NodeId start : shuffled_nodes(n, seed)) {
        if (sink.used(start)) continue;
        std::vector<NodeId> frontier;
        auto grow_from = [&](NodeId m) {
            const auto r = g.out_slots(m);
            for (EdgeSlot s = r.first; s < r.last; ++s)
                if (!sink.used(g.target(s))) frontier.push_back(g.target(s));
        };
        sink.add(start);
        grow_from(start);
        while (!sink.full()) {
            std::erase_if(frontier, [&](NodeId v) { return sink.used(v); });
            if (frontier.empty()) break;
            std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
            const NodeId v = frontier[pick(rng)];
            sink.add(v);
            grow_from(v);
        }
        sink.close();
    }
    return sink.finish();
}

Clustering cluster_adjacency_naive(const DataGraph& g, std::uint32_t maxClusterSize) {
    const NodeId n = g.node_count();
    std::vector<std::vector<NodeId>> fingerprint(n);
    for (NodeId u = 0; u < n; ++u) {
        const auto r = g.out_slots(u);
        for (EdgeSlot s = r.first; s < r.last; ++s) fingerprint[u].push_back(g.target(s));
        std::sort(fingerprint[u].begin(), fingerprint[u].end());
        fingerprint[u].erase(std::unique(fingerprint[u].begin(), fingerprint[u].end()), fingerprint[u].end());
    }
    std::vector<NodeId> order(n);
    for (NodeId u = 0; u < n; ++u) order[u] = u;
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return fingerprint[a] < fingerprint[b]; });

    ClusterSink sink(n, maxClusterSize);
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && fingerprint[order[j]] == fingerprint[order[i]]) ++j;
        // keep a group together when it fits in a fresh cluster
        if (sink.current_size() + (j - i) > maxClusterSize && j - i <= maxClusterSize) sink.close();
        for (; i < j; ++i) {
            sink.add(order[i]);
            if (sink.full()) sink.close();
        }
    }
    return sink.finish();
}

Clustering run_clustering(ClusterAlgorithm algo, const DataGraph& g, std::uint32_t maxClusterSize,
                          std::uint64_t seed) {
    switch (algo) {
        case ClusterAlgorithm::close_to_1: return cluster_close_to_1(g, maxClusterSize);
        case ClusterAlgorithm::greedy_minimum: return cluster_greedy_minimum(g, maxClusterSize, seed);
        case ClusterAlgorithm::connection_naive: return cluster_connection_naive(g, maxClusterSize, seed);
        case ClusterAlgorithm::adjacency_naive: return cluster_adjacency_naive(g, maxClusterSize);
    }
    throw std::invalid_argument("unknown clustering algorithm");
}

}  // namespace embanks
