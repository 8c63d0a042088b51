#include "embanks/engine.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace embanks {
namespace {

std::vector<ClusterId> sorted_unique(std::vector<ClusterId> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::uint64_t cluster_cost(const Clustering& cl, const ClusterMetadata& meta, ClusterId c) {
    const ClusterId one[] = {c};
    return expansion_bytes(cl, meta, one);
}

/// Adds candidates in order while they fit; returns the bytes spent.
std::uint64_t take_fitting(const Clustering& cl, const ClusterMetadata& meta, std::span<const ClusterId> candidates,
                           std::uint64_t budget, std::vector<ClusterId>& out) {
    std::uint64_t spent = 0;
    for (auto c : candidates) {
        const auto cost = cluster_cost(cl, meta, c);
        if (spent + cost > budget) continue;
        spent += cost;
        out.push_back(c);
    }
    return spent;
}

ScoredAnswer to_global(ScoredAnswer a, const ExpandedGraph& x) {
    auto& t = a.tree;
    t.root = x.globalId[t.root];
    for (auto& e : t.edges) {
        e.parent = x.globalId[e.parent];
        e.child = x.globalId[e.child];
    }
    for (auto& u : t.keywordNodes) u = x.globalId[u];
    for (auto& u : t.nodes) u = x.globalId[u];
    return a;
}

}  // namespace

ExtraClusterPolicy parse_extra_policy(std::string_view s) {
    if (s == "none") return ExtraClusterPolicy::none;
    if (s == "keyword") return ExtraClusterPolicy::keyword_clusters;
    if (s == "keyword-random") return ExtraClusterPolicy::keyword_clusters_random_fill;
    throw std::invalid_argument("unknown extra-cluster policy '" + std::string(s) + "'");
}

const char* to_string(ExtraClusterPolicy p) {
    switch (p) {
        case ExtraClusterPolicy::none: return "none";
        case ExtraClusterPolicy::keyword_clusters: return "keyword";
        case ExtraClusterPolicy::keyword_clusters_random_fill: return "keyword-random";
    }
    return "?";
}

void EngineConfig::validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0,1]");
    if (phase1Limit == 0) throw std::invalid_argument("phase1Limit must be >= 1");
    if (search.k == 0) throw std::invalid_argument("k must be >= 1");
    search.score.validate();
}

bool gamma_trigger(std::span<const double> scores, double gamma) {
    for (std::size_t i = 0; i + 1 < scores.size(); ++i)
        if (scores[i + 1] <= gamma * scores[i]) return true;
    return false;
}

std::vector<ClusterId> select_extra_clusters(const Clustering& cl, const ClusterMetadata& meta,
                                             std::span<const ClusterId> keywordClusterIds,
                                             std::span<const ClusterId> alreadyExpanded, std::uint64_t budget,
                                             ExtraClusterPolicy policy, std::mt19937_64& rng) {
    std::vector<ClusterId> out;
    if (policy == ExtraClusterPolicy::none || budget == 0) return out;
    const std::set<ClusterId> have(alreadyExpanded.begin(), alreadyExpanded.end());
    std::vector<ClusterId> candidates;
    for (auto c : sorted_unique({keywordClusterIds.begin(), keywordClusterIds.end()}))
        if (!have.count(c)) candidates.push_back(c);
    if (policy == ExtraClusterPolicy::keyword_clusters_random_fill &&
        expansion_bytes(cl, meta, candidates) > budget)
        std::shuffle(candidates.begin(), candidates.end(), rng);
    take_fitting(cl, meta, candidates, budget, out);
    std::sort(out.begin(), out.end());
    return out;
}

QueryResult two_phase_query(const Store& store, std::string_view query, const EngineConfig& cfg) {
    const auto terms = tokenize(query);
    return two_phase_query(store, std::span<const std::string>(terms), cfg);
}

QueryResult two_phase_query(const Store& store, std::span<const std::string> terms, const EngineConfig& cfg) {
    cfg.validate();
    const auto& cg = store.compressed();
    const auto& cl = cg.clustering;
    QueryResult result;

    // phase 1 on the cluster graph
    const auto clusterSets = keyword_sets(store.cluster_index(), terms);
    SearchConfig p1 = cfg.search;
    p1.k = cfg.phase1Limit;
    auto phase1 = search(cg.clusterGraph, clusterSets, cfg.phase1Algorithm, p1);
    result.phase1Answers = std::move(phase1.answers);
    result.phase1Stats = phase1.stats;

    std::vector<ClusterId> core;
    for (const auto& a : result.phase1Answers) core.insert(core.end(), a.tree.nodes.begin(), a.tree.nodes.end());
    core = sorted_unique(std::move(core));

    std::vector<ClusterId> keywordClusters;
    for (const auto& s : clusterSets.sets) keywordClusters.insert(keywordClusters.end(), s.begin(), s.end());
    keywordClusters = sorted_unique(std::move(keywordClusters));

    std::mt19937_64 rng(cfg.rngSeed);
    auto expanded = core;
    const auto extras = select_extra_clusters(cl, cg.meta, keywordClusters, core, cfg.memoryBudgetBytes,
                                              cfg.extraClusterPolicy, rng);
    std::uint64_t spent = expansion_bytes(cl, cg.meta, extras);
    expanded = sorted_unique([&] {
        auto v = expanded;
        v.insert(v.end(), extras.begin(), extras.end());
        return v;
    }());

    const auto nodeSets = keyword_sets(store.node_index(), terms);
    auto run_phase2 = [&]() -> std::vector<ScoredAnswer> {
        result.nodeText.clear();
        if (expanded.empty()) return {};
        const auto x = store.expand_clusters(expanded);
        KeywordSets local;
        local.terms = nodeSets.terms;
        for (const auto& s : nodeSets.sets) {
            std::vector<NodeId> ids;
            for (auto u : s)
                if (auto l = x.local_id(u); l != kNoNode) ids.push_back(l);
            if (ids.empty()) return {};
            local.sets.push_back(std::move(ids));
        }
        auto r = search(x.graph, local, cfg.phase2Algorithm, cfg.search);
        result.phase2Stats += r.stats;
        std::vector<ScoredAnswer> out;
        out.reserve(r.answers.size());
        result.nodeText.clear();
        for (auto& a : r.answers) {
            for (auto u : a.tree.nodes)
                result.nodeText.emplace(x.globalId[u], store.node_text(x.textOffset[u], x.textLength[u]));
            out.push_back(to_global(std::move(a), x));
        }
        return out;
    };
    result.answers = run_phase2();

    for (std::size_t round = 0; round < cfg.maxRefetch; ++round) {
        std::vector<double> scores;
        for (const auto& a : result.answers) scores.push_back(a.score);
        if (!gamma_trigger(scores, cfg.gamma)) break;

        const std::set<ClusterId> have(expanded.begin(), expanded.end());
        std::vector<ClusterId> candidates;
        for (auto c : keywordClusters)
            if (!have.count(c)) candidates.push_back(c);
        std::vector<ClusterId> adjacent;
        for (auto c : expanded) {
            const auto r = cg.clusterGraph.out_slots(c);
            for (EdgeSlot s = r.first; s < r.last; ++s) adjacent.push_back(cg.clusterGraph.target(s));
            for (auto s : cg.clusterGraph.in_slots(c)) adjacent.push_back(cg.clusterGraph.source(s));
        }
        for (auto c : sorted_unique(std::move(adjacent)))
            if (!have.count(c) && !std::binary_search(keywordClusters.begin(), keywordClusters.end(), c))
                candidates.push_back(c);

        std::vector<ClusterId> fetched;
        const std::uint64_t remaining = cfg.memoryBudgetBytes - spent;
        spent += take_fitting(cl, cg.meta, candidates, remaining, fetched);
        if (fetched.empty()) break;
        expanded.insert(expanded.end(), fetched.begin(), fetched.end());
        expanded = sorted_unique(std::move(expanded));
        ++result.refetchEvents;
        result.answers = run_phase2();
    }

    result.expandedClusterIds = expanded;
    result.stats = result.phase1Stats;
    result.stats += result.phase2Stats;
    result.stats.answersEmitted = result.answers.size();
    return result;
}

SearchResult single_phase_query(const DataGraph& g, const KeywordIndex& idx, std::string_view query,
                                Algorithm algo, const SearchConfig& cfg) {
    return search(g, keyword_sets(idx, query), algo, cfg);
}

QueryComparison compare_precision(std::span<const ScoredAnswer> system, std::span<const ScoredAnswer> baseline) {
    const auto sys = system.first(std::min<std::size_t>(system.size(), 10));
    const auto base = baseline.first(std::min<std::size_t>(baseline.size(), 10));
    QueryComparison q;
    q.systemCount = sys.size();
    q.baselineCount = base.size();
    std::set<TreeKey> baseKeys;
    std::vector<AnswerTree> baseTrees;
    for (const auto& b : base) {
        baseKeys.insert(tree_key(b.tree));
        baseTrees.push_back(b.tree);
    }
    for (const auto& a : sys) {
        q.exactOverlap += baseKeys.count(tree_key(a.tree));
        if (!baseTrees.empty()) q.acceptableCount += is_acceptable(a.tree, baseTrees);
    }
    return q;
}

ComparisonReport summarize(std::vector<QueryComparison> perQuery) {
    ComparisonReport r;
    r.perQuery = std::move(perQuery);
    if (r.perQuery.empty()) return r;
    for (const auto& q : r.perQuery) {
        r.meanExactOverlap += static_cast<double>(q.exactOverlap);
        r.meanAcceptable += static_cast<double>(q.acceptableCount);
    }
    r.meanExactOverlap /= static_cast<double>(r.perQuery.size());
    r.meanAcceptable /= static_cast<double>(r.perQuery.size());
    return r;
}

}  // namespace embanks
