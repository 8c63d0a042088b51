#include "embanks/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace embanks {

void AnswerTree::normalize() {
    std::sort(edges.begin(), edges.end(), [](const TreeEdge& a, const TreeEdge& b) {
        return std::tie(a.parent, a.child) < std::tie(b.parent, b.child);
    });
    nodes.clear();
    nodes.push_back(root);
    for (const auto& e : edges) {
        nodes.push_back(e.parent);
        nodes.push_back(e.child);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
}

bool AnswerTree::contains(NodeId u) const { return std::binary_search(nodes.begin(), nodes.end(), u); }

TreeKey tree_key(const AnswerTree& t) {
    TreeKey k{t.root, {}};
    k.edges.reserve(t.edges.size());
    for (const auto& e : t.edges) k.edges.emplace_back(e.parent, e.child);
    std::sort(k.edges.begin(), k.edges.end());
    return k;
}

bool is_root_minimal(const AnswerTree& t) {
    std::size_t children = 0;
    for (const auto& e : t.edges) children += e.parent == t.root;
    if (children != 1) return true;
    return std::find(t.keywordNodes.begin(), t.keywordNodes.end(), t.root) != t.keywordNodes.end();
}

std::optional<std::string> validate_tree(const AnswerTree& t, const DataGraph& g,
                                         std::span<const std::vector<NodeId>> keywordSets) {
    auto sorted = t;
    sorted.normalize();
    if (sorted.nodes != t.nodes) return "node set does not match root and edges";
    if (t.edges.size() + 1 != t.nodes.size()) return "edge count is not node count - 1";
    std::map<NodeId, NodeId> parent;
    for (const auto& e : t.edges) {
        if (e.child == t.root) return "edge enters the root";
        if (!parent.emplace(e.child, e.parent).second) return "node with two parents";
        if (e.parent >= g.node_count() || e.child >= g.node_count()) return "node out of range";
        const auto r = g.out_slots(e.parent);
        bool found = false;
        for (EdgeSlot s = r.first; s < r.last && !found; ++s)
            found = g.target(s) == e.child && g.weight(s) == e.weight;
        if (!found) return "edge not in graph";
    }
    for (auto u : t.nodes) {
        NodeId cur = u;
        std::size_t steps = 0;
        while (cur != t.root) {
            const auto it = parent.find(cur);
            if (it == parent.end() || ++steps > t.nodes.size()) return "node not reachable from root";
            cur = it->second;
        }
    }
    if (t.keywordNodes.size() != keywordSets.size()) return "keyword node count mismatch";
    for (std::size_t i = 0; i < keywordSets.size(); ++i) {
        const auto u = t.keywordNodes[i];
        if (!t.contains(u)) return "keyword node not in tree";
        if (std::find(keywordSets[i].begin(), keywordSets[i].end(), u) == keywordSets[i].end())
            return "keyword node not in its keyword set";
    }
    if (!is_root_minimal(t)) return "root is not minimal";
    return std::nullopt;
}

void ScoreConfig::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0,1]");
    if (!(epsilonFraction >= 0.0)) throw std::invalid_argument("epsilon fraction must be >= 0");
}

double node_score(const AnswerTree& t, std::span<const float> prestige) {
    double n = prestige[t.root];
    std::vector<NodeId> leaves;
    for (auto u : t.keywordNodes)
        if (u != t.root) leaves.push_back(u);
    std::sort(leaves.begin(), leaves.end());
    leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
    for (auto u : leaves) n += prestige[u];
    return n;
}

double edge_weight_sum(const AnswerTree& t) {
    double sum = 0.0;
    for (const auto& e : t.edges) sum += e.weight;
    return sum;
}

double edge_score_from_sum(double weightSum, bool hasEdges, EdgeScoreVariant variant) {
    if (!hasEdges) return 1.0;
    if (variant == EdgeScoreVariant::as_written) return 1.0 / (1.0 + 1.0 / weightSum);
    return 1.0 / (1.0 + weightSum);
}

double edge_score(const AnswerTree& t, const ScoreConfig& cfg) {
    return edge_score_from_sum(edge_weight_sum(t), !t.edges.empty(), cfg.edgeVariant);
}

double tree_score(double N, double E, const ScoreConfig& cfg) {
    if (cfg.combine == Combine::additive) return cfg.lambda * N + (1.0 - cfg.lambda) * E;
    return E * std::pow(N, cfg.lambda);
}

ScoredAnswer score_answer(AnswerTree t, std::span<const float> prestige, const ScoreConfig& cfg) {
    ScoredAnswer a;
    a.N = node_score(t, prestige);
    a.E = edge_score(t, cfg);
    a.score = tree_score(a.N, a.E, cfg);
    a.tree = std::move(t);
    return a;
}

bool is_good(double score, double bestScore, const ScoreConfig& cfg) {
    return answer_quality(score, bestScore) <= cfg.epsilonFraction * bestScore;
}

bool is_acceptable(const AnswerTree& t, std::span<const AnswerTree> baseline) {
    if (baseline.empty()) throw std::invalid_argument("is_acceptable: empty baseline");
    std::size_t maxNodes = 0, maxEdges = 0;
    for (const auto& b : baseline) {
        maxNodes = std::max(maxNodes, b.node_count());
        maxEdges = std::max(maxEdges, b.edge_count());
    }
    return t.node_count() <= maxNodes && t.edge_count() <= maxEdges;
}

bool ranks_before(const ScoredAnswer& a, const ScoredAnswer& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.tree.nodes.size() != b.tree.nodes.size()) return a.tree.nodes.size() < b.tree.nodes.size();
    if (a.tree.root != b.tree.root) return a.tree.root < b.tree.root;
    const auto ka = tree_key(a.tree), kb = tree_key(b.tree);
    if (ka.edges != kb.edges) return ka.edges < kb.edges;
    return a.tree.keywordNodes < b.tree.keywordNodes;
}

bool OutputHeap::push(ScoredAnswer a) {
    auto key = tree_key(a.tree);
    if (emitted_.count(key)) return false;
    const auto it = byKey_.find(key);
    if (it != byKey_.end()) {
        if (!ranks_before(a, *it->second)) return false;
        pending_.erase(it->second);
        it->second = pending_.insert(std::move(a)).first;
        return true;
    }
    byKey_.emplace(std::move(key), pending_.insert(std::move(a)).first);
    return true;
}

std::vector<ScoredAnswer> OutputHeap::emit(double bound, std::size_t limit) {
    std::vector<ScoredAnswer> out;
    while (!pending_.empty() && out.size() < limit && pending_.begin()->score >= bound) {
        auto node = pending_.extract(pending_.begin());
        auto key = tree_key(node.value().tree);
        byKey_.erase(key);
        emitted_.insert(std::move(key));
        out.push_back(std::move(node.value()));
    }
    return out;
}

std::vector<ScoredAnswer> OutputHeap::drain(std::size_t limit) {
    return emit(-std::numeric_limits<double>::infinity(), limit);
}

}  // namespace embanks
