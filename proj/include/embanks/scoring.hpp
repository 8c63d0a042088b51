#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "embanks/graph.hpp"

namespace embanks {

struct TreeEdge {
    NodeId parent = 0;
    NodeId child = 0;
    float weight = 0.0f;

    friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

/**
 * Rooted answer tree. Edges are kept sorted by (parent, child); nodes is the
 * sorted node set; keywordNodes[i] is the node matched for keyword set i.
 */
struct AnswerTree {
    NodeId root = 0;
    std::vector<TreeEdge> edges;
    std::vector<NodeId> keywordNodes;
    std::vector<NodeId> nodes;

    /// Sorts edges and recomputes the node set from root and edges.
    void normalize();

    [[nodiscard]] std::size_t node_count() const noexcept { return nodes.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges.size(); }
    [[nodiscard]] bool contains(NodeId u) const;

    friend bool operator==(const AnswerTree&, const AnswerTree&) = default;
};

/// Root plus parent/child pairs; two answers with equal keys are the same tree.
struct TreeKey {
    NodeId root = 0;
    std::vector<std::pair<NodeId, NodeId>> edges;

    friend auto operator<=>(const TreeKey&, const TreeKey&) = default;
};

TreeKey tree_key(const AnswerTree& t);

/// Same root and same edge set.
inline bool canonical_equal(const AnswerTree& a, const AnswerTree& b) {
    return tree_key(a) == tree_key(b);
}

/// Checks tree shape, edge existence in g, keyword coverage and root
/// minimality. Returns a description of the first violation.
std::optional<std::string> validate_tree(const AnswerTree& t, const DataGraph& g,
                                         std::span<const std::vector<NodeId>> keywordSets);

/// A root with a single child must itself match a keyword; otherwise the
/// child would be a smaller answer with the same content.
bool is_root_minimal(const AnswerTree& t);

enum class Combine { additive, multiplicative };
enum class EdgeScoreVariant { as_written, reciprocal_sum };

struct ScoreConfig {
    double lambda = 0.2;
    Combine combine = Combine::additive;
    EdgeScoreVariant edgeVariant = EdgeScoreVariant::as_written;
    /// An answer is good when best - score <= epsilonFraction * best.
    double epsilonFraction = 0.05;

    void validate() const;
};

struct ScoredAnswer {
    AnswerTree tree;
    double N = 0.0;
    double E = 0.0;
    double score = 0.0;
};

/// prestige(root) plus the prestige of every distinct keyword node other than the root.
double node_score(const AnswerTree& t, std::span<const float> prestige);
/// Sum of edge weights in sorted edge order.
double edge_weight_sum(const AnswerTree& t);
double edge_score_from_sum(double weightSum, bool hasEdges, EdgeScoreVariant variant);
double edge_score(const AnswerTree& t, const ScoreConfig& cfg);
double tree_score(double N, double E, const ScoreConfig& cfg);
ScoredAnswer score_answer(AnswerTree t, std::span<const float> prestige, const ScoreConfig& cfg);

inline double answer_quality(double score, double bestScore) { return bestScore - score; }
bool is_good(double score, double bestScore, const ScoreConfig& cfg);

/// Node and edge counts within the maxima of the baseline list. Throws
/// std::invalid_argument on an empty baseline.
bool is_acceptable(const AnswerTree& t, std::span<const AnswerTree> baseline);

/// Ranking order: higher score, fewer nodes, smaller root, then edges and
/// keyword nodes lexicographically.
bool ranks_before(const ScoredAnswer& a, const ScoredAnswer& b);

struct RanksBefore {
    bool operator()(const ScoredAnswer& a, const ScoredAnswer& b) const { return ranks_before(a, b); }
};

/**
 * Buffers candidate answers and releases them in rank order once their score
 * reaches the caller's upper bound on any answer still to be found. A tree
 * is kept once, with its best score, and never emitted twice.
 */
class OutputHeap {
public:
    /// False when the tree was already emitted or buffered with a score at least as good.
    bool push(ScoredAnswer a);
    /// Pops every buffered answer with score >= bound, best first, up to limit.
    std::vector<ScoredAnswer> emit(double bound, std::size_t limit = SIZE_MAX);
    /// Everything buffered, best first, up to limit.
    std::vector<ScoredAnswer> drain(std::size_t limit = SIZE_MAX);

    [[nodiscard]] std::size_t size() const noexcept { return pending_.size(); }
    [[nodiscard]] bool empty() const noexcept { return pending_.empty(); }
    [[nodiscard]] std::size_t emitted_count() const noexcept { return emitted_.size(); }

private:
    std::set<ScoredAnswer, RanksBefore> pending_;
    std::map<TreeKey, std::set<ScoredAnswer, RanksBefore>::iterator> byKey_;
    std::set<TreeKey> emitted_;
};

}  // namespace embanks
