#include <queue>
#include <stdexcept>

#include "embanks/activation.hpp"
#include "search_detail.hpp"

namespace embanks {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct QueueEntry {
    double priority;
    NodeId node;
};

/// Max-heap on priority; ties go to the smaller node id.
struct LowerPriority {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
        if (a.priority != b.priority) return a.priority < b.priority;
        return a.node > b.node;
    }
};

class BidirectionalRun {
public:
    BidirectionalRun(const DataGraph& g, const KeywordSets& ks, const SearchConfig& cfg)
        : g_(g), w_(ks.size()), collector_(g, ks, cfg),
          activation_(init_activation(ks.sets, g.prestige(), cfg.mu)),
          dist_(static_cast<std::size_t>(g.node_count()) * w_, kInf),
          next_(dist_.size(), kNoNode), nextWeight_(dist_.size(), 0.0f),
          touched_(g.node_count(), 0), explored_(g.node_count(), 0),
          poppedIn_(g.node_count(), 0), poppedOut_(g.node_count(), 0),
          queuedIn_(g.node_count(), 0), queuedOut_(g.node_count(), 0) {
        for (std::size_t i = 0; i < w_; ++i)
            for (auto u : ks.sets[i]) dist_[at(u, i)] = 0.0;
        std::vector<NodeId> all;
        for (const auto& s : ks.sets) all.insert(all.end(), s.begin(), s.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        for (auto u : all) push(in_, u);
    }

    SearchResult run() {
        detail::Stopwatch clock;
        while (!stop_) {
            drop_stale(in_, poppedIn_);
            drop_stale(out_, poppedOut_);
            if (in_.empty() && out_.empty()) break;
            const bool incoming =
                out_.empty() || (!in_.empty() && in_.top().priority >= out_.top().priority);
            if (incoming)
                expand_incoming();
            else
                expand_outgoing();
            if (stop_) break;
            collector_.release(collector_.edge_bound(0.0));
            if (collector_.done()) break;
        }
        SearchResult result;
        result.answers = collector_.finish();
        stats_.answersEmitted = result.answers.size();
        stats_.elapsedSeconds = clock.seconds();
        result.stats = stats_;
        return result;
    }

private:
    using Queue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, LowerPriority>;

    [[nodiscard]] std::size_t at(NodeId u, std::size_t i) const {
        return static_cast<std::size_t>(u) * w_ + i;
    }

    void push(Queue& q, NodeId u) {
        q.push({activation_.total(u), u});
        (&q == &in_ ? queuedIn_ : queuedOut_)[u] = 1;
        if (!touched_[u]) {
            touched_[u] = 1;
            ++stats_.nodesTouched;
        }
    }

    void drop_stale(Queue& q, const std::vector<std::uint8_t>& popped) {
        while (!q.empty() &&
               (popped[q.top().node] || q.top().priority != activation_.total(q.top().node)))
            q.pop();
    }

    void mark_explored(NodeId u) {
        if (explored_[u]) return;
        explored_[u] = 1;
        ++stats_.nodesExplored;
    }

    void spread(NodeId from, const std::vector<SpreadNeighbor>& nbs) {
        for (std::size_t i = 0; i < w_; ++i) spread_activation(activation_, from, i, nbs);
    }

    void expand_incoming() {
        const NodeId v = in_.top().node;
        in_.pop();
        poppedIn_[v] = 1;
        mark_explored(v);
        emit(v);
        std::vector<SpreadNeighbor> nbs;
        for (auto s : g_.in_slots(v)) nbs.push_back({g_.source(s), g_.weight(s)});
        spread(v, nbs);
        for (auto s : g_.in_slots(v)) {
            if (stop_) return;
            const NodeId u = g_.source(s);
            explore_edge(u, v, g_.weight(s));
            if (!poppedIn_[u]) push(in_, u);
            if (queuedOut_[u] && !poppedOut_[u]) push(out_, u);
        }
        if (!poppedOut_[v]) push(out_, v);
    }

    void expand_outgoing() {
        const NodeId u = out_.top().node;
        out_.pop();
        poppedOut_[u] = 1;
        mark_explored(u);
        emit(u);
        const auto r = g_.out_slots(u);
        std::vector<SpreadNeighbor> nbs;
        for (EdgeSlot s = r.first; s < r.last; ++s) nbs.push_back({g_.target(s), g_.weight(s)});
        spread(u, nbs);
        for (EdgeSlot s = r.first; s < r.last; ++s) {
            if (stop_) return;
            const NodeId v = g_.target(s);
            explore_edge(u, v, g_.weight(s));
            if (!poppedOut_[v]) push(out_, v);
            if (queuedIn_[v] && !poppedIn_[v]) push(in_, v);
        }
    }

    /// Edge u -> v offers u a path through v; improvements propagate to u's reached parents.
    void explore_edge(NodeId u, NodeId v, float w) {
        std::vector<NodeId> improved;
        for (std::size_t i = 0; i < w_; ++i) {
            const double d = dist_[at(v, i)] + w;
            if (!(d < dist_[at(u, i)])) continue;
            dist_[at(u, i)] = d;
            next_[at(u, i)] = v;
            nextWeight_[at(u, i)] = w;
            improved.push_back(u);
            attach(u, i, improved);
        }
        std::sort(improved.begin(), improved.end());
        improved.erase(std::unique(improved.begin(), improved.end()), improved.end());
        for (auto x : improved) {
            if (stop_) return;
            emit(x);
        }
    }

    void attach(NodeId start, std::size_t i, std::vector<NodeId>& improved) {
        std::vector<NodeId> work{start};
        while (!work.empty()) {
            const NodeId x = work.back();
            work.pop_back();
            for (auto s : g_.in_slots(x)) {
                const NodeId y = g_.source(s);
                if (!touched_[y]) continue;
                const double d = dist_[at(x, i)] + g_.weight(s);
                if (!(d < dist_[at(y, i)])) continue;
                dist_[at(y, i)] = d;
                next_[at(y, i)] = x;
                nextWeight_[at(y, i)] = g_.weight(s);
                improved.push_back(y);
                work.push_back(y);
            }
        }
    }

    [[nodiscard]] bool complete(NodeId u) const {
        for (std::size_t i = 0; i < w_; ++i)
            if (dist_[at(u, i)] == kInf) return false;
        return true;
    }

    void emit(NodeId root) {
        if (stop_ || !complete(root)) return;
        AnswerTree t;
        t.root = root;
        std::vector<NodeId> inTree{root};
        for (std::size_t i = 0; i < w_; ++i) {
            NodeId cur = root;
            std::size_t steps = 0;
            while (dist_[at(cur, i)] != 0.0) {
                const NodeId nxt = next_[at(cur, i)];
                if (nxt == kNoNode || ++steps > g_.node_count())
                    throw std::logic_error("bidirectional search: broken path chain");
                if (std::find(inTree.begin(), inTree.end(), nxt) == inTree.end()) {
                    inTree.push_back(nxt);
                    t.edges.push_back({cur, nxt, nextWeight_[at(cur, i)]});
                }
                cur = nxt;
            }
            t.keywordNodes.push_back(cur);
        }
        prune_leaves(t);
        t.normalize();
        stop_ = collector_.add(std::move(t));
    }

    /// Drops leaves that match no keyword, repeatedly.
    static void prune_leaves(AnswerTree& t) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t e = 0; e < t.edges.size(); ++e) {
                const NodeId c = t.edges[e].child;
                const bool isParent = std::any_of(t.edges.begin(), t.edges.end(),
                                                  [c](const TreeEdge& x) { return x.parent == c; });
                const bool isKeyword =
                    std::find(t.keywordNodes.begin(), t.keywordNodes.end(), c) != t.keywordNodes.end();
                if (!isParent && !isKeyword) {
                    t.edges.erase(t.edges.begin() + static_cast<std::ptrdiff_t>(e));
                    changed = true;
                    break;
                }
            }
        }
    }

    const DataGraph& g_;
    std::size_t w_;
    detail::Collector collector_;
    ActivationState activation_;
    std::vector<double> dist_;
    std::vector<NodeId> next_;
    std::vector<float> nextWeight_;
    std::vector<std::uint8_t> touched_;
    std::vector<std::uint8_t> explored_;
    std::vector<std::uint8_t> poppedIn_;
    std::vector<std::uint8_t> poppedOut_;
    // ever pushed; a changed activation needs a fresh entry in each such queue
    std::vector<std::uint8_t> queuedIn_;
    std::vector<std::uint8_t> queuedOut_;
    Queue in_;
    Queue out_;
    SearchStats stats_;
    bool stop_ = false;
};

}  // namespace

SearchResult bidirectional_search(const DataGraph& g, const KeywordSets& ks, const SearchConfig& cfg) {
    detail::require_nonempty(ks);
    return BidirectionalRun(g, ks, cfg).run();
}

}  // namespace embanks
