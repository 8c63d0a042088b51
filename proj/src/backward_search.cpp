#include <queue>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "search_detail.hpp"

namespace embanks {
namespace {

struct Label {
    double dist = std::numeric_limits<double>::infinity();
    bool settled = false;
};

class BackwardRun {
public:
    BackwardRun(const DataGraph& g, const KeywordSets& ks, const SearchConfig& cfg)
        : g_(g), ks_(ks), collector_(g, ks, cfg), touched_(g.node_count(), 0),
          explored_(g.node_count(), 0) {
        for (const auto& s : ks.sets) keywordNodes_.insert(keywordNodes_.end(), s.begin(), s.end());
        std::sort(keywordNodes_.begin(), keywordNodes_.end());
        keywordNodes_.erase(std::unique(keywordNodes_.begin(), keywordNodes_.end()), keywordNodes_.end());
        memberOf_.resize(keywordNodes_.size());
        for (std::size_t i = 0; i < ks.sets.size(); ++i)
            for (auto u : ks.sets[i]) {
                const auto j = std::lower_bound(keywordNodes_.begin(), keywordNodes_.end(), u) -
                               keywordNodes_.begin();
                memberOf_[j].push_back(i);
            }
        labels_.resize(keywordNodes_.size());
    }

    SearchResult run() {
        detail::Stopwatch clock;
        for (std::uint32_t j = 0; j < keywordNodes_.size(); ++j) relax(j, keywordNodes_[j], 0.0);

        bool stop = false;
        while (!queue_.empty() && !stop) {
            const auto [d, j, v] = queue_.top();
            queue_.pop();
            auto& lab = labels_[j][v];
            if (lab.settled || d > lab.dist) continue;
            lab.settled = true;
            if (!explored_[v]) {
                explored_[v] = 1;
                ++stats_.nodesExplored;
            }
            stop = arrive(j, v);
            if (stop) break;
            for (auto s : g_.in_slots(v)) relax(j, g_.source(s), d + g_.weight(s));

            if (queue_.empty()) break;
            collector_.release(collector_.edge_bound(std::get<0>(queue_.top())));
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
    using Entry = std::tuple<double, std::uint32_t, NodeId>;

    void relax(std::uint32_t j, NodeId u, double d) {
        auto& lab = labels_[j][u];
        if (lab.settled || !(d < lab.dist)) return;
        lab.dist = d;
        queue_.emplace(d, j, u);
        if (!touched_[u]) {
            touched_[u] = 1;
            ++stats_.nodesTouched;
        }
    }

    /// Records that iterator j settled v and builds every new keyword tuple at v.
    bool arrive(std::uint32_t j, NodeId v) {
        auto& reach = reached_[v];
        if (reach.empty()) reach.resize(ks_.size());
        const auto& sets = memberOf_[j];
        for (auto i : sets) reach[i].push_back(j);

        // A tuple holding j is generated once, at the first position where it holds j.
        std::vector<std::uint32_t> tuple(ks_.size());
        for (std::size_t a = 0; a < sets.size(); ++a) {
            const auto fixed = sets[a];
            std::vector<std::vector<std::uint32_t>> choices(ks_.size());
            bool feasible = true;
            for (std::size_t i = 0; i < ks_.size() && feasible; ++i) {
                if (i == fixed) {
                    choices[i] = {j};
                } else {
                    const bool earlierWithJ = std::find(sets.begin(), sets.begin() + a, i) != sets.begin() + a;
                    for (auto x : reach[i])
                        if (!(earlierWithJ && x == j)) choices[i].push_back(x);
                }
                feasible = !choices[i].empty();
            }
            if (!feasible) continue;
            std::vector<std::size_t> pos(ks_.size(), 0);
            while (true) {
                for (std::size_t i = 0; i < ks_.size(); ++i) tuple[i] = choices[i][pos[i]];
                if (collector_.add(build_tree(v, tuple))) return true;
                std::size_t i = 0;
                while (i < ks_.size() && ++pos[i] == choices[i].size()) pos[i++] = 0;
                if (i == ks_.size()) break;
            }
        }
        return false;
    }

    /// Union of the lexicographically smallest shortest paths from root to each tuple node.
    AnswerTree build_tree(NodeId root, const std::vector<std::uint32_t>& tuple) const {
        AnswerTree t;
        t.root = root;
        std::vector<NodeId> inTree{root};
        for (auto j : tuple) {
            const NodeId target = keywordNodes_[j];
            t.keywordNodes.push_back(target);
            const auto& lab = labels_[j];
            NodeId cur = root;
            while (cur != target) {
                const double dcur = lab.at(cur).dist;
                const auto r = g_.out_slots(cur);
                EdgeSlot pick = r.last;
                for (EdgeSlot s = r.first; s < r.last; ++s) {
                    const auto it = lab.find(g_.target(s));
                    if (it == lab.end() || !it->second.settled) continue;
                    if (detail::same_distance(it->second.dist + g_.weight(s), dcur)) {
                        pick = s;
                        break;
                    }
                }
                if (pick == r.last) throw std::logic_error("backward search: broken shortest path");
                const NodeId next = g_.target(pick);
                if (std::find(inTree.begin(), inTree.end(), next) == inTree.end()) {
                    inTree.push_back(next);
                    t.edges.push_back({cur, next, g_.weight(pick)});
                }
                cur = next;
            }
        }
        t.normalize();
        return t;
    }

    const DataGraph& g_;
    const KeywordSets& ks_;
    detail::Collector collector_;
    std::vector<NodeId> keywordNodes_;
    std::vector<std::vector<std::size_t>> memberOf_;
    std::vector<std::unordered_map<NodeId, Label>> labels_;
    std::unordered_map<NodeId, std::vector<std::vector<std::uint32_t>>> reached_;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
    std::vector<std::uint8_t> touched_;
    std::vector<std::uint8_t> explored_;
    SearchStats stats_;
};

}  // namespace

SearchResult backward_search(const DataGraph& g, const KeywordSets& ks, const SearchConfig& cfg) {
    detail::require_nonempty(ks);
    return BackwardRun(g, ks, cfg).run();
}

}  // namespace embanks
