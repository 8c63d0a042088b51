#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>

#include "embanks/search.hpp"

namespace embanks::detail {

inline void require_nonempty(const KeywordSets& ks) {
    if (ks.sets.empty()) throw NoAnswerError("");
    for (std::size_t i = 0; i < ks.sets.size(); ++i)
        if (ks.sets[i].empty())
            throw NoAnswerError(i < ks.terms.size() ? ks.terms[i] : "#" + std::to_string(i));
}

/// Two distances are treated as equal within a relative 1e-9.
inline bool same_distance(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

/// Owns the output heap, the candidate cap and the steiner filter for one run.
class Collector {
public:
    Collector(const DataGraph& g, const KeywordSets& ks, const SearchConfig& cfg)
        : g_(g), cfg_(cfg) {
        cfg.score.validate();
        double maxAll = 0.0;
        for (auto p : g.prestige()) maxAll = std::max(maxAll, static_cast<double>(p));
        nMax_ = maxAll;
        for (const auto& s : ks.sets) {
            double m = 0.0;
            for (auto u : s) m = std::max(m, static_cast<double>(g.prestige(u)));
            nMax_ += m;
        }
    }

    /// Scores and buffers t unless it fails root minimality; rejected trees still
    /// count toward the cap. Returns true once the cap is hit.
    bool add(AnswerTree t) {
        ++candidates_;
        if (is_root_minimal(t)) heap_.push(score_answer(std::move(t), g_.prestige(), cfg_.score));
        return capped();
    }

    [[nodiscard]] bool capped() const {
        return cfg_.maxCandidates != 0 && candidates_ >= cfg_.maxCandidates;
    }

    /// Emits what is provably at least as good as anything still to come.
    void release(double edgeScoreBound) {
        if (cfg_.steinerFilter || done()) return;
        const double bound = tree_score(nMax_, edgeScoreBound, cfg_.score);
        auto batch = heap_.emit(bound, cfg_.k - out_.size());
        for (auto& a : batch) out_.push_back(std::move(a));
    }

    [[nodiscard]] bool done() const { return out_.size() >= cfg_.k; }

    std::vector<ScoredAnswer> finish() {
        if (cfg_.steinerFilter) {
            auto all = steiner_minimality_filter(heap_.drain());
            if (all.size() > cfg_.k) all.resize(cfg_.k);
            return all;
        }
        if (!done()) {
            auto rest = heap_.drain(cfg_.k - out_.size());
            for (auto& a : rest) out_.push_back(std::move(a));
        }
        return std::move(out_);
    }

    /// Bound on the edge score of any tree whose edge weights sum to at least d.
    [[nodiscard]] double edge_bound(double d) const {
        if (cfg_.score.edgeVariant == EdgeScoreVariant::as_written || d <= 0.0) return 1.0;
        return 1.0 / (1.0 + d);
    }

private:
    const DataGraph& g_;
    const SearchConfig& cfg_;
    double nMax_ = 0.0;
    std::size_t candidates_ = 0;
    OutputHeap heap_;
    std::vector<ScoredAnswer> out_;
};

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace embanks::detail
